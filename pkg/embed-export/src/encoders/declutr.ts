import type { Encoder, EncoderOptions } from "../encoders.js";
import { EncoderUnavailableError } from "../errors.js";

const DEFAULT_MODEL = "johngiorgi/declutr-base";

/** Contrastively trained sentence encoder; same runtime path as sbert. */
export async function loadDeclutr(opts: EncoderOptions): Promise<Encoder> {
  const modelId = opts.modelId ?? DEFAULT_MODEL;
  let pipeline: any;
  try {
    ({ pipeline } = await import("@huggingface/transformers" as any));
  } catch {
    throw new EncoderUnavailableError(
      "declutr needs the optional dependency @huggingface/transformers " +
        "(npm install @huggingface/transformers) plus access to the checkpoint " +
        `${modelId} (or a local --model-id directory with ONNX weights)`,
    );
  }
  const extractor = await pipeline("feature-extraction", modelId);
  return {
    name: modelId,
    async encode(texts: string[]): Promise<number[][]> {
      const output = await extractor(texts, { pooling: "mean", normalize: false });
      return output.tolist();
    },
  };
}

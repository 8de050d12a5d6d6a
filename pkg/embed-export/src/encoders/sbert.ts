import type { Encoder, EncoderOptions } from "../encoders.js";
import { EncoderUnavailableError } from "../errors.js";

const DEFAULT_MODEL = "sentence-transformers/bert-base-nli-mean-tokens";

/**
 * Siamese-BERT style sentence encoder via transformers.js
 * (feature-extraction pipeline, mean pooling).
 *
 * The checkpoint must have ONNX weights; for ids without an ONNX export,
 * pass --model-id with a ported variant (e.g. an Xenova/* mirror).
 */
export async function loadSbert(opts: EncoderOptions): Promise<Encoder> {
  const modelId = opts.modelId ?? DEFAULT_MODEL;
  let pipeline: any;
  try {
    ({ pipeline } = await import("@huggingface/transformers" as any));
  } catch {
    throw new EncoderUnavailableError(
      "sbert needs the optional dependency @huggingface/transformers " +
        "(npm install @huggingface/transformers) plus access to the checkpoint " +
        `${modelId} (or a local --model-id directory)`,
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

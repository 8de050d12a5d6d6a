import type { Encoder, EncoderOptions } from "../encoders.js";
import { EncoderUnavailableError } from "../errors.js";

/**
 * Universal Sentence Encoder via the TensorFlow.js model package.
 * Prefers the native tfjs-node backend when installed, falls back to the
 * pure-JS backend otherwise.
 */
export async function loadUse(_opts: EncoderOptions): Promise<Encoder> {
  try {
    await import("@tensorflow/tfjs-node" as any);
  } catch {
    try {
      await import("@tensorflow/tfjs" as any);
    } catch {
      throw new EncoderUnavailableError(
        "use needs the optional dependencies @tensorflow/tfjs (or @tensorflow/tfjs-node) " +
          "and @tensorflow-models/universal-sentence-encoder " +
          "(npm install @tensorflow/tfjs @tensorflow-models/universal-sentence-encoder)",
      );
    }
  }
  let use: any;
  try {
    use = await import("@tensorflow-models/universal-sentence-encoder" as any);
  } catch {
    throw new EncoderUnavailableError(
      "use needs the optional dependency @tensorflow-models/universal-sentence-encoder " +
        "(npm install @tensorflow-models/universal-sentence-encoder)",
    );
  }
  const model = await use.load();
  return {
    name: "universal-sentence-encoder",
    async encode(texts: string[]): Promise<number[][]> {
      const tensor = await model.embed(texts);
      const rows = (await tensor.array()) as number[][];
      tensor.dispose();
      return rows;
    },
  };
}

import type { Encoder, EncoderOptions } from "../encoders.js";
import { DataError, EncoderUnavailableError } from "../errors.js";

/**
 * Language-agnostic biLSTM encoder. There is no Node runtime or npm
 * package for it; its official toolchain is Python. Supported here only
 * through a user-supplied ONNX export whose graph takes a single string
 * tensor (tokenization baked in), run with onnxruntime-node.
 */
export async function loadLaser(opts: EncoderOptions): Promise<Encoder> {
  if (!opts.modelPath) {
    throw new EncoderUnavailableError(
      "laser has no Node runtime: either produce emb-v1 files with its Python " +
        "toolchain (laserembeddings), or pass --model-path pointing to an ONNX " +
        "export with a string input (requires npm install onnxruntime-node)",
    );
  }
  let ort: any;
  try {
    ort = await import("onnxruntime-node" as any);
  } catch {
    throw new EncoderUnavailableError(
      "laser --model-path needs the optional dependency onnxruntime-node " +
        "(npm install onnxruntime-node)",
    );
  }
  const session = await ort.InferenceSession.create(opts.modelPath);
  const inputs = session.inputNames;
  if (inputs.length !== 1) {
    throw new DataError(
      `laser ONNX model must take exactly one (string) input, got ${inputs.join(", ")}`,
    );
  }
  return {
    name: `laser:${opts.modelPath}`,
    async encode(texts: string[]): Promise<number[][]> {
      const feed = { [inputs[0]]: new ort.Tensor("string", texts, [texts.length]) };
      const results = await session.run(feed);
      const out = results[session.outputNames[0]];
      const [n, d] = out.dims;
      if (n !== texts.length) {
        throw new DataError(`laser model returned ${n} rows for ${texts.length} texts`);
      }
      const rows: number[][] = [];
      const flat = out.data as Float32Array;
      for (let r = 0; r < n; r++) {
        rows.push(Array.from(flat.subarray(r * d, (r + 1) * d)));
      }
      return rows;
    },
  };
}

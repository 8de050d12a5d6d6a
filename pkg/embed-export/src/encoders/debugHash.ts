import type { Encoder, EncoderOptions } from "../encoders.js";

const DIM = 32;

/**
 * Deterministic toy encoder for tests and plumbing checks: hashed
 * bag-of-characters folded into a fixed-size vector. Not a semantic
 * embedding; never use it for real experiments.
 */
export async function loadDebugHash(_opts: EncoderOptions): Promise<Encoder> {
  return {
    name: "debug-hash",
    async encode(texts: string[]): Promise<number[][]> {
      return texts.map(embedOne);
    },
  };
}

function embedOne(text: string): number[] {
  const out = new Array<number>(DIM).fill(0);
  let h = 0x811c9dc5; // FNV-1a rolling state
  for (let i = 0; i < text.length; i++) {
    h ^= text.charCodeAt(i);
    h = Math.imul(h, 0x01000193) >>> 0;
    out[h % DIM] += ((h >>> 8) % 2001) / 1000 - 1; // values in [-1, 1]
  }
  return out;
}

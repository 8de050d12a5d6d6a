import { EncoderUnavailableError } from "./errors.js";
import { loadDebugHash } from "./encoders/debugHash.js";
import { loadDeclutr } from "./encoders/declutr.js";
import { loadLaser } from "./encoders/laser.js";
import { loadSbert } from "./encoders/sbert.js";
import { loadUse } from "./encoders/use.js";

export interface Encoder {
  /** Checkpoint identifier recorded in the emb-v1 model field. */
  readonly name: string;
  /** Encode a batch of texts, one embedding per text, in order. */
  encode(texts: string[]): Promise<number[][]>;
}

export interface EncoderOptions {
  /** Override the default checkpoint id (sbert/declutr/use). */
  modelId?: string;
  /** Local model file (laser ONNX export). */
  modelPath?: string;
}

export type EncoderLoader = (opts: EncoderOptions) => Promise<Encoder>;

export const PUBLIC_MODELS = ["sbert", "use", "laser", "declutr"] as const;

const LOADERS: Record<string, EncoderLoader> = {
  sbert: loadSbert,
  use: loadUse,
  laser: loadLaser,
  declutr: loadDeclutr,
  // deterministic dev/test encoder; not a real sentence encoder
  "debug-hash": loadDebugHash,
};

export function loadEncoder(model: string, opts: EncoderOptions = {}): Promise<Encoder> {
  const loader = LOADERS[model];
  if (!loader) {
    throw new EncoderUnavailableError(
      `unknown model ${JSON.stringify(model)}; choose one of ${[...PUBLIC_MODELS, "debug-hash"].join(", ")}`,
    );
  }
  return loader(opts);
}

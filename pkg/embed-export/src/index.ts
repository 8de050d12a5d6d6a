export { readCorpus, type CorpusRow } from "./corpus.js";
export { EmbV1Writer } from "./embv1.js";
export { loadEncoder, PUBLIC_MODELS, type Encoder, type EncoderOptions } from "./encoders.js";
export { DataError, EncoderUnavailableError } from "./errors.js";
export { exportEmbeddings, type ExportResult } from "./export.js";
export { run } from "./cli.js";

import { readCorpus } from "./corpus.js";
import { EmbV1Writer } from "./embv1.js";
import type { Encoder } from "./encoders.js";
import { DataError } from "./errors.js";

export interface ExportResult {
  count: number;
  dim: number;
  model: string;
}

/**
 * Encode every corpus row in order and write the emb-v1 file.
 *
 * The embedding dimension is discovered from the first batch; the header
 * carries the corpus row count, so a partially written file never loads.
 */
export async function exportEmbeddings(
  corpusPath: string,
  outPath: string,
  encoder: Encoder,
  batchSize: number,
): Promise<ExportResult> {
  if (!Number.isInteger(batchSize) || batchSize < 1) {
    throw new DataError(`batch size must be a positive integer, got ${batchSize}`);
  }
  const rows = readCorpus(corpusPath);
  let writer: EmbV1Writer | undefined;
  try {
    for (let start = 0; start < rows.length; start += batchSize) {
      const batch = rows.slice(start, start + batchSize);
      const vectors = await encoder.encode(batch.map((r) => r.text));
      if (vectors.length !== batch.length) {
        throw new DataError(
          `encoder returned ${vectors.length} rows for a batch of ${batch.length} ` +
            `(first row ${batch[0].id})`,
        );
      }
      if (!writer) {
        const dim = vectors[0]?.length ?? 0;
        writer = new EmbV1Writer(outPath, rows.length, dim, encoder.name);
      }
      writer.writeBatch(vectors, batch.map((r) => r.id));
    }
    writer?.close();
  } catch (err) {
    writer?.abort();
    throw err;
  }
  if (!writer) {
    throw new DataError("nothing encoded");
  }
  return { count: writer.count, dim: writer.dim, model: encoder.name };
}

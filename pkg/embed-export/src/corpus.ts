import { readFileSync } from "node:fs";

import { DataError } from "./errors.js";

export interface CorpusRow {
  id: string;
  label: string;
  text: string;
}

/**
 * Read a corpus TSV (`id<TAB>label<TAB>text`, LF endings, no header).
 *
 * Validation is strict because row order is the only thing aligning the
 * corpus with the embedding matrix: any malformed or blank-text row aborts
 * the export, naming the row.
 */
export function readCorpus(path: string): CorpusRow[] {
  let raw: string;
  try {
    raw = readFileSync(path, "utf-8");
  } catch (err) {
    throw new DataError(`cannot read corpus file ${path}: ${(err as Error).message}`);
  }
  const rows: CorpusRow[] = [];
  const seen = new Set<string>();
  const lines = raw.split("\n");
  if (lines[lines.length - 1] === "") lines.pop(); // trailing LF
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i];
    const where = `${path}:${i + 1}`;
    if (line.includes("\r")) {
      throw new DataError(`${where}: carriage return in corpus line (LF endings required)`);
    }
    const parts = line.split("\t");
    if (parts.length !== 3) {
      throw new DataError(`${where}: expected 3 tab-separated columns, got ${parts.length}`);
    }
    const [id, label, text] = parts;
    if (!id || !label) {
      throw new DataError(`${where}: empty id or label column`);
    }
    if (!text.trim()) {
      throw new DataError(`${where}: blank text for row ${id}; refusing to encode`);
    }
    if (seen.has(id)) {
      throw new DataError(`${where}: duplicate example id ${id}`);
    }
    seen.add(id);
    rows.push({ id, label, text });
  }
  if (rows.length === 0) {
    throw new DataError(`${path}: corpus file is empty`);
  }
  return rows;
}

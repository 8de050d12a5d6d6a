import { closeSync, openSync, writeSync } from "node:fs";

import { DataError } from "./errors.js";

/**
 * emb-v1 writer: one JSON header line
 *   {"format":"emb-v1","count":N,"dim":D,"dtype":"f32le","model":"<name>"}
 * then N*D little-endian float32 values, row-major. Row i of the payload
 * must be row i of the corpus; the caller feeds batches in corpus order.
 */
export class EmbV1Writer {
  private fd: number;
  private rowsWritten = 0;
  private closed = false;

  constructor(
    readonly path: string,
    readonly count: number,
    readonly dim: number,
    readonly model: string,
  ) {
    if (!Number.isInteger(count) || count < 1) {
      throw new DataError(`count must be a positive integer, got ${count}`);
    }
    if (!Number.isInteger(dim) || dim < 1) {
      throw new DataError(`dim must be a positive integer, got ${dim}`);
    }
    const header = JSON.stringify({
      format: "emb-v1",
      count,
      dim,
      dtype: "f32le",
      model,
    });
    this.fd = openSync(path, "w");
    writeSync(this.fd, Buffer.from(header + "\n", "utf-8"));
  }

  /** Append one batch; `ids` (parallel to rows) name offenders in errors. */
  writeBatch(rows: number[][] | Float32Array[], ids: string[]): void {
    if (this.closed) throw new DataError("writer already closed");
    if (rows.length !== ids.length) {
      throw new DataError(`batch has ${rows.length} rows but ${ids.length} ids`);
    }
    const buf = Buffer.allocUnsafe(rows.length * this.dim * 4);
    for (let r = 0; r < rows.length; r++) {
      const row = rows[r];
      if (row.length !== this.dim) {
        throw new DataError(
          `row ${ids[r]}: encoder returned dimension ${row.length}, expected ${this.dim}`,
        );
      }
      for (let c = 0; c < this.dim; c++) {
        const v = row[c];
        if (!Number.isFinite(v)) {
          throw new DataError(`row ${ids[r]}: non-finite value at column ${c}`);
        }
        buf.writeFloatLE(v, (r * this.dim + c) * 4);
      }
    }
    writeSync(this.fd, buf);
    this.rowsWritten += rows.length;
    if (this.rowsWritten > this.count) {
      throw new DataError(`wrote ${this.rowsWritten} rows but header declares ${this.count}`);
    }
  }

  close(): void {
    if (this.closed) return;
    this.closed = true;
    closeSync(this.fd);
    if (this.rowsWritten !== this.count) {
      throw new DataError(
        `wrote ${this.rowsWritten} rows but header declares count=${this.count}`,
      );
    }
  }

  /** Close the file descriptor without the completeness check (error paths). */
  abort(): void {
    if (this.closed) return;
    this.closed = true;
    closeSync(this.fd);
  }
}

/** Bad input data: corpus problems, encoder output problems, I/O. Exit 2. */
export class DataError extends Error {}

/** A named encoder cannot run here; message says what to install/supply. */
export class EncoderUnavailableError extends Error {}

#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { loadEncoder, PUBLIC_MODELS, type Encoder } from "./encoders.js";
import { DataError, EncoderUnavailableError } from "./errors.js";
import { exportEmbeddings } from "./export.js";

class UsageError extends Error {}

export interface RunOptions {
  /** Test hook: bypass the registry with a prebuilt encoder. */
  encoder?: Encoder;
}

export async function run(argv: string[], opts: RunOptions = {}): Promise<number> {
  const parser = yargs(argv)
    .scriptName("embed-export")
    .usage("$0 export --model <name> --corpus corpus.tsv --out emb.bin [--batch-size B]")
    .command(
      "export",
      "encode a corpus TSV and write an emb-v1 embedding file",
      (y) =>
        y
          .option("model", {
            type: "string",
            demandOption: true,
            describe: `one of ${PUBLIC_MODELS.join(", ")} (or debug-hash for plumbing tests)`,
          })
          .option("corpus", { type: "string", demandOption: true })
          .option("out", { type: "string", demandOption: true })
          .option("batch-size", { type: "number", default: 32 })
          .option("model-id", {
            type: "string",
            describe: "override the default checkpoint id (sbert, declutr)",
          })
          .option("model-path", {
            type: "string",
            describe: "local model file (laser ONNX export)",
          }),
      async (args) => {
        const encoder =
          opts.encoder ??
          (await loadEncoder(args.model, {
            modelId: args["model-id"],
            modelPath: args["model-path"],
          }));
        const result = await exportEmbeddings(args.corpus, args.out, encoder, args["batch-size"]);
        console.error(
          `wrote ${args.out} count=${result.count} dim=${result.dim} model=${result.model}`,
        );
      },
    )
    .demandCommand(1)
    .strict()
    .fail((msg, err) => {
      if (err) throw err;
      throw new UsageError(msg);
    })
    .exitProcess(false)
    .help();

  try {
    await parser.parseAsync();
    return 0;
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    if (err instanceof DataError || err instanceof EncoderUnavailableError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    throw err;
  }
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("cli.js") || entry.endsWith("embed-export")) {
  run(hideBin(process.argv)).then(
    (code) => process.exit(code),
    (err) => {
      console.error(`error: ${err?.message ?? err}`);
      process.exit(2);
    },
  );
}

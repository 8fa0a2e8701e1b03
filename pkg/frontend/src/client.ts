/**
 * Process-spawning client for the core CLI.
 *
 * All augmentation happens in the core; this module only marshals documents
 * through canonical JSONL and temp files, so client output is byte-identical
 * to running the CLI by hand with the same pipeline and seed.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { BoundDocument, emitJsonl, parseJsonl } from "./document.js";
import { CoreError, errorFromStderr } from "./errors.js";
import { PipelineConfig, PipelineHandle, freezeHandle } from "./pipeline.js";

export type CorpusFormat = "conllu" | "jsonl";

export interface ClientOptions {
  /** CLI command, default ["docaug"]. Override e.g. with ["python3", "-m", "docaug"]. */
  command?: string[];
  /** Directory searched for resource files before the packaged ones. */
  resources?: string;
  /** Worker threads for the run; never changes output bytes. */
  jobs?: number;
}

export interface RunStats {
  docs_in: number;
  docs_out: number;
  docs_modified: number;
  tokens_modified: number;
  spans_dropped: number;
  spans_transferred: number;
  ents_skipped: number;
  applications: Record<string, number>;
}

export interface AugmentFileOptions extends ClientOptions {
  /** Input corpus format; inferred from the file extension when omitted. */
  format?: CorpusFormat;
  /** Output format; defaults to the output extension, then the input format. */
  outputFormat?: CorpusFormat;
  seed?: number;
}

function runCli(args: string[], options: ClientOptions): string {
  const command = options.command ?? ["docaug"];
  const [bin, ...prefix] = command;
  if (!bin) throw new CoreError("INVALID_PARAM", "options.command must not be empty");
  const full = [...prefix, ...args];
  if (options.resources !== undefined) full.push("--resources", options.resources);
  if (options.jobs !== undefined) full.push("--jobs", String(options.jobs));
  const proc = spawnSync(bin, full, { encoding: "utf-8", maxBuffer: 1 << 28 });
  if (proc.error) {
    throw new CoreError("IO_ERROR", `failed to spawn ${bin}: ${proc.error.message}`);
  }
  if (proc.status !== 0) {
    throw errorFromStderr(proc.stderr ?? "", proc.status);
  }
  return proc.stdout ?? "";
}

function withTempDir<T>(body: (dir: string) => T): T {
  const dir = mkdtempSync(join(tmpdir(), "docaug-client-"));
  try {
    return body(dir);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

/**
 * Validate a pipeline config against the core and return an immutable handle.
 *
 * Validation is a CLI dry run over an empty corpus, so the error (unknown
 * keys, bad parameter values, missing resources) is exactly the one a real
 * run would produce, config path and all.
 */
export function loadPipeline(
  config: PipelineConfig,
  options: ClientOptions = {},
): PipelineHandle {
  const handle = freezeHandle(config);
  withTempDir((dir) => {
    const pipe = join(dir, "pipeline.json");
    const empty = join(dir, "empty.jsonl");
    writeFileSync(pipe, handle.json, "utf-8");
    writeFileSync(empty, "", "utf-8");
    runCli(["augment", "--input", empty, "--pipeline", pipe], options);
  });
  return handle;
}

/**
 * Augment in-memory documents.
 *
 * Equivalent to serializing `docs` as JSONL, running the CLI with the
 * handle's pipeline and `seed`, and parsing the output; the serialized
 * result is byte-identical to that CLI run.
 */
export function augment(
  handle: PipelineHandle,
  docs: readonly BoundDocument[],
  seed = 0,
  options: ClientOptions = {},
): BoundDocument[] {
  return withTempDir((dir) => {
    const inp = join(dir, "in.jsonl");
    const out = join(dir, "out.jsonl");
    const pipe = join(dir, "pipeline.json");
    writeFileSync(inp, emitJsonl(docs), "utf-8");
    writeFileSync(pipe, handle.json, "utf-8");
    runCli(
      [
        "augment", "--input", inp, "--input-format", "jsonl",
        "--pipeline", pipe, "--output", out, "--seed", String(seed),
      ],
      options,
    );
    return parseJsonl(readFileSync(out, "utf-8"));
  });
}

/** Augment a corpus file on disk and return the run statistics. */
export function augmentFile(
  handle: PipelineHandle,
  input: string,
  output: string,
  options: AugmentFileOptions = {},
): RunStats {
  return withTempDir((dir) => {
    const pipe = join(dir, "pipeline.json");
    const statsPath = join(dir, "stats.json");
    writeFileSync(pipe, handle.json, "utf-8");
    const args = [
      "augment", "--input", input, "--pipeline", pipe,
      "--output", output, "--stats", statsPath,
      "--seed", String(options.seed ?? 0),
    ];
    if (options.format) args.push("--input-format", options.format);
    if (options.outputFormat) args.push("--output-format", options.outputFormat);
    runCli(args, options);
    return JSON.parse(readFileSync(statsPath, "utf-8")) as RunStats;
  });
}

export type { PipelineConfig, PipelineHandle };

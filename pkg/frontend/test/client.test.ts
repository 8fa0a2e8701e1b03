import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, describe, expect, it } from "vitest";

import {
  CoreError,
  PipelineConfig,
  augment,
  augmentFile,
  emitJsonl,
  loadPipeline,
  parseJsonl,
} from "../src/index.js";

const GOLDEN = fileURLToPath(new URL("../../tests/data/golden.jsonl", import.meta.url));

const scratch = mkdtempSync(join(tmpdir(), "docaug-client-test-"));
afterAll(() => rmSync(scratch, { recursive: true, force: true }));

/** Run the CLI directly, bypassing the client, and return the output bytes. */
function cliAugment(config: PipelineConfig, seed: number, tag: string): string {
  const pipe = join(scratch, `${tag}.json`);
  const out = join(scratch, `${tag}.out.jsonl`);
  writeFileSync(pipe, JSON.stringify(config), "utf-8");
  const proc = spawnSync(
    "docaug",
    ["augment", "--input", GOLDEN, "--pipeline", pipe, "--output", out, "--seed", String(seed)],
    { encoding: "utf-8" },
  );
  expect(proc.status, proc.stderr).toBe(0);
  return readFileSync(out, "utf-8");
}

const EQUIVALENCE_CONFIGS: [string, PipelineConfig][] = [
  [
    "noise",
    {
      combine: [
        { aug: "keystroke_error", level: 0.3, layout: "qwerty_en" },
        { aug: "token_swap", level: 0.5 },
      ],
    },
  ],
  [
    "upsample",
    {
      repeat: {
        n: 2,
        inner: { per_doc: { p: 0.5, inner: { aug: "casing", mode: "random", level: 0.7 } } },
      },
    },
  ],
  [
    "rewrite",
    {
      combine: [
        { aug: "entity_replace", level: 1.0, names: "names_en" },
        { aug: "sentence_shuffle", level: 0.5 },
        { aug: "synonym_replace", level: 0.6, lexicon: "synonyms_en" },
      ],
    },
  ],
];

describe("augment", () => {
  it("matches direct CLI runs byte for byte (3 pipelines x 2 seeds)", () => {
    const docs = parseJsonl(readFileSync(GOLDEN, "utf-8"));
    for (const [tag, config] of EQUIVALENCE_CONFIGS) {
      const handle = loadPipeline(config);
      for (const seed of [0, 7]) {
        const viaClient = emitJsonl(augment(handle, docs, seed));
        const viaCli = cliAugment(config, seed, `${tag}-${seed}`);
        expect(viaClient, `${tag} seed ${seed}`).toBe(viaCli);
      }
    }
  });

  it("echoes documents losslessly through the identity pipeline", () => {
    const docs = parseJsonl(readFileSync(GOLDEN, "utf-8")).slice(0, 10);
    const out = augment(loadPipeline({ combine: [] }), docs, 3);
    expect(out).toEqual(docs);
  });

  it("propagates the core's validation errors for bad documents", () => {
    const doc = {
      text: "a b c",
      tokens: [
        { form: "a", ws: true, lemma: "a", upos: "X", head: null, deprel: "root" },
        { form: "b", ws: true, lemma: "b", upos: "X", head: 0, deprel: "dep" },
        { form: "c", ws: false, lemma: "c", upos: "X", head: 0, deprel: "dep" },
      ],
      sents: [[0, 3] as [number, number]],
      ents: [
        { start: 0, end: 2, label: "PER" },
        { start: 1, end: 3, label: "ORG" }, // overlaps the first span
      ],
    };
    const handle = loadPipeline({ combine: [] });
    let caught: unknown;
    try {
      augment(handle, [doc], 0);
    } catch (e) {
      caught = e;
    }
    expect(caught).toBeInstanceOf(CoreError);
    const err = caught as CoreError;
    expect(err.code).toBe("INVALID_INPUT");
    expect(err.message).toContain("SPAN_OVERLAP");
  });

  it("jobs option never changes output bytes", () => {
    const docs = parseJsonl(readFileSync(GOLDEN, "utf-8"));
    const handle = loadPipeline({ aug: "char_swap", level: 0.8 });
    const serial = emitJsonl(augment(handle, docs, 5));
    const parallel = emitJsonl(augment(handle, docs, 5, { jobs: 4 }));
    expect(parallel).toBe(serial);
  });
});

describe("augmentFile", () => {
  it("writes the output file and returns run statistics", () => {
    const out = join(scratch, "file-run.jsonl");
    const handle = loadPipeline({ aug: "char_swap", level: 1.0 });
    const stats = augmentFile(handle, GOLDEN, out, { seed: 2 });
    expect(Object.keys(stats).sort()).toEqual([
      "applications",
      "docs_in",
      "docs_modified",
      "docs_out",
      "ents_skipped",
      "spans_dropped",
      "spans_transferred",
      "tokens_modified",
    ]);
    expect(stats.docs_in).toBe(100);
    expect(stats.docs_out).toBe(100);
    expect(stats.applications).toEqual({ char_swap: 100 });
    expect(readFileSync(out, "utf-8").split("\n").filter((l) => l !== "").length).toBe(100);
  });

  it("pass-through run reproduces the input bytes", () => {
    const out = join(scratch, "identity.jsonl");
    const handle = loadPipeline({
      per_doc: { p: 0, inner: { aug: "char_swap", level: 1.0 } },
    });
    const stats = augmentFile(handle, GOLDEN, out, { format: "jsonl" });
    expect(stats.docs_modified).toBe(0);
    expect(readFileSync(out, "utf-8")).toBe(readFileSync(GOLDEN, "utf-8"));
  });

  it("raises IO_ERROR for a missing input file", () => {
    const handle = loadPipeline({ combine: [] });
    let caught: unknown;
    try {
      augmentFile(handle, join(scratch, "absent.jsonl"), join(scratch, "x.jsonl"));
    } catch (e) {
      caught = e;
    }
    expect(caught).toBeInstanceOf(CoreError);
    expect((caught as CoreError).code).toBe("IO_ERROR");
  });
});

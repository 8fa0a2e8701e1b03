/**
 * Native mirror of the core's document model plus canonical JSONL.
 *
 * The serialization here is byte-compatible with the core: one JSON object
 * per line, keys in a fixed order, no spaces, raw (non-escaped) UTF-8.
 * Parsing is strict about keys and primitive types so a round trip through
 * the bindings can never silently drop or coerce a field; semantic checks
 * (offsets, trees, span overlap) stay in the core.
 */

import { CoreError } from "./errors.js";

export interface BoundToken {
  form: string;
  ws: boolean;
  lemma: string;
  upos: string;
  /** Document-level index of the head token, or null for a sentence root. */
  head: number | null;
  deprel: string;
}

export interface BoundSpan {
  /** Half-open token range. */
  start: number;
  end: number;
  label: string;
}

export interface BoundDocument {
  text: string;
  tokens: BoundToken[];
  /** Half-open token ranges covering all tokens in order. */
  sents: [number, number][];
  ents: BoundSpan[];
}

function parseError(line: number, message: string): CoreError {
  return new CoreError("PARSE_ERROR", `line ${line}: ${message}`);
}

function isPlainObject(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

function checkKeys(
  obj: Record<string, unknown>,
  expected: readonly string[],
  line: number,
  what: string,
): void {
  const keys = Object.keys(obj).sort();
  const want = [...expected].sort();
  if (keys.length !== want.length || keys.some((k, i) => k !== want[i])) {
    throw parseError(line, `${what} must have exactly keys ${want.join(", ")}; got ${keys.join(", ")}`);
  }
}

function asString(v: unknown, line: number, what: string): string {
  if (typeof v !== "string") throw parseError(line, `${what} must be a string`);
  return v;
}

function asBool(v: unknown, line: number, what: string): boolean {
  if (typeof v !== "boolean") throw parseError(line, `${what} must be a boolean`);
  return v;
}

function asInt(v: unknown, line: number, what: string): number {
  if (typeof v !== "number" || !Number.isInteger(v)) {
    throw parseError(line, `${what} must be an integer`);
  }
  return v;
}

function tokenFromObj(v: unknown, line: number, at: string): BoundToken {
  if (!isPlainObject(v)) throw parseError(line, `${at} must be an object`);
  checkKeys(v, ["form", "ws", "lemma", "upos", "head", "deprel"], line, at);
  return {
    form: asString(v.form, line, `${at}.form`),
    ws: asBool(v.ws, line, `${at}.ws`),
    lemma: asString(v.lemma, line, `${at}.lemma`),
    upos: asString(v.upos, line, `${at}.upos`),
    head: v.head === null ? null : asInt(v.head, line, `${at}.head`),
    deprel: asString(v.deprel, line, `${at}.deprel`),
  };
}

function spanFromObj(v: unknown, line: number, at: string): BoundSpan {
  if (!isPlainObject(v)) throw parseError(line, `${at} must be an object`);
  checkKeys(v, ["start", "end", "label"], line, at);
  return {
    start: asInt(v.start, line, `${at}.start`),
    end: asInt(v.end, line, `${at}.end`),
    label: asString(v.label, line, `${at}.label`),
  };
}

/** Parse one canonical JSONL line (line number only decorates errors). */
export function documentFromJson(text: string, line = 1): BoundDocument {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (e) {
    throw parseError(line, `invalid JSON: ${(e as Error).message}`);
  }
  if (!isPlainObject(raw)) throw parseError(line, "document must be an object");
  checkKeys(raw, ["text", "tokens", "sents", "ents"], line, "document");
  if (!Array.isArray(raw.tokens)) throw parseError(line, "tokens must be an array");
  if (!Array.isArray(raw.sents)) throw parseError(line, "sents must be an array");
  if (!Array.isArray(raw.ents)) throw parseError(line, "ents must be an array");
  const sents = raw.sents.map((s, i): [number, number] => {
    if (!Array.isArray(s) || s.length !== 2) {
      throw parseError(line, `sents[${i}] must be a [start, end] pair`);
    }
    return [asInt(s[0], line, `sents[${i}][0]`), asInt(s[1], line, `sents[${i}][1]`)];
  });
  return {
    text: asString(raw.text, line, "text"),
    tokens: raw.tokens.map((t, i) => tokenFromObj(t, line, `tokens[${i}]`)),
    sents,
    ents: raw.ents.map((e, i) => spanFromObj(e, line, `ents[${i}]`)),
  };
}

/** Serialize one document as a canonical JSONL line (with trailing newline). */
export function documentToJson(doc: BoundDocument): string {
  // rebuild objects so key order is canonical whatever the caller passed
  const tokens = doc.tokens.map((t) => ({
    form: t.form,
    ws: t.ws,
    lemma: t.lemma,
    upos: t.upos,
    head: t.head,
    deprel: t.deprel,
  }));
  const ents = doc.ents.map((e) => ({ start: e.start, end: e.end, label: e.label }));
  const sents = doc.sents.map((s) => [s[0], s[1]]);
  return JSON.stringify({ text: doc.text, tokens, sents, ents }) + "\n";
}

/** Parse a whole JSONL corpus; empty lines are skipped like the core does. */
export function parseJsonl(text: string): BoundDocument[] {
  const docs: BoundDocument[] = [];
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i] as string;
    if (line.trim() === "") continue;
    docs.push(documentFromJson(line, i + 1));
  }
  return docs;
}

/** Serialize a corpus to canonical JSONL bytes (as a string). */
export function emitJsonl(docs: readonly BoundDocument[]): string {
  return docs.map(documentToJson).join("");
}

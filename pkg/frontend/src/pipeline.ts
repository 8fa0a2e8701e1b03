/**
 * Pipeline config types mirroring the CLI's JSON schema.
 *
 * These are authoring-time types only. The single source of truth for
 * validation is the core itself: loadPipeline in client.ts hands the config
 * to the CLI for a dry run and surfaces its error verbatim.
 */

export interface KeystrokeErrorConfig {
  aug: "keystroke_error";
  level: number;
  /** Keyboard layout resource id, e.g. "qwerty_en". */
  layout: string;
}

export interface CharSwapConfig {
  aug: "char_swap";
  level: number;
}

export interface CasingConfig {
  aug: "casing";
  level: number;
  mode: "upper" | "lower" | "random";
}

export interface SpacingRemovalConfig {
  aug: "spacing_removal";
  level: number;
}

export interface SynonymReplaceConfig {
  aug: "synonym_replace";
  level: number;
  /** Synonym lexicon resource id. */
  lexicon: string;
}

export interface EmbeddingReplaceConfig {
  aug: "embedding_replace";
  level: number;
  /** Embedding table resource id. */
  embeddings: string;
  /** Number of nearest neighbors to draw from, >= 1. */
  k: number;
}

export interface TokenSwapConfig {
  aug: "token_swap";
  level: number;
}

export interface EntityReplaceConfig {
  aug: "entity_replace";
  level: number;
  /** Name lists resource id. */
  names: string;
}

export interface SentenceShuffleConfig {
  aug: "sentence_shuffle";
  level: number;
}

export type LeafConfig =
  | KeystrokeErrorConfig
  | CharSwapConfig
  | CasingConfig
  | SpacingRemovalConfig
  | SynonymReplaceConfig
  | EmbeddingReplaceConfig
  | TokenSwapConfig
  | EntityReplaceConfig
  | SentenceShuffleConfig;

export interface CombineConfig {
  /** Children applied sequentially, each feeding the next. */
  combine: PipelineConfig[];
}

export interface RepeatConfig {
  /** n independent runs of inner, outputs concatenated. */
  repeat: { n: number; inner: PipelineConfig };
}

export interface PerDocConfig {
  /** Apply inner to a p-fraction of documents, pass the rest through. */
  per_doc: { p: number; inner: PipelineConfig };
}

export type PipelineConfig = LeafConfig | CombineConfig | RepeatConfig | PerDocConfig;

/** A validated, immutable pipeline: the exact JSON the CLI will receive. */
export interface PipelineHandle {
  readonly config: PipelineConfig;
  readonly json: string;
}

function deepFreeze<T>(value: T): T {
  if (value !== null && typeof value === "object") {
    for (const v of Object.values(value as object)) deepFreeze(v);
    Object.freeze(value);
  }
  return value;
}

/** Build an immutable handle; callers go through loadPipeline for validation. */
export function freezeHandle(config: PipelineConfig): PipelineHandle {
  const copy = structuredClone(config);
  return Object.freeze({ config: deepFreeze(copy), json: JSON.stringify(copy) });
}

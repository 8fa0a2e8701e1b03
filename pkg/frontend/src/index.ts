export type { BoundDocument, BoundSpan, BoundToken } from "./document.js";
export { documentFromJson, documentToJson, emitJsonl, parseJsonl } from "./document.js";
export { CoreError } from "./errors.js";
export type {
  CasingConfig,
  CharSwapConfig,
  CombineConfig,
  EmbeddingReplaceConfig,
  EntityReplaceConfig,
  KeystrokeErrorConfig,
  LeafConfig,
  PerDocConfig,
  PipelineConfig,
  PipelineHandle,
  RepeatConfig,
  SentenceShuffleConfig,
  SpacingRemovalConfig,
  SynonymReplaceConfig,
  TokenSwapConfig,
} from "./pipeline.js";
export type {
  AugmentFileOptions,
  ClientOptions,
  CorpusFormat,
  RunStats,
} from "./client.js";
export { augment, augmentFile, loadPipeline } from "./client.js";

"""Structured text augmentation with provably consistent annotations.

Augmenters transform an annotated document (text, tokens with offsets,
lemmas, tags, a dependency tree, sentence boundaries, entity spans) into
new documents whose annotations always pass validation. Pipelines
combine, repeat, and probabilistically gate augmenters; runs over a
corpus are deterministic for a given seed.
"""

from .augmenters import (
    Casing,
    CharSwap,
    EmbeddingReplace,
    EntityReplace,
    KeystrokeError,
    SentenceShuffle,
    SpacingRemoval,
    SynonymReplace,
    TokenSwap,
    WordlistReplace,
)
from .base import Augmenter, DocAugmenter
from .corpus_io import (
    doc_from_obj,
    doc_to_obj,
    emit_conllu,
    emit_jsonl,
    parse_conllu,
    parse_jsonl,
)
from .doc import (
    Document,
    Finding,
    FindingCode,
    Span,
    Token,
    ValidationReport,
    doc_from_tokens,
    text_of,
    validate,
)
from .edits import (
    EditPlan,
    NewToken,
    Replacement,
    SpanPolicy,
    apply_edits,
    compute_token_map,
    span_root,
)
from .errors import (
    AugmentError,
    DimMismatchError,
    InvalidInputError,
    InvalidLayoutError,
    InvalidParamError,
    InvalidPlanError,
    InvalidRangeError,
    InvalidResourceError,
    OOVError,
    ParseError,
    ResourceError,
    UnknownResourceError,
    UnsupportedMWTError,
    ZeroVectorError,
)
from .pipeline import (
    Combine,
    PerDoc,
    Repeat,
    RunStats,
    apply,
    derive_stream_seed,
    pipeline_from_config,
    pipeline_from_path,
    run_corpus,
)
from .resources import (
    EmbeddingTable,
    KeyboardLayout,
    NameLists,
    ResourceDir,
    SynonymLexicon,
    knn,
    load_embeddings,
    load_keyboard_layout,
    load_name_lists,
    load_synonyms,
    neighbors,
)

__version__ = "0.1.0"

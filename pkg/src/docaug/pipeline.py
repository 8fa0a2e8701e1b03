"""Pipeline combinators, the corpus runner, and the JSON config format.

Combinators
-----------
``Combine(children)`` threads a document through its children left to
right, feeding every output of one child to the next (output count is the
product of the children's counts). ``Repeat(child, n)`` concatenates ``n``
independent applications of the child, each with fresh draws, so a
stochastic child upsamples a document into distinct variants.
``PerDoc(child, p)`` draws once per document before touching the child
and applies it only on success, so over a corpus the modified-document
count is exactly Binomial(n, p).

Determinism
-----------
:func:`run_corpus` gives document ``i`` its own rng stream seeded with
``splitmix64(seed + (i + 1) * 0x9E3779B97F4A7C15)`` where ``splitmix64``
is the standard finalizer (xor-shift 30, multiply 0xBF58476D1CE4E5B9,
xor-shift 27, multiply 0x94D049BB133111EB, xor-shift 31, all mod 2**64).
Streams therefore depend only on ``(seed, ordinal)``: each document's
output block is independent of every other document, and parallel
execution is byte-identical to serial. Reproducibility is promised within
this implementation, not across languages or rng libraries.

Config format
-------------
A pipeline is a JSON tree. Exactly one of these keys per node:

* ``{"aug": <name>, "level": <float>, ...}`` - a leaf; see the CLI docs
  for each augmenter's extra keys (``layout``, ``mode``, ``lexicon``,
  ``embeddings`` + ``k``, ``names``);
* ``{"combine": [<node>, ...]}``
* ``{"repeat": {"n": <int>, "inner": <node>}}``
* ``{"per_doc": {"p": <float>, "inner": <node>}}``

Unknown or missing keys are rejected.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

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
)
from .base import Augmenter, LeafStats
from .doc import Document, validate
from .errors import AugmentError, InvalidInputError, InvalidParamError, ParseError
from .resources import ResourceDir

__all__ = [
    "Combine",
    "Repeat",
    "PerDoc",
    "apply",
    "run_corpus",
    "RunStats",
    "pipeline_from_config",
    "pipeline_from_path",
]

_GOLDEN = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1


def derive_stream_seed(seed: int, ordinal: int) -> int:
    """The fixed per-document stream mixer (see module docstring)."""
    x = (seed + (ordinal + 1) * _GOLDEN) & _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    x ^= x >> 31
    return x


class Combine(Augmenter):
    """Apply children sequentially, feeding outputs forward."""

    def __init__(self, children: Sequence[Augmenter], random_state: int = 0):
        children = list(children)
        for c in children:
            if not isinstance(c, Augmenter):
                raise InvalidParamError(f"combine child {c!r} is not an augmenter")
        self.children = children
        self.random_state = random_state

    def _apply(self, doc, rng, sink):
        docs = [doc]
        for child in self.children:
            nxt = []
            for d in docs:
                nxt.extend(child._apply(d, rng, sink))
            docs = nxt
        return docs


class Repeat(Augmenter):
    """Concatenate ``n`` independent applications of the child."""

    def __init__(self, child: Augmenter, n: int, random_state: int = 0):
        if not isinstance(child, Augmenter):
            raise InvalidParamError(f"repeat child {child!r} is not an augmenter")
        if not isinstance(n, int) or n < 1:
            raise InvalidParamError(f"repeat count must be an integer >= 1, got {n!r}")
        self.child = child
        self.n = n
        self.random_state = random_state

    def _apply(self, doc, rng, sink):
        out = []
        for _ in range(self.n):
            out.extend(self.child._apply(doc, rng, sink))
        return out


class PerDoc(Augmenter):
    """Gate the child behind one Bernoulli(p) draw per document.

    The draw happens before the child consumes anything, so the set of
    gated documents depends only on the per-document streams.
    """

    def __init__(self, child: Augmenter, p: float, random_state: int = 0):
        if not isinstance(child, Augmenter):
            raise InvalidParamError(f"per_doc child {child!r} is not an augmenter")
        try:
            p = float(p)
        except (TypeError, ValueError):
            raise InvalidParamError(f"p must be a number, got {p!r}") from None
        if not 0.0 <= p <= 1.0:
            raise InvalidParamError(f"p must be in [0, 1], got {p!r}")
        self.child = child
        self.p = p
        self.random_state = random_state

    def _apply(self, doc, rng, sink):
        if rng.random() < self.p:
            return self.child._apply(doc, rng, sink)
        return [doc]


def apply(node: Augmenter, doc: Document, rng: random.Random) -> list[Document]:
    """Apply any pipeline node to one document."""
    return node.apply(doc, rng)


@dataclass
class RunStats:
    """Counters for one corpus run.

    ``tokens_modified`` counts tokens rewritten by fired units across all
    leaf applications; ``applications`` counts how many times each leaf
    augmenter was applied to a document; ``ents_skipped`` counts fired
    entity spans whose label had no name list.
    """

    docs_in: int = 0
    docs_out: int = 0
    docs_modified: int = 0
    tokens_modified: int = 0
    spans_dropped: int = 0
    spans_transferred: int = 0
    ents_skipped: int = 0
    applications: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "docs_in": self.docs_in,
            "docs_out": self.docs_out,
            "docs_modified": self.docs_modified,
            "tokens_modified": self.tokens_modified,
            "spans_dropped": self.spans_dropped,
            "spans_transferred": self.spans_transferred,
            "ents_skipped": self.ents_skipped,
            "applications": dict(sorted(self.applications.items())),
        }


class _Sink:
    """Accumulates leaf stats for one document's application."""

    def __init__(self):
        self.totals = LeafStats()
        self.applications: dict[str, int] = {}

    def record(self, name: str, stats: LeafStats) -> None:
        self.applications[name] = self.applications.get(name, 0) + 1
        self.totals.tokens_modified += stats.tokens_modified
        self.totals.spans_dropped += stats.spans_dropped
        self.totals.spans_transferred += stats.spans_transferred
        self.totals.ents_skipped += stats.ents_skipped


def _run_one(node: Augmenter, doc: Document, seed: int, ordinal: int):
    report = validate(doc)
    if not report.is_valid:
        raise InvalidInputError(
            f"doc {ordinal}: {report.errors[0]}", report=report
        )
    rng = random.Random(derive_stream_seed(seed, ordinal))
    sink = _Sink()
    try:
        outs = node._apply(doc, rng, sink)
    except AugmentError as exc:
        exc.args = (f"doc {ordinal}: {exc}",)
        raise
    return outs, sink


def run_corpus(
    node: Augmenter,
    docs: Sequence[Document],
    seed: int = 0,
    jobs: int = 1,
) -> tuple[list[Document], RunStats]:
    """Run a pipeline over a corpus with per-document rng streams.

    Outputs keep input order (document ``i``'s outputs form a contiguous
    block). ``jobs > 1`` runs documents concurrently with byte-identical
    results. Input documents are validated; errors carry the document
    ordinal.
    """
    docs = list(docs)
    if jobs < 1:
        raise InvalidParamError(f"jobs must be >= 1, got {jobs}")
    if jobs == 1 or len(docs) < 2:
        results = [_run_one(node, d, seed, i) for i, d in enumerate(docs)]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(
                pool.map(
                    lambda pair: _run_one(node, pair[1], seed, pair[0]),
                    enumerate(docs),
                )
            )
    stats = RunStats(docs_in=len(docs))
    out_docs: list[Document] = []
    for doc, (outs, sink) in zip(docs, results):
        out_docs.extend(outs)
        stats.docs_out += len(outs)
        if any(o != doc for o in outs):
            stats.docs_modified += 1
        stats.tokens_modified += sink.totals.tokens_modified
        stats.spans_dropped += sink.totals.spans_dropped
        stats.spans_transferred += sink.totals.spans_transferred
        stats.ents_skipped += sink.totals.ents_skipped
        for name, count in sink.applications.items():
            stats.applications[name] = stats.applications.get(name, 0) + count
    stats.applications = dict(sorted(stats.applications.items()))
    return out_docs, stats


def _require(cfg: Mapping, key: str, where: str):
    if key not in cfg:
        raise InvalidParamError(f"{where}: missing required key {key!r}")
    return cfg[key]


def _check_keys(cfg: Mapping, allowed: set[str], where: str) -> None:
    extra = set(cfg) - allowed
    if extra:
        raise InvalidParamError(f"{where}: unknown keys {sorted(extra)}")


def _leaf_from_config(cfg: Mapping, resources: ResourceDir, where: str) -> Augmenter:
    name = cfg["aug"]
    level = _require(cfg, "level", where)
    if name == "keystroke_error":
        _check_keys(cfg, {"aug", "level", "layout"}, where)
        layout = resources.keyboard_layout(str(_require(cfg, "layout", where)))
        return KeystrokeError(level, layout)
    if name == "char_swap":
        _check_keys(cfg, {"aug", "level"}, where)
        return CharSwap(level)
    if name == "casing":
        _check_keys(cfg, {"aug", "level", "mode"}, where)
        return Casing(str(_require(cfg, "mode", where)), level)
    if name == "spacing_removal":
        _check_keys(cfg, {"aug", "level"}, where)
        return SpacingRemoval(level)
    if name == "synonym_replace":
        _check_keys(cfg, {"aug", "level", "lexicon"}, where)
        lexicon = resources.synonyms(str(_require(cfg, "lexicon", where)))
        return SynonymReplace(level, lexicon)
    if name == "embedding_replace":
        _check_keys(cfg, {"aug", "level", "embeddings", "k"}, where)
        table = resources.embeddings(str(_require(cfg, "embeddings", where)))
        k = _require(cfg, "k", where)
        if not isinstance(k, int):
            raise InvalidParamError(f"{where}: k must be an integer, got {k!r}")
        return EmbeddingReplace(level, table, k)
    if name == "token_swap":
        _check_keys(cfg, {"aug", "level"}, where)
        return TokenSwap(level)
    if name == "entity_replace":
        _check_keys(cfg, {"aug", "level", "names"}, where)
        names = resources.name_lists(str(_require(cfg, "names", where)))
        return EntityReplace(level, names)
    if name == "sentence_shuffle":
        _check_keys(cfg, {"aug", "level"}, where)
        return SentenceShuffle(level)
    raise InvalidParamError(f"{where}: unknown augmenter {name!r}")


def pipeline_from_config(
    cfg, resources: ResourceDir | None = None, where: str = "pipeline"
) -> Augmenter:
    """Build a pipeline node from a parsed JSON config tree.

    ``resources`` supplies the id lookups for leaves that need files;
    when ``None`` only the packaged resources are visible.
    """
    if resources is None:
        resources = ResourceDir(None)
    if not isinstance(cfg, Mapping):
        raise InvalidParamError(f"{where}: node must be a JSON object, got {cfg!r}")
    kinds = [k for k in ("aug", "combine", "repeat", "per_doc") if k in cfg]
    if len(kinds) != 1:
        raise InvalidParamError(
            f"{where}: node needs exactly one of 'aug', 'combine', 'repeat', "
            f"'per_doc', got {sorted(cfg)}"
        )
    kind = kinds[0]
    if kind == "aug":
        return _leaf_from_config(cfg, resources, where)
    if kind == "combine":
        _check_keys(cfg, {"combine"}, where)
        children = cfg["combine"]
        if not isinstance(children, list):
            raise InvalidParamError(f"{where}: 'combine' must be a list")
        return Combine(
            [
                pipeline_from_config(c, resources, f"{where}.combine[{i}]")
                for i, c in enumerate(children)
            ]
        )
    if kind == "repeat":
        _check_keys(cfg, {"repeat"}, where)
        body = cfg["repeat"]
        if not isinstance(body, Mapping):
            raise InvalidParamError(f"{where}: 'repeat' must be an object")
        _check_keys(body, {"n", "inner"}, f"{where}.repeat")
        n = _require(body, "n", f"{where}.repeat")
        if not isinstance(n, int):
            raise InvalidParamError(f"{where}.repeat: n must be an integer, got {n!r}")
        inner = pipeline_from_config(
            _require(body, "inner", f"{where}.repeat"), resources, f"{where}.repeat.inner"
        )
        return Repeat(inner, n)
    # per_doc
    _check_keys(cfg, {"per_doc"}, where)
    body = cfg["per_doc"]
    if not isinstance(body, Mapping):
        raise InvalidParamError(f"{where}: 'per_doc' must be an object")
    _check_keys(body, {"p", "inner"}, f"{where}.per_doc")
    p = _require(body, "p", f"{where}.per_doc")
    inner = pipeline_from_config(
        _require(body, "inner", f"{where}.per_doc"), resources, f"{where}.per_doc.inner"
    )
    return PerDoc(inner, p)


def pipeline_from_path(path, resources: ResourceDir | None = None) -> Augmenter:
    """Load a pipeline config JSON file."""
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read pipeline config: {exc}", path=path) from exc
    try:
        cfg = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", path=path) from exc
    return pipeline_from_config(cfg, resources)

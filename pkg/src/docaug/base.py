"""Base classes shared by augmenters and pipeline combinators.

Every node is a scikit-learn style estimator: constructor parameters are
stored verbatim under their own names, so ``get_params``/``set_params``/
``clone`` work, and ``fit``/``transform`` let a node drop into wider
pipelines. ``fit`` is a no-op (augmenters hold no learned state) and
``transform(docs)`` runs the node over a corpus with per-document rng
streams seeded from the node's ``random_state``.

The core contract stays functional underneath: a leaf maps
``(document, rng) -> document`` deterministically, a combinator maps
``(document, rng) -> [documents]``, and neither ever mutates its input.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from sklearn.base import BaseEstimator, TransformerMixin

from .doc import Document
from .errors import InvalidParamError

__all__ = ["Augmenter", "DocAugmenter", "LeafStats"]


@dataclass
class LeafStats:
    """Per-application bookkeeping reported by a leaf augmenter."""

    tokens_modified: int = 0
    spans_dropped: int = 0
    spans_transferred: int = 0
    ents_skipped: int = 0


class _NullSink:
    def record(self, name: str, stats: LeafStats) -> None:
        pass


_NULL_SINK = _NullSink()


def _check_unit(value, name: str) -> float:
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise InvalidParamError(f"{name} must be a number, got {value!r}") from None
    if not 0.0 <= v <= 1.0:
        raise InvalidParamError(f"{name} must be in [0, 1], got {value!r}")
    return v


class Augmenter(TransformerMixin, BaseEstimator):
    """A pipeline node: applies to one document, fans out to a list."""

    def apply(self, doc: Document, rng: random.Random) -> list[Document]:
        """Apply this node to one document using draws from ``rng``."""
        return self._apply(doc, rng, _NULL_SINK)

    def _apply(self, doc: Document, rng: random.Random, sink) -> list[Document]:
        raise NotImplementedError

    def fit(self, X: Iterable[Document], y=None):
        """No-op; augmenters learn nothing. Returns self."""
        return self

    def transform(self, X: Sequence[Document]) -> list[Document]:
        """Run over a corpus, seeding streams from ``random_state``.

        Equivalent to ``run_corpus(self, X, seed=self.random_state)`` and
        therefore deterministic for a fixed corpus and ``random_state``.
        """
        from .pipeline import run_corpus

        docs, _ = run_corpus(self, X, seed=getattr(self, "random_state", 0))
        return docs


class DocAugmenter(Augmenter):
    """A leaf: transforms one document into exactly one document."""

    name = "augmenter"

    def augment(self, doc: Document, rng: random.Random) -> Document:
        """Transform ``doc``; deterministic for a fixed rng state.

        Eligibility draws happen in document order, one per eligible unit,
        and consume the rng even when they fail, so the output is a pure
        function of the document and the rng state.
        """
        out, _ = self._augment(doc, rng)
        return out

    def _augment(
        self, doc: Document, rng: random.Random
    ) -> tuple[Document, LeafStats]:
        raise NotImplementedError

    def _apply(self, doc: Document, rng: random.Random, sink) -> list[Document]:
        out, stats = self._augment(doc, rng)
        sink.record(self.name, stats)
        return [out]

"""Loaders for the file-backed resources augmenters draw from.

Four kinds, all loaded eagerly and atomically (a load error never yields a
partially usable object):

* keyboard layouts: JSON ``{"name": ..., "neighbors": {"q": ["a", ...]}}``
  with single lowercase characters and no character listing itself;
* name lists: JSON mapping an entity label to a non-empty list of token
  sequences, every form non-empty and whitespace-free;
* synonym lexicons: TSV rows ``form<TAB>upos<TAB>syn1,syn2,...`` keyed by
  (lowercased form, upos), synonyms never equal to their key form;
* embedding tables: word2vec-style text (optional ``V d`` header, then
  ``word c1 ... cd`` rows), unique words, no zero vectors.

:func:`knn` is an exact brute-force cosine scan: ties break on the word,
lexicographically ascending; the query word is excluded; at most
``len(vocab) - 1`` results.

Ids resolve to files as ``<dir>/<id><extension>`` through
:class:`ResourceDir`, falling back to the data directory shipped with the
package (which includes the ``qwerty_en`` and ``azerty_fr`` layouts).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    AugmentError,
    DimMismatchError,
    InvalidLayoutError,
    InvalidParamError,
    InvalidResourceError,
    OOVError,
    ParseError,
    ResourceError,
    UnknownResourceError,
    ZeroVectorError,
)

__all__ = [
    "KeyboardLayout",
    "NameLists",
    "SynonymLexicon",
    "EmbeddingTable",
    "load_keyboard_layout",
    "load_name_lists",
    "load_synonyms",
    "load_embeddings",
    "neighbors",
    "knn",
    "ResourceDir",
    "RESOURCE_EXTENSIONS",
]

_PACKAGED_DATA = Path(__file__).parent / "data"

RESOURCE_EXTENSIONS = {
    "keyboard_layout": ".layout.json",
    "name_lists": ".names.json",
    "synonyms": ".synonyms.tsv",
    "embeddings": ".vec.txt",
}

_ID_RE = re.compile(r"^[A-Za-z0-9_-]+$")


def _read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read resource: {exc}", path=path) from exc


def _read_json(path):
    raw = _read_text(path)
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", path=path) from exc


@dataclass(frozen=True)
class KeyboardLayout:
    """Physical-adjacency map used by the keystroke-error augmenter."""

    name: str
    neighbors: Mapping[str, tuple[str, ...]]

    def neighbors_of(self, ch: str) -> tuple[str, ...]:
        """Neighbor list for a character; lookup lowercases the query.

        Unmapped characters get an empty tuple. The result never contains
        the (lowercased) query character itself.
        """
        return self.neighbors.get(ch.lower(), ())


def neighbors(layout: KeyboardLayout, ch: str) -> tuple[str, ...]:
    """Module-level alias for :meth:`KeyboardLayout.neighbors_of`."""
    return layout.neighbors_of(ch)


def load_keyboard_layout(path) -> KeyboardLayout:
    data = _read_json(path)
    if not isinstance(data, dict) or not isinstance(data.get("name"), str):
        raise InvalidLayoutError(f"{path}: layout needs a 'name' string")
    nb = data.get("neighbors")
    if not isinstance(nb, dict):
        raise InvalidLayoutError(f"{path}: layout needs a 'neighbors' object")
    table: dict[str, tuple[str, ...]] = {}
    for key, values in nb.items():
        if len(key) != 1 or key != key.lower():
            raise InvalidLayoutError(
                f"{path}: key {key!r} must be a single lowercase character"
            )
        if not isinstance(values, list) or not values:
            raise InvalidLayoutError(f"{path}: key {key!r} needs a non-empty list")
        for v in values:
            if not isinstance(v, str) or len(v) != 1 or v != v.lower():
                raise InvalidLayoutError(
                    f"{path}: neighbor {v!r} of {key!r} must be a single "
                    "lowercase character"
                )
            if v == key:
                raise InvalidLayoutError(
                    f"{path}: character {key!r} lists itself as a neighbor"
                )
        table[key] = tuple(values)
    return KeyboardLayout(name=data["name"], neighbors=table)


@dataclass(frozen=True)
class NameLists:
    """Entity label to candidate name sequences (token form tuples)."""

    lists: Mapping[str, tuple[tuple[str, ...], ...]]

    def __contains__(self, label: str) -> bool:
        return label in self.lists

    def for_label(self, label: str) -> tuple[tuple[str, ...], ...]:
        return self.lists.get(label, ())


def load_name_lists(path) -> NameLists:
    data = _read_json(path)
    if not isinstance(data, dict):
        raise InvalidResourceError(f"{path}: name lists must be a JSON object")
    lists: dict[str, tuple[tuple[str, ...], ...]] = {}
    for label, seqs in data.items():
        if not label:
            raise InvalidResourceError(f"{path}: empty label")
        if not isinstance(seqs, list) or not seqs:
            raise InvalidResourceError(
                f"{path}: label {label!r} needs a non-empty list of names"
            )
        out = []
        for seq in seqs:
            if not isinstance(seq, list) or not seq:
                raise InvalidResourceError(
                    f"{path}: label {label!r} has an empty name sequence"
                )
            for form in seq:
                if not isinstance(form, str) or not form or " " in form:
                    raise InvalidResourceError(
                        f"{path}: name form {form!r} under {label!r} is empty "
                        "or contains a space"
                    )
            out.append(tuple(seq))
        lists[label] = tuple(out)
    return NameLists(lists=lists)


@dataclass(frozen=True)
class SynonymLexicon:
    """(lowercased form, upos) to synonym tuples."""

    entries: Mapping[tuple[str, str], tuple[str, ...]]

    def lookup(self, form: str, upos: str) -> tuple[str, ...]:
        return self.entries.get((form.lower(), upos), ())


def load_synonyms(path) -> SynonymLexicon:
    raw = _read_text(path)
    entries: dict[tuple[str, str], tuple[str, ...]] = {}
    for lineno, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise ParseError(
                f"expected 3 tab-separated columns, got {len(cols)}",
                path=path,
                line=lineno,
            )
        form, upos, joined = cols
        form = form.lower()
        if not form or not upos or not joined:
            raise InvalidResourceError(
                f"{path}:line {lineno}: empty form, upos, or synonym list"
            )
        syns = joined.split(",")
        for syn in syns:
            if not syn or " " in syn:
                raise InvalidResourceError(
                    f"{path}:line {lineno}: synonym {syn!r} is empty or "
                    "contains a space"
                )
            if syn.lower() == form:
                raise InvalidResourceError(
                    f"{path}:line {lineno}: synonym {syn!r} equals its key form"
                )
        key = (form, upos)
        if key in entries:
            raise InvalidResourceError(
                f"{path}:line {lineno}: duplicate key {key!r}"
            )
        entries[key] = tuple(syns)
    return SynonymLexicon(entries=entries)


class EmbeddingTable:
    """Static word vectors with a precomputed unit-norm matrix."""

    def __init__(self, words: Sequence[str], vectors: np.ndarray):
        vectors = np.asarray(vectors, dtype=np.float64)
        if vectors.ndim != 2 or len(words) != vectors.shape[0]:
            raise InvalidResourceError(
                "embedding table needs one vector row per word"
            )
        if len(set(words)) != len(words):
            raise ParseError("duplicate word in embedding table")
        norms = np.linalg.norm(vectors, axis=1)
        zero = np.nonzero(norms == 0.0)[0]
        if zero.size:
            raise ZeroVectorError(
                f"word {words[int(zero[0])]!r} has a zero vector"
            )
        self.words: tuple[str, ...] = tuple(words)
        self.vectors: np.ndarray = vectors
        self._index = {w: i for i, w in enumerate(self.words)}
        self._unit = vectors / norms[:, None]

    def __contains__(self, word: str) -> bool:
        return word in self._index

    def __len__(self) -> int:
        return len(self.words)

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    def vector(self, word: str) -> np.ndarray:
        if word not in self._index:
            raise OOVError(f"word {word!r} not in embedding vocabulary")
        return self.vectors[self._index[word]]

    def _unit_row(self, word: str) -> np.ndarray:
        return self._unit[self._index[word]]


def load_embeddings(path) -> EmbeddingTable:
    raw = _read_text(path)
    lines = [ln for ln in raw.splitlines()]
    rows: list[tuple[str, list[float]]] = []
    declared: tuple[int, int] | None = None
    start = 0
    if lines:
        head = lines[0].split()
        if len(head) == 2:
            try:
                declared = (int(head[0]), int(head[1]))
                start = 1
            except ValueError:
                declared = None
    dim: int | None = declared[1] if declared else None
    for lineno in range(start, len(lines)):
        line = lines[lineno]
        if not line.strip():
            continue
        fields = line.split()
        if len(fields) < 2:
            raise ParseError(
                "embedding row needs a word and at least one component",
                path=path,
                line=lineno + 1,
            )
        word, comps = fields[0], fields[1:]
        if dim is None:
            dim = len(comps)
        elif len(comps) != dim:
            raise DimMismatchError(
                f"{path}:line {lineno + 1}: row has {len(comps)} components, "
                f"expected {dim}"
            )
        try:
            values = [float(c) for c in comps]
        except ValueError as exc:
            raise ParseError(
                f"bad vector component: {exc}", path=path, line=lineno + 1
            ) from exc
        rows.append((word, values))
    if declared and declared[0] != len(rows):
        raise ParseError(
            f"header declares {declared[0]} rows, file has {len(rows)}",
            path=path,
        )
    if not rows:
        raise ParseError("embedding table is empty", path=path)
    words = [w for w, _ in rows]
    if len(set(words)) != len(words):
        dupe = next(w for i, w in enumerate(words) if w in words[:i])
        raise ParseError(f"duplicate word {dupe!r}", path=path)
    matrix = np.array([v for _, v in rows], dtype=np.float64)
    return EmbeddingTable(words, matrix)


def knn(table: EmbeddingTable, word: str, k: int) -> list[str]:
    """The ``k`` vocabulary words nearest to ``word`` by cosine.

    Exact brute-force scan over the whole vocabulary; the query word is
    excluded; equal scores order lexicographically ascending; the result
    has ``min(k, len(vocab) - 1)`` entries.
    """
    if k < 1:
        raise InvalidParamError(f"k must be >= 1, got {k}")
    if word not in table:
        raise OOVError(f"word {word!r} not in embedding vocabulary")
    scores = table._unit @ table._unit_row(word)
    order = sorted(
        (w for w in table.words if w != word),
        key=lambda w: (-scores[table._index[w]], w),
    )
    return order[:k]


class ResourceDir:
    """Resolve resource ids to files and cache the loaded objects.

    Looks in the user-supplied directory first (when given), then in the
    package's own data directory. Ids must match ``[A-Za-z0-9_-]+``.
    """

    _LOADERS = {
        "keyboard_layout": load_keyboard_layout,
        "name_lists": load_name_lists,
        "synonyms": load_synonyms,
        "embeddings": load_embeddings,
    }

    def __init__(self, path=None):
        self.path = Path(path) if path is not None else None
        self._cache: dict[tuple[str, str], object] = {}

    def _resolve(self, kind: str, resource_id: str) -> Path:
        if not _ID_RE.match(resource_id):
            raise InvalidParamError(
                f"resource id {resource_id!r} must match [A-Za-z0-9_-]+"
            )
        fname = resource_id + RESOURCE_EXTENSIONS[kind]
        candidates = []
        if self.path is not None:
            candidates.append(self.path / fname)
        candidates.append(_PACKAGED_DATA / fname)
        for cand in candidates:
            if cand.is_file():
                return cand
        raise UnknownResourceError(
            f"no {kind} named {resource_id!r} "
            f"(looked for {fname} in {[str(c.parent) for c in candidates]})"
        )

    def _load(self, kind: str, resource_id: str):
        key = (kind, resource_id)
        if key not in self._cache:
            path = self._resolve(kind, resource_id)
            try:
                self._cache[key] = self._LOADERS[kind](path)
            except ResourceError:
                raise
            except AugmentError as exc:
                # Keep the loader's code but mark the failure as a
                # resource problem for exit-code classification.
                raise ResourceError(str(exc), code=exc.code) from exc
        return self._cache[key]

    def keyboard_layout(self, resource_id: str) -> KeyboardLayout:
        return self._load("keyboard_layout", resource_id)

    def name_lists(self, resource_id: str) -> NameLists:
        return self._load("name_lists", resource_id)

    def synonyms(self, resource_id: str) -> SynonymLexicon:
        return self._load("synonyms", resource_id)

    def embeddings(self, resource_id: str) -> EmbeddingTable:
        return self._load("embeddings", resource_id)

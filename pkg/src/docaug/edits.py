"""Range-replacement engine that rewrites a document and its annotations.

One :class:`Replacement` swaps a token range (inside a single sentence)
for a non-empty list of new tokens. :func:`apply_edits` applies a whole
:class:`EditPlan` at once and keeps every annotation consistent:

* offsets and text are rebuilt;
* the first new token of each replacement (the anchor) inherits the
  mapped head, deprel, and (unless supplied) upos of the replaced range's
  attachment root: the range token of minimal tree depth, ties broken by
  lowest index. For ranges with a single edge leaving the range this is
  exactly :func:`span_root`; minimal depth additionally keeps the head
  graph acyclic when a range has several outgoing edges that re-enter
  other parts of the tree, and makes the anchor the new sentence root
  when the range contains the old one. Remaining new tokens attach to
  the anchor with deprel ``"flat"``; absent lemmas default to the
  lowercased form;
* heads that pointed into a replaced range are re-pointed to its anchor;
  every other head index passes through :func:`compute_token_map`;
* sentence ranges shift by the token-count deltas;
* an entity span exactly equal to a replaced range is transferred (same
  label, new range) or dropped according to the replacement's policy;
  spans that strictly contain or partially overlap any replaced range are
  dropped. Drops and transfers are counted on the plan.

The input document is never mutated; the result always passes validation
(anything else is rejected up front as an invalid plan).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .doc import Document, Span, _build_document
from .errors import InvalidInputError, InvalidPlanError, InvalidRangeError

__all__ = [
    "SpanPolicy",
    "NewToken",
    "Replacement",
    "EditPlan",
    "span_root",
    "compute_token_map",
    "apply_edits",
]


class SpanPolicy(str, Enum):
    """What happens to an entity span exactly equal to a replaced range."""

    TRANSFER = "transfer"
    DROP = "drop"


@dataclass(frozen=True)
class NewToken:
    """Replacement material: form and ws required, lemma/upos optional.

    A ``None`` lemma becomes the lowercased form; a ``None`` upos inherits
    the span root's upos.
    """

    form: str
    ws: bool
    lemma: str | None = None
    upos: str | None = None


def _as_new_token(item) -> NewToken:
    if isinstance(item, NewToken):
        return item
    return NewToken(*item)


@dataclass(frozen=True)
class Replacement:
    """Replace tokens ``[start, end)`` with ``new_tokens``.

    ``new_tokens`` entries may be ``NewToken`` objects or plain tuples
    ``(form, ws)`` / ``(form, ws, lemma, upos)``.
    """

    start: int
    end: int
    new_tokens: tuple[NewToken, ...]
    span_policy: SpanPolicy = SpanPolicy.TRANSFER

    def __post_init__(self):
        object.__setattr__(
            self, "new_tokens", tuple(_as_new_token(t) for t in self.new_tokens)
        )
        object.__setattr__(self, "span_policy", SpanPolicy(self.span_policy))

    @property
    def width(self) -> int:
        return self.end - self.start

    @property
    def delta(self) -> int:
        return len(self.new_tokens) - self.width


@dataclass
class EditPlan:
    """Ordered, disjoint replacements plus bookkeeping counters.

    ``spans_dropped`` and ``spans_transferred`` are written by
    :func:`apply_edits` and describe its most recent application, so a
    plan instance should not be applied concurrently from several threads.
    """

    replacements: tuple[Replacement, ...]
    spans_dropped: int = 0
    spans_transferred: int = 0

    def __post_init__(self):
        self.replacements = tuple(self.replacements)
        prev_end = None
        for r in self.replacements:
            if r.start < 0 or r.start >= r.end:
                raise InvalidPlanError(
                    f"replacement range ({r.start}, {r.end}) is empty or negative"
                )
            if not r.new_tokens:
                raise InvalidPlanError(
                    f"replacement at ({r.start}, {r.end}) has no new tokens"
                )
            for nt in r.new_tokens:
                if not nt.form or any(ch.isspace() for ch in nt.form):
                    raise InvalidPlanError(
                        f"new token form {nt.form!r} is empty or has whitespace"
                    )
            if prev_end is not None and r.start < prev_end:
                raise InvalidPlanError(
                    "replacements must be sorted and pairwise disjoint"
                )
            prev_end = r.end


def span_root(doc: Document, rng: tuple[int, int]) -> int:
    """Index of the range's head token.

    The span root is the lowest-index token in ``[start, end)`` whose head
    is absent or lies outside the range. The range must be non-empty, in
    bounds, and inside a single sentence.
    """
    start, end = rng
    n = len(doc.tokens)
    if not (0 <= start < end <= n):
        raise InvalidRangeError(f"range ({start}, {end}) empty or out of bounds")
    sent = doc.sentence_of(start)
    if sent is None or end > sent[1]:
        raise InvalidRangeError(f"range ({start}, {end}) crosses sentences")
    for i in range(start, end):
        h = doc.tokens[i].head
        if h is None or not (start <= h < end):
            return i
    # Unreachable on a valid document: a fully internal head set is a cycle.
    raise InvalidRangeError(f"range ({start}, {end}) has no external head")


def _attachment_root(doc: Document, rng: tuple[int, int]) -> int:
    """Range token of minimal tree depth; ties broken by lowest index.

    Contracting a range onto this token's attachment point is always
    safe: its head is necessarily outside the range, every head edge in
    the contracted graph still strictly decreases depth (so no cycles),
    and a range containing the sentence root yields the root itself
    (depth zero), so the anchor becomes the new root. Coincides with
    :func:`span_root` whenever the lowest-index externally-headed token
    is also the shallowest one, which covers single-token ranges and
    ordinary entity spans.
    """
    start, end = rng
    limit = len(doc.tokens)
    best = start
    best_key: tuple[int, int] | None = None
    for i in range(start, end):
        depth = 0
        j = doc.tokens[i].head
        while j is not None and depth <= limit:  # bounded against bad input
            depth += 1
            j = doc.tokens[j].head
        key = (depth, i)
        if best_key is None or key < best_key:
            best, best_key = i, key
    return best


def compute_token_map(plan: EditPlan, n_tokens: int) -> list[int]:
    """Old-index to new-index map for a plan over ``n_tokens`` tokens.

    Tokens inside a replaced range map to that replacement's anchor (its
    first new token); every other token shifts by the accumulated length
    delta. The map is monotone non-decreasing.
    """
    for r in plan.replacements:
        if r.end > n_tokens:
            raise InvalidPlanError(
                f"replacement range ({r.start}, {r.end}) exceeds {n_tokens} tokens"
            )
    mapping = []
    delta = 0
    reps = list(plan.replacements)
    which = 0
    for i in range(n_tokens):
        while which < len(reps) and i >= reps[which].end:
            delta += reps[which].delta
            which += 1
        if which < len(reps) and reps[which].start <= i < reps[which].end:
            mapping.append(reps[which].start + delta)
        else:
            mapping.append(i + delta)
    return mapping


def _check_plan(doc: Document, plan: EditPlan) -> None:
    n = len(doc.tokens)
    for r in plan.replacements:
        if r.end > n:
            raise InvalidPlanError(
                f"replacement range ({r.start}, {r.end}) exceeds {n} tokens"
            )
        sent = doc.sentence_of(r.start)
        if sent is None or r.end > sent[1]:
            raise InvalidPlanError(
                f"replacement range ({r.start}, {r.end}) crosses sentences"
            )


def apply_edits(doc: Document, plan: EditPlan) -> Document:
    """Apply every replacement at once; returns a fresh valid document.

    See the module docstring for the head, sentence, and entity-span
    semantics. The plan's ``spans_dropped``/``spans_transferred`` counters
    are reset and filled here.
    """
    _check_plan(doc, plan)
    plan.spans_dropped = 0
    plan.spans_transferred = 0
    n = len(doc.tokens)
    tmap = compute_token_map(plan, n)
    reps = plan.replacements

    def map_head(h: int | None) -> int | None:
        return None if h is None else tmap[h]

    # Token parts with heads deferred: heads of kept tokens and anchors are
    # old-document indices (resolved through tmap afterwards); heads of
    # trailing new tokens point at their anchor's new index directly.
    parts: list[tuple[str, bool, str, str, int | None, str]] = []
    deferred: list[tuple[str, int | None]] = []  # ("old", h) or ("new", idx)
    which = 0
    i = 0
    while i < n:
        if which < len(reps) and reps[which].start == i:
            r = reps[which]
            root = _attachment_root(doc, (r.start, r.end))
            root_tok = doc.tokens[root]
            anchor_new = tmap[r.start]
            for j, nt in enumerate(r.new_tokens):
                lemma = nt.lemma if nt.lemma is not None else nt.form.lower()
                upos = nt.upos if nt.upos is not None else root_tok.upos
                if j == 0:
                    parts.append((nt.form, nt.ws, lemma, upos, None, root_tok.deprel))
                    deferred.append(("old", root_tok.head))
                else:
                    parts.append((nt.form, nt.ws, lemma, upos, None, "flat"))
                    deferred.append(("new", anchor_new))
            i = r.end
            which += 1
        else:
            t = doc.tokens[i]
            parts.append((t.form, t.ws, t.lemma, t.upos, None, t.deprel))
            deferred.append(("old", t.head))
            i += 1

    resolved_parts = []
    for (form, ws, lemma, upos, _h, deprel), (kind, h) in zip(parts, deferred):
        if kind == "old":
            head = map_head(h)
        else:
            head = h
        resolved_parts.append((form, ws, lemma, upos, head, deprel))

    # Sentence ranges shift by the deltas of the replacements inside them.
    new_sents = []
    pos = 0
    for s, e in doc.sents:
        length = e - s
        for r in reps:
            if s <= r.start and r.end <= e:
                length += r.delta
        new_sents.append((pos, pos + length))
        pos += length

    # Entity spans: exact match follows the policy, any other overlap drops.
    new_ents: list[Span] = []
    for sp in doc.ents:
        overlapping = [r for r in reps if r.start < sp.end and sp.start < r.end]
        if not overlapping:
            new_ents.append(Span(tmap[sp.start], tmap[sp.end - 1] + 1, sp.label))
            continue
        r = overlapping[0]
        if len(overlapping) == 1 and (r.start, r.end) == (sp.start, sp.end):
            if r.span_policy is SpanPolicy.TRANSFER:
                anchor_new = tmap[r.start]
                new_ents.append(
                    Span(anchor_new, anchor_new + len(r.new_tokens), sp.label)
                )
                plan.spans_transferred += 1
            else:
                plan.spans_dropped += 1
        else:
            plan.spans_dropped += 1

    try:
        return _build_document(resolved_parts, new_sents, new_ents)
    except InvalidInputError as exc:  # pragma: no cover - defensive
        raise InvalidPlanError(f"edit produced an invalid document: {exc}") from exc

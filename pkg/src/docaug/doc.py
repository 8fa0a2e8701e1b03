"""Annotated document model and its validator.

A :class:`Document` is plain immutable data: the surface text plus tokens
(with character offsets, lemma, coarse tag, dependency head, relation),
sentence boundaries as half-open token-index ranges, and entity spans.
The model is deliberately self-checking: :func:`validate` re-derives every
structural invariant from scratch and reports findings as data, never by
raising, so callers can decide what is fatal.

Invariants enforced (error findings):

* ``text`` equals the concatenation over tokens of ``form`` plus one space
  when ``ws`` is true;
* token character offsets are exactly the positions induced by that
  concatenation, and every text slice matches its token form;
* ``sents`` partitions ``[0, n)`` in order with no gaps or empty ranges;
* within each sentence the ``head`` links form a tree: exactly one token
  has no head, all heads stay inside the sentence, no cycles;
* ``ents`` is sorted, pairwise disjoint, non-empty, in bounds, and each
  span lies within a single sentence.

A final token with ``ws=True`` leaves a trailing space in the text; that
is legal and reported as a warning finding (``TRAILING_WS_WARNING``), not
an error.

Offsets count Unicode code points, not bytes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .errors import InvalidInputError

__all__ = [
    "Token",
    "Span",
    "Document",
    "Finding",
    "FindingCode",
    "ValidationReport",
    "text_of",
    "validate",
    "doc_from_tokens",
]


class FindingCode(str, Enum):
    """Fixed set of validator finding codes."""

    OFFSET_MISMATCH = "OFFSET_MISMATCH"
    TEXT_MISMATCH = "TEXT_MISMATCH"
    HEAD_CYCLE = "HEAD_CYCLE"
    HEAD_CROSS_SENTENCE = "HEAD_CROSS_SENTENCE"
    MULTI_ROOT = "MULTI_ROOT"
    NO_ROOT = "NO_ROOT"
    SPAN_OVERLAP = "SPAN_OVERLAP"
    SPAN_CROSS_SENTENCE = "SPAN_CROSS_SENTENCE"
    SENT_GAP = "SENT_GAP"
    TRAILING_WS_WARNING = "TRAILING_WS_WARNING"


#: Codes that do not make a document invalid.
WARNING_CODES = frozenset({FindingCode.TRAILING_WS_WARNING})


@dataclass(frozen=True)
class Finding:
    """One validator observation: a code, a human message, a location."""

    code: FindingCode
    message: str
    location: str

    def __str__(self) -> str:
        return f"{self.code.value} at {self.location}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    """Validator output. Empty ``errors`` means the document is valid."""

    findings: tuple[Finding, ...] = ()

    @property
    def errors(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.code not in WARNING_CODES)

    @property
    def warnings(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.code in WARNING_CODES)

    @property
    def is_valid(self) -> bool:
        return not self.errors

    def __str__(self) -> str:
        if not self.findings:
            return "ok"
        return "; ".join(str(f) for f in self.findings)


@dataclass(frozen=True)
class Token:
    """One token: surface form, trailing-space flag, offsets, annotations.

    ``head`` is a document-level token index; ``None`` marks the sentence
    root. ``start``/``end`` are half-open character offsets into the
    document text.
    """

    form: str
    ws: bool
    start: int
    end: int
    lemma: str = ""
    upos: str = "X"
    head: int | None = None
    deprel: str = "dep"


@dataclass(frozen=True)
class Span:
    """Half-open token-index range with a label (an entity span)."""

    start: int
    end: int
    label: str


@dataclass(frozen=True)
class Document:
    """Immutable annotated document. See the module docstring for laws."""

    text: str
    tokens: tuple[Token, ...]
    sents: tuple[tuple[int, int], ...]
    ents: tuple[Span, ...]

    def __post_init__(self):
        # Accept lists for convenience; store tuples so value equality and
        # immutability hold.
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(
            self, "sents", tuple((int(s), int(e)) for s, e in self.sents)
        )
        object.__setattr__(
            self,
            "ents",
            tuple(
                sp if isinstance(sp, Span) else Span(sp[0], sp[1], sp[2])
                for sp in self.ents
            ),
        )

    def __len__(self) -> int:
        return len(self.tokens)

    def sentence_of(self, index: int) -> tuple[int, int] | None:
        """Return the sentence range containing token ``index``, if any."""
        for s, e in self.sents:
            if s <= index < e:
                return (s, e)
        return None


def text_of(tokens: Iterable[Token | Sequence]) -> str:
    """Rebuild surface text from ``(form, ws)`` data.

    Accepts Token objects or bare ``(form, ws)`` pairs. A trailing space is
    retained when the final token has ``ws=True``.
    """
    parts = []
    for t in tokens:
        if isinstance(t, Token):
            form, ws = t.form, t.ws
        else:
            form, ws = t[0], t[1]
        parts.append(form)
        if ws:
            parts.append(" ")
    return "".join(parts)


def _check_tokens(doc: Document, out: list[Finding]) -> None:
    pos = 0
    for i, t in enumerate(doc.tokens):
        where = f"token {i}"
        if not t.form:
            out.append(Finding(FindingCode.TEXT_MISMATCH, "empty form", where))
        elif any(ch.isspace() for ch in t.form):
            out.append(
                Finding(
                    FindingCode.TEXT_MISMATCH,
                    f"form {t.form!r} contains whitespace",
                    where,
                )
            )
        exp = (pos, pos + len(t.form))
        if (t.start, t.end) != exp:
            out.append(
                Finding(
                    FindingCode.OFFSET_MISMATCH,
                    f"offsets ({t.start}, {t.end}), expected {exp}",
                    where,
                )
            )
        pos = exp[1] + (1 if t.ws else 0)
        if 0 <= t.start <= t.end <= len(doc.text):
            got = doc.text[t.start : t.end]
            if got != t.form:
                out.append(
                    Finding(
                        FindingCode.TEXT_MISMATCH,
                        f"text slice {got!r} != form {t.form!r}",
                        where,
                    )
                )
    rebuilt = text_of(doc.tokens)
    if doc.text != rebuilt:
        out.append(
            Finding(
                FindingCode.TEXT_MISMATCH,
                "text does not equal the token concatenation",
                "doc",
            )
        )


def _check_sents(doc: Document, out: list[Finding]) -> None:
    n = len(doc.tokens)
    expect = 0
    for k, (s, e) in enumerate(doc.sents):
        where = f"sent {k}"
        if s >= e:
            out.append(Finding(FindingCode.SENT_GAP, f"empty range ({s}, {e})", where))
        if s != expect:
            out.append(
                Finding(
                    FindingCode.SENT_GAP,
                    f"starts at {s}, expected {expect}",
                    where,
                )
            )
        expect = max(expect, e)
    if expect != n:
        out.append(
            Finding(
                FindingCode.SENT_GAP,
                f"sentences cover [0, {expect}) but document has {n} tokens",
                "doc",
            )
        )


def _check_heads(doc: Document, out: list[Finding]) -> None:
    tokens = doc.tokens
    for k, (s, e) in enumerate(doc.sents):
        if s >= e or e > len(tokens) or s < 0:
            continue  # already reported as SENT_GAP
        roots = [i for i in range(s, e) if tokens[i].head is None]
        if not roots:
            out.append(Finding(FindingCode.NO_ROOT, "no headless token", f"sent {k}"))
        elif len(roots) > 1:
            out.append(
                Finding(
                    FindingCode.MULTI_ROOT,
                    f"tokens {roots} are all headless",
                    f"sent {k}",
                )
            )
        for i in range(s, e):
            h = tokens[i].head
            if h is not None and not (s <= h < e):
                out.append(
                    Finding(
                        FindingCode.HEAD_CROSS_SENTENCE,
                        f"head {h} outside sentence [{s}, {e})",
                        f"token {i}",
                    )
                )
        # Cycle sweep: follow in-sentence head links, marking trails.
        state: dict[int, str] = {}
        for i in range(s, e):
            if state.get(i) == "done":
                continue
            trail = []
            cur: int | None = i
            while (
                cur is not None
                and s <= cur < e
                and state.get(cur) is None
            ):
                state[cur] = "active"
                trail.append(cur)
                cur = tokens[cur].head
            if cur is not None and s <= cur < e and state.get(cur) == "active":
                out.append(
                    Finding(
                        FindingCode.HEAD_CYCLE,
                        "head links revisit this token",
                        f"token {cur}",
                    )
                )
            for t in trail:
                state[t] = "done"


def _check_ents(doc: Document, out: list[Finding]) -> None:
    n = len(doc.tokens)
    prev: Span | None = None
    for k, sp in enumerate(doc.ents):
        where = f"ent {k}"
        if not (0 <= sp.start < sp.end <= n):
            out.append(
                Finding(
                    FindingCode.SPAN_OVERLAP,
                    f"span ({sp.start}, {sp.end}) empty or out of bounds",
                    where,
                )
            )
            prev = sp
            continue
        if prev is not None and sp.start < max(prev.start, prev.end):
            out.append(
                Finding(
                    FindingCode.SPAN_OVERLAP,
                    f"span ({sp.start}, {sp.end}) overlaps or precedes "
                    f"({prev.start}, {prev.end})",
                    where,
                )
            )
        sent = doc.sentence_of(sp.start)
        if sent is None or sp.end > sent[1]:
            out.append(
                Finding(
                    FindingCode.SPAN_CROSS_SENTENCE,
                    f"span ({sp.start}, {sp.end}) not inside one sentence",
                    where,
                )
            )
        prev = sp


def validate(doc: Document) -> ValidationReport:
    """Check every document invariant; pure and idempotent.

    Returns a report whose ``errors`` tuple is empty exactly when the
    document satisfies all invariants. ``TRAILING_WS_WARNING`` (final token
    has ``ws=True``) is the only warning-severity code.
    """
    out: list[Finding] = []
    _check_tokens(doc, out)
    _check_sents(doc, out)
    _check_heads(doc, out)
    _check_ents(doc, out)
    if doc.tokens and doc.tokens[-1].ws:
        out.append(
            Finding(
                FindingCode.TRAILING_WS_WARNING,
                "final token has ws=True; text keeps a trailing space",
                f"token {len(doc.tokens) - 1}",
            )
        )
    return ValidationReport(tuple(out))


def _build_document(
    parts: Sequence[tuple[str, bool, str, str, int | None, str]],
    sents: Sequence[tuple[int, int]],
    ents: Sequence[Span],
) -> Document:
    """Assemble a Document from offset-free token parts and validate it.

    ``parts`` rows are ``(form, ws, lemma, upos, head, deprel)``. Offsets
    and text are derived here. Raises ``InvalidInputError`` when the result
    has error findings.
    """
    tokens = []
    pos = 0
    for form, ws, lemma, upos, head, deprel in parts:
        start, end = pos, pos + len(form)
        tokens.append(Token(form, ws, start, end, lemma, upos, head, deprel))
        pos = end + (1 if ws else 0)
    doc = Document(
        text=text_of(tokens),
        tokens=tuple(tokens),
        sents=tuple(sents),
        ents=tuple(ents),
    )
    report = validate(doc)
    if not report.is_valid:
        raise InvalidInputError(str(report.errors[0]), report=report)
    return doc


def doc_from_tokens(
    forms: Sequence[str],
    ws: Sequence[bool],
    *,
    lemmas: Sequence[str] | None = None,
    upos: Sequence[str] | None = None,
    heads: Sequence[int | None] | None = None,
    deprels: Sequence[str] | None = None,
    sents: Sequence[tuple[int, int]] | None = None,
    ents: Sequence[Span | tuple] | None = None,
) -> Document:
    """Build a validated document from parallel per-token lists.

    Defaults: lemma is the lowercased form; upos is ``"X"``; when no heads
    are given each sentence gets a chain tree (first token is the root,
    every later token heads to its predecessor with deprel ``"dep"``);
    ``sents`` defaults to one sentence covering all tokens; ``ents``
    defaults to none. Raises ``InvalidInputError`` when list lengths
    disagree or the assembled document has error findings.
    """
    n = len(forms)
    named = {"ws": ws, "lemmas": lemmas, "upos": upos, "heads": heads, "deprels": deprels}
    for name, seq in named.items():
        if seq is not None and len(seq) != n:
            raise InvalidInputError(
                f"{name} has length {len(seq)}, expected {n}"
            )
    if sents is None:
        sents = [(0, n)] if n else []
    if ents is None:
        ents = []
    if lemmas is None:
        lemmas = [f.lower() for f in forms]
    if upos is None:
        upos = ["X"] * n
    if heads is None:
        heads_list: list[int | None] = [None] * n
        for s, e in sents:
            for i in range(s + 1, e):
                heads_list[i] = i - 1
        heads = heads_list
    if deprels is None:
        deprels = ["root" if h is None else "dep" for h in heads]
    parts = list(zip(forms, ws, lemmas, upos, heads, deprels))
    ent_spans = [
        sp if isinstance(sp, Span) else Span(sp[0], sp[1], sp[2]) for sp in ents
    ]
    return _build_document(parts, list(sents), ent_spans)

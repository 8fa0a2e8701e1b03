"""Corpus serialization: CoNLL-U (subset) and line-delimited JSON.

CoNLL-U
-------
Token lines have the usual 10 tab-separated columns; sentences are
separated by blank lines; ``#`` lines are comments. A comment whose first
word is ``newdoc`` starts a new document; without any such marker the
whole file is one document. Column mapping: FORM -> form, LEMMA -> lemma
(``_`` defaults to the lowercased form), UPOS -> upos, HEAD (1-based,
per sentence; ``0`` is the root) -> head (document-level), DEPREL ->
deprel, MISC ``SpaceAfter=No`` -> ``ws=False`` (default true). Multiword
token ids (``1-2``) and empty nodes (``1.1``) are rejected. Emission
regenerates ``# text = ...`` comments and drops entity spans with a
warning (the format cannot carry them).

JSONL
-----
One document per line:

``{"text": ..., "tokens": [{"form", "ws", "lemma", "upos", "head",
"deprel"}, ...], "sents": [[s, e], ...], "ents": [{"start", "end",
"label"}, ...]}``

``head`` is a document-level index or null. Emission is canonical: keys
exactly in the order above, minimal separators, raw UTF-8 (no ASCII
escaping), LF line endings; parse then emit is byte-identical on
canonical input. Empty lines are skipped with a warning.

Every parsed document is validated; parsing fails on error findings.
"""

from __future__ import annotations

import json
import re
import warnings
from typing import Sequence

from .doc import Document, Span, Token, _build_document, validate
from .errors import InvalidInputError, ParseError, UnsupportedMWTError

__all__ = [
    "parse_conllu",
    "emit_conllu",
    "parse_jsonl",
    "emit_jsonl",
    "doc_to_obj",
    "doc_from_obj",
]

_MWT_ID = re.compile(r"^\d+-\d+$")
_EMPTY_ID = re.compile(r"^\d+\.\d+$")


def _finish_doc(sentences, where: str, do_validate: bool) -> Document:
    """Assemble one document from per-sentence token part lists.

    Head entries arrive 1-based within their sentence (0 for the root)
    and become document-level indices here, where sentence positions are
    known.
    """
    parts = []
    sents = []
    pos = 0
    for sent_parts in sentences:
        sents.append((pos, pos + len(sent_parts)))
        for form, ws, lemma, upos, head_1based, deprel in sent_parts:
            head = None if head_1based == 0 else pos + head_1based - 1
            parts.append((form, ws, lemma, upos, head, deprel))
        pos += len(sent_parts)
    return _assemble(parts, sents, [], where, do_validate)


def _assemble(parts, sents, ents, where, do_validate) -> Document:
    if do_validate:
        try:
            return _build_document(parts, sents, ents)
        except InvalidInputError as exc:
            raise ParseError(f"{where}: invalid document: {exc}") from exc
    # Unvalidated assembly (used by the validate command to surface findings).
    tokens = []
    pos = 0
    for form, ws, lemma, upos, head, deprel in parts:
        tokens.append(Token(form, ws, pos, pos + len(form), lemma, upos, head, deprel))
        pos += len(form) + (1 if ws else 0)
    from .doc import text_of

    return Document(text_of(tokens), tuple(tokens), tuple(sents), tuple(ents))


def parse_conllu(text: str, *, do_validate: bool = True) -> list[Document]:
    """Parse CoNLL-U text into documents. See the module docstring."""
    docs: list[Document] = []
    sentences: list[list] = []  # per-sentence part lists for the open doc
    current: list = []  # token parts of the open sentence
    open_doc = False  # a "# newdoc" marker opened a document
    doc_ordinal = 0

    def close_sentence():
        nonlocal current
        if current:
            sentences.append(current)
            current = []

    def close_doc():
        nonlocal sentences, open_doc, doc_ordinal
        close_sentence()
        if sentences or open_doc:
            docs.append(_finish_doc(sentences, f"doc {doc_ordinal}", do_validate))
            doc_ordinal += 1
        sentences = []
        open_doc = False

    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            close_sentence()
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.split(maxsplit=1)[0:1] == ["newdoc"]:
                close_doc()
                open_doc = True
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise ParseError(
                f"expected 10 tab-separated columns, got {len(cols)}", line=lineno
            )
        tid, form, lemma, upos, _xpos, _feats, head_s, deprel, _deps, misc = cols
        if _MWT_ID.match(tid):
            raise UnsupportedMWTError(
                f"multiword token id {tid!r} is not supported", line=lineno
            )
        if _EMPTY_ID.match(tid):
            raise UnsupportedMWTError(
                f"empty node id {tid!r} is not supported", line=lineno
            )
        try:
            tid_n = int(tid)
        except ValueError:
            raise ParseError(f"bad token id {tid!r}", line=lineno) from None
        if tid_n != len(current) + 1:
            raise ParseError(
                f"token id {tid_n} out of sequence (expected {len(current) + 1})",
                line=lineno,
            )
        if not form or any(ch.isspace() for ch in form):
            raise ParseError(f"bad FORM {form!r}", line=lineno)
        if lemma == "_":
            lemma = form.lower()
        try:
            head_n = int(head_s)
        except ValueError:
            raise ParseError(f"bad HEAD {head_s!r}", line=lineno) from None
        if head_n < 0:
            raise ParseError(f"negative HEAD {head_n}", line=lineno)
        ws = True
        if misc != "_":
            for attr in misc.split("|"):
                if attr == "SpaceAfter=No":
                    ws = False
        # heads become document-level once the sentence's start is known;
        # store the 1-based value and fix it up at sentence close.
        current.append([form, ws, lemma, upos, head_n, deprel])

    close_doc()
    return docs


def emit_conllu(docs: Sequence[Document]) -> str:
    """Serialize documents as CoNLL-U. Entity spans are dropped."""
    dropped = sum(len(d.ents) for d in docs)
    if dropped:
        warnings.warn(
            f"CoNLL-U cannot represent entity spans; dropping {dropped}",
            stacklevel=2,
        )
    lines: list[str] = []
    for di, doc in enumerate(docs):
        if len(docs) > 1:
            lines.append(f"# newdoc id = {di}")
        for s, e in doc.sents:
            sent_text = doc.text[doc.tokens[s].start : doc.tokens[e - 1].end]
            lines.append(f"# text = {sent_text}")
            for i in range(s, e):
                t = doc.tokens[i]
                head = 0 if t.head is None else t.head - s + 1
                misc = "_" if t.ws else "SpaceAfter=No"
                lines.append(
                    "\t".join(
                        [
                            str(i - s + 1),
                            t.form,
                            t.lemma,
                            t.upos,
                            "_",
                            "_",
                            str(head),
                            t.deprel,
                            "_",
                            misc,
                        ]
                    )
                )
            lines.append("")
    return "\n".join(lines) + ("\n" if lines else "")


_TOKEN_KEYS = ("form", "ws", "lemma", "upos", "head", "deprel")
_DOC_KEYS = ("text", "tokens", "sents", "ents")
_ENT_KEYS = ("start", "end", "label")


def doc_to_obj(doc: Document) -> dict:
    """Canonical JSON object form of a document (key order fixed)."""
    return {
        "text": doc.text,
        "tokens": [
            {
                "form": t.form,
                "ws": t.ws,
                "lemma": t.lemma,
                "upos": t.upos,
                "head": t.head,
                "deprel": t.deprel,
            }
            for t in doc.tokens
        ],
        "sents": [[s, e] for s, e in doc.sents],
        "ents": [
            {"start": sp.start, "end": sp.end, "label": sp.label} for sp in doc.ents
        ],
    }


def _expect_keys(obj: dict, keys: tuple[str, ...], where: str) -> None:
    if set(obj) != set(keys):
        raise ParseError(
            f"{where}: expected exactly keys {list(keys)}, got {sorted(obj)}"
        )


def doc_from_obj(obj, *, do_validate: bool = True, where: str = "doc") -> Document:
    """Rebuild a document from its JSON object form."""
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: document must be a JSON object")
    _expect_keys(obj, _DOC_KEYS, where)
    if not isinstance(obj["tokens"], list) or not isinstance(obj["sents"], list) \
            or not isinstance(obj["ents"], list) or not isinstance(obj["text"], str):
        raise ParseError(f"{where}: wrong field types")
    parts = []
    for i, tok in enumerate(obj["tokens"]):
        if not isinstance(tok, dict):
            raise ParseError(f"{where}: token {i} must be an object")
        _expect_keys(tok, _TOKEN_KEYS, f"{where}: token {i}")
        head = tok["head"]
        if head is not None and not isinstance(head, int):
            raise ParseError(f"{where}: token {i} head must be an integer or null")
        if (
            not isinstance(tok["form"], str)
            or not isinstance(tok["ws"], bool)
            or not isinstance(tok["lemma"], str)
            or not isinstance(tok["upos"], str)
            or not isinstance(tok["deprel"], str)
        ):
            raise ParseError(f"{where}: token {i} has wrong field types")
        parts.append(
            (tok["form"], tok["ws"], tok["lemma"], tok["upos"], head, tok["deprel"])
        )
    sents = []
    for i, pair in enumerate(obj["sents"]):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(x, int) for x in pair)
        ):
            raise ParseError(f"{where}: sents[{i}] must be a pair of integers")
        sents.append((pair[0], pair[1]))
    ents = []
    for i, ent in enumerate(obj["ents"]):
        if not isinstance(ent, dict):
            raise ParseError(f"{where}: ents[{i}] must be an object")
        _expect_keys(ent, _ENT_KEYS, f"{where}: ents[{i}]")
        if (
            not isinstance(ent["start"], int)
            or not isinstance(ent["end"], int)
            or not isinstance(ent["label"], str)
        ):
            raise ParseError(f"{where}: ents[{i}] has wrong field types")
        ents.append(Span(ent["start"], ent["end"], ent["label"]))
    doc = _assemble(parts, sents, ents, where, do_validate=False)
    # Offsets are derived, but the stored text must agree with the tokens.
    if doc.text != obj["text"]:
        doc = Document(obj["text"], doc.tokens, doc.sents, doc.ents)
    if do_validate:
        report = validate(doc)
        if not report.is_valid:
            raise InvalidInputError(f"{where}: {report.errors[0]}", report=report)
    return doc


def parse_jsonl(text: str, *, do_validate: bool = True) -> list[Document]:
    """Parse line-delimited JSON documents. Empty lines are skipped."""
    docs = []
    skipped = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            skipped += 1
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}", line=lineno) from None
        docs.append(doc_from_obj(obj, do_validate=do_validate, where=f"line {lineno}"))
    if skipped:
        warnings.warn(f"skipped {skipped} empty line(s)", stacklevel=2)
    return docs


def emit_jsonl(docs: Sequence[Document]) -> str:
    """Serialize documents as canonical JSONL (one line per document)."""
    return "".join(
        json.dumps(doc_to_obj(d), ensure_ascii=False, separators=(",", ":")) + "\n"
        for d in docs
    )

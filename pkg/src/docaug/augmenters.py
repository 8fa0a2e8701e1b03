"""The leaf augmenters.

Every augmenter takes a ``level`` in [0, 1]: the probability of an
independent Bernoulli draw per eligible unit (character, token, token
pair, entity span, or document, depending on the augmenter). Draws happen
in document order and consume the rng even when they fail, so outputs are
pure functions of ``(document, rng state)`` and ``level=0`` reproduces the
input exactly. All augmenters return new, validated documents; the input
is never touched.
"""

from __future__ import annotations

import random
from typing import Callable, Sequence

from .base import DocAugmenter, LeafStats, _check_unit
from .doc import Document, Span, _build_document
from .edits import EditPlan, NewToken, Replacement, SpanPolicy, apply_edits
from .errors import InvalidParamError
from .resources import EmbeddingTable, KeyboardLayout, NameLists, SynonymLexicon, knn

__all__ = [
    "KeystrokeError",
    "CharSwap",
    "Casing",
    "SpacingRemoval",
    "WordlistReplace",
    "SynonymReplace",
    "EmbeddingReplace",
    "TokenSwap",
    "EntityReplace",
    "SentenceShuffle",
]


def _parts_of(doc: Document) -> list[tuple[str, bool, str, str, int | None, str]]:
    return [(t.form, t.ws, t.lemma, t.upos, t.head, t.deprel) for t in doc.tokens]


def _rebuild(doc: Document, parts) -> Document:
    return _build_document(parts, list(doc.sents), list(doc.ents))


def _match_casing(word: str, like: str) -> str:
    """Re-case ``word`` to the casing pattern of ``like``.

    Patterns: all-upper, title, lower; anything mixed falls back to lower.
    """
    if like.isupper():
        return word.upper()
    if like.istitle():
        return word[:1].upper() + word[1:].lower()
    return word.lower()


class KeystrokeError(DocAugmenter):
    """Replace characters with keyboard neighbors, as a typist might.

    Eligible unit: each alphabetic character whose lowercase form has a
    non-empty neighbor set in ``layout``. The replacement is drawn
    uniformly from the neighbor list; original case is re-applied after
    the lowercase lookup. Token count, ws flags, lemmas, tags, heads,
    sentences, and entity spans are untouched.
    """

    name = "keystroke_error"

    def __init__(self, level: float, layout: KeyboardLayout, random_state: int = 0):
        self.level = _check_unit(level, "level")
        self.layout = layout
        self.random_state = random_state

    def _augment(self, doc, rng):
        parts = _parts_of(doc)
        modified = 0
        for idx, (form, ws, lemma, upos, head, deprel) in enumerate(parts):
            chars = list(form)
            changed = False
            for ci, ch in enumerate(chars):
                if not ch.isalpha():
                    continue
                options = self.layout.neighbors_of(ch)
                if not options:
                    continue
                if rng.random() < self.level:
                    repl = options[rng.randrange(len(options))]
                    chars[ci] = repl.upper() if ch.isupper() else repl
                    changed = True
            if changed:
                parts[idx] = ("".join(chars), ws, lemma, upos, head, deprel)
                modified += 1
        return _rebuild(doc, parts), LeafStats(tokens_modified=modified)


class CharSwap(DocAugmenter):
    """Transpose one uniformly chosen adjacent character pair per token.

    Eligible unit: each token whose form has at least two characters.
    """

    name = "char_swap"

    def __init__(self, level: float, random_state: int = 0):
        self.level = _check_unit(level, "level")
        self.random_state = random_state

    def _augment(self, doc, rng):
        parts = _parts_of(doc)
        modified = 0
        for idx, (form, ws, lemma, upos, head, deprel) in enumerate(parts):
            if len(form) < 2:
                continue
            if rng.random() < self.level:
                i = rng.randrange(len(form) - 1)
                swapped = form[:i] + form[i + 1] + form[i] + form[i + 2 :]
                if swapped != form:
                    parts[idx] = (swapped, ws, lemma, upos, head, deprel)
                    modified += 1
        return _rebuild(doc, parts), LeafStats(tokens_modified=modified)


class Casing(DocAugmenter):
    """Per-character case changes.

    Eligible unit: each character of each token form. ``mode`` is
    ``"upper"``, ``"lower"``, or ``"random"`` (a fired draw then picks a
    case uniformly). Caseless characters pass through unchanged.
    """

    name = "casing"

    MODES = ("upper", "lower", "random")

    def __init__(self, mode: str, level: float, random_state: int = 0):
        if mode not in self.MODES:
            raise InvalidParamError(f"mode must be one of {self.MODES}, got {mode!r}")
        self.mode = mode
        self.level = _check_unit(level, "level")
        self.random_state = random_state

    def _augment(self, doc, rng):
        parts = _parts_of(doc)
        modified = 0
        for idx, (form, ws, lemma, upos, head, deprel) in enumerate(parts):
            out = []
            changed = False
            for ch in form:
                if rng.random() < self.level:
                    if self.mode == "upper":
                        nc = ch.upper()
                    elif self.mode == "lower":
                        nc = ch.lower()
                    else:
                        nc = ch.upper() if rng.random() < 0.5 else ch.lower()
                    if nc != ch:
                        changed = True
                    out.append(nc)
                else:
                    out.append(ch)
            if changed:
                parts[idx] = ("".join(out), ws, lemma, upos, head, deprel)
                modified += 1
        return _rebuild(doc, parts), LeafStats(tokens_modified=modified)


class SpacingRemoval(DocAugmenter):
    """Drop the space after a token (set ``ws`` to false).

    Eligible unit: each token with ``ws=True``. Offsets are recomputed;
    nothing else changes.
    """

    name = "spacing_removal"

    def __init__(self, level: float, random_state: int = 0):
        self.level = _check_unit(level, "level")
        self.random_state = random_state

    def _augment(self, doc, rng):
        parts = _parts_of(doc)
        modified = 0
        for idx, (form, ws, lemma, upos, head, deprel) in enumerate(parts):
            if not ws:
                continue
            if rng.random() < self.level:
                parts[idx] = (form, False, lemma, upos, head, deprel)
                modified += 1
        return _rebuild(doc, parts), LeafStats(tokens_modified=modified)


class WordlistReplace(DocAugmenter):
    """Token replacement from a caller-supplied candidate source.

    This is the primitive the lexical augmenters build on. Eligible unit:
    each token. On a fired draw the source is queried with
    ``(form, upos)``; when it returns candidates one is drawn uniformly,
    re-cased to the original token's casing pattern, and applied as a
    single-token replacement (lemma becomes the lowercased new form, upos
    is kept, head and deprel carry over).
    """

    name = "wordlist_replace"

    def __init__(
        self,
        level: float,
        source: Callable[[str, str], Sequence[str]] | None = None,
        random_state: int = 0,
    ):
        self.level = _check_unit(level, "level")
        self.source = source
        self.random_state = random_state

    def _candidates(self, token) -> Sequence[str]:
        if self.source is None:
            return ()
        return self.source(token.form, token.upos)

    def _augment(self, doc, rng):
        reps = []
        modified = 0
        for i, tok in enumerate(doc.tokens):
            if rng.random() >= self.level:
                continue
            cands = self._candidates(tok)
            if not cands:
                continue
            picked = cands[rng.randrange(len(cands))]
            new_form = _match_casing(picked, tok.form)
            if new_form != tok.form:
                modified += 1
            reps.append(
                Replacement(
                    i,
                    i + 1,
                    (NewToken(new_form, tok.ws, new_form.lower(), tok.upos),),
                    SpanPolicy.TRANSFER,
                )
            )
        if not reps:
            return _rebuild(doc, _parts_of(doc)), LeafStats()
        plan = EditPlan(tuple(reps))
        out = apply_edits(doc, plan)
        return out, LeafStats(
            tokens_modified=modified,
            spans_dropped=plan.spans_dropped,
            spans_transferred=plan.spans_transferred,
        )


class SynonymReplace(WordlistReplace):
    """Wordlist replacement backed by a synonym lexicon.

    Lookup key is ``(lowercased form, upos)``, falling back to
    ``(lemma, upos)`` on a miss.
    """

    name = "synonym_replace"

    def __init__(self, level: float, lexicon: SynonymLexicon, random_state: int = 0):
        super().__init__(level=level, source=None, random_state=random_state)
        self.lexicon = lexicon

    def _candidates(self, token):
        hit = self.lexicon.lookup(token.form, token.upos)
        if not hit:
            hit = self.lexicon.lookup(token.lemma, token.upos)
        return hit


class EmbeddingReplace(WordlistReplace):
    """Wordlist replacement from the k nearest static word vectors.

    Candidates are the ``k`` cosine-nearest vocabulary words to the
    token's lowercased form (the query itself excluded). Out-of-vocabulary
    tokens never fire.
    """

    name = "embedding_replace"

    def __init__(
        self, level: float, table: EmbeddingTable, k: int, random_state: int = 0
    ):
        super().__init__(level=level, source=None, random_state=random_state)
        if not isinstance(k, int) or k < 1:
            raise InvalidParamError(f"k must be an integer >= 1, got {k!r}")
        self.table = table
        self.k = k

    def _candidates(self, token):
        query = token.form.lower()
        if query not in self.table:
            return ()
        return knn(self.table, query, self.k)


class TokenSwap(DocAugmenter):
    """Swap adjacent token pairs inside a sentence.

    Sentences are split left to right into non-overlapping pairs
    ``(s, s+1), (s+2, s+3), ...``; a pair is an eligible unit only when
    neither token lies in an entity span. On a fired draw the two tokens
    exchange form and annotations while the ws flags stay with their
    positions, and every head in the document is re-pointed through the
    transposition, so the tree shape survives relabeling.
    """

    name = "token_swap"

    def __init__(self, level: float, random_state: int = 0):
        self.level = _check_unit(level, "level")
        self.random_state = random_state

    def _augment(self, doc, rng):
        in_ent = set()
        for sp in doc.ents:
            in_ent.update(range(sp.start, sp.end))
        perm = list(range(len(doc.tokens)))
        fired = 0
        for s, e in doc.sents:
            i = s
            while i + 1 < e:
                if i not in in_ent and i + 1 not in in_ent:
                    if rng.random() < self.level:
                        perm[i], perm[i + 1] = perm[i + 1], perm[i]
                        fired += 1
                i += 2
        if not fired:
            return _rebuild(doc, _parts_of(doc)), LeafStats()
        # perm[p] is the old index whose token now sits at position p; the
        # transpositions are involutions, so perm also maps old to new.
        parts = []
        for p, old in enumerate(perm):
            t = doc.tokens[old]
            head = None if t.head is None else perm[t.head]
            parts.append((t.form, doc.tokens[p].ws, t.lemma, t.upos, head, t.deprel))
        return _rebuild(doc, parts), LeafStats(tokens_modified=2 * fired)


class EntityReplace(DocAugmenter):
    """Swap whole entity spans for names drawn from per-label lists.

    Eligible unit: each entity span. A fired span whose label is present
    in ``names`` is replaced (span transferred, same label) by a uniformly
    drawn name sequence; all new tokens get upos ``PROPN``; the last new
    token copies the old span's final ws flag and earlier ones get
    ``ws=True``. A fired span whose label is missing stays unchanged and
    counts as skipped.
    """

    name = "entity_replace"

    def __init__(self, level: float, names: NameLists, random_state: int = 0):
        self.level = _check_unit(level, "level")
        self.names = names
        self.random_state = random_state

    def _augment(self, doc, rng):
        reps = []
        skipped = 0
        covered = 0
        for sp in doc.ents:
            if rng.random() >= self.level:
                continue
            if sp.label not in self.names:
                skipped += 1
                continue
            seqs = self.names.for_label(sp.label)
            seq = seqs[rng.randrange(len(seqs))]
            last_ws = doc.tokens[sp.end - 1].ws
            new_tokens = tuple(
                NewToken(
                    form,
                    last_ws if j == len(seq) - 1 else True,
                    None,
                    "PROPN",
                )
                for j, form in enumerate(seq)
            )
            reps.append(
                Replacement(sp.start, sp.end, new_tokens, SpanPolicy.TRANSFER)
            )
            covered += sp.end - sp.start
        stats = LeafStats(ents_skipped=skipped)
        if not reps:
            return _rebuild(doc, _parts_of(doc)), stats
        plan = EditPlan(tuple(reps))
        out = apply_edits(doc, plan)
        stats.tokens_modified = covered
        stats.spans_dropped = plan.spans_dropped
        stats.spans_transferred = plan.spans_transferred
        return out, stats


class SentenceShuffle(DocAugmenter):
    """Permute the order of sentences uniformly.

    Eligible unit: the document (one draw). Token blocks move wholesale;
    offsets, sentence ranges, heads, and entity spans are re-indexed by
    the block offsets. The whitespace flag after each sentence slot is
    positional: the block placed at slot i takes the separator that
    followed slot i before, so a document that did not end in whitespace
    still does not after a shuffle. Drawing the identity permutation
    leaves the document unchanged.
    """

    name = "sentence_shuffle"

    def __init__(self, level: float, random_state: int = 0):
        self.level = _check_unit(level, "level")
        self.random_state = random_state

    def _augment(self, doc, rng):
        if rng.random() >= self.level:
            return _rebuild(doc, _parts_of(doc)), LeafStats()
        order = list(range(len(doc.sents)))
        rng.shuffle(order)
        if order == sorted(order):
            return _rebuild(doc, _parts_of(doc)), LeafStats()
        old_starts = [s for s, _ in doc.sents]
        new_start_of = {}
        pos = 0
        for new_pos, old_sent in enumerate(order):
            s, e = doc.sents[old_sent]
            new_start_of[old_sent] = pos
            pos += e - s

        def remap(old_index: int) -> int:
            sent_idx = next(
                k for k, (s, e) in enumerate(doc.sents) if s <= old_index < e
            )
            return old_index - old_starts[sent_idx] + new_start_of[sent_idx]

        parts = []
        new_sents = []
        pos = 0
        for new_pos, old_sent in enumerate(order):
            s, e = doc.sents[old_sent]
            # separator stays with the slot, not the block
            slot_ws = doc.tokens[doc.sents[new_pos][1] - 1].ws
            for i in range(s, e):
                t = doc.tokens[i]
                head = None if t.head is None else remap(t.head)
                ws = slot_ws if i == e - 1 else t.ws
                parts.append((t.form, ws, t.lemma, t.upos, head, t.deprel))
            new_sents.append((pos, pos + (e - s)))
            pos += e - s
        new_ents = sorted(
            (
                Span(remap(sp.start), remap(sp.end - 1) + 1, sp.label)
                for sp in doc.ents
            ),
            key=lambda sp: (sp.start, sp.end),
        )
        return _build_document(parts, new_sents, new_ents), LeafStats()

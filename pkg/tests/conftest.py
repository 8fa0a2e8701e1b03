import random

import numpy as np
import pytest

from docaug import (
    Casing,
    CharSwap,
    EmbeddingReplace,
    EmbeddingTable,
    EntityReplace,
    KeystrokeError,
    NameLists,
    ResourceDir,
    SentenceShuffle,
    SpacingRemoval,
    Span,
    SynonymLexicon,
    SynonymReplace,
    TokenSwap,
    WordlistReplace,
    doc_from_tokens,
)

# Fixed vocabulary so lexical augmenters actually fire on generated docs.
WORDS = [
    "alpha", "bird", "cloud", "dog", "early", "fast", "glad", "happy",
    "island", "jump", "kind", "lamp", "moon", "north", "ocean", "plain",
    "quick", "river", "stone", "tree", "under", "valley", "warm", "xenon",
    "yellow", "zebra", "car", "run", "say", "big",
]
_POS_CYCLE = ["NOUN", "VERB", "ADJ", "ADV"]
WORD_UPOS = {w: _POS_CYCLE[i % len(_POS_CYCLE)] for i, w in enumerate(WORDS)}
DEPRELS = ["nsubj", "obj", "amod", "advmod", "det", "dep", "punct"]
ENT_LABELS = ["PER", "ORG", "LOC", "MISC"]


def random_document(rng, max_sents=5, max_tokens=40, with_ents=True, tail_ws=False):
    """A random valid document: random forms, trees, spacing, entities."""
    n_sents = rng.randint(1, max_sents)
    sizes = []
    total = 0
    for _ in range(n_sents):
        size = rng.randint(1, 8)
        if total + size > max_tokens:
            break
        sizes.append(size)
        total += size
    if not sizes:
        sizes, total = [1], 1

    forms, ws, lemmas, upos, heads, deprels = [], [], [], [], [], []
    sents = []
    pos = 0
    for size in sizes:
        sents.append((pos, pos + size))
        idxs = list(range(pos, pos + size))
        root = rng.choice(idxs)
        attached = [root]
        rest = [i for i in idxs if i != root]
        rng.shuffle(rest)
        head_of = {root: None}
        for i in rest:
            head_of[i] = rng.choice(attached)
            attached.append(i)
        for i in idxs:
            kind = rng.random()
            if kind < 0.7:
                w = rng.choice(WORDS)
                c = rng.random()
                if c < 0.15:
                    form = w.capitalize()
                elif c < 0.20:
                    form = w.upper()
                else:
                    form = w
                forms.append(form)
                lemmas.append(w)
                upos.append(WORD_UPOS[w])
            elif kind < 0.8:
                form = "".join(
                    rng.choice("abcdefghijklmnopqrstuvwxyz")
                    for _ in range(rng.randint(1, 6))
                )
                forms.append(form)
                lemmas.append(form)
                upos.append("X")
            elif kind < 0.9:
                form = str(rng.randint(0, 9999))
                forms.append(form)
                lemmas.append(form)
                upos.append("NUM")
            else:
                form = rng.choice([".", ",", "!", "?", ";"])
                forms.append(form)
                lemmas.append(form)
                upos.append("PUNCT")
            ws.append(True)
            heads.append(head_of[i])
            deprels.append("root" if head_of[i] is None else rng.choice(DEPRELS))
        pos += size

    for i in range(total - 1):
        if rng.random() < 0.08:
            ws[i] = False
    ws[-1] = bool(tail_ws)

    ents = []
    if with_ents:
        for s, e in sents:
            used = s
            while used < e and rng.random() < 0.3:
                start = rng.randint(used, e - 1)
                end = rng.randint(start + 1, min(e, start + 3))
                ents.append(Span(start, end, rng.choice(ENT_LABELS)))
                used = end

    return doc_from_tokens(
        forms, ws, lemmas=lemmas, upos=upos, heads=heads, deprels=deprels,
        sents=sents, ents=ents,
    )


@pytest.fixture(scope="session")
def qwerty():
    return ResourceDir().keyboard_layout("qwerty_en")


@pytest.fixture(scope="session")
def azerty():
    return ResourceDir().keyboard_layout("azerty_fr")


@pytest.fixture(scope="session")
def lexicon():
    entries = {}
    for i, w in enumerate(WORDS):
        others = (WORDS[(i + 3) % len(WORDS)], WORDS[(i + 7) % len(WORDS)])
        entries[(w, WORD_UPOS[w])] = others
    return SynonymLexicon(entries=entries)


@pytest.fixture(scope="session")
def name_lists():
    return NameLists(
        lists={
            "PER": (("John",), ("Jane", "Ann"), ("Bo",)),
            "ORG": (("Acme", "Corp"), ("Initech",)),
            "LOC": (("Paris",), ("New", "York")),
        }
    )


@pytest.fixture(scope="session")
def table():
    gen = np.random.default_rng(1234)
    return EmbeddingTable(WORDS, gen.normal(size=(len(WORDS), 8)))


@pytest.fixture(scope="session")
def all_augmenters(qwerty, azerty, lexicon, name_lists, table):
    """One instance of every augmenter at a given level."""

    def source(form, upos):
        return ("foo", "bar") if form.lower() in WORD_UPOS else ()

    def make(level):
        return [
            KeystrokeError(level, azerty),
            CharSwap(level),
            Casing("random", level),
            SpacingRemoval(level),
            WordlistReplace(level, source),
            SynonymReplace(level, lexicon),
            EmbeddingReplace(level, table, 5),
            TokenSwap(level),
            EntityReplace(level, name_lists),
            SentenceShuffle(level),
        ]

    return make

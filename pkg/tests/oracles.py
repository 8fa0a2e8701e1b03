"""Independent reference implementations used to check library output.

Everything here is written against the documented behaviour only, using
plain Python, so a bug in the library cannot hide inside its own oracle.
"""

import math


def token_map_oracle(plan, n_tokens):
    """Splice simulation: build the output cell list, read indices off it."""
    mapping = [None] * n_tokens
    reps = list(plan.replacements)
    out_len = 0
    i = 0
    r = 0
    while i < n_tokens:
        if r < len(reps) and reps[r].start == i:
            anchor = out_len
            out_len += len(reps[r].new_tokens)
            for old in range(reps[r].start, reps[r].end):
                mapping[old] = anchor
            i = reps[r].end
            r += 1
        else:
            mapping[i] = out_len
            out_len += 1
            i += 1
    return mapping


def tree_is_valid(doc):
    """Per sentence: exactly one root, all heads in-sentence, no cycles."""
    for s, e in doc.sents:
        roots = [i for i in range(s, e) if doc.tokens[i].head is None]
        if len(roots) != 1:
            return False
        for i in range(s, e):
            seen = set()
            j = i
            while j is not None:
                if j in seen or not s <= j < e:
                    return False
                seen.add(j)
                j = doc.tokens[j].head
    return True


def knn_oracle(words, vectors, query, k):
    """Brute-force cosine neighbours, pure-Python float math."""
    qi = words.index(query)
    qv = vectors[qi]
    qn = math.sqrt(sum(x * x for x in qv))
    scored = []
    for w, v in zip(words, vectors):
        if w == query:
            continue
        dot = sum(a * b for a, b in zip(qv, v))
        nv = math.sqrt(sum(x * x for x in v))
        scored.append((-(dot / (qn * nv)), w))
    scored.sort()
    return [w for _, w in scored[:k]]

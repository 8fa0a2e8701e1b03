import json
import random
import string

import numpy as np
import pytest

from docaug import (
    DimMismatchError,
    EmbeddingTable,
    InvalidLayoutError,
    InvalidParamError,
    InvalidResourceError,
    OOVError,
    ParseError,
    ResourceDir,
    ResourceError,
    UnknownResourceError,
    ZeroVectorError,
    knn,
    load_embeddings,
    load_keyboard_layout,
    load_name_lists,
    load_synonyms,
    neighbors,
)
from oracles import knn_oracle


# --- keyboard layouts -----------------------------------------------------


def test_packaged_layouts_load_and_are_symmetric():
    for rid in ("qwerty_en", "azerty_fr"):
        lay = ResourceDir().keyboard_layout(rid)
        assert lay.name
        for ch in string.ascii_lowercase:
            nbs = lay.neighbors_of(ch)
            assert nbs, f"{rid}: {ch} has no neighbors"
            assert ch not in nbs
            for nb in nbs:
                assert ch in lay.neighbors_of(nb), f"{rid}: {ch}->{nb} one-way"


def test_layout_lookup_lowercases_and_defaults_empty(qwerty):
    assert qwerty.neighbors_of("Q") == qwerty.neighbors_of("q")
    assert qwerty.neighbors_of("7") == ()
    assert neighbors(qwerty, "A") == qwerty.neighbors_of("a")


def test_azerty_differs_from_qwerty(azerty, qwerty):
    # the canonical spot check: q and a swap places between the layouts
    assert "a" in azerty.neighbors_of("q")
    assert azerty.neighbors_of("q") != qwerty.neighbors_of("q")


def write_layout(tmp_path, obj, name="lay.layout.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj), encoding="utf-8")
    return p


def test_layout_schema_errors(tmp_path):
    bad = tmp_path / "x.layout.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(ParseError):
        load_keyboard_layout(bad)
    with pytest.raises(InvalidLayoutError):
        load_keyboard_layout(write_layout(tmp_path, {"neighbors": {"a": ["b"]}}))
    with pytest.raises(InvalidLayoutError):
        load_keyboard_layout(
            write_layout(tmp_path, {"name": "x", "neighbors": {"A": ["b"]}})
        )
    with pytest.raises(InvalidLayoutError):
        load_keyboard_layout(
            write_layout(tmp_path, {"name": "x", "neighbors": {"ab": ["c"]}})
        )
    with pytest.raises(InvalidLayoutError):
        load_keyboard_layout(
            write_layout(tmp_path, {"name": "x", "neighbors": {"a": ["a"]}})
        )
    with pytest.raises(InvalidLayoutError):
        load_keyboard_layout(
            write_layout(tmp_path, {"name": "x", "neighbors": {"a": []}})
        )


# --- name lists -----------------------------------------------------------


def test_name_lists_load_and_lookup(tmp_path):
    p = tmp_path / "n.names.json"
    p.write_text(json.dumps({"PER": [["Ada"], ["Jane", "Doe"]]}), encoding="utf-8")
    nl = load_name_lists(p)
    assert "PER" in nl and "ORG" not in nl
    assert nl.for_label("PER") == (("Ada",), ("Jane", "Doe"))
    assert nl.for_label("ORG") == ()


def test_packaged_name_lists_have_expected_labels():
    nl = ResourceDir().name_lists("names_en")
    assert "PER" in nl and "ORG" in nl and "LOC" in nl
    assert ("Jane", "Doe") in nl.for_label("PER")


def test_name_lists_schema_errors(tmp_path):
    cases = [
        ["not", "a", "dict"],
        {"PER": []},
        {"PER": [[]]},
        {"PER": [["Jane Doe"]]},  # space inside one form
        {"PER": [["ok", ""]]},
    ]
    for i, obj in enumerate(cases):
        p = tmp_path / f"c{i}.names.json"
        p.write_text(json.dumps(obj), encoding="utf-8")
        with pytest.raises(InvalidResourceError):
            load_name_lists(p)


# --- synonym lexicons -----------------------------------------------------


def test_synonyms_load_lowercase_and_lookup(tmp_path):
    p = tmp_path / "s.synonyms.tsv"
    p.write_text("Happy\tADJ\tglad,cheerful\ncar\tNOUN\tauto\n", encoding="utf-8")
    lex = load_synonyms(p)
    assert lex.lookup("happy", "ADJ") == ("glad", "cheerful")
    assert lex.lookup("HAPPY", "ADJ") == ("glad", "cheerful")  # query lowercased
    assert lex.lookup("happy", "NOUN") == ()
    assert lex.lookup("car", "NOUN") == ("auto",)


def test_packaged_synonyms_load():
    lex = ResourceDir().synonyms("synonyms_en")
    assert lex.lookup("happy", "ADJ")


def test_synonyms_errors(tmp_path):
    def attempt(body):
        p = tmp_path / "bad.synonyms.tsv"
        p.write_text(body, encoding="utf-8")
        return p

    with pytest.raises(ParseError):
        load_synonyms(attempt("happy\tADJ\n"))  # 2 columns
    with pytest.raises(InvalidResourceError):
        load_synonyms(attempt("happy\tADJ\tHappy\n"))  # synonym equals key
    with pytest.raises(InvalidResourceError):
        load_synonyms(attempt("a\tX\tb\na\tX\tc\n"))  # duplicate key
    with pytest.raises(InvalidResourceError):
        load_synonyms(attempt("a\tX\tb c\n"))  # space in synonym


# --- embeddings and knn ---------------------------------------------------


def write_vec(tmp_path, body, name="e.vec.txt"):
    p = tmp_path / name
    p.write_text(body, encoding="utf-8")
    return p


def test_embeddings_parse_with_and_without_header(tmp_path):
    plain = load_embeddings(write_vec(tmp_path, "a 1 0\nb 0 1\n", "p.vec.txt"))
    headed = load_embeddings(write_vec(tmp_path, "2 2\na 1 0\nb 0 1\n", "h.vec.txt"))
    for t in (plain, headed):
        assert len(t) == 2 and t.dim == 2
        assert "a" in t and "z" not in t
        assert list(t.vector("b")) == [0.0, 1.0]
    with pytest.raises(OOVError):
        plain.vector("zzz")


def test_embeddings_errors(tmp_path):
    with pytest.raises(DimMismatchError):
        load_embeddings(write_vec(tmp_path, "a 1 0\nb 1\n"))
    with pytest.raises(ZeroVectorError):
        load_embeddings(write_vec(tmp_path, "a 0 0\nb 1 0\n"))
    with pytest.raises(ParseError):
        load_embeddings(write_vec(tmp_path, "a 1 x\n"))
    with pytest.raises(ParseError):
        load_embeddings(write_vec(tmp_path, "a 1 0\na 0 1\n"))  # duplicate word
    with pytest.raises(ParseError):
        load_embeddings(write_vec(tmp_path, "3 2\na 1 0\nb 0 1\n"))  # bad count
    with pytest.raises(ParseError):
        load_embeddings(write_vec(tmp_path, ""))


def test_knn_hand_frozen_with_tie():
    # q=(1,0); b and e are parallel so they tie; ties order lexicographically
    t = EmbeddingTable(
        ["q", "e", "b", "c", "d"],
        np.array([[1, 0], [2, 2], [1, 1], [0, 1], [-1, 0]], dtype=float),
    )
    assert knn(t, "q", 3) == ["b", "e", "c"]
    assert knn(t, "q", 99) == ["b", "e", "c", "d"]  # capped at vocab - 1
    with pytest.raises(InvalidParamError):
        knn(t, "q", 0)
    with pytest.raises(OOVError):
        knn(t, "zzz", 1)


def test_knn_matches_bruteforce_oracle():
    rng = random.Random(5)
    gen = np.random.default_rng(55)
    words = sorted({"w%03d" % rng.randrange(1000) for _ in range(80)})
    mat = gen.normal(size=(len(words), 8))
    t = EmbeddingTable(words, mat)
    vectors = [list(map(float, row)) for row in mat]
    for q in rng.sample(words, 20):
        for k in (1, 3, 10):
            assert knn(t, q, k) == knn_oracle(words, vectors, q, k)


# --- resource directory ---------------------------------------------------


def test_resource_dir_user_files_shadow_packaged(tmp_path):
    custom = {"name": "custom", "neighbors": {"a": ["b"], "b": ["a"]}}
    (tmp_path / "qwerty_en.layout.json").write_text(json.dumps(custom), "utf-8")
    rd = ResourceDir(tmp_path)
    lay = rd.keyboard_layout("qwerty_en")
    assert lay.name == "custom"
    # packaged file still reachable under a different ResourceDir
    assert ResourceDir().keyboard_layout("qwerty_en").name != "custom"


def test_resource_dir_caches_loads(tmp_path):
    rd = ResourceDir()
    assert rd.keyboard_layout("qwerty_en") is rd.keyboard_layout("qwerty_en")


def test_resource_dir_unknown_and_bad_ids(tmp_path):
    rd = ResourceDir(tmp_path)
    with pytest.raises(UnknownResourceError):
        rd.keyboard_layout("nope")
    with pytest.raises(InvalidParamError):
        rd.keyboard_layout("../escape")


def test_resource_dir_wraps_loader_errors_keeping_code(tmp_path):
    (tmp_path / "bad.layout.json").write_text("{broken", encoding="utf-8")
    rd = ResourceDir(tmp_path)
    with pytest.raises(ResourceError) as exc:
        rd.keyboard_layout("bad")
    assert exc.value.code == "PARSE_ERROR"

import json

import pytest

from odlab import generation as G
from odlab import maps as M
from odlab import oracle as O


# ---------------------------------------------------------------- small cases

def test_v1_has_the_two_infinity_graphs():
    entries = O.corpus_for_v(1)
    assert len(entries) == 2
    for e in entries:
        assert e.melon_free and e.two_pi
        assert (e.inv.g, e.inv.ell) == (0, 1)
    codes = {e.code for e in entries}
    assert codes == {M.canonical_code(G.INFINITY), M.canonical_code(G.INFINITY_CROSSED)}


def test_v2_contains_vacuum_melon_and_double_tadpole():
    codes = {e.code for e in O.corpus_for_v(2)}
    assert M.canonical_code(G.DOUBLE_TADPOLE) in codes
    assert M.canonical_code(G.insert_on_cycle((("N", 0),))) in codes


def test_v3_planar_single_face_no_tadpole_is_the_necklace(corpus5):
    hits = O.filter_corpus(corpus5, g=0, ell=3, phi=1, v=3, tadpole=False,
                           mod_orientation=True, mod_reflection=True)
    assert len(hits) == 1
    assert M.canonical_code(hits[0].map, True, True) == M.canonical_code(G.NECKLACE3, True, True)


def test_class_counts_per_vertex_count(corpus6):
    counts = [len(corpus6.by_v(v)) for v in range(1, 7)]
    assert counts == [2, 5, 20, 107, 870, 9436]


@pytest.mark.parametrize("v", [1, 2, 3, 4])
def test_canonical_enumeration_matches_naive_bijections(corpus5, v):
    assert {e.code for e in corpus5.by_v(v)} == O.naive_classes(v)


def test_melon_free_grade_counts(corpus6):
    def count(g, ell):
        return len(O.filter_corpus(corpus6, g=g, ell=ell, melon_free=True))
    assert [count(0, 1), count(0, 2), count(0, 3)] == [2, 38, 74]
    assert [count(1, 0), count(1, 1), count(1, 2), count(2, 0)] == [1, 4, 51, 1]


def test_every_entry_is_its_own_canonical_representative(corpus5):
    for e in corpus5.by_v(4):
        assert M.canonical_code(e.map) == e.code


# ---------------------------------------------------------------- bounds and cache

def test_bound_exceeded():
    with pytest.raises(O.BoundExceeded):
        O.build_corpus(O.MAX_V + 1)
    with pytest.raises(O.BoundExceeded):
        O.build_corpus(0)


def test_jsonl_round_trip_with_checks(tmp_path):
    entries = O.corpus_for_v(3)
    f = tmp_path / "c.jsonl"
    O.write_corpus_jsonl(entries, f, 3)
    back = O.read_corpus_jsonl(f, check=True)
    assert [e.code for e in back] == [e.code for e in entries]
    assert [e.to_json() for e in back] == [e.to_json() for e in entries]


def test_jsonl_rejects_tampered_entry(tmp_path):
    f = tmp_path / "c.jsonl"
    O.write_corpus_jsonl(O.corpus_for_v(2), f, 2)
    lines = f.read_text().splitlines()
    row = json.loads(lines[1])
    row["two_pi"] = not row["two_pi"]
    lines[1] = json.dumps(row)
    f.write_text("\n".join(lines) + "\n")
    with pytest.raises(ValueError):
        O.read_corpus_jsonl(f, check=True)


def test_cache_is_reused_and_damaged_cache_rebuilt(tmp_path):
    first = O.corpus_for_v(3, tmp_path)
    f = tmp_path / f"{O.CORPUS_FORMAT}-v3.jsonl"
    assert f.exists()
    assert [e.code for e in O.corpus_for_v(3, tmp_path)] == [e.code for e in first]
    f.write_text("not json\n")
    again = O.corpus_for_v(3, tmp_path)
    assert [e.code for e in again] == [e.code for e in first]
    assert O.read_corpus_jsonl(f)


def test_parallel_build_matches_serial(tmp_path):
    a = O.build_corpus(4, tmp_path / "a", jobs=2)
    b = O.build_corpus(4, tmp_path / "b", jobs=1)
    assert [e.code for e in a] == [e.code for e in b]


# ---------------------------------------------------------------- filters

def test_quotients_only_shrink(corpus5):
    base = O.filter_corpus(corpus5, g=0, ell=2)
    mo = O.filter_corpus(corpus5, g=0, ell=2, mod_orientation=True)
    both = O.filter_corpus(corpus5, g=0, ell=2, mod_orientation=True, mod_reflection=True)
    assert len(both) <= len(mo) <= len(base)
    assert len(both) < len(base)


def test_loop_config_filter(corpus5):
    hits = O.filter_corpus(corpus5, loop_config=(2, 2, 2, 2))
    assert hits and all(e.inv.loop_config == (2, 2, 2, 2) for e in hits)


# ---------------------------------------------------------------- loop configuration statements

@pytest.mark.parametrize("ell, phi, config, ok", [
    (2, 3, (4, 4, 4), True),
    (3, 1, (6,), True),
    (4, 1, (8,), True),
    (4, 2, (4, 8), True),
    (4, 2, (6, 6), True),
    (4, 2, (4, 6), False),
    (4, 3, (4, 4, 4), False),
    (3, 2, (5, 7), False),
])
def test_admissible_loop_config(ell, phi, config, ok):
    assert O.admissible_loop_config(ell, phi, config) == ok


@pytest.mark.parametrize("ell", [2, 3, 4, 5])
def test_loop_config_theorem_on_corpus(corpus6, ell):
    rep = O.check_loop_config_theorem(corpus6, ell)
    assert rep.checked > 0
    assert rep.ok, rep.violations[:5]


def test_observed_grade_four_configurations(corpus6):
    rep = O.check_loop_config_theorem(corpus6, 4)
    assert set(rep.configs) == {(8,), (4, 8), (6, 6)}


def test_structural_loop_statements(corpus6):
    v = O.structural_lemma_violations(corpus6)
    assert all(not codes for codes in v.values()), {k: len(c) for k, c in v.items()}

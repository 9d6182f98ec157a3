import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from odlab import generation as G
from odlab import knot as K
from odlab import maps as M
from odlab import verify as V


# ---------------------------------------------------------------- reference values

REFERENCE_JONES = {
    "unknot": {0: 1},
    "3_1": {-4: -1, -3: 1, -1: 1},
    "4_1": {-2: 1, -1: -1, 0: 1, 1: -1, 2: 1},
    "5_1": {-7: -1, -6: 1, -5: -1, -4: 1, -2: 1},
    "5_2": {-6: -1, -5: 1, -4: -1, -3: 2, -2: -1, -1: 1},
    "6_1": {-4: 1, -3: -1, -2: 1, -1: -2, 0: 2, 1: -1, 2: 1},
    "6_2": {-5: 1, -4: -2, -3: 2, -2: -2, -1: 2, 0: -1, 1: 1},
    "6_3": {-3: -1, -2: 2, -1: -2, 0: 3, 1: -2, 2: 2, 3: -1},
    "3_1#3_1": {-8: 1, -7: -2, -6: 1, -5: -2, -4: 2, -2: 1},
    "3_1#3_1*": {-3: -1, -2: 1, -1: -1, 0: 3, 1: -1, 2: 1, 3: -1},
}

REFERENCE_DETERMINANTS = {"unknot": 1, "3_1": 3, "4_1": 5, "5_1": 5, "5_2": 7, "6_1": 9,
                          "6_2": 11, "6_3": 13, "3_1#3_1": 9, "3_1#3_1*": 9}


def _mirror_jones(j):
    return {-k: c for k, c in j.items()}


@pytest.mark.parametrize("name", sorted(K.REFERENCE_BRAIDS))
def test_reference_jones_polynomials(name):
    pd, w = K.braid_closure_pd(K.REFERENCE_BRAIDS[name])
    j = K.jones_from_bracket(K.normalized_bracket(pd, w))
    assert j in (REFERENCE_JONES[name], _mirror_jones(REFERENCE_JONES[name]))


@pytest.mark.parametrize("name", sorted(K.REFERENCE_BRAIDS))
def test_reference_determinants(name):
    pd, w = K.braid_closure_pd(K.REFERENCE_BRAIDS[name])
    assert K.determinant(K.normalized_bracket(pd, w)) == REFERENCE_DETERMINANTS[name]


def test_reference_table_has_distinct_keys():
    assert len(K.reference_table()) == len(K.REFERENCE_BRAIDS)


def test_bracket_of_mirror_braid_is_mirrored():
    pd, w = K.braid_closure_pd((1, 1, 1))
    pdm, wm = K.braid_closure_pd((-1, -1, -1))
    assert K.normalized_bracket(pdm, wm) == K.pmirror(K.normalized_bracket(pd, w))
    assert wm == -w


def test_polynomial_helpers():
    p = {1: 2, -1: 1}
    assert K.padd(p, {1: -2}) == {-1: 1}
    assert K.pmul(p, {0: 1}) == p
    assert K.ppow({1: 1}, 3) == {3: 1}
    assert K.pmirror(p) == {-1: 2, 1: 1}


# ---------------------------------------------------------------- diagrams from maps

def test_necklace_gauss_code():
    d = K.to_knot_diagram(G.NECKLACE3)
    assert d.crossing_count == 3
    assert d.gauss_string() == "O1,U2,O3,U1,O2,U3"
    assert K.knot_class_of(d) == "3_1"


def test_infinity_is_not_reduced():
    reduced, composite = K.is_reduced_diagram(G.INFINITY)
    assert not reduced and not composite
    assert K.knot_class_of(K.to_knot_diagram(G.INFINITY)) == "unknot"


def test_cycle_graph_is_the_empty_diagram():
    d = K.to_knot_diagram(M.OrientedMap.cycle())
    assert d.crossing_count == 0


def test_non_planar_and_link_maps_are_rejected():
    with pytest.raises(K.NotPlanar):
        K.to_knot_diagram(G.GENUS_ONE)
    with pytest.raises(K.NotAKnot):
        K.to_knot_diagram(G.BORROMEAN)


def test_too_many_crossings():
    pd, _ = K.braid_closure_pd((1,) * (K.MAX_CROSSINGS + 1))
    with pytest.raises(K.TooManyCrossings):
        K.kauffman_bracket(pd)


def test_alternating_diagram_alternates():
    d = K.to_knot_diagram(G.NECKLACE3)
    kinds = [s for s, _ in d.gauss]
    assert all(a != b for a, b in zip(kinds, kinds[1:] + kinds[:1]))


def test_four_crossing_planar_single_face_is_figure_eight(corpus5):
    hits = V.planar_one_face_classes(corpus5, 4)
    assert [K.knot_class_of(K.to_knot_diagram(e.map)) for e in hits] == ["4_1"]


def test_five_crossing_knots(corpus5):
    hits = V.planar_one_face_classes(corpus5, 5)
    assert sorted(K.knot_class_of(K.to_knot_diagram(e.map)) for e in hits) == ["5_1", "5_2"]


# ---------------------------------------------------------------- invariance

def _planar_single_face(corpus, v):
    return [e for e in corpus.by_v(v) if e.inv.g == 0 and e.inv.phi == 1]


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_gauss_code_is_relabel_invariant(corpus5, data):
    pool = _planar_single_face(corpus5, 4)
    e = pool[data.draw(st.integers(0, len(pool) - 1))]
    order = data.draw(st.permutations(range(e.inv.v)))
    shifts = data.draw(st.lists(st.sampled_from([0, 2]), min_size=e.inv.v, max_size=e.inv.v))
    m = M.relabel_vertices(e.map, order, shifts)
    assert K.to_knot_diagram(m).gauss == K.to_knot_diagram(e.map).gauss


def test_reversing_arrows_keeps_the_knot_class(corpus5):
    for e in _planar_single_face(corpus5, 4) + _planar_single_face(corpus5, 5)[:40]:
        a = K.knot_class_of(K.to_knot_diagram(e.map))
        b = K.knot_class_of(K.to_knot_diagram(M.reverse_all_arrows(e.map)))
        assert a == b


def test_canonical_gauss_ignores_rotation_and_reversal():
    rng = random.Random(3)
    seq = [("O", 1), ("U", 2), ("O", 3), ("U", 1), ("O", 2), ("U", 3)]
    want = K._canonical_gauss(seq)[0]
    for _ in range(10):
        r = rng.randrange(len(seq))
        rot = seq[r:] + seq[:r]
        if rng.random() < 0.5:
            rot = rot[::-1]
        assert K._canonical_gauss(rot)[0] == want


# ---------------------------------------------------------------- six crossings

def test_six_crossing_records(corpus6):
    recs = [r for r in V.knot_records(corpus6.entries, ells=(6,))]
    prime = sorted(r.knot for r in recs if r.two_pi)
    composite = sorted(r.knot for r in recs if not r.two_pi)
    assert prime == ["6_1", "6_2", "6_3"]
    assert composite == ["3_1#3_1", "3_1#3_1*"]


def test_composite_diagrams_share_a_gauss_code(corpus6):
    recs = [r for r in V.knot_records(corpus6.entries, ells=(6,)) if not r.two_pi]
    assert len({r.gauss for r in recs}) == 1

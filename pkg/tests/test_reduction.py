import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from odlab import generation as G
from odlab import maps as M
from odlab import reduction as R

INF = G.INFINITY
CYCLE = M.OrientedMap.cycle()
# melon-free (g, ℓ) = (1, 4) map on four vertices holding one non-separating B ladder
B_LADDER_MAP = M.OrientedMap(4, (5, 4, 9, 10, 1, 0, 13, 14, 15, 2, 3, 12, 11, 6, 7, 8))


def _ladder_on_infinity(piece):
    """Insert a rung sequence across the two edges of the infinity graph."""
    return G.insert_piece(INF, 0, 2, piece)


# ---------------------------------------------------------------- melons

def test_melon_on_cycle_is_found_once():
    m = R.insert_melon(CYCLE)
    assert len(R.find_melons(m)) == 1
    assert R.core_of(m).cycle_graph


def test_infinity_is_melon_free():
    assert R.find_melons(INF) == []
    assert R.is_melon_free(INF)


def test_melonic_vacuum_graph_invariants():
    i = M.invariants(R.insert_melon(CYCLE))
    assert (i.v, i.g, i.ell, i.omega) == (2, 0, 0, 0)


def test_remove_then_reinsert_keeps_code():
    m = R.insert_melon(INF, 0)
    mel = R.find_melons(m)[0]
    back = R.remove_melon(m, mel)
    assert M.canonical_code(back) == M.canonical_code(INF)
    again = R.insert_melon(back, 0)
    assert M.canonical_code(again) == M.canonical_code(m)


def test_remove_foreign_melon_fails():
    m = R.insert_melon(INF, 0)
    mel = R.find_melons(m)[0]
    with pytest.raises(R.NotAMelon):
        R.remove_melon(INF, mel)


def _brute_melons(m: M.OrientedMap) -> int:
    """Vertex pairs joined by three edges, plus a free dart on each side, whose splice keeps (g, ℓ)."""
    if m.cycle_graph:
        return 0
    count = 0
    i0 = M.invariants(m)
    for u in range(m.v):
        for w in range(u + 1, m.v):
            du = [d for d in m.vertex_darts(u) if M.vertex_of(m.alpha[d]) == w]
            if len(du) == 3:
                fu = next(d for d in m.vertex_darts(u) if d not in du)
                fw = next(d for d in m.vertex_darts(w) if m.alpha[d] not in du)
                choices = [(fu, fw)]
            elif len(du) == 4:
                # a two-vertex vacuum graph: any one edge may play the outer edge
                choices = [(d, m.alpha[d]) for d in du]
            else:
                continue
            for fu, fw in choices:
                if M.is_out(fu) == M.is_out(fw):
                    continue
                if m.alpha[fu] == fw:
                    parts = [CYCLE]
                else:
                    parts = R.splice(m, (u, w), [(fu, fw)])
                i1 = M.invariants(parts[0])
                if (i1.g, i1.ell) == (i0.g, i0.ell):
                    count += 1
                    break
    return count


def test_melon_count_matches_brute_scan(corpus5):
    for e in corpus5:
        assert len(R.find_melons(e.map)) == _brute_melons(e.map), e.code


def test_core_keeps_invariants(corpus5):
    for e in corpus5:
        c = M.invariants(R.core_of(e.map))
        assert (c.g, c.ell, c.omega) == (e.inv.g, e.inv.ell, e.inv.omega)


def test_core_of_decorated_infinity():
    m = INF
    for d in (0, 2, 4):
        m = R.insert_melon(m, d)
    assert M.canonical_code(R.core_of(m)) == M.canonical_code(INF)


def test_core_is_order_independent():
    rng = random.Random(3)
    for _ in range(150):
        m = rng.choice([INF, G.INFINITY_CROSSED, G.NECKLACE3, G.GENUS_ONE, CYCLE])
        for _ in range(rng.randint(1, 4)):
            m = R.insert_melon(m, 2 * rng.randrange(m.ndarts // 2) if not m.cycle_graph else None)
        codes = {M.canonical_code(R.core_of(m, pick)) for pick in range(4)}
        assert len(codes) == 1


def test_melonic_counts():
    assert R.melonic_counts(4) == [1, 1, 4, 22, 140]


# ---------------------------------------------------------------- dipoles and ladders

def test_melon_contains_all_dipole_kinds():
    kinds = {d.kind for d in R.find_dipoles(R.insert_melon(CYCLE))}
    assert kinds == {"N", "L", "R"}


def test_infinity_has_no_dipoles():
    assert R.find_dipoles(INF) == []


def test_genus_one_base_has_four_n_dipoles():
    dips = R.find_dipoles(G.GENUS_ONE)
    assert len(dips) == 4 and {d.kind for d in dips} == {"N"}


@pytest.mark.parametrize("n,kind", [(2, "Ne"), (3, "No"), (4, "Ne"), (5, "No")])
def test_n_chain_gives_one_ladder(n, kind):
    m = R.core_of(_ladder_on_infinity(tuple(("N", 0) for _ in range(n))))
    lads = R.maximal_ladders(m)
    assert [(l.kind, len(l.rungs)) for l in lads] == [(kind, n)]


def test_l_then_n_is_broken():
    m = _ladder_on_infinity((("L", 0), ("N", 0)))
    assert [l.kind for l in R.maximal_ladders(m)] == ["B"]


def test_ladders_are_vertex_disjoint(corpus5):
    for e in corpus5:
        if not e.melon_free:
            continue
        seen: set[int] = set()
        for lad in R.maximal_ladders(e.map):
            assert not seen & set(lad.vertices)
            seen |= set(lad.vertices)


# ---------------------------------------------------------------- schemes

def test_scheme_of_decorated_infinity():
    m = R.insert_melon(R.insert_melon(INF, 0), 2)
    assert R.scheme_of(m).code == R.scheme_of(INF).code


def test_ladder_length_normalizes_by_parity():
    codes = {n: R.scheme_of(_ladder_on_infinity(tuple(("N", 0) for _ in range(n)))).code for n in (2, 3, 4, 5)}
    assert codes[5] == codes[3]
    assert codes[4] == codes[2]
    assert codes[2] != codes[3]


def test_scheme_normalization_is_idempotent(enumerator):
    for e in enumerator.get(1, 1, "all").sorted():
        again = R.scheme_of(e.scheme.representative)
        assert again.code == e.code
        assert again.representative == e.scheme.representative


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_scheme_code_is_relabel_invariant(corpus5, data):
    entries = [e for e in corpus5 if e.melon_free and e.inv.v >= 3]
    e = entries[data.draw(st.integers(0, len(entries) - 1))]
    order = data.draw(st.permutations(range(e.inv.v)))
    shifts = data.draw(st.lists(st.sampled_from([0, 2]), min_size=e.inv.v, max_size=e.inv.v))
    assert R.scheme_code(M.relabel_vertices(e.map, order, shifts)) == R.scheme_code(e.map)


def test_scheme_preserves_two_pi(corpus5):
    for e in corpus5:
        if e.melon_free:
            assert R.is_2pi(R.scheme_of(e.map).representative) == e.two_pi


def test_scheme_json_round_trip():
    sc = R.scheme_of(_ladder_on_infinity((("N", 0), ("N", 0), ("N", 0))))
    back = R.SchemeGraph.from_json(sc.to_json())
    assert back.code == sc.code


# ---------------------------------------------------------------- contractions

def test_connecting_n_contracts_back_to_infinity(enumerator):
    m = G.insert_connecting_n(INF, G.CutSpec(0, 2))
    assert (M.invariants(m).g, M.invariants(m).ell) == (1, 1)
    assert R.scheme_code(m) in enumerator.get(1, 1, "2PI").codes()
    dp = next(d for d in R.find_dipoles(m) if d.kind == "N")
    parts, rep = R.contract_dipole(m, dp)
    assert not rep.separating and rep.sigma == -1 and rep.npd_type == "connecting"
    assert (rep.d_g, rep.d_ell) == (-1, 0)
    assert M.canonical_code(parts[0]) == M.canonical_code(INF)


def test_rearranging_n_on_cycle():
    m = G.insert_rearranging_n(CYCLE, G.CutSpec(0, 0))
    i = M.invariants(m)
    assert (i.g, i.ell) == (1, 2)
    parts, rep = R.contract_dipole(m, next(d for d in R.find_dipoles(m) if d.kind == "N"))
    assert rep.sigma == 0 and rep.npd_type == "rearranging" and rep.d_ell == -2
    assert R.core_of(parts[0]).cycle_graph


@pytest.mark.parametrize("rungs", [1, 3])
def test_rearranging_has_one_straight_face_fewer_than_connecting(rungs):
    conn = M.invariants(G.insert_connecting_n(INF, G.CutSpec(0, 2), rungs))
    rear = M.invariants(G.insert_rearranging_n(INF, G.CutSpec(0, 0), rungs))
    assert (conn.v, conn.g) == (rear.v, rear.g)
    assert rear.phi == conn.phi - 1
    assert rear.ell == conn.ell + 2


def test_separating_dipole_is_additive():
    m = G.insert_separating(INF, G.NECKLACE3, 0, 0, (("L", 0),))
    reports = [R.contract_dipole(m, d) for d in R.find_dipoles(m)]
    seps = [(parts, rep) for parts, rep in reports if rep.separating]
    assert len(seps) == 1
    parts, rep = seps[0]
    assert len(parts) == 2 and (rep.d_g, rep.d_ell) == (0, 0)


def test_non_separating_b_ladder():
    i = M.invariants(B_LADDER_MAP)
    assert (i.g, i.ell) == (1, 4) and R.is_melon_free(B_LADDER_MAP)
    (lad,) = [l for l in R.maximal_ladders(B_LADDER_MAP) if l.kind == "B"]
    for k in range(len(lad.rungs)):
        parts, rep = R.contract_ladder(B_LADDER_MAP, lad, k)
        assert not rep.separating and (rep.d_g, rep.d_ell, rep.d_omega) == (-1, -4, -3)


def test_contraction_table_over_corpus(corpus5):
    for e in corpus5:
        for dp in R.find_dipoles(e.map):
            R.contract_dipole(e.map, dp)  # raises on a case-table violation
        if e.melon_free:
            for lad in R.maximal_ladders(e.map):
                for k in range(len(lad.rungs)):
                    R.contract_ladder(e.map, lad, k)


def test_foreign_dipole_is_rejected():
    m = _ladder_on_infinity((("N", 0),))
    dp = R.find_dipoles(m)[0]
    with pytest.raises(R.NotADipole):
        R.contract_dipole(G.NECKLACE3, dp)


def test_ladder_vertex_contraction_on_scheme(enumerator):
    e = next(x for x in enumerator.get(1, 1, "2PI").sorted() if x.scheme.ladders)
    parts, rep = R.contract_ladder_vertex(e.scheme, 0)
    assert rep.kind in ("Ne", "No") and rep.sigma == -1
    assert [p.code for p in parts] == [R.scheme_of(INF).code] or \
        [p.code for p in parts] == [R.scheme_of(G.INFINITY_CROSSED).code]
    with pytest.raises(R.NotALadderVertex):
        R.contract_ladder_vertex(e.scheme, 99)


def test_separation_lemma(corpus6):
    for e in corpus6:
        if not e.melon_free or e.inv.ell not in (1, 2):
            continue
        for dp in R.find_dipoles(e.map):
            _, rep = R.contract_dipole(e.map, dp)
            if rep.separating:
                continue
            if e.inv.ell == 1:
                assert dp.kind == "N" and rep.sigma == -1
            elif dp.kind == "N":
                assert rep.sigma in (-1, 0)
            else:
                assert rep.sigma == -1


# ---------------------------------------------------------------- cuts and flips

def test_infinity_is_2pi():
    assert R.is_2pi(INF) and R.two_edge_cuts(INF) == []


def test_two_edge_connection_is_a_cut_and_flip_inverts_it():
    m = G.two_edge_connection(INF, G.INFINITY_CROSSED, 0, 0)
    assert not R.is_2pi(m)
    cuts = R.two_edge_cuts(m)
    codes = set()
    for cut in cuts:
        a, b = R.flip(m, cut)
        codes.add(tuple(sorted((M.canonical_code(a), M.canonical_code(b)))))
    assert tuple(sorted((M.canonical_code(INF), M.canonical_code(G.INFINITY_CROSSED)))) in codes


def test_flip_rejects_non_cut():
    with pytest.raises(R.NotACut):
        R.flip(G.NECKLACE3, ((0, G.NECKLACE3.alpha[0]), (2, G.NECKLACE3.alpha[2])))


def test_flip_on_g1_l1_2pr_schemes_splits_off_infinity(enumerator):
    for e in enumerator.get(1, 1, "2PR").sorted():
        m = e.scheme.representative
        for cut in R.two_edge_cuts(m):
            a, b = (M.invariants(x) for x in R.flip(m, cut))
            assert sorted([(a.g, a.ell), (b.g, b.ell)]) == [(0, 1), (1, 0)]


def test_flip_additivity_over_corpus(corpus5):
    for e in corpus5:
        if e.two_pi:
            continue
        for cut in R.two_edge_cuts(e.map):
            a, b = (M.invariants(x) for x in R.flip(e.map, cut))
            assert (a.g + b.g, a.ell + b.ell, a.omega + b.omega) == (e.inv.g, e.inv.ell, e.inv.omega)

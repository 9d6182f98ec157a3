"""Insertion moves and the recursive enumeration of schemes at fixed (g, ℓ).

An insertion cuts two edges ``e1 = (o1 -> i1)`` and ``e2 = (o2 -> i2)`` and
plugs a chain of dipoles (a 4-point piece) into the four half-edges: the first
rung's outer side takes both halves of ``e1``, the last rung's outer side both
halves of ``e2``.  Contracting the piece therefore restores the two edges.
Cutting the same edge twice leaves a middle segment that runs from the first
side to the last; on the cycle graph both segments do.  The two-edge-connection
is the cross-connection ``o1 -> i2``, ``o2 -> i1`` with nothing inserted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from . import maps as M
from . import reduction as R
from .maps import OrientedMap, is_out, vertex_of

# local edges and (out leg, in leg) sides of the three rung kinds
_RUNG = {
    "N": ([(0, 5), (2, 7)], [(4, 1), (6, 3)]),
    "L": ([(0, 5), (6, 3)], [(4, 1), (2, 7)]),
    "R": ([(4, 1), (0, 5)], [(2, 7), (6, 3)]),
}

KINDS = ("N", "L", "R")


class GenerationError(ValueError):
    pass


class EdgesNotOnSameLoop(GenerationError):
    pass


class ParityForbidden(GenerationError):
    pass


class OrientationMismatch(GenerationError):
    pass


class UnsupportedGrade(GenerationError):
    pass


Piece = tuple[tuple[str, int], ...]  # rung kinds with a side flip each


@dataclass(frozen=True)
class CutSpec:
    """Two outgoing darts naming the edges to cut (equal darts: cut one edge twice)."""

    out1: int
    out2: int


def _chain(alpha: list[int], nv: int, piece: Piece):
    """Append the rungs of ``piece``; returns (nv, first side legs, last side legs).

    Legs are given as (outgoing leg, incoming leg).
    """
    first = last = None
    for kind, flip in piece:
        base = 4 * nv
        alpha += [-1] * 8
        nv += 2
        edges, sides = _RUNG[kind]
        for a, b in edges:
            alpha[base + a], alpha[base + b] = base + b, base + a
        sa, sb = (sides[0], sides[1]) if not flip else (sides[1], sides[0])
        sa = (base + sa[0], base + sa[1])
        sb = (base + sb[0], base + sb[1])
        if first is None:
            first = sa
        else:
            _join(alpha, last[0], sa[1])
            _join(alpha, sa[0], last[1])
        last = sb
    return nv, first, last


def _join(alpha: list[int], a: int, b: int) -> None:
    alpha[a], alpha[b] = b, a


def insert_piece(m: OrientedMap, out1: int, out2: int, piece: Piece) -> OrientedMap:
    """Cut the edges leaving ``out1`` and ``out2`` and insert ``piece`` between them.

    The map may be disconnected (separating insertions).  An empty piece gives
    the two-edge-connection of the two edges.
    """
    if m.cycle_graph:
        raise GenerationError("use insert_on_cycle for the cycle graph")
    alpha = list(m.alpha)
    o1, i1 = out1, alpha[out1]
    o2, i2 = out2, alpha[out2]
    if not (is_out(o1) and is_out(o2)):
        raise OrientationMismatch("cuts are named by outgoing darts")
    if not piece:
        if o1 == o2:
            raise GenerationError("a two-edge-connection needs two distinct edges")
        _join(alpha, o1, i2)
        _join(alpha, o2, i1)
        return OrientedMap(m.v, tuple(alpha))
    nv, (f_out, f_in), (l_out, l_in) = _chain(alpha, m.v, piece)
    _join(alpha, o1, f_in)
    if o1 == o2:
        _join(alpha, f_out, l_in)
        _join(alpha, l_out, i1)
    else:
        _join(alpha, f_out, i1)
        _join(alpha, o2, l_in)
        _join(alpha, l_out, i2)
    if -1 in alpha:
        raise GenerationError("dangling dart after insertion")
    return OrientedMap(nv, tuple(alpha))


def insert_in_series(m: OrientedMap, out1: int, out2: int, piece: Piece) -> OrientedMap:
    """Cut two edges and splice ``piece`` across them, as when adding rungs between two rails.

    The first side takes the tail of the first edge and the head of the
    second; the last side takes the remaining two halves.
    """
    alpha = list(m.alpha)
    o1, i1 = out1, alpha[out1]
    o2, i2 = out2, alpha[out2]
    if o1 == o2 or not (is_out(o1) and is_out(o2)):
        raise GenerationError("series insertion needs two distinct edges named by outgoing darts")
    if not piece:
        return m
    nv, (f_out, f_in), (l_out, l_in) = _chain(alpha, m.v, piece)
    _join(alpha, o1, f_in)
    _join(alpha, f_out, i2)
    _join(alpha, o2, l_in)
    _join(alpha, l_out, i1)
    return OrientedMap(nv, tuple(alpha))


def insert_on_cycle(piece: Piece) -> OrientedMap:
    """Insert a piece into the cycle graph; both segments run from the first side to the last."""
    if not piece:
        raise GenerationError("cannot connect the cycle graph to itself")
    alpha: list[int] = []
    nv, (f_out, f_in), (l_out, l_in) = _chain(alpha, 0, piece)
    _join(alpha, f_out, l_in)
    _join(alpha, l_out, f_in)
    return OrientedMap(nv, tuple(alpha))


def disjoint_union(a: OrientedMap, b: OrientedMap) -> OrientedMap:
    shift = a.ndarts
    return OrientedMap(a.v + b.v, tuple(a.alpha) + tuple(x + shift for x in b.alpha))


def _same_straight_face(m: OrientedMap, o1: int, o2: int) -> bool:
    s = M.straight_perm(m)
    seen = set()
    x = o1
    while x not in seen:
        seen.add(x)
        x = s[x]
    targets = {o2, m.alpha[o2]}
    if seen & targets:
        return True
    x = m.alpha[o1]
    seen = set()
    while x not in seen:
        seen.add(x)
        x = s[x]
    return bool(seen & targets)


def insert_n(m: OrientedMap, cut: CutSpec, rungs: int, sigma: int) -> OrientedMap:
    """Insert an N-dipole or N-ladder whose contraction has the requested σ.

    ``sigma = -1`` is a connecting insertion (Δg=+1, Δℓ=0), ``sigma = 0`` a
    rearranging one (Δg=+1, Δℓ=+2).  Both rail flips are tried; whichever
    produces the requested change is returned.
    """
    if not m.cycle_graph and not _same_straight_face(m, cut.out1, cut.out2):
        raise EdgesNotOnSameLoop("both cut edges must lie on one straight face")
    i0 = M.invariants(m)
    for flips in itertools.product((0, 1), repeat=rungs):
        piece = tuple(("N", f) for f in flips)
        g = insert_on_cycle(piece) if m.cycle_graph else insert_piece(m, cut.out1, cut.out2, piece)
        if not M.is_connected(g):
            continue
        i1 = M.invariants(g)
        if i1.g == i0.g + 1 and i1.ell == i0.ell + 2 * (sigma + 1):
            return g
    raise ParityForbidden(f"no {rungs}-rung N insertion with sigma={sigma} on these cuts")


def insert_connecting_n(m: OrientedMap, cut: CutSpec, rungs: int = 1) -> OrientedMap:
    return insert_n(m, cut, rungs, -1)


def insert_rearranging_n(m: OrientedMap, cut: CutSpec, rungs: int = 1) -> OrientedMap:
    return insert_n(m, cut, rungs, 0)


def insert_separating(m1: OrientedMap, m2: OrientedMap, out1: int, out2: int, piece: Piece) -> OrientedMap:
    """Join two maps through a piece placed across one edge of each."""
    if m1.cycle_graph or m2.cycle_graph:
        raise GenerationError("separating insertions need non-empty graphs on both sides")
    u = disjoint_union(m1, m2)
    return insert_piece(u, out1, out2 + m1.ndarts, piece)


def two_edge_connection(m1: OrientedMap, m2: OrientedMap, out1: int, out2: int) -> OrientedMap:
    return insert_separating(m1, m2, out1, out2, ())


# ---------------------------------------------------------------- pieces

def pieces(rung_cap: int, kinds: Sequence[str] = KINDS, broken: bool = True,
           empty: bool = False) -> list[Piece]:
    """All rung sequences up to ``rung_cap`` rungs with every side flip.

    Unbroken sequences use one kind throughout; broken ones mix kinds and are
    limited to two rungs beyond which nothing new appears (checked by the
    cap-stability test).
    """
    out: list[Piece] = [()] if empty else []
    for n in range(1, rung_cap + 1):
        for k in kinds:
            for flips in itertools.product((0, 1), repeat=n):
                out.append(tuple((k, f) for f in flips))
    if broken:
        for n in range(2, min(rung_cap, 2) + 1):
            for ks in itertools.product(kinds, repeat=n):
                if len(set(ks)) == 1:
                    continue
                for flips in itertools.product((0, 1), repeat=n):
                    out.append(tuple(zip(ks, flips)))
    return out


# ---------------------------------------------------------------- scheme sets

@dataclass
class SchemeEntry:
    code: str
    scheme: R.SchemeGraph
    inv: M.InvariantSet
    two_pi: bool
    trace: str = ""


@dataclass
class SchemeSet:
    g: int
    ell: int
    selection: str  # "all", "2PI" or "2PR"
    entries: dict[str, SchemeEntry] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    def codes(self) -> set[str]:
        return set(self.entries)

    def two_pi(self) -> list[SchemeEntry]:
        return [e for e in self.sorted() if e.two_pi]

    def two_pr(self) -> list[SchemeEntry]:
        return [e for e in self.sorted() if not e.two_pi]

    def sorted(self) -> list[SchemeEntry]:
        return [self.entries[c] for c in sorted(self.entries)]

    def restrict(self, selection: str) -> "SchemeSet":
        keep = {c: e for c, e in self.entries.items()
                if selection == "all" or e.two_pi == (selection == "2PI")}
        return SchemeSet(self.g, self.ell, selection, keep)


class _Collector:
    def __init__(self, g: int, ell: int, want_2pi: bool | None):
        self.g, self.ell, self.want = g, ell, want_2pi
        self.entries: dict[str, SchemeEntry] = {}
        self.seen_maps: set = set()

    def offer(self, m: OrientedMap, trace: str) -> None:
        if m.cycle_graph or not M.is_connected(m):
            return
        inv = M.invariants(m)
        if (inv.g, inv.ell) != (self.g, self.ell):
            return
        key = m.alpha
        if key in self.seen_maps:
            return
        self.seen_maps.add(key)
        sc = R.scheme_of(m)
        if sc.code in self.entries:
            return
        rep = sc.representative
        tp = R.is_2pi(rep)
        if self.want is not None and tp != self.want:
            return
        self.entries[sc.code] = SchemeEntry(sc.code, sc, M.invariants(rep), tp, trace)


def expansions(entry: SchemeEntry, rung_cap: int) -> list[OrientedMap]:
    """The representative plus every copy whose ladders carry extra rungs, up to ``rung_cap`` each.

    Extra rungs are spliced in series at every rail position with every side
    flip, so differently twisted members of a ladder-vertex all appear;
    cutting inside a ladder can tell them apart.  Rings always get one more
    step: in a shortest ring a rung edge and a rail edge are equivalent.
    """
    rep = entry.scheme.representative
    if rep.cycle_graph or not entry.scheme.ladders:
        return [rep]
    code = entry.code
    seen = {M.canonical_code(rep)}
    out = [rep]
    frontier = [rep]
    while frontier:
        nxt = []
        for m in frontier:
            for lad in R.maximal_ladders(m):
                step = 2 if lad.kind in ("Ne", "No") else 1
                cap = rung_cap + step if lad.closed else rung_cap
                if len(lad.rungs) + step > cap:
                    continue
                for g in _series_grow(m, lad, step):
                    c = M.canonical_code(g)
                    if c in seen or R.scheme_of(g).code != code:
                        continue
                    seen.add(c)
                    out.append(g)
                    nxt.append(g)
        frontier = nxt
    return out


def _series_grow(m: OrientedMap, lad: R.Ladder, step: int) -> Iterator[OrientedMap]:
    kinds = sorted({r.kind for r in lad.rungs})
    for rung in lad.rungs:
        for x, y in rung.sides:
            o, i = (x, y) if is_out(x) else (y, x)
            if m.alpha[o] == i:
                continue  # the side closes on itself
            for ks in itertools.product(kinds, repeat=step):
                for fl in itertools.product((0, 1), repeat=step):
                    yield insert_in_series(m, o, m.alpha[i], tuple(zip(ks, fl)))


def _seeds(sets: Iterable[SchemeSet], rung_cap: int) -> list[tuple[OrientedMap, str]]:
    out = []
    for s in sets:
        for e in s.sorted():
            for i, m in enumerate(expansions(e, rung_cap)):
                out.append((m, f"{s.g},{s.ell}:{e.code}" + (f"+{i}" if i else "")))
    return out


def _edge_pairs(m: OrientedMap, same_loop: bool) -> Iterator[tuple[int, int]]:
    outs = list(range(0, m.ndarts, 2))
    for a, b in itertools.combinations_with_replacement(outs, 2):
        if same_loop and not _same_straight_face(m, a, b):
            continue
        yield a, b


def _n_pieces(rung_cap: int) -> list[Piece]:
    return pieces(rung_cap, kinds=("N",), broken=False)


class Enumerator:
    """Memoized scheme sets keyed by (g, ℓ, part); the 2PI and 2PR parts are built on demand."""

    def __init__(self, rung_cap: int = 3):
        self.rung_cap = rung_cap
        self.cache: dict[tuple[int, int, str], SchemeSet] = {}

    def get(self, g: int, ell: int, selection: str = "all") -> SchemeSet:
        if selection not in ("all", "2PI", "2PR"):
            raise ValueError(f"unknown selection {selection!r}")
        if g < 0 or ell < 0:
            raise UnsupportedGrade("g and ℓ must be non-negative")
        if ell > 3 or (ell == 3 and g > 0):
            raise UnsupportedGrade(f"(g={g}, ℓ={ell}) is outside the supported range")
        key = (g, ell, selection)
        if key not in self.cache:
            if selection == "all":
                s = SchemeSet(g, ell, "all")
                s.entries.update(self.get(g, ell, "2PI").entries)
                s.entries.update(self.get(g, ell, "2PR").entries)
            else:
                s = SchemeSet(g, ell, selection, self._build(g, ell, selection))
            self.cache[key] = s
        return self.cache[key]

    # -- construction

    def _build(self, g: int, ell: int, selection: str) -> dict[str, SchemeEntry]:
        base = _base_entries(g, ell)
        if base is not None:
            return {c: e for c, e in base.items() if e.two_pi == (selection == "2PI")}
        if selection == "2PI":
            return self._two_pi(g, ell)
        return self._two_pr(g, ell)

    def _two_pi(self, g: int, ell: int) -> dict[str, SchemeEntry]:
        col = _Collector(g, ell, True)
        npieces = _n_pieces(self.rung_cap)
        if g >= 1 and ell in (0, 1, 2):
            # connecting N into every graph of genus g-1 at the same grade
            self._insert_into(col, [self.get(g - 1, ell)], npieces, same_loop=True, tag="connN")
        if g >= 1 and ell == 2:
            # rearranging N into ℓ=0 graphs of genus g-1
            self._insert_into(col, [self.get(g - 1, 0)], npieces, same_loop=True, tag="rearrN")
        if (g, ell) == (0, 2):
            # the dipole-free planar graph cannot be reached by insertions
            col.offer(BORROMEAN, "base")
        if g == 0 and ell >= 2:
            # planar: every dipole is an L or R dipole closing a length-2 face
            lr = pieces(self.rung_cap, kinds=("L", "R"), broken=True)
            self._insert_into(col, [self.get(0, ell - 2)], lr, same_loop=False, tag="LR")
            if ell == 3:
                self._planar_l3_closure(col)
        return col.entries

    def _two_pr(self, g: int, ell: int) -> dict[str, SchemeEntry]:
        col = _Collector(g, ell, False)
        all_pieces = pieces(self.rung_cap, empty=True)
        for g1 in range(g + 1):
            for l1 in range(ell + 1):
                g2, l2 = g - g1, ell - l1
                if (g1, l1) > (g2, l2):
                    continue
                if (g1, l1) == (0, 0) or (g2, l2) == (0, 0):
                    continue
                a = _seeds([self.get(g1, l1)], self.rung_cap)
                b = _seeds([self.get(g2, l2)], self.rung_cap)
                for (m1, t1), (m2, t2) in itertools.product(a, b):
                    u = disjoint_union(m1, m2)
                    for o1 in range(0, m1.ndarts, 2):
                        for o2 in range(0, m2.ndarts, 2):
                            for pc in all_pieces:
                                col.offer(insert_piece(u, o1, o2 + m1.ndarts, pc), f"sep[{t1}|{t2}]")
        return col.entries

    def _insert_into(self, col: _Collector, sets, pcs, same_loop: bool, tag: str) -> None:
        for m, t in _seeds(sets, self.rung_cap):
            if m.cycle_graph:
                for pc in pcs:
                    col.offer(insert_on_cycle(pc), f"{tag}[{t}]")
                continue
            for o1, o2 in _edge_pairs(m, same_loop):
                for pc in pcs:
                    col.offer(insert_piece(m, o1, o2, pc), f"{tag}[{t}]")
                    if o1 != o2:
                        col.offer(insert_in_series(m, o1, o2, pc), f"{tag}-series[{t}]")

    def _planar_l3_closure(self, col: _Collector) -> None:
        """Close the planar ℓ=3 2PI set under further L/R dipole insertions that keep ℓ."""
        lr = pieces(1, kinds=("L", "R"), broken=False)
        frontier = [e.scheme.representative for e in col.entries.values()]
        seen = set(col.entries)
        while frontier:
            nxt = []
            for m in frontier:
                for o1, o2 in _edge_pairs(m, False):
                    for pc in lr:
                        col.offer(insert_piece(m, o1, o2, pc), "LRclosure")
            for c, e in col.entries.items():
                if c not in seen:
                    seen.add(c)
                    nxt.append(e.scheme.representative)
            frontier = nxt


def enumerate_schemes(g: int, ell: int, rung_cap: int = 3, selection: str = "all",
                      enumerator: Enumerator | None = None) -> SchemeSet:
    en = enumerator or Enumerator(rung_cap)
    return en.get(g, ell, selection)


INFINITY = OrientedMap.from_pairs(1, [(0, 1), (2, 3)])
INFINITY_CROSSED = OrientedMap.from_pairs(1, [(0, 3), (2, 1)])


# dipole-free planar ℓ=2 graph on six vertices, every straight face of length 4
BORROMEAN = OrientedMap.from_pairs(6, [(0, 5), (1, 8), (2, 13), (3, 16), (4, 9), (6, 19), (7, 20),
                                       (10, 23), (11, 14), (12, 17), (15, 22), (18, 21)])
# smallest genus-one ℓ=0 graph: four vertices on a directed cycle of doubled edges
GENUS_ONE = OrientedMap.from_pairs(4, [(0, 5), (1, 8), (2, 7), (3, 10), (4, 13), (6, 15),
                                       (9, 12), (11, 14)])
# three vertices on a cycle of doubled edges, alternating as an L necklace
NECKLACE3 = OrientedMap.from_pairs(3, [(0, 5), (1, 8), (2, 11), (3, 6), (4, 9), (7, 10)])
# two infinity graphs joined by a two-edge-connection
DOUBLE_TADPOLE = OrientedMap.from_pairs(2, [(0, 1), (2, 7), (4, 5), (6, 3)])


def _entry(m: OrientedMap, trace: str) -> SchemeEntry:
    sc = R.scheme_of(m)
    return SchemeEntry(sc.code, sc, M.invariants(m), R.is_2pi(m), trace)


def _base_entries(g: int, ell: int) -> dict[str, SchemeEntry] | None:
    if (g, ell) == (0, 0):
        e = _entry(OrientedMap.cycle(), "base")
        return {e.code: e}
    if (g, ell) == (0, 1):
        out = {}
        for m in (INFINITY, INFINITY_CROSSED):
            e = _entry(m, "base")
            out[e.code] = e
        return out
    return None


def base_catalog() -> dict[str, OrientedMap]:
    """Hand-encoded minimal representatives of the smallest schemes."""
    return {
        "cycle": OrientedMap.cycle(),
        "infinity": INFINITY,
        "infinity_crossed": INFINITY_CROSSED,
        "S1": GENUS_ONE,
        "S1_20": DOUBLE_TADPOLE,
        "borromean": BORROMEAN,
        "necklace3": NECKLACE3,
    }

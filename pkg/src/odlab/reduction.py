"""Melons, dipoles, ladders, schemes, contractions and flips.

A scheme is represented by a concrete melon-free map in which every maximal
ladder has been shortened to the minimal length of its kind.  Its canonical
code replaces each ladder by a labeled two-vertex gadget that only records the
kind and how the ladder's two ends attach to the rest of the map, so ladders
of the same kind but different length or (for broken ladders) different rung
composition share a code.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import maps as M
from .maps import OrientedMap, is_out, opposite, rot_next, rot_prev, vertex_of

SCHEME_FORMAT = "odscheme-v1"
MIN_RUNGS = {"Ne": 2, "No": 3, "L": 2, "R": 2, "B": 2}


class ReductionError(ValueError):
    pass


class NotAMelon(ReductionError):
    pass


class NotADipole(ReductionError):
    pass


class NotALadderVertex(ReductionError):
    pass


class NotACut(ReductionError):
    pass


class CaseTableViolation(ReductionError):
    """A contraction changed the invariants in a way the case table forbids."""


# ---------------------------------------------------------------- surgery

def splice(m: OrientedMap, removed: Iterable[int], joins: Iterable[tuple[int, int]]) -> list[OrientedMap]:
    """Delete the vertices in ``removed`` and route strands through ``joins``.

    ``joins`` pairs darts of removed vertices (one incoming, one outgoing);
    a kept dart whose partner is removed is reconnected by alternately
    following a join and an edge until a kept dart is reached.  Closed
    circuits that never reach a kept dart become cycle-graph components.
    Returns the connected components, largest first then by canonical code.
    """
    removed = set(removed)
    jmap: dict[int, int] = {}
    for a, b in joins:
        if vertex_of(a) not in removed or vertex_of(b) not in removed:
            raise ReductionError("joins must pair darts of removed vertices")
        if is_out(a) == is_out(b):
            raise ReductionError("a join must pair an incoming with an outgoing dart")
        jmap[a] = b
        jmap[b] = a
    keep = [x for x in range(m.v) if x not in removed]
    newidx = {old: i for i, old in enumerate(keep)}

    def nd(d: int) -> int:
        return 4 * newidx[vertex_of(d)] + (d & 3)

    alpha = [-1] * (4 * len(keep))
    used_joins = set()
    for x in keep:
        for d in m.vertex_darts(x):
            if alpha[nd(d)] != -1:
                continue
            a = m.alpha[d]
            while vertex_of(a) in removed:
                if a not in jmap:
                    raise ReductionError(f"dart {a} of a removed vertex has no join")
                used_joins.add(a)
                b = jmap[a]
                used_joins.add(b)
                a = m.alpha[b]
            if alpha[nd(d)] != -1 or alpha[nd(a)] != -1:
                raise ReductionError("inconsistent splice")
            alpha[nd(d)] = nd(a)
            alpha[nd(a)] = nd(d)
    # circuits made only of joined darts
    loops = 0
    for a in jmap:
        if a in used_joins:
            continue
        x = a
        while True:
            used_joins.add(x)
            y = jmap[x]
            used_joins.add(y)
            x = m.alpha[y]
            if x == a:
                break
            if x not in jmap:
                raise ReductionError("open strand in splice")
        loops += 1
    out: list[OrientedMap] = []
    if keep:
        whole = OrientedMap(len(keep), tuple(alpha))
        out.extend(split_components(whole))
    out.extend(OrientedMap.cycle() for _ in range(loops))
    return out


def split_components(m: OrientedMap) -> list[OrientedMap]:
    if m.cycle_graph:
        return [m]
    comps = M.components(m)
    if len(comps) == 1:
        return [m]
    res = []
    for comp in comps:
        idx = {old: i for i, old in enumerate(comp)}
        pairs = [(4 * idx[vertex_of(d)] + (d & 3), 4 * idx[vertex_of(a)] + (a & 3))
                 for d, a in m.pairs() if vertex_of(d) in idx]
        res.append(OrientedMap.from_pairs(len(comp), pairs))
    return res


def _grow(m: OrientedMap, nnew: int, pairs: Iterable[tuple[int, int]], cut: Iterable[int]) -> OrientedMap:
    """Append ``nnew`` vertices, drop the edges at darts ``cut``, add ``pairs``."""
    alpha = list(m.alpha) + [-1] * (4 * nnew)
    for d in cut:
        a = alpha[d]
        if a != -1:
            alpha[a] = -1
        alpha[d] = -1
    for a, b in pairs:
        alpha[a] = b
        alpha[b] = a
    if -1 in alpha:
        raise ReductionError("dangling dart after insertion")
    return OrientedMap(m.v + nnew, tuple(alpha))


# ---------------------------------------------------------------- melons

@dataclass(frozen=True)
class Melon:
    u: int
    w: int
    free_u: int
    free_w: int


def _melon_candidates(m: OrientedMap):
    for u in range(m.v):
        for w in range(u + 1, m.v):
            du = [d for d in m.vertex_darts(u) if vertex_of(m.alpha[d]) == w]
            if len(du) == 3:
                fu = next(d for d in m.vertex_darts(u) if d not in du)
                fw = next(d for d in m.vertex_darts(w) if vertex_of(m.alpha[d]) != u)
                yield u, w, [(fu, fw)]
            elif len(du) == 4:
                yield u, w, [(d, m.alpha[d]) for d in m.vertex_darts(u)]


def find_melons(m: OrientedMap) -> list[Melon]:
    """Elementary melonic 2-point subgraphs, accepted only if their removal keeps (g, ℓ)."""
    if m.cycle_graph:
        return []
    inv = M.invariants(m)
    found = []
    for u, w, cands in _melon_candidates(m):
        for fu, fw in cands:
            mel = Melon(u, w, fu, fw)
            (rest,) = _remove_melon_raw(m, mel)
            ri = M.invariants(rest)
            if (ri.g, ri.ell) == (inv.g, inv.ell):
                found.append(mel)
                break
    return found


def _remove_melon_raw(m: OrientedMap, mel: Melon) -> list[OrientedMap]:
    if m.alpha[mel.free_u] == mel.free_w:
        return [OrientedMap.cycle()]
    return splice(m, (mel.u, mel.w), [(mel.free_u, mel.free_w)])


def remove_melon(m: OrientedMap, mel: Melon) -> OrientedMap:
    if mel not in find_melons(m):
        raise NotAMelon(f"{mel} is not a melon of this map")
    (res,) = _remove_melon_raw(m, mel)
    return res


def insert_melon(m: OrientedMap, out_dart: int | None = None) -> OrientedMap:
    """Replace the edge leaving ``out_dart`` by an elementary melon.

    On the cycle graph the argument is ignored and the two-vertex melonic
    vacuum graph is returned.
    """
    if m.cycle_graph:
        # u: darts 0..3, w: 4..7; through-strand 0 -> ... closes on itself
        return OrientedMap.from_pairs(2, [(0, 5), (2, 7), (4, 1), (6, 3)])
    if out_dart is None or not is_out(out_dart):
        raise ReductionError("melon insertion needs an outgoing dart")
    d, a = out_dart, m.alpha[out_dart]
    u, w = 4 * m.v, 4 * m.v + 4
    # u is entered at local 1 and w left through local 0; the through-strand
    # runs u1 -> u3 -> w2 -> w0, the other two edges close a length-2 loop
    pairs = [(d, u + 1), (w + 0, a), (w + 2, u + 3), (u + 0, w + 1), (u + 2, w + 3)]
    res = _grow(m, 2, pairs, [d])
    inv0, inv1 = M.invariants(m), M.invariants(res)
    if (inv0.g, inv0.ell) != (inv1.g, inv1.ell):
        pairs = [(d, u + 1), (w + 0, a), (w + 2, u + 3), (u + 0, w + 3), (u + 2, w + 1)]
        res = _grow(m, 2, pairs, [d])
        inv1 = M.invariants(res)
    assert (inv0.g, inv0.ell) == (inv1.g, inv1.ell)
    return res


def core_of(m: OrientedMap, pick: int = 0) -> OrientedMap:
    """Remove melons until none is left; ``pick`` selects which melon goes first each round."""
    while not m.cycle_graph:
        mel = find_melons(m)
        if not mel:
            break
        m = remove_melon(m, mel[pick % len(mel)]) if pick else _remove_melon_raw(m, mel[0])[0]
    return m


def is_melon_free(m: OrientedMap) -> bool:
    return m.cycle_graph or not find_melons(m)


# ---------------------------------------------------------------- dipoles

@dataclass(frozen=True)
class Dipole:
    kind: str  # "N", "L" or "R"
    u: int
    w: int
    edges: tuple[tuple[int, int], ...]  # (out, in) dart pairs
    sides: tuple[tuple[int, int], tuple[int, int]]  # each (dart at u, dart at w)

    @property
    def vertices(self) -> tuple[int, int]:
        return (self.u, self.w)

    @property
    def darts(self) -> frozenset[int]:
        return frozenset(range(4 * self.u, 4 * self.u + 4)) | frozenset(range(4 * self.w, 4 * self.w + 4))


def _dipole_sides(m: OrientedMap, u: int, w: int, ends: Sequence[tuple[int, int]]):
    inner = {x for e in ends for x in e}
    sides = set()
    for a, b in ends:
        if vertex_of(a) != u:
            a, b = b, a
        for x, y in ((rot_next(a), rot_prev(b)), (rot_prev(a), rot_next(b))):
            if x not in inner and y not in inner:
                sides.add((x, y))
    if len(sides) != 2:
        raise ReductionError(f"dipole on {u},{w} does not have two sides")
    return tuple(sorted(sides))


def find_dipoles(m: OrientedMap) -> list[Dipole]:
    """All length-2 faces (straight, outgoing or incoming) spanning two distinct vertices."""
    if m.cycle_graph:
        return []
    found = {}
    p = M.face_perm(m)
    s = M.straight_perm(m)
    for kind, perm in (("N", s), ("LR", p)):
        for d in range(m.ndarts):
            d2 = perm[d]
            if d2 == d or perm[d2] != d:
                continue
            e1, e2 = (d, m.alpha[d]), (d2, m.alpha[d2])
            if vertex_of(e1[0]) == vertex_of(e1[1]):
                continue
            u, w = sorted((vertex_of(e1[0]), vertex_of(e1[1])))
            k = kind if kind == "N" else ("L" if is_out(d) else "R")
            edges = tuple(sorted(tuple(sorted(e, key=lambda x: not is_out(x))) for e in (e1, e2)))
            key = (k, edges)
            if key in found:
                continue
            ends = [(a if vertex_of(a) == u else b, b if vertex_of(a) == u else a) for a, b in edges]
            found[key] = Dipole(k, u, w, edges, _dipole_sides(m, u, w, ends))
    return sorted(found.values(), key=lambda x: (x.u, x.w, x.kind, x.edges))


# ---------------------------------------------------------------- ladders

@dataclass(frozen=True)
class Ladder:
    rungs: tuple[Dipole, ...]
    kind: str  # "Ne", "No", "L", "R", "B"
    ends: tuple[tuple[int, int], ...]  # outer sides of first and last rung; empty for a ring
    closed: bool = False

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(x for r in self.rungs for x in r.vertices)


def _ladder_kind(rungs: Sequence[Dipole]) -> str:
    kinds = {r.kind for r in rungs}
    if len(kinds) > 1:
        return "B"
    k = kinds.pop()
    if k == "N":
        return "Ne" if len(rungs) % 2 == 0 else "No"
    return k


def _side_links(m: OrientedMap, dipoles: Sequence[Dipole]):
    """Map (dipole index, side index) to the (dipole index, side index) it is railed to."""
    by_pair = {}
    for i, dp in enumerate(dipoles):
        for j, sd in enumerate(dp.sides):
            by_pair.setdefault(frozenset(sd), []).append((i, j))
    links = {}
    for i, dp in enumerate(dipoles):
        for j, (x, y) in enumerate(dp.sides):
            tgt = frozenset((m.alpha[x], m.alpha[y]))
            for k, t in by_pair.get(tgt, []):
                if k != i and not set(dipoles[k].vertices) & set(dp.vertices):
                    links.setdefault((i, j), []).append((k, t))
    return links


def _chains(dips: Sequence[Dipole], nxt: dict) -> list[tuple[list[int], int, int, bool]]:
    """Maximal side-to-side chains as (dipole indices, first outer side, last outer side, closed)."""
    out = []
    seen = set()
    for i in range(len(dips)):
        if i in seen:
            continue
        # walk away from side 1 to find an end (or come back around a ring)
        cur, side, closed = i, 0, False
        visited = {i}
        while (cur, side) in nxt:
            k, t = nxt[(cur, side)]
            if k == i:
                closed = True
                break
            if k in visited:
                break
            visited.add(k)
            cur, side = k, 1 - t
        start, start_side = (i, 1) if closed else (cur, side)
        chain = [start]
        cur, side = start, 1 - start_side
        while (cur, side) in nxt:
            k, t = nxt[(cur, side)]
            if k == start or k in chain:
                break
            chain.append(k)
            cur, side = k, 1 - t
        seen.update(chain)
        out.append((chain, start_side, side, closed))
    return out


def maximal_ladders(m: OrientedMap) -> list[Ladder]:
    """Chains of at least two vertex-disjoint dipoles joined side to side, extended maximally.

    A dipole may lie between two rungs as part of the rails (closed necklaces,
    chains of doubled edges); chains that overlap such a dipole are kept and
    the lone dipole is not a rung.  Overlaps between two chains only happen
    for closed necklaces, where either choice gives the same ring.
    """
    dips = find_dipoles(m)
    links = _side_links(m, dips)
    for tg in links.values():
        if len(tg) != 1:
            raise ReductionError("a dipole side is railed to several dipoles")
    nxt = {k: v[0] for k, v in links.items()}
    cands = []
    for chain, s0, s1, closed in _chains(dips, nxt):
        if len(chain) < 2:
            continue
        rungs = tuple(dips[c] for c in chain)
        if closed:
            cands.append(Ladder(rungs, _ladder_kind(rungs), (), True))
        else:
            ends = (dips[chain[0]].sides[s0], dips[chain[-1]].sides[s1])
            cands.append(Ladder(rungs, _ladder_kind(rungs), ends, False))
    cands.sort(key=lambda l: (not l.closed, -len(l.rungs), sorted(l.vertices)))
    used: set[int] = set()
    ladders = []
    for lad in cands:
        vs = set(lad.vertices)
        if vs & used:
            if not lad.closed:
                raise ReductionError("two open maximal ladders share a vertex")
            continue
        used |= vs
        ladders.append(lad)
    return ladders


# ---------------------------------------------------------------- schemes

@dataclass
class SchemeGraph:
    representative: OrientedMap
    ladders: list[Ladder] = field(default_factory=list)
    code: str = ""

    def to_json(self) -> dict:
        return {
            "format": SCHEME_FORMAT,
            "representative": self.representative.to_json(),
            "ladders": [{"vertices": sorted(l.vertices), "kind": l.kind, "rungs": len(l.rungs),
                         "closed": l.closed} for l in self.ladders],
            "code": self.code,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SchemeGraph":
        if data.get("format", SCHEME_FORMAT) != SCHEME_FORMAT:
            raise ReductionError(f"unsupported scheme format {data.get('format')!r}")
        return scheme_of(OrientedMap.from_json(data["representative"]))


def _end_roles(m: OrientedMap, side: tuple[int, int]) -> tuple[int, int]:
    """(outgoing leg, incoming leg) of a ladder end."""
    x, y = side
    return (x, y) if is_out(x) else (y, x)


def shorten_ladder(m: OrientedMap, lad: Ladder, keep: int) -> OrientedMap:
    """Remove interior rungs by passing both rails straight through them."""
    n = len(lad.rungs)
    if lad.closed:
        drop = list(range(keep, n))
    else:
        drop = list(range(1, 1 + n - keep))
    removed, joins = [], []
    for idx in drop:
        r = lad.rungs[idx]
        removed.extend(r.vertices)
        a_out, a_in = _end_roles(m, r.sides[0])
        b_out, b_in = _end_roles(m, r.sides[1])
        joins += [(a_out, b_in), (a_in, b_out)]
    (res,) = splice(m, removed, joins)
    return res


def _target_rungs(lad: Ladder) -> int:
    if lad.closed and lad.kind in ("Ne", "No"):
        return 2 if lad.kind == "Ne" else 3
    if lad.closed:
        return 2
    return MIN_RUNGS[lad.kind]


def _shorten_b(m: OrientedMap, lad: Ladder) -> OrientedMap:
    """Reduce a broken ladder to two rungs of different kinds, keeping the outer rungs when possible."""
    rungs = lad.rungs
    n = len(rungs)
    if rungs[0].kind != rungs[-1].kind:
        keep_idx = {0, n - 1}
    else:
        j = next(i for i in range(1, n) if rungs[i].kind != rungs[0].kind)
        keep_idx = {0, j}
    removed, joins = [], []
    for idx in range(n):
        if idx in keep_idx:
            continue
        r = rungs[idx]
        removed.extend(r.vertices)
        a_out, a_in = _end_roles(m, r.sides[0])
        b_out, b_in = _end_roles(m, r.sides[1])
        joins += [(a_out, b_in), (a_in, b_out)]
    (res,) = splice(m, removed, joins)
    return res


def normalize(m: OrientedMap) -> tuple[OrientedMap, list[Ladder]]:
    """Melon removal and ladder shortening iterated to a fixed point."""
    for _ in range(10 * (m.v + 1)):
        m = core_of(m)
        if m.cycle_graph:
            return m, []
        lads = maximal_ladders(m)
        for lad in lads:
            want = _target_rungs(lad)
            if len(lad.rungs) > want:
                if lad.kind == "B":
                    m = _shorten_b(m, lad)
                elif lad.kind in ("Ne", "No"):
                    m = shorten_ladder(m, lad, want)
                else:
                    m = shorten_ladder(m, lad, want)
                break
        else:
            return m, lads
    raise ReductionError("normalization did not converge")


def _gadget_map(m: OrientedMap, ladders: Sequence[Ladder]):
    """Replace every open ladder by a labeled two-vertex gadget; returns (map, labels)."""
    ladder_of = {}
    for i, lad in enumerate(ladders):
        for x in lad.vertices:
            ladder_of[x] = i
    keep = [x for x in range(m.v) if x not in ladder_of]
    idx = {old: i for i, old in enumerate(keep)}
    nv = len(keep) + 2 * len(ladders)
    labels = ["."] * len(keep)
    # gadget vertices: p = end 0, q = end 1; locals 0 OUT (to outside), 1 IN, 2 OUT to partner 3
    leg_new = {}
    for i, lad in enumerate(ladders):
        p = len(keep) + 2 * i
        q = p + 1
        labels += [lad.kind, lad.kind]
        for vert, side in ((p, lad.ends[0]), (q, lad.ends[1])):
            o, n_ = _end_roles(m, side)
            # the ladder leg `o` is outgoing: in the gadget the outside sees an outgoing dart
            leg_new[o] = 4 * vert + 0
            leg_new[n_] = 4 * vert + 1

    def new(d: int) -> int | None:
        x = vertex_of(d)
        if x in idx:
            return 4 * idx[x] + (d & 3)
        return leg_new.get(d)

    pairs = set()
    for d, a in m.pairs():
        nd_, na = new(d), new(a)
        if nd_ is None or na is None:
            continue
        pairs.add((min(nd_, na), max(nd_, na)))
    for i in range(len(ladders)):
        p = len(keep) + 2 * i
        pairs.add((4 * p + 2, 4 * (p + 1) + 3))
        pairs.add((4 * (p + 1) + 2, 4 * p + 3))
    g = OrientedMap.from_pairs(nv, sorted(pairs))
    return g, labels


def scheme_code_of(rep: OrientedMap, ladders: Sequence[Ladder]) -> str:
    if rep.cycle_graph:
        return "C"
    closed = [l for l in ladders if l.closed]
    if closed:
        (ring,) = closed
        kind = ring.kind
        return f"ring:{kind}"
    g, labels = _gadget_map(rep, ladders)
    return M.canonical_code(g, labels=labels) if ladders else M.canonical_code(rep)


def scheme_of(m: OrientedMap) -> SchemeGraph:
    rep, lads = normalize(m)
    return SchemeGraph(rep, lads, scheme_code_of(rep, lads))


def scheme_code(m: OrientedMap, mod_orientation: bool = False) -> str:
    code = scheme_of(m).code
    if mod_orientation:
        code = min(code, scheme_of(M.reverse_all_arrows(m)).code)
    return code


# ---------------------------------------------------------------- two-edge cuts and flips

def _components_without(m: OrientedMap, removed_darts: set[int]) -> list[set[int]]:
    seen: dict[int, int] = {}
    comps = []
    for s in range(m.v):
        if s in seen:
            continue
        comp = {s}
        seen[s] = len(comps)
        stack = [s]
        while stack:
            x = stack.pop()
            for d in m.vertex_darts(x):
                if d in removed_darts:
                    continue
                y = vertex_of(m.alpha[d])
                if y not in seen:
                    seen[y] = len(comps)
                    comp.add(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def two_edge_cuts(m: OrientedMap) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Unordered pairs of edges, as (out, in) darts, whose removal disconnects the map."""
    if m.cycle_graph:
        return []
    edges = m.edges()
    cuts = []
    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            rem = {*edges[i], *edges[j]}
            if len(_components_without(m, rem)) > 1:
                cuts.append((edges[i], edges[j]))
    return cuts


def is_2pi(m: OrientedMap) -> bool:
    if m.cycle_graph:
        return True
    edges = m.edges()
    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            if len(_components_without(m, {*edges[i], *edges[j]})) > 1:
                return False
    return True


def flip(m: OrientedMap, cut) -> tuple[OrientedMap, OrientedMap]:
    """Cut both edges and close each side on itself; returns the two resulting maps."""
    (o1, i1), (o2, i2) = cut
    comps = _components_without(m, {o1, i1, o2, i2})
    if len(comps) != 2:
        raise NotACut("the edge pair does not disconnect the map")
    alpha = list(m.alpha)
    # each side holds exactly one outgoing and one incoming cut dart
    alpha[o1], alpha[i2] = i2, o1
    alpha[o2], alpha[i1] = i1, o2
    g = OrientedMap(m.v, tuple(alpha))
    parts = split_components(g)
    if len(parts) != 2:
        raise NotACut("flip did not split the map in two")
    return parts[0], parts[1]


def two_edge_connection(m1: OrientedMap, m2: OrientedMap, out1: int, out2: int) -> OrientedMap:
    """Cut the edge leaving ``out1`` in m1 and ``out2`` in m2, and cross-connect them."""
    if m1.cycle_graph or m2.cycle_graph:
        raise ReductionError("a two-edge-connection needs non-empty graphs on both sides")
    shift = m1.ndarts
    alpha = list(m1.alpha) + [a + shift for a in m2.alpha]
    o1, i1 = out1, m1.alpha[out1]
    o2, i2 = out2 + shift, m2.alpha[out2] + shift
    alpha[o1], alpha[i2] = i2, o1
    alpha[o2], alpha[i1] = i1, o2
    return OrientedMap(m1.v + m2.v, tuple(alpha))


# ---------------------------------------------------------------- contractions

@dataclass(frozen=True)
class ContractionReport:
    separating: bool
    sigma: int | None
    kind: str
    npd_type: str | None  # "connecting", "rearranging", "III" for non-separating N
    d_g: int
    d_ell: int
    d_omega: Fraction
    d_phi: int
    d_f: int

    def as_dict(self) -> dict:
        return {"separating": self.separating, "sigma": self.sigma, "kind": self.kind,
                "npd_type": self.npd_type, "dg": self.d_g, "dl": self.d_ell,
                "domega": str(self.d_omega), "dphi": self.d_phi, "df": self.d_f}


def _report(kind: str, before: OrientedMap, parts: list[OrientedMap]) -> ContractionReport:
    i0 = M.invariants(before)
    invs = [M.invariants(p) for p in parts]
    g = sum(i.g for i in invs)
    ell = sum(i.ell for i in invs)
    phi = sum(i.phi for i in invs)
    f = sum(i.f for i in invs)
    sep = len(parts) == 2
    dg, dl, dphi, df = g - i0.g, ell - i0.ell, phi - i0.phi, f - i0.f
    sigma = None
    npd = None
    if sep:
        if dg or dl:
            raise CaseTableViolation(f"separating {kind} contraction is not additive: dg={dg}, dl={dl}")
    elif kind == "N" or kind in ("Ne", "No"):
        sigma = dphi + 1
        if dg != -1 or dl != -2 * (sigma + 1) or sigma not in (-1, 0, 1):
            raise CaseTableViolation(f"non-separating {kind}: dg={dg}, dl={dl}, sigma={sigma}")
        npd = {-1: "connecting", 0: "rearranging", 1: "III"}[sigma]
    elif kind in ("L", "R"):
        sigma = df + 1
        if sigma not in (-1, 1) or 2 * dg != -(sigma + 1) or dl != -(sigma + 3):
            raise CaseTableViolation(f"non-separating {kind}: dg={dg}, dl={dl}, sigma={sigma}")
    elif kind == "B":
        if dg != -1 or dl != -4:
            raise CaseTableViolation(f"non-separating B: dg={dg}, dl={dl}")
    if len(parts) > 2:
        raise CaseTableViolation(f"contraction produced {len(parts)} components")
    return ContractionReport(sep, sigma, kind, npd, dg, dl, Fraction(dg) + Fraction(dl, 2), dphi, df)


def contract_dipole(m: OrientedMap, dp: Dipole) -> tuple[list[OrientedMap], ContractionReport]:
    """Delete the dipole and join the two legs on each of its sides."""
    if dp not in find_dipoles(m):
        raise NotADipole(f"{dp} is not a dipole of this map")
    parts = splice(m, dp.vertices, dp.sides)
    return parts, _report(dp.kind, m, parts)


def contract_ladder(m: OrientedMap, lad: Ladder, rung: int = 0) -> tuple[list[OrientedMap], ContractionReport]:
    """Contract one rung of the ladder, then remove the melons this leaves behind.

    The report is taken right after the rung contraction, since removing
    melons keeps (g, ℓ) but changes the face counts used to read off σ.
    """
    if not 0 <= rung < len(lad.rungs):
        raise NotALadderVertex(f"ladder has no rung {rung}")
    dp = lad.rungs[rung]
    raw = splice(m, dp.vertices, dp.sides)
    rep = _report(lad.kind, m, raw)
    return [core_of(p) for p in raw], rep


def contract_ladder_vertex(scheme: SchemeGraph, index: int) -> tuple[list[SchemeGraph], ContractionReport]:
    if not 0 <= index < len(scheme.ladders):
        raise NotALadderVertex(f"no ladder-vertex {index}")
    parts, rep = contract_ladder(scheme.representative, scheme.ladders[index])
    return [scheme_of(p) for p in parts], rep


def scheme_dumps(s: SchemeGraph) -> str:
    return json.dumps(s.to_json(), sort_keys=True)


# ---------------------------------------------------------------- melonic two-point graphs

def _rooted_code(m: OrientedMap, root: int) -> tuple:
    return M._bfs_code(m, root, None)[0]


def _next_melonic_level(level: list[tuple[OrientedMap, int]]) -> list[tuple[OrientedMap, int]]:
    nxt: dict[tuple, tuple[OrientedMap, int]] = {}
    for m, root in level:
        if m.cycle_graph:
            grown = [(insert_melon(m), 4)]  # the closed leg runs from the second vertex to the first
        else:
            grown = [(insert_melon(m, d), root) for d in range(0, m.ndarts, 2)]
        for g, r in grown:
            nxt.setdefault(_rooted_code(g, r), (g, r))
    return [nxt[c] for c in sorted(nxt)]


def rooted_melonic_graphs(k: int) -> list[tuple[OrientedMap, int]]:
    """Melonic two-point graphs with ``k`` melons, as (vacuum map, root dart).

    The two external legs are closed into one root edge, leaving the root
    dart at its outgoing end.  Each round inserts a melon on every edge and
    keeps one graph per rooted isomorphism class.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    level = [(OrientedMap.cycle(), -1)]
    for _ in range(k):
        level = _next_melonic_level(level)
    return level


def melonic_counts(kmax: int) -> list[int]:
    """Number of rooted melonic two-point graphs with 0..kmax melons."""
    level = [(OrientedMap.cycle(), -1)]
    counts = [1]
    for _ in range(kmax):
        level = _next_melonic_level(level)
        counts.append(len(level))
    return counts

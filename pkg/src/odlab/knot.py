"""Alternating knot diagrams from planar maps with a single straight face.

The straight walk of a planar map with one straight face is a closed curve
through every vertex twice.  Reading the vertices as crossings and
alternating over and under along the walk gives a knot diagram.  Knots are
told apart by the normalized Kauffman bracket of the diagram and of its
mirror, compared with reference diagrams built from braid words.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from . import maps as M
from .maps import OrientedMap

MAX_CROSSINGS = 12


class KnotError(ValueError):
    pass


class NotPlanar(KnotError):
    pass


class NotAKnot(KnotError):
    pass


class TooManyCrossings(KnotError):
    pass


# ---------------------------------------------------------------- Laurent polynomials in A

Poly = dict[int, int]


def _clean(p: Poly) -> Poly:
    return {k: c for k, c in p.items() if c}


def padd(p: Poly, q: Poly) -> Poly:
    out = dict(p)
    for k, c in q.items():
        out[k] = out.get(k, 0) + c
    return _clean(out)


def pmul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for (a, x), (b, y) in itertools.product(p.items(), q.items()):
        out[a + b] = out.get(a + b, 0) + x * y
    return _clean(out)


def ppow(p: Poly, n: int) -> Poly:
    out: Poly = {0: 1}
    for _ in range(n):
        out = pmul(out, p)
    return out


def pmirror(p: Poly) -> Poly:
    """Substitute A -> 1/A."""
    return {-k: c for k, c in p.items()}


def pkey(p: Poly) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(p.items()))


def pformat(p: Poly, var: str = "A") -> str:
    if not p:
        return "0"
    terms = []
    for k in sorted(p):
        c = p[k]
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        coef = str(c) if (mono == "" or abs(c) != 1) else ("-" if c < 0 else "")
        terms.append(f"{coef}{'*' if coef not in ('', '-') and mono else ''}{mono}")
    return " + ".join(terms).replace("+ -", "- ")


_LOOP: Poly = {2: -1, -2: -1}  # value of a closed loop, -A^2 - A^-2


# ---------------------------------------------------------------- diagrams

@dataclass(frozen=True)
class KnotDiagram:
    """An alternating diagram; crossings are numbered in walk order from 1."""

    crossing_count: int
    gauss: tuple[tuple[str, int], ...]  # ("O"|"U", crossing) along the walk
    pd: tuple[tuple[int, int, int, int], ...]  # incoming under arc first, then counterclockwise
    signs: tuple[int, ...]  # writhe contribution per crossing
    mirror: bool = False  # True when the canonical Gauss code came from the mirror assignment

    @property
    def writhe(self) -> int:
        return sum(self.signs)

    def gauss_string(self, sep: str = ",") -> str:
        return sep.join(f"{s}{i}" for s, i in self.gauss)


def _canonical_gauss(seq: Sequence[tuple[str, int]]) -> tuple[tuple[tuple[str, int], ...], bool]:
    """Minimum over rotation, reversal and mirror, with crossings renumbered by first appearance."""
    best = None
    n = len(seq)
    for mirrored in (False, True):
        base = [(("U" if s == "O" else "O") if mirrored else s, c) for s, c in seq]
        for rev in (False, True):
            cur = base[::-1] if rev else base
            for r in range(n):
                rot = cur[r:] + cur[:r]
                ids: dict[int, int] = {}
                code = tuple((s, ids.setdefault(c, len(ids) + 1)) for s, c in rot)
                key = tuple((i, s) for s, i in code)
                if best is None or key < best[0]:
                    best = (key, code, mirrored)
    if best is None:
        return (), False
    return best[1], best[2]


def straight_walk(m: OrientedMap) -> list[int]:
    """Entering darts of the straight walk starting along dart 0."""
    walk = []
    d = 0
    while True:
        x = m.alpha[d]
        walk.append(x)
        d = M.opposite(x)
        if d == 0:
            return walk


def to_knot_diagram(m: OrientedMap) -> KnotDiagram:
    """Alternating diagram read off the straight walk; the first crossing met is over."""
    if m.cycle_graph or m.v == 0:
        return KnotDiagram(0, (), (), ())
    if not M.is_connected(m):
        raise NotAKnot("the map is disconnected")
    inv = M.invariants(m)
    if inv.g != 0:
        raise NotPlanar(f"genus {inv.g}")
    if inv.phi != 1:
        raise NotAKnot(f"{inv.phi} straight faces give a link")
    walk = straight_walk(m)
    n2 = len(walk)
    label = {}
    for k, x in enumerate(walk):
        label[x] = k + 1
        label[M.opposite(x)] = (k + 1) % n2 + 1
    order: dict[int, int] = {}
    over_in: dict[int, int] = {}
    under_in: dict[int, int] = {}
    gauss = []
    for k, x in enumerate(walk):
        v = M.vertex_of(x)
        cid = order.setdefault(v, len(order) + 1)
        s = "O" if k % 2 == 0 else "U"
        (over_in if s == "O" else under_in)[v] = x
        gauss.append((s, cid))
    for v in range(m.v):
        if v not in over_in or v not in under_in:
            raise KnotError(f"crossing {v} is not passed once over and once under")
    pd, signs = [], []
    for v in sorted(order, key=order.get):
        x = under_in[v]
        pd.append(tuple(label[4 * v + (x + j) % 4] for j in range(4)))
        # over strand entering right after the under strand runs against the rotation
        signs.append(-1 if over_in[v] == 4 * v + (x + 1) % 4 else 1)
    code, mirrored = _canonical_gauss(gauss)
    return KnotDiagram(m.v, code, tuple(pd), tuple(signs), mirrored)


def is_reduced_diagram(m: OrientedMap) -> tuple[bool, bool]:
    """(no nugatory crossing, composite): reduced means no self-loop; composite means 2PR."""
    from .reduction import is_2pi

    loop = any(M.vertex_of(d) == M.vertex_of(m.alpha[d]) for d in range(m.ndarts))
    return (not loop, not is_2pi(m))


# ---------------------------------------------------------------- bracket

def kauffman_bracket(pd: Sequence[Sequence[int]]) -> Poly:
    """State sum over all smoothings, normalized so that the unknot gives 1."""
    n = len(pd)
    if n > MAX_CROSSINGS:
        raise TooManyCrossings(f"{n} crossings; the state sum is capped at {MAX_CROSSINGS}")
    if n == 0:
        return {0: 1}
    arcs = sorted({a for x in pd for a in x})
    index = {a: i for i, a in enumerate(arcs)}
    total: Poly = {}
    for state in itertools.product((0, 1), repeat=n):
        parent = list(range(len(arcs)))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        def union(a: int, b: int) -> None:
            parent[find(index[a])] = find(index[b])

        for (a, b, c, d), s in zip(pd, state):
            if s == 0:
                union(a, b)
                union(c, d)
            else:
                union(a, d)
                union(b, c)
        loops = len({find(i) for i in range(len(arcs))})
        na = state.count(0)
        term = pmul({na - (n - na): 1}, ppow(_LOOP, loops - 1))
        total = padd(total, term)
    return total


def pd_writhe(pd: Sequence[Sequence[int]]) -> int:
    """Writhe of a one-component PD code whose arcs are numbered along the orientation."""
    n2 = 2 * len(pd)
    w = 0
    for _, b, _, d in pd:
        if d % n2 + 1 == b:
            w += 1
        elif b % n2 + 1 == d:
            w -= 1
    return w


def normalized_bracket(pd: Sequence[Sequence[int]], writhe: int | None = None) -> Poly:
    """(-A^3)^(-w) times the bracket: an invariant of the knot."""
    w = pd_writhe(pd) if writhe is None else writhe
    br = kauffman_bracket(pd)
    factor = {-3 * w: (-1) ** (w % 2)}
    return pmul(factor, br)


def jones_from_bracket(f: Poly) -> dict[int, int]:
    """Jones polynomial as exponent of t -> coefficient, using A = t^(-1/4)."""
    out = {}
    for k, c in f.items():
        if k % 4:
            raise KnotError("bracket exponents are not multiples of 4")
        out[-k // 4] = c
    return out


def determinant(f: Poly) -> int:
    """|V(-1)|; only even powers of t^(1/2) appear for knots."""
    return abs(sum(c * (-1) ** (k % 2) for k, c in jones_from_bracket(f).items()))


# ---------------------------------------------------------------- reference diagrams

# braid words: +i crosses strands i, i+1 with the left strand under, -i is its mirror
REFERENCE_BRAIDS: dict[str, tuple[int, ...]] = {
    "unknot": (),
    "3_1": (1, 1, 1),
    "4_1": (1, -2, 1, -2),
    "5_1": (1, 1, 1, 1, 1),
    "5_2": (1, 1, 1, 2, -1, 2),
    "6_1": (1, 1, 2, -1, -3, 2, -3),
    "6_2": (1, 1, 1, -2, 1, -2),
    "6_3": (1, 1, -2, 1, -2, -2),
    "3_1#3_1": (1, 1, 1, 2, 2, 2),
    "3_1#3_1*": (1, 1, 1, -2, -2, -2),  # the summands are mirror images
}


def braid_closure_pd(word: Sequence[int]) -> tuple[tuple[tuple[int, int, int, int], ...], int]:
    """PD code and writhe of the closure of a braid word, arcs renumbered along the knot."""
    if not word:
        return (), 0
    strands = max(abs(g) for g in word) + 1
    nxt = 0
    cur = []
    for _ in range(strands):
        cur.append(nxt)
        nxt += 1
    first = list(cur)
    raw = []
    succ = {}  # arc -> arc that follows it along the orientation
    w = 0
    for g in word:
        i = abs(g) - 1
        a, b = cur[i], cur[i + 1]
        a2, b2 = nxt, nxt + 1
        nxt += 2
        succ[a], succ[b] = a2, b2
        if g > 0:
            raw.append((a, b, a2, b2))  # left strand under, going right
            w -= 1
        else:
            raw.append((b, a2, b2, a))  # right strand under, going left
            w += 1
        cur[i], cur[i + 1] = b2, a2
    # each closing arc continues into the bottom arc of its strand
    alias = dict(zip(cur, first))
    raw = [tuple(alias.get(a, a) for a in x) for x in raw]
    succ = {a: alias.get(b, b) for a, b in succ.items()}
    # walk the single component to renumber
    start = raw[0][0]
    order = {}
    a = start
    while a not in order:
        order[a] = len(order) + 1
        a = succ[a]
    if len(order) != 2 * len(word):
        raise KnotError("braid closure is not a knot")
    pd = tuple(tuple(order[a] for a in x) for x in raw)
    return pd, w


@lru_cache(maxsize=None)
def reference_table() -> dict[tuple, str]:
    """Class key -> label for the bundled reference knots."""
    table = {}
    for name, word in REFERENCE_BRAIDS.items():
        pd, w = braid_closure_pd(word)
        table[class_key(normalized_bracket(pd, w))] = name
    return table


def class_key(f: Poly) -> tuple:
    """The pair {f, mirror f} as an order-free key."""
    return min(pkey(f), pkey(pmirror(f)))


def diagram_polynomial(d: KnotDiagram) -> Poly:
    return normalized_bracket(d.pd, d.writhe)


def knot_class_of(d: KnotDiagram) -> str:
    """Reference label of the diagram's knot, or ``unknown:<polynomial>``."""
    f = diagram_polynomial(d)
    return reference_table().get(class_key(f), "unknown:" + pformat(f))

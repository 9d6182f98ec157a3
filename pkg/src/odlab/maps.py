"""Oriented 4-regular maps with three strand systems.

Darts are numbered ``0 .. 4v-1``; dart ``d`` sits on vertex ``d // 4`` at local
position ``d % 4``.  The rotation at every vertex is the ascending local order,
and a dart is outgoing iff its local position is even, so the two outgoing
half-edges always sit opposite each other.  ``alpha`` pairs every dart with the
other end of its edge; edges always join an outgoing dart to an incoming one.

The cycle graph (one closed edge, no vertex) is a flagged special value.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

FORMAT = "odmap-v1"


class MapError(ValueError):
    """Base class for malformed or unsuitable maps."""


class InvalidInvolution(MapError):
    pass


class OrientationViolation(MapError):
    pass


class DanglingDart(MapError):
    pass


class MixedDirectionFace(MapError):
    pass


class Disconnected(MapError):
    pass


def vertex_of(d: int) -> int:
    return d >> 2


def is_out(d: int) -> bool:
    return d % 2 == 0


def rot_next(d: int) -> int:
    return (d & ~3) | ((d + 1) & 3)


def rot_prev(d: int) -> int:
    return (d & ~3) | ((d + 3) & 3)


def opposite(d: int) -> int:
    return d ^ 2


@dataclass(frozen=True)
class OrientedMap:
    v: int
    alpha: tuple[int, ...]
    cycle_graph: bool = False

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(self.alpha))

    @classmethod
    def cycle(cls) -> "OrientedMap":
        return cls(0, (), True)

    @classmethod
    def from_pairs(cls, v: int, pairs: Iterable[Sequence[int]]) -> "OrientedMap":
        alpha = [-1] * (4 * v)
        for a, b in pairs:
            if not (0 <= a < 4 * v and 0 <= b < 4 * v):
                raise DanglingDart(f"dart out of range in pair {(a, b)}")
            if alpha[a] != -1 or alpha[b] != -1 or a == b:
                raise InvalidInvolution(f"dart used twice in pair {(a, b)}")
            alpha[a] = b
            alpha[b] = a
        return cls(v, tuple(alpha))

    @property
    def ndarts(self) -> int:
        return 4 * self.v

    @property
    def e(self) -> int:
        return 1 if self.cycle_graph else 2 * self.v

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(out_dart, in_dart)`` pairs, sorted by the outgoing dart."""
        return [(d, self.alpha[d]) for d in range(0, self.ndarts, 2)]

    def pairs(self) -> list[tuple[int, int]]:
        return [(d, a) for d, a in enumerate(self.alpha) if d < a]

    def to_json(self) -> dict:
        return {
            "format": FORMAT,
            "cycle_graph": self.cycle_graph,
            "v": self.v,
            "alpha": [list(p) for p in self.pairs()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "OrientedMap":
        if data.get("format", FORMAT) != FORMAT:
            raise MapError(f"unsupported map format {data.get('format')!r}")
        if data.get("cycle_graph"):
            if data.get("v", 0) != 0 or data.get("alpha"):
                raise MapError("cycle graph must have v=0 and no darts")
            return cls.cycle()
        return cls.from_pairs(int(data["v"]), data["alpha"])

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def vertex_darts(self, i: int) -> range:
        return range(4 * i, 4 * i + 4)

    def neighbours(self, i: int) -> list[int]:
        return [vertex_of(self.alpha[d]) for d in self.vertex_darts(i)]


@dataclass
class ValidationReport:
    valid: bool
    components: int
    errors: list[str] = field(default_factory=list)

    @property
    def connected(self) -> bool:
        return self.components == 1


def components(m: OrientedMap) -> list[list[int]]:
    """Vertex sets of the connected components, each sorted, ordered by minimum."""
    seen = [False] * m.v
    comps = []
    for s in range(m.v):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        stack = [s]
        while stack:
            x = stack.pop()
            for y in m.neighbours(x):
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def validate(m: OrientedMap, strict: bool = True) -> ValidationReport:
    """Check the involution, the OUT/IN pairing and dart coverage.

    With ``strict`` the first problem is raised as the matching exception;
    otherwise problems are collected in the report.
    """
    errors: list[tuple[type, str]] = []
    if m.cycle_graph:
        if m.v != 0 or m.alpha:
            errors.append((MapError, "cycle graph must have no darts"))
    else:
        if len(m.alpha) != 4 * m.v:
            errors.append((DanglingDart, f"expected {4 * m.v} darts, got {len(m.alpha)}"))
        else:
            for d, a in enumerate(m.alpha):
                if not 0 <= a < 4 * m.v:
                    errors.append((DanglingDart, f"dart {d} is unpaired"))
                elif a == d or m.alpha[a] != d:
                    errors.append((InvalidInvolution, f"alpha is not an involution at dart {d}"))
                elif is_out(d) == is_out(a):
                    kind = "OUT" if is_out(d) else "IN"
                    errors.append((OrientationViolation, f"darts {d} and {a} are both {kind}"))
    if errors and strict:
        exc, msg = errors[0]
        raise exc(msg)
    ncomp = 1 if m.cycle_graph else (len(components(m)) if not errors else 0)
    return ValidationReport(not errors, ncomp, [msg for _, msg in errors])


def is_connected(m: OrientedMap) -> bool:
    return m.cycle_graph or m.v == 0 or len(components(m)) == 1


def _cycles(perm: Sequence[int], domain: Iterable[int]) -> list[tuple[int, ...]]:
    seen = set()
    out = []
    for s in domain:
        if s in seen:
            continue
        cyc = [s]
        seen.add(s)
        x = perm[s]
        while x != s:
            cyc.append(x)
            seen.add(x)
            x = perm[x]
        out.append(tuple(cyc))
    return out


def face_perm(m: OrientedMap) -> list[int]:
    return [rot_next(m.alpha[d]) for d in range(m.ndarts)]


def straight_perm(m: OrientedMap) -> list[int]:
    return [opposite(m.alpha[d]) for d in range(m.ndarts)]


@dataclass(frozen=True)
class FaceReport:
    l_faces: tuple[tuple[int, ...], ...]
    r_faces: tuple[tuple[int, ...], ...]
    straight_faces: tuple[tuple[int, ...], ...]

    @property
    def loop_lengths(self) -> tuple[int, ...]:
        return tuple(sorted(len(c) for c in self.straight_faces))


def trace_faces(m: OrientedMap) -> FaceReport:
    """Trace L-faces (outgoing cycles), R-faces (incoming) and straight faces.

    Straight faces come out of the dart permutation in mirror pairs
    ``{C, alpha(C)}``; each pair is reported once, by the member holding the
    smaller dart.
    """
    if m.cycle_graph:
        return FaceReport(((),), ((),), ((),))
    p = face_perm(m)
    l_faces, r_faces = [], []
    for cyc in _cycles(p, range(m.ndarts)):
        dirs = {is_out(d) for d in cyc}
        if len(dirs) != 1:
            raise MixedDirectionFace(f"face {cyc} mixes directions")
        (l_faces if is_out(cyc[0]) else r_faces).append(cyc)
    s = straight_perm(m)
    scyc = _cycles(s, range(m.ndarts))
    owner = {}
    for i, cyc in enumerate(scyc):
        for d in cyc:
            owner[d] = i
    straight = []
    paired = set()
    for i, cyc in enumerate(scyc):
        if i in paired:
            continue
        j = owner[m.alpha[cyc[0]]]
        if j == i or {owner[m.alpha[d]] for d in cyc} != {j} or len(scyc[j]) != len(cyc):
            raise MapError("straight cycles are not mirror-paired")
        paired.update((i, j))
        straight.append(cyc)
    return FaceReport(tuple(l_faces), tuple(r_faces), tuple(straight))


@dataclass(frozen=True)
class InvariantSet:
    v: int
    e: int
    f_L: int
    f_R: int
    phi: int
    g: int
    ell: int
    g_L: Fraction
    g_R: Fraction
    loop_config: tuple[int, ...]

    @property
    def f(self) -> int:
        return self.f_L + self.f_R

    @property
    def omega(self) -> Fraction:
        return self.g + Fraction(self.ell, 2)

    def as_dict(self) -> dict:
        return {
            "v": self.v, "e": self.e, "f_L": self.f_L, "f_R": self.f_R, "f": self.f,
            "phi": self.phi, "g": self.g, "ell": self.ell, "omega": str(self.omega),
            "g_L": str(self.g_L), "g_R": str(self.g_R),
            "loop_config": list(self.loop_config),
        }


_CYCLE_INVARIANTS = InvariantSet(0, 1, 1, 1, 1, 0, 0, Fraction(0), Fraction(0), (1,))


def invariants(m: OrientedMap) -> InvariantSet:
    """Genus, grade and the strand counts of a connected map."""
    if m.cycle_graph:
        return _CYCLE_INVARIANTS
    if not is_connected(m):
        raise Disconnected("invariants are defined for connected maps")
    fr = trace_faces(m)
    v, e = m.v, 2 * m.v
    fl, frr, phi = len(fr.l_faces), len(fr.r_faces), len(fr.straight_faces)
    two_g = 2 + v - fl - frr
    ell = 4 + 2 * v - fl - frr - 2 * phi
    assert two_g % 2 == 0 and two_g >= 0 and ell >= 0
    # deleting the L strands leaves R-faces and straight faces as the faces
    g_L = Fraction(2 - v + e - frr - phi, 2)
    g_R = Fraction(2 - v + e - fl - phi, 2)
    assert g_L + g_R == Fraction(ell, 2)
    assert ell == 2 + 2 * (two_g // 2) + v - 2 * phi
    return InvariantSet(v, e, fl, frr, phi, two_g // 2, ell, g_L, g_R, fr.loop_lengths)


def reverse_all_arrows(m: OrientedMap) -> OrientedMap:
    """Flip every edge by shifting each rotation base by one position."""
    if m.cycle_graph:
        return m
    relabel = [rot_prev(d) for d in range(m.ndarts)]
    return _apply_relabel(m, relabel)


def mirror(m: OrientedMap) -> OrientedMap:
    """Reverse the cyclic order at every vertex (orientation reversal of the surface)."""
    if m.cycle_graph:
        return m
    relabel = [(d & ~3) | ((-d) & 3) for d in range(m.ndarts)]
    return _apply_relabel(m, relabel)


def _apply_relabel(m: OrientedMap, relabel: Sequence[int]) -> OrientedMap:
    alpha = [0] * m.ndarts
    for d in range(m.ndarts):
        alpha[relabel[d]] = relabel[m.alpha[d]]
    return OrientedMap(m.v, tuple(alpha))


def relabel_vertices(m: OrientedMap, order: Sequence[int], shifts: Sequence[int] | None = None) -> OrientedMap:
    """Renumber vertices (``order[new] = old``) with optional even rotation shifts."""
    shifts = shifts or [0] * m.v
    relabel = [0] * m.ndarts
    for new, old in enumerate(order):
        sh = shifts[new]
        assert sh % 2 == 0
        for k in range(4):
            relabel[4 * old + ((k + sh) & 3)] = 4 * new + k
    return _apply_relabel(m, relabel)


def _bfs_code(m: OrientedMap, root: int, labels: Sequence | None):
    """Relabel the component of ``root`` breadth-first; root becomes dart 0.

    Direction is preserved, so each vertex may only be turned by 0 or 2.
    """
    base = {vertex_of(root): root}
    order = [vertex_of(root)]
    newid = {vertex_of(root): 0}
    code = []
    i = 0
    while i < len(order):
        b = base[order[i]]
        for k in range(4):
            d = (b & ~3) | ((b + k) & 3)
            a = m.alpha[d]
            w = vertex_of(a)
            if w not in newid:
                newid[w] = len(order)
                order.append(w)
                base[w] = a if is_out(a) else rot_prev(a)
            ab = base[w]
            code.append(4 * newid[w] + ((a - ab) & 3))
        i += 1
    if labels is not None:
        code.extend(labels[x] for x in order)
    return tuple(code), order, base


def canonical_form(m: OrientedMap, labels: Sequence | None = None):
    """Minimal BFS code over all outgoing root darts, with the relabeling achieving it.

    ``labels`` optionally decorates vertices (compared after the structure).
    Returns ``(code, order, bases)``.
    """
    if not is_connected(m):
        raise Disconnected("canonical codes are defined for connected maps")
    best = None
    for r in range(0, m.ndarts, 2):
        res = _bfs_code(m, r, labels)
        if best is None or res[0] < best[0]:
            best = res
    return best


def canonical_code(m: OrientedMap, mod_orientation: bool = False, mod_reflection: bool = False,
                   labels: Sequence | None = None) -> str:
    """Isomorphism-invariant string code of a connected map.

    The optional flags quotient by global arrow reversal and by mirror image.
    """
    if m.cycle_graph:
        return "C" if labels is None else "C:" + ",".join(map(str, labels))
    variants = [m]
    if mod_orientation:
        variants.append(reverse_all_arrows(m))
    if mod_reflection:
        variants += [mirror(x) for x in variants]
    codes = [canonical_form(x, labels)[0] for x in variants]
    return _encode(m.v, min(codes))


def _encode(v: int, code: tuple) -> str:
    return f"{v}:" + ".".join(str(c) for c in code)


def canonical_map(m: OrientedMap) -> OrientedMap:
    """The relabeled copy of ``m`` realising its canonical code."""
    if m.cycle_graph:
        return m
    _, order, base = canonical_form(m)
    shifts = []
    for old in order:
        shifts.append(base[old] & 3)
    return relabel_vertices(m, order, shifts)


def to_dot(m: OrientedMap, name: str = "G") -> str:
    """Graphviz text; ports are the local dart positions, arrowheads on IN darts."""
    lines = [f"digraph {name} {{", "  node [shape=circle];"]
    if m.cycle_graph:
        lines.append('  c [shape=point]; c -> c;')
    for d, a in m.edges():
        lines.append(f'  v{vertex_of(d)} -> v{vertex_of(a)} [taillabel="{d % 4}", headlabel="{a % 4}"];')
    lines.append("}")
    return "\n".join(lines)

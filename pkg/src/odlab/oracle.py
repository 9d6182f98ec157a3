"""Exhaustive generation of connected oriented 4-regular maps.

Maps are produced directly in breadth-first normal form: vertex 0 is entered
at its outgoing dart 0, and every newly reached vertex is entered at local
position 0 (outgoing entry) or 1 (incoming entry).  A map is kept only when
that labeling is its canonical one, which makes the search orderly; a final
deduplication by canonical code is kept as a safety net.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from . import maps as M
from . import reduction as R

CORPUS_FORMAT = "odcorpus-v1"
MAX_V = 6


class BoundExceeded(ValueError):
    pass


@dataclass
class CorpusEntry:
    code: str
    map: M.OrientedMap
    inv: M.InvariantSet
    melon_free: bool
    two_pi: bool
    has_tadpole: bool

    def to_json(self) -> dict:
        return {
            "code": self.code,
            "map": self.map.to_json(),
            "invariants": self.inv.as_dict(),
            "melon_free": self.melon_free,
            "two_pi": self.two_pi,
            "tadpole": self.has_tadpole,
        }


@dataclass
class OracleCorpus:
    max_v: int
    entries: list[CorpusEntry] = field(default_factory=list)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def by_v(self, v: int) -> list[CorpusEntry]:
        return [e for e in self.entries if e.inv.v == v]


def bfs_normal_maps(v: int) -> Iterator[tuple[int, ...]]:
    """Yield alpha tuples of every connected map in breadth-first normal form."""
    n = 4 * v
    alpha = [-1] * n

    def first_free(start: int) -> int:
        while start < n and alpha[start] != -1:
            start += 1
        return start

    def rec(d: int, nverts: int):
        d = first_free(d)
        if d >= 4 * nverts:
            if d >= n and nverts == v:
                yield tuple(alpha)
            return
        want_out = not M.is_out(d)
        # partner among darts of already reached vertices
        for a in range(d + 1, 4 * nverts):
            if alpha[a] == -1 and M.is_out(a) == want_out:
                alpha[d], alpha[a] = a, d
                yield from rec(d + 1, nverts)
                alpha[d] = alpha[a] = -1
        if nverts < v:
            a = 4 * nverts + (0 if want_out else 1)
            alpha[d], alpha[a] = a, d
            yield from rec(d + 1, nverts + 1)
            alpha[d] = alpha[a] = -1

    if v == 0:
        return
    yield from rec(0, 1)


def _is_canonical(m: M.OrientedMap) -> bool:
    own = m.alpha
    own_code = tuple(own[d] for d in range(m.ndarts))
    for r in range(2, m.ndarts, 2):
        code, _, _ = M._bfs_code(m, r, None)
        if code < own_code:
            return False
    return True


def enumerate_maps(v: int) -> list[M.OrientedMap]:
    """One representative per isomorphism class of connected maps on ``v`` vertices."""
    if v > MAX_V:
        raise BoundExceeded(f"v={v} exceeds the supported bound {MAX_V}")
    if v < 1:
        raise BoundExceeded("v must be at least 1")
    out = []
    seen = set()
    for alpha in bfs_normal_maps(v):
        m = M.OrientedMap(v, alpha)
        if _is_canonical(m):
            code = M.canonical_code(m)
            if code not in seen:
                seen.add(code)
                out.append(m)
    return out


def naive_classes(v: int) -> set[str]:
    """Canonical codes from all (2v)! OUT-to-IN bijections; for cross-checking only."""
    outs = list(range(0, 4 * v, 2))
    ins = list(range(1, 4 * v, 2))
    codes = set()
    for perm in itertools.permutations(ins):
        m = M.OrientedMap.from_pairs(v, zip(outs, perm))
        if M.is_connected(m):
            codes.add(M.canonical_code(m))
    return codes


# ---------------------------------------------------------------- corpus with flags

def has_tadpole(m: M.OrientedMap) -> bool:
    return any(M.vertex_of(d) == M.vertex_of(m.alpha[d]) for d in range(m.ndarts))


def make_entry(m: M.OrientedMap) -> CorpusEntry:
    rep = M.canonical_map(m)
    return CorpusEntry(M.canonical_code(rep), rep, M.invariants(rep), R.is_melon_free(rep),
                       R.is_2pi(rep), has_tadpole(rep))


def _entries_for(v: int) -> list[CorpusEntry]:
    return sorted((make_entry(m) for m in enumerate_maps(v)), key=lambda e: e.code)


def entry_from_json(data: dict, check: bool = True) -> CorpusEntry:
    m = M.OrientedMap.from_json(data["map"])
    if not check:
        inv = M.invariants(m)
        return CorpusEntry(data["code"], m, inv, data["melon_free"], data["two_pi"], data["tadpole"])
    e = make_entry(m)
    if e.code != data["code"] or e.inv.as_dict() != data["invariants"]:
        raise ValueError(f"corpus entry {data['code']!r} does not reproduce its stored data")
    if (e.melon_free, e.two_pi, e.has_tadpole) != (data["melon_free"], data["two_pi"], data["tadpole"]):
        raise ValueError(f"corpus entry {data['code']!r} has stale flags")
    return e


def cache_dir_default() -> Path | None:
    d = os.environ.get("ODLAB_CACHE")
    return Path(d) if d else None


def _cache_file(cache_dir: Path, v: int) -> Path:
    return Path(cache_dir) / f"{CORPUS_FORMAT}-v{v}.jsonl"


def write_corpus_jsonl(entries: list[CorpusEntry], path: Path, v: int | None = None) -> None:
    """One header line, then one entry per line; written to a temp file and renamed."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w") as fh:
        fh.write(json.dumps({"format": CORPUS_FORMAT, "v": v, "count": len(entries)}, sort_keys=True) + "\n")
        for e in entries:
            fh.write(json.dumps(e.to_json(), sort_keys=True) + "\n")
    os.replace(tmp, path)


def read_corpus_jsonl(path: Path, check: bool = False) -> list[CorpusEntry]:
    with open(path) as fh:
        header = json.loads(fh.readline())
        if header.get("format") != CORPUS_FORMAT:
            raise ValueError(f"{path}: expected format {CORPUS_FORMAT}, found {header.get('format')!r}")
        entries = [entry_from_json(json.loads(line), check) for line in fh if line.strip()]
    if len(entries) != header.get("count"):
        raise ValueError(f"{path}: header announces {header.get('count')} entries, found {len(entries)}")
    return entries


def corpus_for_v(v: int, cache_dir: Path | None = None) -> list[CorpusEntry]:
    """Entries with exactly ``v`` vertices, read from or written to the cache when one is given."""
    if v > MAX_V or v < 1:
        enumerate_maps(v)  # raises BoundExceeded
    if cache_dir is not None:
        f = _cache_file(cache_dir, v)
        if f.exists():
            try:
                return read_corpus_jsonl(f)
            except (ValueError, KeyError, json.JSONDecodeError):
                pass  # rebuild a damaged cache file
        entries = _entries_for(v)
        write_corpus_jsonl(entries, f, v)
        return entries
    return _entries_for(v)


def build_corpus(max_v: int, cache_dir: Path | None = None, jobs: int = 1) -> OracleCorpus:
    """All connected maps with 1..max_v vertices, one entry per class, sorted by (v, code)."""
    if max_v > MAX_V:
        raise BoundExceeded(f"v={max_v} exceeds the supported bound {MAX_V}")
    if max_v < 1:
        raise BoundExceeded("max_v must be at least 1")
    if cache_dir is None:
        cache_dir = cache_dir_default()
    vs = list(range(1, max_v + 1))
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(corpus_for_v, vs, [cache_dir] * len(vs)))
    else:
        parts = [corpus_for_v(v, cache_dir) for v in vs]
    return OracleCorpus(max_v, [e for part in parts for e in part])


def enumerate_all_maps(v: int, cache_dir: Path | None = None) -> OracleCorpus:
    """Corpus of the maps with exactly ``v`` vertices."""
    return OracleCorpus(v, corpus_for_v(v, cache_dir))


# ---------------------------------------------------------------- filtering

def filter_corpus(corpus: Iterable[CorpusEntry], g: int | None = None, ell: int | None = None,
                  phi: int | None = None, v: int | None = None, melon_free: bool | None = None,
                  two_pi: bool | None = None, tadpole: bool | None = None,
                  loop_config: tuple[int, ...] | None = None, mod_orientation: bool = False,
                  mod_reflection: bool = False) -> list[CorpusEntry]:
    """Entries matching every given constraint; the quotient flags keep one entry per merged class."""
    out = []
    for e in corpus:
        i = e.inv
        if g is not None and i.g != g:
            continue
        if ell is not None and i.ell != ell:
            continue
        if phi is not None and i.phi != phi:
            continue
        if v is not None and i.v != v:
            continue
        if melon_free is not None and e.melon_free != melon_free:
            continue
        if two_pi is not None and e.two_pi != two_pi:
            continue
        if tadpole is not None and e.has_tadpole != tadpole:
            continue
        if loop_config is not None and tuple(sorted(loop_config)) != tuple(i.loop_config):
            continue
        out.append(e)
    if mod_orientation or mod_reflection:
        merged: dict[str, CorpusEntry] = {}
        for e in out:
            key = M.canonical_code(e.map, mod_orientation, mod_reflection)
            if key not in merged or e.code < merged[key].code:
                merged[key] = e
        out = sorted(merged.values(), key=lambda e: (e.inv.v, e.code))
    return out


# ---------------------------------------------------------------- loop configuration checks

@dataclass
class LoopConfigReport:
    ell: int
    checked: int = 0
    violations: list[tuple[str, tuple[int, ...]]] = field(default_factory=list)
    configs: dict[tuple[int, ...], int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations


def admissible_loop_config(ell: int, phi: int, config: tuple[int, ...]) -> bool:
    """Membership in the admissible family for a planar map of grade ``ell`` with no loop of length 2."""
    if any(x % 2 for x in config) or len(config) != phi:
        return False
    if ell > phi + 2:
        i = phi - 1
        return 0 <= i <= ell - 4 and sum(config) == 2 * (ell + 2 * i)
    big = [x for x in config if x > 4]
    i = len(big)
    if any(x < 4 for x in config):
        return False
    if i == 0:
        return ell == 2
    return 1 <= i <= ell - 2 and sum(big) == 2 * (ell + 2 * (i - 1))


def check_loop_config_theorem(corpus: Iterable[CorpusEntry], ell: int) -> LoopConfigReport:
    """Check every planar melon-free entry of grade ``ell`` without a loop of length 2."""
    rep = LoopConfigReport(ell)
    for e in corpus:
        i = e.inv
        if i.ell != ell or i.g != 0 or not e.melon_free or 2 in i.loop_config:
            continue
        rep.checked += 1
        rep.configs[i.loop_config] = rep.configs.get(i.loop_config, 0) + 1
        if not admissible_loop_config(ell, i.phi, i.loop_config):
            rep.violations.append((e.code, i.loop_config))
    return rep


def structural_lemma_violations(corpus: Iterable[CorpusEntry]) -> dict[str, list[str]]:
    """Loop-length statements on connected maps, keyed by statement; values list offending codes.

    - ``short_loop_l1_g0``: grade 1, genus 0 forces a straight loop of length 2.
    - ``short_loop_low_grade``: grade at most 3 with genus at least 1 forces one too.
    - ``all_four_l2_g0``: grade 2, genus 0 without such a loop has only loops of length 4.
    - ``one_six_l3_g0``: grade 3, genus 0 without such a loop has loops (4, ..., 4, 6).
    - ``admissible``: the admissible-family membership for melon-free planar maps of grade 4 or more.
    """
    out: dict[str, list[str]] = {k: [] for k in ("short_loop_l1_g0", "short_loop_low_grade",
                                                 "all_four_l2_g0", "one_six_l3_g0", "admissible")}
    for e in corpus:
        i = e.inv
        cfg = i.loop_config
        short = 2 in cfg
        if i.ell == 1 and i.g == 0 and not short:
            out["short_loop_l1_g0"].append(e.code)
        if i.ell <= 3 and i.g >= 1 and not short:
            out["short_loop_low_grade"].append(e.code)
        if i.ell == 2 and i.g == 0 and not short and set(cfg) != {4}:
            out["all_four_l2_g0"].append(e.code)
        if i.ell == 3 and i.g == 0 and not short and sorted(cfg) != [4] * (len(cfg) - 1) + [6]:
            out["one_six_l3_g0"].append(e.code)
        if i.ell >= 4 and i.g == 0 and e.melon_free and not short:
            if not admissible_loop_config(i.ell, i.phi, cfg):
                out["admissible"].append(e.code)
    return out

"""The acceptance suite: each check yields rows of (claim, expected, observed, pass, seconds)."""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable

from . import generation as G
from . import knot as K
from . import maps as M
from . import oracle as O
from . import reduction as R
from .catalog import diff_catalogs, dumps_catalog


@dataclass
class ClaimRow:
    criterion: int
    claim: str
    expected: str
    observed: str
    passed: bool
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return {"criterion": self.criterion, "claim": self.claim, "expected": self.expected,
                "observed": self.observed, "pass": self.passed, "seconds": round(self.seconds, 3)}

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.criterion}. {self.claim}: expected {self.expected}, observed {self.observed}"


# scheme counts to reproduce: (g, ℓ, part) -> count
SCHEME_COUNTS: dict[tuple[int, int, str], int] = {
    (0, 1, "all"): 2,
    (0, 2, "2PI"): 3,
    (0, 2, "2PR"): 27,
    (1, 1, "2PI"): 4,
    (1, 1, "2PR"): 36,
    (1, 2, "2PI"): 42,
    (0, 3, "2PI"): 4,
}

# (g, ℓ, part) keys whose enumerated catalogs must contain every corpus scheme
EXHAUSTIVE_KEYS: tuple[tuple[int, int, str], ...] = (
    (1, 0, "all"), (0, 1, "all"), (0, 2, "all"), (1, 1, "all"), (1, 2, "2PI"), (0, 3, "2PI"),
)

# reduced planar maps with one straight face, mod orientation and reflection
PLANAR_ONE_FACE_COUNTS = {3: 1, 4: 1, 5: 2, 6: 7}

STABILITY_KEYS_FAST = ((0, 1, "all"), (0, 2, "all"), (1, 1, "all"), (0, 3, "2PI"))
STABILITY_KEYS_FULL = STABILITY_KEYS_FAST + ((1, 2, "2PI"),)

MELON_COUNTS = [1, 1, 4, 22, 140]


def _timed(fn: Callable[[], tuple[str, bool]]) -> tuple[str, bool, float]:
    t = time.perf_counter()
    observed, ok = fn()
    return observed, ok, time.perf_counter() - t


# ---------------------------------------------------------------- 1. scheme counts

def scheme_count_rows(en: G.Enumerator) -> list[ClaimRow]:
    rows = []
    for (g, ell, part), want in SCHEME_COUNTS.items():
        t = time.perf_counter()
        n = len(en.get(g, ell, part))
        rows.append(ClaimRow(1, f"schemes (g={g}, ℓ={ell}, {part})", str(want), str(n), n == want,
                             time.perf_counter() - t))
    return rows


# ---------------------------------------------------------------- 2. oracle exhaustiveness

def exhaustiveness_misses(corpus: Iterable[O.CorpusEntry], en: G.Enumerator,
                          keys: Iterable[tuple[int, int, str]] = EXHAUSTIVE_KEYS) -> dict[tuple, list[str]]:
    """Corpus codes, per key, whose scheme is missing from the enumerated catalog."""
    keys = list(keys)
    misses: dict[tuple, list[str]] = {k: [] for k in keys}
    entries = [e for e in corpus if e.melon_free]
    for g, ell, part in keys:
        codes = en.get(g, ell, part).codes()
        for e in entries:
            if (e.inv.g, e.inv.ell) != (g, ell):
                continue
            if part != "all" and e.two_pi != (part == "2PI"):
                continue
            if R.scheme_code(e.map) not in codes:
                misses[(g, ell, part)].append(e.code)
    return misses


def exhaustiveness_rows(corpus: O.OracleCorpus, en: G.Enumerator) -> list[ClaimRow]:
    rows = []
    for key in EXHAUSTIVE_KEYS:
        t = time.perf_counter()
        miss = exhaustiveness_misses(corpus, en, [key])[key]
        g, ell, part = key
        rows.append(ClaimRow(2, f"corpus v≤{corpus.max_v} covered by (g={g}, ℓ={ell}, {part})", "0 misses",
                             f"{len(miss)} misses", not miss, time.perf_counter() - t))
    return rows


# ---------------------------------------------------------------- 3. planar one-face classes

def planar_one_face_classes(entries: Iterable[O.CorpusEntry], ell: int) -> list[O.CorpusEntry]:
    """Reduced (no self-loop) planar maps with one straight face, mod orientation and reflection."""
    return O.filter_corpus(entries, g=0, phi=1, ell=ell, tadpole=False,
                           mod_orientation=True, mod_reflection=True)


def planar_count_rows(entries: list[O.CorpusEntry]) -> list[ClaimRow]:
    rows = []
    for ell, want in PLANAR_ONE_FACE_COUNTS.items():
        t = time.perf_counter()
        n = len(planar_one_face_classes(entries, ell))
        rows.append(ClaimRow(3, f"planar one-face classes ℓ={ell}", str(want), str(n), n == want,
                             time.perf_counter() - t))
    return rows


# ---------------------------------------------------------------- 4. contraction case table

def contraction_violations(corpus: Iterable[O.CorpusEntry]) -> dict[str, int]:
    """Counts of checked objects and of violations for dipoles, ladder rungs and flips."""
    out = {"dipoles": 0, "ladder_rungs": 0, "cuts": 0, "violations": 0}
    for e in corpus:
        m = e.map
        for dp in R.find_dipoles(m):
            out["dipoles"] += 1
            try:
                R.contract_dipole(m, dp)
            except R.CaseTableViolation:
                out["violations"] += 1
        if e.melon_free:
            for lad in R.maximal_ladders(m):
                for k in range(len(lad.rungs)):
                    out["ladder_rungs"] += 1
                    try:
                        R.contract_ladder(m, lad, k)
                    except R.CaseTableViolation:
                        out["violations"] += 1
        i0 = e.inv
        for cut in R.two_edge_cuts(m):
            out["cuts"] += 1
            a, b = (M.invariants(x) for x in R.flip(m, cut))
            if (a.g + b.g, a.ell + b.ell, a.omega + b.omega) != (i0.g, i0.ell, i0.omega):
                out["violations"] += 1
    return out


def contraction_rows(corpus: O.OracleCorpus) -> list[ClaimRow]:
    t = time.perf_counter()
    c = contraction_violations(corpus)
    obs = (f"{c['violations']} violations over {c['dipoles']} dipoles, "
           f"{c['ladder_rungs']} ladder rungs, {c['cuts']} cuts")
    return [ClaimRow(4, f"contraction case table and flip additivity, v≤{corpus.max_v}", "0 violations", obs,
                     c["violations"] == 0, time.perf_counter() - t)]


# ---------------------------------------------------------------- 5. invariant identities

def identity_violations(corpus: Iterable[O.CorpusEntry], melon_checks: bool = True) -> dict[str, int]:
    bad = {"grade_split": 0, "degree": 0, "loop_lengths": 0, "reversal": 0, "melon": 0}
    for e in corpus:
        i = e.inv
        if i.g_L + i.g_R != Fraction(i.ell, 2):
            bad["grade_split"] += 1
        if i.omega != i.g + Fraction(i.ell, 2) or 2 * i.omega != 4 + 2 * i.v - i.f - 2 * i.phi + 2 * i.g:
            bad["degree"] += 1
        if any(x % 2 for x in i.loop_config) or sum(i.loop_config) != i.e:
            bad["loop_lengths"] += 1
        r = M.invariants(M.reverse_all_arrows(e.map))
        if (r.f_L, r.f_R, r.g, r.ell, r.phi) != (i.f_R, i.f_L, i.g, i.ell, i.phi):
            bad["reversal"] += 1
        if melon_checks:
            for d in range(0, e.map.ndarts, 2):
                x = M.invariants(R.insert_melon(e.map, d))
                if (x.g, x.ell, x.omega) != (i.g, i.ell, i.omega):
                    bad["melon"] += 1
            for mel in R.find_melons(e.map):
                x = M.invariants(R.remove_melon(e.map, mel))
                if (x.g, x.ell, x.omega) != (i.g, i.ell, i.omega):
                    bad["melon"] += 1
    return bad


def identity_rows(corpus: O.OracleCorpus) -> list[ClaimRow]:
    t = time.perf_counter()
    bad = identity_violations(corpus)
    n = sum(bad.values())
    obs = f"{n} violations" + ("" if not n else f" {bad}")
    return [ClaimRow(5, f"invariant identities, v≤{corpus.max_v}", "0 violations", obs, n == 0,
                     time.perf_counter() - t)]


# ---------------------------------------------------------------- 6. structural lemmas

def lemma_rows(corpus: O.OracleCorpus) -> list[ClaimRow]:
    t = time.perf_counter()
    found = O.structural_lemma_violations(corpus)
    rows = []
    dt = time.perf_counter() - t
    for name, codes in found.items():
        rows.append(ClaimRow(6, f"loop-length statement {name}, v≤{corpus.max_v}", "0 violations",
                             f"{len(codes)} violations", not codes, dt / len(found)))
    return rows


# ---------------------------------------------------------------- 7. melonic counts

def melon_rows() -> list[ClaimRow]:
    t = time.perf_counter()
    got = R.melonic_counts(len(MELON_COUNTS) - 1)
    return [ClaimRow(7, "rooted melonic two-point graphs, 0..4 melons", str(MELON_COUNTS), str(got),
                     got == MELON_COUNTS, time.perf_counter() - t)]


# ---------------------------------------------------------------- 8. knots

@dataclass
class KnotRecord:
    code: str
    ell: int
    knot: str
    two_pi: bool
    gauss: str


def knot_records(entries: list[O.CorpusEntry], ells: Iterable[int] = (3, 4, 5, 6)) -> list[KnotRecord]:
    out = []
    for ell in ells:
        for e in planar_one_face_classes(entries, ell):
            d = K.to_knot_diagram(e.map)
            out.append(KnotRecord(e.code, ell, K.knot_class_of(d), e.two_pi, d.gauss_string()))
    return out


def knot_rows(entries: list[O.CorpusEntry]) -> list[ClaimRow]:
    t = time.perf_counter()
    recs = knot_records(entries)
    dt = time.perf_counter() - t
    by_ell: dict[int, list[KnotRecord]] = {}
    for r in recs:
        by_ell.setdefault(r.ell, []).append(r)
    rows = []
    neck = K.knot_class_of(K.to_knot_diagram(G.NECKLACE3))
    rows.append(ClaimRow(8, "necklace on 3 vertices", "3_1", neck, neck == "3_1", dt))
    four = sorted(r.knot for r in by_ell.get(4, []))
    rows.append(ClaimRow(8, "the ℓ=4 class", "['4_1']", str(four), four == ["4_1"], 0.0))
    five = sorted(r.knot for r in by_ell.get(5, []))
    rows.append(ClaimRow(8, "the ℓ=5 classes", "['5_1', '5_2']", str(five), five == ["5_1", "5_2"], 0.0))
    six = by_ell.get(6, [])
    primes = {r.knot for r in six if r.knot in ("6_1", "6_2", "6_3") and r.two_pi}
    composite = [r for r in six if r.knot.startswith("3_1#3_1")]
    comp_2pr = bool(composite) and all(not r.two_pi for r in composite)
    prime_2pi = all(r.two_pi for r in six if r.knot in ("6_1", "6_2", "6_3"))
    ok = primes == {"6_1", "6_2", "6_3"} and comp_2pr and prime_2pi
    obs = ", ".join(f"{r.knot}({'2PI' if r.two_pi else '2PR'})" for r in sorted(six, key=lambda r: r.knot))
    rows.append(ClaimRow(8, "ℓ=6 classes: 6_1, 6_2, 6_3 prime and 2PI, a 3_1#3_1 composite 2PR",
                         "6_1, 6_2, 6_3 (2PI) + 3_1#3_1 (2PR)", obs, ok, 0.0))
    return rows


# ---------------------------------------------------------------- 9. stability

def stability_rows(keys: Iterable[tuple[int, int, str]], low: G.Enumerator,
                   high: G.Enumerator) -> list[ClaimRow]:
    rows = []
    for g, ell, part in keys:
        t = time.perf_counter()
        d = diff_catalogs(low.get(g, ell, part), high.get(g, ell, part))
        rows.append(ClaimRow(9, f"rung cap {low.rung_cap} vs {high.rung_cap}, (g={g}, ℓ={ell}, {part})",
                             "empty diff", f"{len(d.only_a)}+{len(d.only_b)} differing", d.empty,
                             time.perf_counter() - t))
    t = time.perf_counter()
    a = dumps_catalog(G.Enumerator(low.rung_cap).get(0, 2, "all"), low.rung_cap)
    b = dumps_catalog(low.get(0, 2, "all"), low.rung_cap)
    rows.append(ClaimRow(9, "repeated (0, 2) catalog run", "byte-identical",
                         "identical" if a == b else "different", a == b, time.perf_counter() - t))
    return rows


# ---------------------------------------------------------------- driver

def run_suite(full: bool = False, cache_dir: Path | None = None, jobs: int = 1,
              progress: Callable[[ClaimRow], None] | None = None) -> list[ClaimRow]:
    """Every acceptance row; ``full`` uses the v≤6 corpus for the sweeps and checks (1,2) stability."""
    rows: list[ClaimRow] = []

    def emit(new: list[ClaimRow]) -> None:
        for r in new:
            rows.append(r)
            if progress:
                progress(r)

    en = G.Enumerator(3)
    emit(scheme_count_rows(en))
    max_v = O.MAX_V if full else 5
    corpus = O.build_corpus(max_v, cache_dir, jobs)
    six = corpus.by_v(6) if full else O.corpus_for_v(6, cache_dir if cache_dir else O.cache_dir_default())
    emit(exhaustiveness_rows(corpus, en))
    emit(planar_count_rows(list(corpus) + ([] if full else six)))
    emit(contraction_rows(corpus))
    emit(identity_rows(corpus))
    emit(lemma_rows(corpus))
    emit(melon_rows())
    emit(knot_rows(list(corpus) + ([] if full else six)))
    keys = STABILITY_KEYS_FULL if full else STABILITY_KEYS_FAST
    emit(stability_rows(keys, en, G.Enumerator(4)))
    return rows

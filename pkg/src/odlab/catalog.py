"""Scheme catalogs on disk: atomic writes, integrity-checked reads and diffs."""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from . import maps as M
from . import reduction as R
from .generation import SchemeEntry, SchemeSet

CATALOG_FORMAT = "odcatalog-v1"


class CatalogError(ValueError):
    pass


class FormatVersionMismatch(CatalogError):
    pass


class CorruptEntry(CatalogError):
    pass


class KeyMismatch(CatalogError):
    pass


def catalog_to_json(s: SchemeSet, rung_cap: int | None = None) -> dict:
    entries = []
    for e in s.sorted():
        entries.append({
            "code": e.code,
            "representative": e.scheme.representative.to_json(),
            "invariants": e.inv.as_dict(),
            "two_pi": e.two_pi,
            "trace": e.trace,
        })
    return {
        "format": CATALOG_FORMAT,
        "generator": f"odlab {__version__}",
        "key": {"g": s.g, "ell": s.ell, "selection": s.selection},
        "rung_cap": rung_cap,
        "entries": entries,
    }


def dumps_catalog(s: SchemeSet, rung_cap: int | None = None) -> str:
    return json.dumps(catalog_to_json(s, rung_cap), sort_keys=True, indent=1) + "\n"


def write_catalog(s: SchemeSet, path: str | Path, rung_cap: int | None = None) -> None:
    """Write to a temp file in the target directory, then rename over the target."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(dumps_catalog(s, rung_cap))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass
class CatalogFile:
    schemes: SchemeSet
    rung_cap: int | None
    generator: str


def catalog_from_json(data: dict) -> CatalogFile:
    if data.get("format") != CATALOG_FORMAT:
        raise FormatVersionMismatch(f"expected {CATALOG_FORMAT}, found {data.get('format')!r}")
    try:
        key = data["key"]
        g, ell, selection = int(key["g"]), int(key["ell"]), key["selection"]
        raw = data["entries"]
    except (KeyError, TypeError, ValueError) as ex:
        raise CatalogError(f"malformed catalog header: {ex}") from ex
    s = SchemeSet(g, ell, selection)
    codes = [e.get("code") for e in raw]
    if codes != sorted(codes) or len(set(codes)) != len(codes):
        raise CorruptEntry("entries are not sorted by code or contain duplicates")
    for item in raw:
        code = item.get("code")
        try:
            rep = M.OrientedMap.from_json(item["representative"])
            M.validate(rep)
            sc = R.scheme_of(rep)
            inv = M.invariants(rep)
            two_pi = R.is_2pi(rep)
        except (M.MapError, R.ReductionError, KeyError, TypeError, ValueError) as ex:
            raise CorruptEntry(f"entry {code!r}: representative does not load: {ex}") from ex
        if sc.code != code:
            raise CorruptEntry(f"entry {code!r}: representative reduces to {sc.code!r}")
        if inv.as_dict() != item.get("invariants") or two_pi != item.get("two_pi"):
            raise CorruptEntry(f"entry {code!r}: stored invariants or flags do not match")
        if (inv.g, inv.ell) != (g, ell):
            raise CorruptEntry(f"entry {code!r} has (g, ℓ)=({inv.g}, {inv.ell}), header says ({g}, {ell})")
        if selection != "all" and two_pi != (selection == "2PI"):
            raise CorruptEntry(f"entry {code!r} does not belong to the {selection} part")
        s.entries[code] = SchemeEntry(code, sc, inv, two_pi, item.get("trace", ""))
    return CatalogFile(s, data.get("rung_cap"), data.get("generator", ""))


def read_catalog_file(path: str | Path) -> CatalogFile:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as ex:
        raise CatalogError(f"{path}: not valid JSON: {ex}") from ex
    return catalog_from_json(data)


def read_catalog(path: str | Path) -> SchemeSet:
    return read_catalog_file(path).schemes


@dataclass
class CatalogDiff:
    only_a: list[str]
    only_b: list[str]
    common: list[str]

    @property
    def empty(self) -> bool:
        return not self.only_a and not self.only_b

    def as_dict(self) -> dict:
        return {"only_a": self.only_a, "only_b": self.only_b, "common": len(self.common)}


def diff_catalogs(a: SchemeSet, b: SchemeSet) -> CatalogDiff:
    """Set difference by code; traces are ignored."""
    if (a.g, a.ell) != (b.g, b.ell):
        raise KeyMismatch(f"(g, ℓ)=({a.g}, {a.ell}) vs ({b.g}, {b.ell})")
    ca, cb = a.codes(), b.codes()
    return CatalogDiff(sorted(ca - cb), sorted(cb - ca), sorted(ca & cb))

import json

import pytest

from odlab import catalog as C
from odlab import generation as G


def test_round_trip_planar_grade_two(enumerator, tmp_path):
    s = enumerator.get(0, 2)
    f = tmp_path / "c.json"
    C.write_catalog(s, f, rung_cap=3)
    back = C.read_catalog_file(f)
    assert len(back.schemes) == 30
    assert back.schemes.codes() == s.codes()
    assert back.rung_cap == 3
    assert back.generator.startswith("odlab")
    assert C.dumps_catalog(back.schemes, 3) == f.read_text()


def test_write_leaves_no_temp_files(enumerator, tmp_path):
    C.write_catalog(enumerator.get(0, 1), tmp_path / "c.json")
    assert [p.name for p in tmp_path.iterdir()] == ["c.json"]


def test_empty_catalog_round_trip():
    s = G.SchemeSet(0, 2, "all")
    back = C.catalog_from_json(json.loads(C.dumps_catalog(s)))
    assert len(back.schemes) == 0


def _tampered(enumerator, edit):
    data = C.catalog_to_json(enumerator.get(0, 2))
    edit(data)
    return data


def test_changed_invariants_are_rejected(enumerator):
    data = _tampered(enumerator, lambda d: d["entries"][0]["invariants"].update(phi=99))
    with pytest.raises(C.CorruptEntry):
        C.catalog_from_json(data)


def test_wrong_code_is_rejected(enumerator):
    def edit(d):
        d["entries"][0]["representative"] = d["entries"][1]["representative"]
    with pytest.raises(C.CorruptEntry):
        C.catalog_from_json(_tampered(enumerator, edit))


def test_unsorted_entries_are_rejected(enumerator):
    data = _tampered(enumerator, lambda d: d["entries"].reverse())
    with pytest.raises(C.CorruptEntry):
        C.catalog_from_json(data)


def test_broken_representative_is_rejected(enumerator):
    def edit(d):
        d["entries"][0]["representative"]["alpha"] = [[0, 2]]
    with pytest.raises(C.CorruptEntry):
        C.catalog_from_json(_tampered(enumerator, edit))


def test_wrong_header_key_is_rejected(enumerator):
    data = _tampered(enumerator, lambda d: d["key"].update(ell=3))
    with pytest.raises(C.CorruptEntry):
        C.catalog_from_json(data)


def test_wrong_part_is_rejected(enumerator):
    data = C.catalog_to_json(enumerator.get(0, 2, "2PR"))
    data["key"]["selection"] = "2PI"
    with pytest.raises(C.CorruptEntry):
        C.catalog_from_json(data)


def test_format_mismatch(enumerator):
    data = _tampered(enumerator, lambda d: d.update(format="odcatalog-v0"))
    with pytest.raises(C.FormatVersionMismatch):
        C.catalog_from_json(data)


def test_invalid_json_file(tmp_path):
    f = tmp_path / "bad.json"
    f.write_text("{")
    with pytest.raises(C.CatalogError):
        C.read_catalog(f)


def test_diff_two_pi_against_all(enumerator):
    d = C.diff_catalogs(enumerator.get(1, 1, "2PI"), enumerator.get(1, 1, "all"))
    assert d.only_a == [] and len(d.only_b) == 36 and len(d.common) == 4
    assert not d.empty
    assert d.as_dict()["common"] == 4


def test_self_diff_is_empty(enumerator):
    s = enumerator.get(0, 2)
    assert C.diff_catalogs(s, s).empty


def test_diff_key_mismatch(enumerator):
    with pytest.raises(C.KeyMismatch):
        C.diff_catalogs(enumerator.get(0, 2), enumerator.get(1, 1))

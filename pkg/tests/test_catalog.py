"""Catalog entries: validation on load, JSON round-trip, schema shape."""

import json

import pytest

from fdegcheck.catalog import catalog, catalog_names, entry_from_json_dict, get_entry
from fdegcheck.errors import InvalidInputError
from fdegcheck.rootdata import relative_root_system


def test_catalog_has_six_plus_entries():
    names = catalog_names()
    assert len(names) >= 6
    assert len(set(names)) == len(names)
    for required in ("SL2", "A2", "B2", "SU3", "SU3-ramified", "U4", "ResSL2"):
        assert required in names


def test_unknown_entry():
    with pytest.raises(InvalidInputError):
        get_entry("E8")


def test_entries_validate_and_have_relative_systems():
    for e in catalog():
        rel = relative_root_system(e.galois)
        assert rel
        positives = [r for r in rel if r.sign > 0]
        labels = {lab for lab, _ in e.galois.orbit_fields}
        assert labels == {r.label for r in positives}


def test_json_round_trip():
    for e in catalog():
        doc = json.loads(e.to_json())
        back = entry_from_json_dict(doc)
        assert back.galois.absolute == e.galois.absolute
        assert back.galois.inertia.matrix == e.galois.inertia.matrix
        assert back.galois.frobenius.matrix == e.galois.frobenius.matrix
        assert back.galois.orbit_fields == e.galois.orbit_fields
        assert back.parameters == e.parameters


def test_json_schema_fields():
    doc = get_entry("U4").to_json_dict()
    for key in (
        "name",
        "lattice_rank",
        "roots",
        "coroots",
        "pairing",
        "base",
        "inertia_perm",
        "frobenius_perm",
        "orbit_fields",
        "torus_filtration",
    ):
        assert key in doc
    assert all(isinstance(x, int) for row in doc["pairing"] for x in row)
    for of in doc["orbit_fields"]:
        assert set(of) >= {"label", "e", "f", "filtration"}


def test_json_exact_integers_only():
    for e in catalog():
        text = e.to_json()
        assert "." not in json.dumps(json.loads(text)["roots"])
        parsed = json.loads(text)
        def walk(x):
            if isinstance(x, float):
                raise AssertionError("float leaked into catalog JSON")
            if isinstance(x, dict):
                for v in x.values():
                    walk(v)
            if isinstance(x, list):
                for v in x:
                    walk(v)
        walk(parsed)

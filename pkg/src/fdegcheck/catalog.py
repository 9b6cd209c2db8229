"""Built-in group catalog: split SL2/A2/B2, SU3 (unramified and tame ramified),
U4 (unramified quadratic), and Res_{E/F} SL2 (unramified quadratic).

Entries use root-lattice presentations (X-basis = simple roots, pairing =
Cartan matrix); the Galois action is given by base permutations, which is
exactly what the JSON schema carries.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import InvalidInputError
from .hecke import ParameterFunction
from .rootdata import (
    BasedRootDatum,
    DiagramAutomorphism,
    FieldExtensionData,
    GaloisRootData,
    automorphism_from_base_perm,
    build_root_datum_from_cartan,
    identity_automorphism,
)

SPLIT = FieldExtensionData(e=1, f=1, filtration=(1,))
UNRAMIFIED_QUADRATIC = FieldExtensionData(e=1, f=2, filtration=(1,))
TAME_QUADRATIC = FieldExtensionData(e=2, f=1, filtration=(2, 1))
WILD_QUADRATIC = FieldExtensionData(e=2, f=1, filtration=(2, 2, 1))


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    galois: GaloisRootData
    parameters: ParameterFunction
    notes: str

    def to_json_dict(self) -> dict:
        g = self.galois
        return {
            "name": self.name,
            "lattice_rank": g.absolute.rank,
            "roots": [list(r) for r in g.absolute.roots],
            "coroots": [list(r) for r in g.absolute.coroots],
            "pairing": [list(r) for r in g.absolute.pairing],
            "base": list(g.absolute.base),
            "inertia_perm": list(g.inertia.base_perm),
            "frobenius_perm": list(g.frobenius.base_perm),
            "orbit_fields": [
                {"label": lab, **ext.to_json()} for lab, ext in g.orbit_fields
            ],
            "torus_filtration": g.torus_filtration.to_json(),
            "lambda": {str(k): v for k, v in self.parameters.lam},
            "lambda_star": {str(k): v for k, v in self.parameters.lam_star},
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)


def entry_from_json_dict(doc: dict) -> CatalogEntry:
    datum = BasedRootDatum(
        rank=int(doc["lattice_rank"]),
        roots=tuple(tuple(int(x) for x in r) for r in doc["roots"]),
        coroots=tuple(tuple(int(x) for x in r) for r in doc["coroots"]),
        pairing=tuple(tuple(int(x) for x in r) for r in doc["pairing"]),
        base=tuple(int(i) for i in doc["base"]),
    )
    inertia = _perm_automorphism(datum, doc["inertia_perm"], "inertia")
    frobenius = _perm_automorphism(datum, doc["frobenius_perm"], "frobenius")
    galois = GaloisRootData(
        name=doc["name"],
        absolute=datum,
        inertia=inertia,
        frobenius=frobenius,
        orbit_fields=tuple(
            (of["label"], FieldExtensionData.from_json(of)) for of in doc["orbit_fields"]
        ),
        torus_filtration=FieldExtensionData.from_json(doc["torus_filtration"]),
    )
    params = ParameterFunction.from_dicts(
        {int(k): int(v) for k, v in doc["lambda"].items()},
        {int(k): int(v) for k, v in doc["lambda_star"].items()},
    )
    return CatalogEntry(
        name=doc["name"], galois=galois, parameters=params, notes=doc.get("notes", "")
    )


def _perm_automorphism(datum: BasedRootDatum, perm, label: str) -> DiagramAutomorphism:
    perm = tuple(int(p) for p in perm)
    if perm == tuple(range(len(datum.base))):
        return identity_automorphism(datum)
    return automorphism_from_base_perm(datum, perm, label)


def _split_entry(name: str, cartan, labels, lam=None, notes: str = "") -> CatalogEntry:
    datum = build_root_datum_from_cartan(cartan)
    ident = identity_automorphism(datum)
    galois = GaloisRootData(
        name=name,
        absolute=datum,
        inertia=ident,
        frobenius=ident,
        orbit_fields=tuple((lab, SPLIT) for lab in labels),
        torus_filtration=SPLIT,
    )
    lam = lam or {k: 1 for k in range(len(datum.base))}
    params = ParameterFunction.from_dicts(lam, dict(lam))
    return CatalogEntry(name=name, galois=galois, parameters=params, notes=notes)


def _build_catalog() -> tuple[CatalogEntry, ...]:
    entries = []
    entries.append(
        _split_entry(
            "SL2", ((2,),), ("alpha",), notes="split rank one, root-lattice model"
        )
    )
    entries.append(
        _split_entry(
            "A2",
            ((2, -1), (-1, 2)),
            ("alpha", "beta", "alpha+beta"),
            notes="split type A2",
        )
    )
    entries.append(
        _split_entry(
            "B2",
            ((2, -2), (-1, 2)),
            ("alpha", "beta", "alpha+beta", "alpha+2beta"),
            notes="split type B2 (alpha long)",
        )
    )

    a2 = build_root_datum_from_cartan(((2, -1), (-1, 2)))
    flip2 = automorphism_from_base_perm(a2, (1, 0), "flip")
    entries.append(
        CatalogEntry(
            name="SU3",
            galois=GaloisRootData(
                name="SU3",
                absolute=a2,
                inertia=identity_automorphism(a2),
                frobenius=flip2,
                orbit_fields=(("alpha", UNRAMIFIED_QUADRATIC), ("2alpha", SPLIT)),
                torus_filtration=UNRAMIFIED_QUADRATIC,
            ),
            parameters=ParameterFunction.from_dicts({0: 2}, {0: 1}),
            notes="quasi-split special unitary group, unramified quadratic; relative type BC1",
        )
    )
    entries.append(
        CatalogEntry(
            name="SU3-ramified",
            galois=GaloisRootData(
                name="SU3-ramified",
                absolute=a2,
                inertia=flip2,
                frobenius=identity_automorphism(a2),
                orbit_fields=(("alpha", TAME_QUADRATIC), ("2alpha", SPLIT)),
                torus_filtration=TAME_QUADRATIC,
            ),
            parameters=ParameterFunction.from_dicts({0: 2}, {0: 1}),
            notes="tame ramified quadratic twist of SU3; nonzero different on the alpha orbit",
        )
    )

    a3 = build_root_datum_from_cartan(((2, -1, 0), (-1, 2, -1), (0, -1, 2)))
    flip3 = automorphism_from_base_perm(a3, (2, 1, 0), "flip")
    entries.append(
        CatalogEntry(
            name="U4",
            galois=GaloisRootData(
                name="U4",
                absolute=a3,
                inertia=identity_automorphism(a3),
                frobenius=flip3,
                orbit_fields=(
                    ("alpha", UNRAMIFIED_QUADRATIC),
                    ("beta", SPLIT),
                    ("alpha+beta", UNRAMIFIED_QUADRATIC),
                    ("2alpha+beta", SPLIT),
                ),
                torus_filtration=UNRAMIFIED_QUADRATIC,
            ),
            parameters=ParameterFunction.from_dicts({0: 2, 1: 1}, {0: 2, 1: 2}),
            notes="quasi-split unitary group in four variables, unramified quadratic; relative type C2",
        )
    )

    a11 = build_root_datum_from_cartan(((2, 0), (0, 2)))
    swap = automorphism_from_base_perm(a11, (1, 0), "swap")
    entries.append(
        CatalogEntry(
            name="ResSL2",
            galois=GaloisRootData(
                name="ResSL2",
                absolute=a11,
                inertia=identity_automorphism(a11),
                frobenius=swap,
                orbit_fields=(("alpha", UNRAMIFIED_QUADRATIC),),
                torus_filtration=UNRAMIFIED_QUADRATIC,
            ),
            parameters=ParameterFunction.from_dicts({0: 2}, {0: 2}),
            notes="restriction of scalars of SL2 along the unramified quadratic",
        )
    )
    return tuple(entries)


_CATALOG = None


def catalog() -> tuple[CatalogEntry, ...]:
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = _build_catalog()
    return _CATALOG


def catalog_names() -> tuple[str, ...]:
    return tuple(e.name for e in catalog())


def get_entry(name: str) -> CatalogEntry:
    for e in catalog():
        if e.name == name:
            return e
    raise InvalidInputError(f"unknown catalog group {name!r}; known: {', '.join(catalog_names())}")


# named conductor instances used in examples and acceptance checks
U4_EXAMPLE_CONDUCTORS = {"alpha": 1, "beta": 0, "alpha+beta": 0, "2alpha+beta": 0}
SL2_C2_CONDUCTORS = {"alpha": 2}

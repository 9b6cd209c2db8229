"""Depth function, concavity, type descriptors, galleries, admissible sampling."""

import random

import pytest

from fdegcheck.catalog import get_entry
from fdegcheck.conductors import (
    ConductorAssignment,
    build_negative_cone_walk,
    depth_function,
    gallery_shifted_family,
    is_concave,
    iwahori_profile,
    sample_admissible_assignment,
    type_descriptor,
)
from fdegcheck.errors import InvalidInputError
from fdegcheck.rootdata import relative_root_system

SL2 = get_entry("SL2").galois
A2 = get_entry("A2").galois
B2 = get_entry("B2").galois
SU3 = get_entry("SU3").galois
U4 = get_entry("U4").galois

CATALOG_NAMES = ("SL2", "A2", "B2", "SU3", "SU3-ramified", "U4", "ResSL2")


def rel(g):
    return relative_root_system(g)


def test_depth_function_zero_conductor_is_iwahori():
    for name in CATALOG_NAMES:
        g = get_entry(name).galois
        r = rel(g)
        zero = ConductorAssignment.from_dict(
            {x.label: 0 for x in r if x.sign > 0 and not x.divisible}
        )
        f = depth_function(zero, r)
        for x in r:
            if x.divisible:
                assert f.of(x) == (0 if x.sign > 0 else 1)
            elif x.sign > 0:
                assert f.of(x) == 0
            else:
                assert f.of(x) == 1
        assert f.as_dict() == iwahori_profile(r).as_dict()


def test_depth_function_case_values():
    r = rel(SL2)
    f = depth_function(ConductorAssignment.from_dict({"alpha": 5}), r)
    assert f.of("alpha") == 2
    assert f.of("-alpha") == 3
    f2 = depth_function(ConductorAssignment.from_dict({"alpha": 2}), r)
    # the formula gives max(1, floor(3/2)) = 1 on the negative root
    assert f2.of("alpha") == 1 and f2.of("-alpha") == 1


def test_depth_function_divisible():
    r = rel(SU3)
    for c in (0, 3, 7):
        f = depth_function(ConductorAssignment.from_dict({"alpha": c}), r)
        assert f.of("2alpha") == 0
        assert f.of("-2alpha") == 1
        ok, _ = is_concave(f, r)
        assert ok


def test_depth_function_missing_class():
    with pytest.raises(InvalidInputError):
        depth_function(ConductorAssignment.from_dict({}), rel(SL2))


def test_depth_monotone_in_c():
    r = rel(B2)
    rng = random.Random(5)
    for _ in range(50):
        c1 = sample_admissible_assignment(r, rng, 5)
        bumped = {k: v + 1 for k, v in c1.as_dict().items()}
        c2 = ConductorAssignment.from_dict(bumped)
        ok, _ = c2.is_admissible(r)
        if not ok:
            continue
        f1, f2 = depth_function(c1, r), depth_function(c2, r)
        for x in r:
            assert f2.of(x) >= f1.of(x)


def test_is_concave_inadmissible_witness():
    r = rel(A2)
    bad = ConductorAssignment.from_dict({"alpha": 0, "beta": 0, "alpha+beta": 4})
    ok, witness = bad.is_admissible(r)
    assert not ok
    f = depth_function(bad, r)
    ok, witness = is_concave(f, r)
    assert not ok and witness is not None


def test_b2_admissible_random_concave():
    r = rel(B2)
    rng = random.Random(11)
    for _ in range(200):
        c = sample_admissible_assignment(r, rng, 6)
        ok, witness = is_concave(depth_function(c, r), r)
        assert ok, (c.as_dict(), witness)


def test_type_descriptor():
    r = rel(SL2)
    td = type_descriptor(ConductorAssignment.from_dict({"alpha": 0}), r, label="iwahori")
    assert td.torus_depth == 0
    assert td.root_depths.of("alpha") == 0 and td.root_depths.of("-alpha") == 1
    td2 = type_descriptor(ConductorAssignment.from_dict({"alpha": 2}), r)
    assert td2.root_depths.of("alpha") == 1
    r4 = rel(U4)
    td3 = type_descriptor(
        ConductorAssignment.from_dict(
            {"alpha": 1, "beta": 0, "alpha+beta": 0, "2alpha+beta": 0}
        ),
        r4,
    )
    assert td3.root_depths.of("alpha") == 0 and td3.root_depths.of("-alpha") == 1
    assert td3.root_depths.of("beta") == 0 and td3.root_depths.of("-beta") == 1


def test_type_descriptor_rejects_nonconcave():
    r = rel(A2)
    bad = ConductorAssignment.from_dict({"alpha": 0, "beta": 0, "alpha+beta": 4})
    with pytest.raises(InvalidInputError):
        type_descriptor(bad, r)


def test_linear_shift_preserves_concavity():
    """f + <., v> stays concave for any integral-pairing shift."""
    r = rel(B2)
    datum = B2.absolute
    rng = random.Random(3)
    for _ in range(25):
        c = sample_admissible_assignment(r, rng, 4)
        f = depth_function(c, r)
        vec = (rng.randint(-3, 3), rng.randint(-3, 3))
        shifted = f.shifted(r, lambda x: sum(a * b for a, b in zip(x.restriction, _functional(datum, vec))))
        ok, witness = is_concave(shifted, r)
        assert ok, witness


def _functional(datum, y):
    n = datum.rank
    return tuple(
        sum(datum.pairing[i][j] * y[j] for j in range(n)) for i in range(n)
    )


def test_gallery_walk_b2():
    walk = build_negative_cone_walk(B2.absolute, steps=8)
    assert len(walk.points) == 9
    planes = set()
    for idx, level in walk.reflections:
        planes.add((idx, level))
    assert len(planes) == 8
    fam = gallery_shifted_family(iwahori_profile(rel(B2)), walk, rel(B2))
    assert len(fam) == 9


def test_gallery_walk_step_support():
    """Consecutive profiles differ exactly on the roots crossing the mirror."""
    walk = build_negative_cone_walk(B2.absolute, steps=8)
    r = rel(B2)
    fam = gallery_shifted_family(iwahori_profile(r), walk, r)
    datum = B2.absolute
    for i in range(1, len(fam)):
        ridx, _ = walk.reflections[i - 1]
        coroot = datum.coroots[ridx]
        for x in r:
            changed = fam[i].of(x) != fam[i - 1].of(x)
            crosses = datum.pair(x.restriction, coroot) != 0
            assert changed == crosses


def test_gallery_walk_length_zero():
    walk = build_negative_cone_walk(B2.absolute, steps=0)
    r = rel(B2)
    fam = gallery_shifted_family(iwahori_profile(r), walk, r)
    assert len(fam) == 1
    assert fam[0].as_dict() == iwahori_profile(r).as_dict()


def test_gallery_walk_a1_monotone():
    g = get_entry("SL2").galois
    r = rel(g)
    walk = build_negative_cone_walk(g.absolute, steps=3)
    fam = gallery_shifted_family(iwahori_profile(r), walk, r)
    vals = [f.of("-alpha") for f in fam]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_sampler_closure_rule():
    r = rel(B2)
    rng = random.Random(1)
    for _ in range(100):
        c = sample_admissible_assignment(r, rng, 8)
        ok, _ = c.is_admissible(r)
        assert ok

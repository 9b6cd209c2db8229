"""Affine Hecke multiplication, crossed products, graded algebra, parameter degeneration."""

import random
from fractions import Fraction

import pytest

from fdegcheck.errors import UnsupportedInputError
from fdegcheck.hecke import (
    GradedHeckeAlgebra,
    HeckeAlgebra,
    HeckeElement,
    MPoly,
    ParameterFunction,
    TorusPoint,
    degenerate_parameters,
    free_graded_parameters,
    twist_element,
    verify_relations,
)
from fdegcheck.qlaurent import QLaurent
from fdegcheck.rootdata import (
    DiagramAutomorphismGroup,
    automorphism_from_base_perm,
    build_root_datum_from_cartan,
    enumerate_weyl_group,
    identity_automorphism,
)

A1 = build_root_datum_from_cartan(((2,),))
A2 = build_root_datum_from_cartan(((2, -1), (-1, 2)))
B2 = build_root_datum_from_cartan(((2, -2), (-1, 2)))
A1xA1 = build_root_datum_from_cartan(((2, 0), (0, 2)))


def test_identity_is_neutral():
    alg = HeckeAlgebra(A2, ParameterFunction.equal_parameters(A2))
    e = alg.identity_element()
    w = alg.from_word([0, 1, 0])
    assert alg.multiply(alg.basis(e), alg.basis(w)) == alg.basis(w)
    assert alg.multiply(alg.basis(w), alg.basis(e)) == alg.basis(w)


def test_lengths_add_gives_single_term():
    alg = HeckeAlgebra(A2, ParameterFunction.equal_parameters(A2))
    s1, s2 = alg.simples[0].element, alg.simples[1].element
    prod = alg.multiply(alg.basis(s1), alg.basis(s2))
    assert prod == HeckeElement({s1.compose(s2): QLaurent.one()})


def test_quadratic_standard():
    alg = HeckeAlgebra(A1, ParameterFunction.from_dicts({0: 3}, {0: 3}))
    s = alg.simples[0].element
    prod = alg.multiply(alg.basis(s), alg.basis(s))
    expected = HeckeElement(
        {alg.identity_element(): QLaurent.one(), s: QLaurent({3: 1, -3: -1})}
    )
    assert prod == expected


def test_quadratic_as_printed():
    alg = HeckeAlgebra(A1, ParameterFunction.from_dicts({0: 3}, {0: 3}), normalization="as-printed")
    s = alg.simples[0].element
    prod = alg.multiply(alg.basis(s), alg.basis(s))
    assert prod == HeckeElement({alg.identity_element(): QLaurent({6: 1})})


def test_crossed_product_swap():
    swap = automorphism_from_base_perm(A1xA1, (1, 0), "swap")
    gamma = DiagramAutomorphismGroup.generate(A1xA1, (swap,))
    alg = HeckeAlgebra(A1xA1, ParameterFunction.equal_parameters(A1xA1), gamma=gamma)
    s1 = alg.simples[0].element
    g = twist_element(swap)
    n_s1g = alg.basis(s1.compose(g))
    sq = alg.multiply(n_s1g, n_s1g)
    s1s2 = s1.compose(alg.simples[1].element)
    assert sq == HeckeElement({s1s2: QLaurent.one()})


def test_crossed_product_conjugation():
    swap = automorphism_from_base_perm(A1xA1, (1, 0), "swap")
    gamma = DiagramAutomorphismGroup.generate(A1xA1, (swap,))
    alg = HeckeAlgebra(A1xA1, ParameterFunction.equal_parameters(A1xA1), gamma=gamma)
    g = twist_element(swap)
    s1, s2 = alg.simples[0].element, alg.simples[1].element
    lhs = alg.multiply(alg.multiply(alg.basis(g), alg.basis(s1)), alg.basis(g))
    assert lhs == alg.basis(s2)


def test_trivial_gamma_reduces_to_plain_product():
    gamma = DiagramAutomorphismGroup.generate(A2, (identity_automorphism(A2),))
    plain = HeckeAlgebra(A2, ParameterFunction.equal_parameters(A2))
    crossed = HeckeAlgebra(A2, ParameterFunction.equal_parameters(A2), gamma=gamma)
    rng = random.Random(0)
    for _ in range(20):
        u = plain.from_word([rng.randrange(3) for _ in range(rng.randint(0, 4))])
        v = plain.from_word([rng.randrange(3) for _ in range(rng.randint(0, 4))])
        assert plain.multiply(plain.basis(u), plain.basis(v)) == crossed.multiply(
            crossed.basis(u), crossed.basis(v)
        )


def test_specialization_v1_group_algebra():
    alg = HeckeAlgebra(B2, ParameterFunction.from_dicts({0: 2, 1: 1}, {0: 2, 1: 1}))
    rng = random.Random(2)
    for _ in range(40):
        u = alg.from_word([rng.randrange(3) for _ in range(rng.randint(0, 4))])
        v = alg.from_word([rng.randrange(3) for _ in range(rng.randint(0, 4))])
        prod = alg.multiply(alg.basis(u), alg.basis(v))
        spec = {g: c.evaluate_at_one() for g, c in prod.terms.items()}
        spec = {g: c for g, c in spec.items() if c != 0}
        assert spec == {u.compose(v): Fraction(1)}


def test_unequal_lambda_star_needs_even_coroot():
    with pytest.raises(Exception):
        HeckeAlgebra(A2, ParameterFunction.from_dicts({0: 1}, {0: 2}))


def test_verify_relations_pass():
    for datum, params in (
        (A1, ParameterFunction.equal_parameters(A1)),
        (A2, ParameterFunction.equal_parameters(A2)),
        (B2, ParameterFunction.from_dicts({0: 2, 1: 1}, {0: 2, 1: 1})),
    ):
        reports = verify_relations(datum, params, sample_budget=40, seed=1)
        assert all(r.passed for r in reports), [r.text_line() for r in reports if not r.passed]


def test_verify_relations_as_printed():
    reports = verify_relations(
        A2, ParameterFunction.equal_parameters(A2), sample_budget=30, seed=1, normalization="as-printed"
    )
    assert all(r.passed for r in reports)


def test_verify_relations_mutation_detected():
    def corrupt(elem):
        if len(elem) >= 2:
            g = sorted(elem.terms, key=str)[0]
            t = dict(elem.terms)
            t[g] = t[g] + QLaurent.one()
            return HeckeElement(t)
        return elem

    reports = verify_relations(
        A2, ParameterFunction.equal_parameters(A2), sample_budget=30, seed=1, mutation=corrupt
    )
    failed = [r for r in reports if not r.passed]
    assert failed and any(r.witness for r in failed)


def test_graded_cross_relation_a1():
    gamma = DiagramAutomorphismGroup.generate(A1, (identity_automorphism(A1),))
    k = free_graded_parameters(A1, gamma)
    G = GradedHeckeAlgebra(A1, k, gamma)
    s = G.simple_generator(0)
    x = G.coordinate_generator(0)
    lhs = G.multiply(s, x)
    smat = A1.reflection_matrix(A1.base[0])
    expected = GradedHeckeElement_from(G, smat, G.apply_weyl_to_poly(smat, G.coord(0)))
    expected = expected + G.polynomial_element(k.of(0) * Fraction(2))
    assert lhs == expected


def GradedHeckeElement_from(G, mat, poly):
    from fdegcheck.hecke import GradedHeckeElement

    return GradedHeckeElement({mat: poly})


def test_graded_w_invariant_sum_commutes():
    gamma = DiagramAutomorphismGroup.generate(A2, (identity_automorphism(A2),))
    k = free_graded_parameters(A2, gamma)
    G = GradedHeckeAlgebra(A2, k, gamma)
    sym = MPoly(G.nvars)
    for w in enumerate_weyl_group(A2):
        sym = sym + G.apply_weyl_to_poly(w.matrix, G.coord(0))
    elem = G.polynomial_element(sym)
    for j in (0, 1):
        s = G.simple_generator(j)
        assert G.multiply(elem, s) == G.multiply(s, elem)
    x = G.coordinate_generator(0)
    assert G.multiply(elem, x) == G.multiply(x, elem)


def test_graded_pbw_all_products_rank2():
    gamma = DiagramAutomorphismGroup.generate(A2, (identity_automorphism(A2),))
    G = GradedHeckeAlgebra(A2, free_graded_parameters(A2, gamma), gamma)
    gens = [G.simple_generator(0), G.simple_generator(1), G.coordinate_generator(0)]
    for a in gens:
        for b in gens:
            for c in gens:
                assert G.multiply(G.multiply(a, b), c) == G.multiply(a, G.multiply(b, c))


def test_graded_alternative_word_agrees():
    gamma = DiagramAutomorphismGroup.generate(A2, (identity_automorphism(A2),))
    G = GradedHeckeAlgebra(A2, free_graded_parameters(A2, gamma), gamma)
    w0 = max(enumerate_weyl_group(A2), key=lambda w: w.length)
    elem = G.group_element(w0)
    target = G.coordinate_generator(0)
    assert G.multiply(elem, target) == G.multiply(elem, target, word_choice="reversed-braid")


def test_degenerate_parameters_examples():
    gamma = DiagramAutomorphismGroup.generate(A1, (identity_automorphism(A1),))
    eq = ParameterFunction.equal_parameters(A1)
    u_plus = TorusPoint.make(unitary=[0])
    u_minus = TorusPoint.make(unitary=[Fraction(1, 2)])
    k1 = degenerate_parameters(A1, gamma, eq, u_plus)
    assert k1.of(0) == MPoly(2, {(0, 1): Fraction(1)})  # log q
    k2 = degenerate_parameters(A1, gamma, eq, u_minus)
    assert k2.of(0).is_zero()
    mixed = ParameterFunction.from_dicts({0: 2}, {0: 1})
    k3 = degenerate_parameters(A1, gamma, mixed, u_minus)
    assert k3.of(0) == MPoly(2, {(0, 1): Fraction(1, 2)})  # (2-1)/2 log q


def test_degenerate_parameters_rejects_roots_of_unity():
    gamma = DiagramAutomorphismGroup.generate(A1, (identity_automorphism(A1),))
    eq = ParameterFunction.equal_parameters(A1)
    u = TorusPoint.make(unitary=[Fraction(1, 3)])
    with pytest.raises(UnsupportedInputError):
        degenerate_parameters(A1, gamma, eq, u)


def test_isotropy_to_graded_data_flow():
    """R_u from the isotropy decomposition feeds a graded datum with k_u."""
    from fdegcheck.rootdata import isotropy_decomposition

    gamma = DiagramAutomorphismGroup.generate(A2, (identity_automorphism(A2),))
    u = TorusPoint.make(unitary=[0, Fraction(1, 2)])
    dec = isotropy_decomposition(A2, gamma, u)
    fixed = {A2.roots[i] for i in dec.r_t}
    assert fixed == {(1, 0), (-1, 0)}
    sub = build_root_datum_from_cartan(((2,),))
    sub_gamma = DiagramAutomorphismGroup.generate(sub, (identity_automorphism(sub),))
    ku = degenerate_parameters(
        sub, sub_gamma, ParameterFunction.equal_parameters(sub), TorusPoint.make(unitary=[0])
    )
    G = GradedHeckeAlgebra(sub, ku, sub_gamma)
    s = G.simple_generator(0)
    x = G.coordinate_generator(0)
    assert G.multiply(G.multiply(s, x), x) == G.multiply(s, G.multiply(x, x))

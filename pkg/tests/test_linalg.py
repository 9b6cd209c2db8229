"""Exact matrix kernels: Smith normal form, inverses, kernels."""

from fractions import Fraction

from hypothesis import given, settings, strategies as st

from fdegcheck import linalg

small_mats = st.integers(1, 4).flatmap(
    lambda n: st.integers(1, 4).flatmap(
        lambda m: st.lists(
            st.lists(st.integers(-9, 9), min_size=m, max_size=m), min_size=n, max_size=n
        ).map(lambda rows: tuple(tuple(r) for r in rows))
    )
)


@settings(max_examples=120)
@given(small_mats)
def test_snf_transform_identity(a):
    d, u, v = linalg.smith_normal_form(a)
    assert linalg.mat_mul(linalg.mat_mul(u, a), v) == d
    assert abs(linalg.det(u)) == 1
    assert abs(linalg.det(v)) == 1
    k = min(len(d), len(d[0]))
    diag = [d[i][i] for i in range(k)]
    for i in range(len(d)):
        for j in range(len(d[0])):
            if i != j:
                assert d[i][j] == 0
    nonzero = [x for x in diag if x != 0]
    for x, y in zip(nonzero, nonzero[1:]):
        assert y % x == 0
    assert all(x >= 0 for x in diag)


def test_inverse_and_kernel():
    m = ((2, 1), (1, 1))
    inv = linalg.mat_inverse_int(m)
    assert linalg.mat_mul(m, inv) == linalg.mat_identity(2)
    rows = ((1, 2, 3), (2, 4, 6))
    basis = linalg.rat_kernel_basis(rows)
    assert len(basis) == 2
    for v in basis:
        assert all(sum(Fraction(r[j]) * v[j] for j in range(3)) == 0 for r in rows)


def test_solve_unique_and_inconsistent():
    assert linalg.rat_solve(((1, 0), (0, 1)), (3, 4)) == (Fraction(3), Fraction(4))
    assert linalg.rat_solve(((1, 1), (1, 1)), (0, 1)) is None


def test_bilinear():
    c = ((2, -1), (-1, 2))
    assert linalg.bilinear((1, 0), c, (1, 0)) == 2
    assert linalg.bilinear((1, 1), c, (1, 1)) == 2

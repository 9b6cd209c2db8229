"""Exact integer/rational matrix kernels: products, inverses, kernels, Smith normal form.

Everything works on tuples of tuples (rows) with int or Fraction entries; nothing
here ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction

Vec = tuple
Mat = tuple


def vec_add(x: Vec, y: Vec) -> Vec:
    return tuple(a + b for a, b in zip(x, y))


def vec_sub(x: Vec, y: Vec) -> Vec:
    return tuple(a - b for a, b in zip(x, y))


def vec_neg(x: Vec) -> Vec:
    return tuple(-a for a in x)


def vec_scale(c, x: Vec) -> Vec:
    return tuple(c * a for a in x)


def mat_identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul_vec(m: Mat, v: Vec) -> Vec:
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in m)


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = tuple(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_transpose(a: Mat) -> Mat:
    return tuple(zip(*a))


def mat_order(m: Mat, cap: int = 64) -> int:
    """Multiplicative order of a square matrix, or raise if it exceeds cap."""
    n = len(m)
    ident = mat_identity(n)
    p = m
    for k in range(1, cap + 1):
        if p == ident:
            return k
        p = mat_mul(p, m)
    raise ValueError(f"matrix order exceeds {cap}")


def bilinear(x: Vec, pairing: Mat, y: Vec) -> object:
    """x^T P y with exact arithmetic."""
    return sum(x[i] * sum(pairing[i][j] * y[j] for j in range(len(y))) for i in range(len(x)))


def _row_reduce(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """In-place fraction-exact RREF; returns (reduced rows, pivot columns)."""
    rows = [[Fraction(v) for v in r] for r in rows]
    pivots: list[int] = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c]
        rows[r] = [v / inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rat_rank(rows) -> int:
    if not rows:
        return 0
    _, pivots = _row_reduce([list(r) for r in rows])
    return len(pivots)


def rat_kernel_basis(rows) -> tuple[Vec, ...]:
    """Basis of {x : A x = 0} over Q for a matrix given as rows."""
    if not rows:
        return ()
    n = len(rows[0])
    red, pivots = _row_reduce([list(r) for r in rows])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(tuple(v))
    return tuple(basis)


def rat_solve(rows, rhs) -> Vec | None:
    """One exact solution of A x = b, or None if inconsistent (A given as rows)."""
    if not rows:
        return None
    n = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = _row_reduce(aug)
    for row in red:
        if all(v == 0 for v in row[:-1]) and row[-1] != 0:
            return None
    x = [Fraction(0)] * n
    for r, pc in enumerate(pivots):
        if pc < n:
            x[pc] = red[r][-1]
        elif red[r][-1] != 0:
            return None
    return tuple(x)


def rat_solve_unique(rows, rhs) -> Vec:
    """Solve A x = b requiring full column rank (unique solution)."""
    sol = rat_solve(rows, rhs)
    if sol is None:
        raise ValueError("inconsistent linear system")
    if rat_rank(rows) != len(rows[0]):
        raise ValueError("linear system is underdetermined")
    return sol


def mat_inverse(m: Mat) -> Mat:
    """Exact inverse of a square rational matrix."""
    n = len(m)
    aug = [list(m[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    red, pivots = _row_reduce(aug)
    if pivots != list(range(n)):
        raise ValueError("singular matrix")
    return tuple(tuple(red[i][n:]) for i in range(n))


def mat_inverse_int(m: Mat) -> Mat:
    """Inverse of a unimodular integer matrix, returned with int entries."""
    inv = mat_inverse(m)
    out = []
    for row in inv:
        if any(v.denominator != 1 for v in row):
            raise ValueError("matrix is not unimodular")
        out.append(tuple(int(v) for v in row))
    return tuple(out)


def smith_normal_form(a: Mat) -> tuple[Mat, Mat, Mat]:
    """Return (d, u, v) with u a v = d, u and v unimodular, d in Smith form.

    d is diagonal with d[i] | d[i+1]; entries are non-negative.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    A = [list(map(int, row)) for row in a]
    U = [list(row) for row in mat_identity(m)]
    V = [list(row) for row in mat_identity(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, c):
        A[dst] = [x + c * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, c):
        for r in A:
            r[dst] += c * r[src]
        for r in V:
            r[dst] += c * r[src]

    def negate_row(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero absolute value in the remaining block
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] != 0 and (piv is None or abs(A[i][j]) < abs(A[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, m):
                if A[i][t] != 0:
                    q = A[i][t] // A[t][t]
                    add_row(t, i, -q)
                    if A[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j] != 0:
                    q = A[t][j] // A[t][t]
                    add_col(t, j, -q)
                    if A[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
        # enforce divisibility of the remaining block by the pivot
        stuck = False
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if A[i][j] % A[t][t] != 0:
                    add_row(i, t, 1)
                    stuck = True
                    break
            if stuck:
                break
        if stuck:
            continue
        if A[t][t] < 0:
            negate_row(t)
        t += 1
    return (
        tuple(tuple(r) for r in A),
        tuple(tuple(r) for r in U),
        tuple(tuple(r) for r in V),
    )


def snf_diagonal(a: Mat) -> tuple[int, ...]:
    d, _, _ = smith_normal_form(a)
    k = min(len(d), len(d[0]) if d else 0)
    return tuple(d[i][i] for i in range(k))


def det(m: Mat) -> Fraction:
    """Exact determinant by fraction-free-ish Gaussian elimination."""
    n = len(m)
    rows = [[Fraction(v) for v in r] for r in m]
    sign = 1
    out = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            sign = -sign
        out *= rows[c][c]
        inv = rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] / inv
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[c])]
    return out * sign

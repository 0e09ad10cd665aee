"""Exact linear algebra over the rationals.

Matrices are lists of row lists with ``fractions.Fraction`` entries (integer
entries are accepted and coerced on the fly).  Everything here is elimination
at desk scale; no pivoting strategy beyond "first nonzero" is needed because
the arithmetic is exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Mat = list[list[Fraction]]
Vec = list[Fraction]


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    import math

    x = frac(x)
    if x < 0:
        return None
    rn, rd = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def mat(rows: Sequence[Sequence]) -> Mat:
    return [[frac(x) for x in row] for row in rows]


def vec(entries: Sequence) -> Vec:
    return [frac(x) for x in entries]


def zeros(n: int, m: int) -> Mat:
    return [[Fraction(0)] * m for _ in range(n)]


def identity(n: int) -> Mat:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def shape(a: Mat) -> tuple[int, int]:
    return len(a), len(a[0]) if a else 0


def transpose(a: Mat) -> Mat:
    return [list(col) for col in zip(*a)]


def mat_add(a: Mat, b: Mat) -> Mat:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a: Mat, b: Mat) -> Mat:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Mat, c) -> Mat:
    c = frac(c)
    return [[c * x for x in row] for row in a]


def mat_mul(a: Mat, b: Mat) -> Mat:
    n, k = shape(a)
    k2, m = shape(b)
    if k != k2:
        raise ValueError(f"incompatible shapes {n}x{k} and {k2}x{m}")
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a: Mat, v: Vec) -> Vec:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def mat_pow(a: Mat, k: int) -> Mat:
    n, _ = shape(a)
    if k < 0:
        return mat_pow(inverse(a), -k)
    out = identity(n)
    base = [row[:] for row in a]
    while k:
        if k & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        k >>= 1
    return out


def is_zero(a: Mat) -> bool:
    return all(x == 0 for row in a for x in row)


def mat_eq(a: Mat, b: Mat) -> bool:
    return is_zero(mat_sub(a, b))


def dot(form: Mat, x: Vec, y: Vec) -> Fraction:
    """Bilinear pairing x^T form y."""
    return sum(xi * s for xi, s in zip(x, mat_vec(form, y)))


def _eliminate(a: Mat) -> tuple[Mat, list[int]]:
    """Row-reduce a copy of ``a`` to RREF; returns (rref, pivot columns)."""
    m = [row[:] for row in a]
    nrows, ncols = shape(m)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank(a: Mat) -> int:
    _, pivots = _eliminate(a)
    return len(pivots)


def nullspace(a: Mat) -> list[Vec]:
    """Basis of the right nullspace {x : a x = 0}."""
    rref, pivots = _eliminate(a)
    _, ncols = shape(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rref[r][fc]
        basis.append(v)
    return basis


def solve(a: Mat, b: Vec) -> Vec:
    """Unique solution of a x = b; raises if singular or inconsistent."""
    n, m = shape(a)
    aug = [row[:] + [frac(bi)] for row, bi in zip(a, b)]
    rref, pivots = _eliminate(aug)
    if m in pivots:
        raise ValueError("inconsistent linear system")
    if len(pivots) < m:
        raise ValueError("underdetermined linear system")
    x = [Fraction(0)] * m
    for r, pc in enumerate(pivots):
        x[pc] = rref[r][m]
    return x


def inverse(a: Mat) -> Mat:
    n, m = shape(a)
    if n != m:
        raise ValueError("inverse of non-square matrix")
    aug = [row[:] + idrow[:] for row, idrow in zip(a, identity(n))]
    rref, pivots = _eliminate(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in rref]


def det(a: Mat) -> Fraction:
    n, m = shape(a)
    if n != m:
        raise ValueError("determinant of non-square matrix")
    work = [row[:] for row in a]
    out = Fraction(1)
    for c in range(n):
        pivot_row = next((i for i in range(c, n) if work[i][c] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != c:
            work[c], work[pivot_row] = work[pivot_row], work[c]
            out = -out
        out *= work[c][c]
        inv = 1 / work[c][c]
        for i in range(c + 1, n):
            if work[i][c] != 0:
                f = work[i][c] * inv
                work[i] = [x - f * y for x, y in zip(work[i], work[c])]
    return out


def signature(g: Mat) -> tuple[int, int]:
    """Inertia (n_plus, n_minus) of a symmetric nondegenerate form.

    Symmetric Gaussian reduction: repeatedly split off a one-dimensional
    diagonal block, using the u+v trick when all diagonal entries vanish.
    """
    g = [row[:] for row in g]
    n, _ = shape(g)
    plus = minus = 0
    idx = list(range(n))
    while idx:
        k = next((i for i in idx if g[i][i] != 0), None)
        if k is None:
            i = idx[0]
            j = next(j for j in idx if g[i][j] != 0)
            # replace basis vector e_i by e_i + e_j; diagonal becomes 2 g_ij
            for c in range(n):
                g[i][c] += g[j][c]
            for r in range(n):
                g[r][i] += g[r][j]
            k = i
        d = g[k][k]
        if d > 0:
            plus += 1
        else:
            minus += 1
        idx.remove(k)
        for i in idx:
            if g[i][k] != 0:
                f = g[i][k] / d
                for c in range(n):
                    g[i][c] -= f * g[k][c]
                for r in range(n):
                    g[r][i] -= f * g[r][k]
    return plus, minus


def to_float(a: Mat):
    import numpy as np

    return np.array([[float(x) for x in row] for row in a], dtype=float)


# ---------------------------------------------------------------------------
# serialization: exact rationals as "p/q" strings, row-major
# ---------------------------------------------------------------------------

def frac_to_str(x: Fraction) -> str:
    x = frac(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def frac_from_str(s: str) -> Fraction:
    return Fraction(s)


def mat_to_json(a: Mat) -> list[list[str]]:
    return [[frac_to_str(x) for x in row] for row in a]


def mat_from_json(rows: list[list[str]]) -> Mat:
    return [[frac_from_str(x) for x in row] for row in rows]


def vec_to_json(v: Vec) -> list[str]:
    return [frac_to_str(x) for x in v]


def vec_from_json(entries: list[str]) -> Vec:
    return [frac_from_str(x) for x in entries]


# ---------------------------------------------------------------------------
# integer matrices (used by the GL(Z) polynomial algebra)
# ---------------------------------------------------------------------------

IntMat = list[list[int]]


def int_mat_mul(a: IntMat, b: IntMat) -> IntMat:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def int_identity(n: int) -> IntMat:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def int_mat_pow(a: IntMat, k: int) -> IntMat:
    if k < 0:
        return int_mat_pow(int_mat_inverse_unimodular(a), -k)
    out = int_identity(len(a))
    base = [row[:] for row in a]
    while k:
        if k & 1:
            out = int_mat_mul(out, base)
        base = int_mat_mul(base, base)
        k >>= 1
    return out


def int_det(a: IntMat) -> int:
    """Exact integer determinant (fraction-free Bareiss elimination)."""
    n = len(a)
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for c in range(n - 1):
        if m[c][c] == 0:
            pivot_row = next((i for i in range(c + 1, n) if m[i][c] != 0), None)
            if pivot_row is None:
                return 0
            m[c], m[pivot_row] = m[pivot_row], m[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                m[i][j] = (m[i][j] * m[c][c] - m[i][c] * m[c][j]) // prev
            m[i][c] = 0
        prev = m[c][c]
    return sign * m[n - 1][n - 1]


def int_mat_inverse_unimodular(a: IntMat) -> IntMat:
    """Exact inverse of a matrix with determinant +-1 (adjugate route)."""
    d = int_det(a)
    if d not in (1, -1):
        raise ValueError(f"matrix is not unimodular (det={d})")
    n = len(a)
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[a[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            cof = int_det(minor) if minor else 1
            adj[j][i] = (-1) ** (i + j) * cof
    return [[x * d for x in row] for row in adj]

"""Canonical forms of generic nilpotent self-adjoint endomorphisms.

All computations are exact over the rationals.  The central object is the
canonical basis e_1, ..., e_m with A e_j = e_{j-1} and the inner products
concentrated on the main antidiagonal.  Over the rationals the antidiagonal
value can only be normalized up to a square, so the basis is returned
together with a positive rational ``scale_square``; dividing the basis by
its square root (in a quadratic extension if necessary) makes the
antidiagonal entries exactly the sign epsilon.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .linalg import Mat, Vec, dot, frac, mat, mat_mul, mat_vec


class NonGenericError(ValueError):
    """Input endomorphism fails the genericity hypothesis A^{m-1} != 0."""


@dataclass(frozen=True)
class InnerProduct:
    """Nondegenerate symmetric bilinear form given by its Gram matrix."""

    m: int
    gram: tuple

    def __post_init__(self):
        g = mat(self.gram)
        if len(g) != self.m or any(len(row) != self.m for row in g):
            raise ValueError("Gram matrix has wrong shape")
        if self.m < 2:
            raise ValueError("dimension must be at least 2")
        if not linalg.mat_eq(g, linalg.transpose(g)):
            raise ValueError("Gram matrix is not symmetric")
        if linalg.det(g) == 0:
            raise ValueError("Gram matrix is degenerate")
        object.__setattr__(self, "gram", tuple(tuple(row) for row in g))

    @classmethod
    def antidiagonal(cls, m: int, epsilon: int = 1) -> "InnerProduct":
        g = linalg.zeros(m, m)
        for i in range(m):
            g[i][m - 1 - i] = Fraction(epsilon)
        return cls(m, tuple(tuple(row) for row in g))

    def matrix(self) -> Mat:
        return [list(row) for row in self.gram]

    def pair(self, x: Vec, y: Vec) -> Fraction:
        return dot(self.matrix(), x, y)


@dataclass(frozen=True)
class NilpotentSelfAdjoint:
    """Nilpotent endomorphism, self-adjoint for a given inner product."""

    mat: tuple

    @classmethod
    def build(cls, a, g: InnerProduct) -> "NilpotentSelfAdjoint":
        a = mat(a)
        m = g.m
        if len(a) != m or any(len(row) != m for row in a):
            raise ValueError("endomorphism matrix has wrong shape")
        if not linalg.is_zero(linalg.mat_pow(a, m)):
            raise ValueError(f"A^{m} != 0: endomorphism is not nilpotent")
        if sum(a[i][i] for i in range(m)) != 0:
            raise ValueError("endomorphism has nonzero trace")
        gm = g.matrix()
        if not linalg.mat_eq(mat_mul(linalg.transpose(a), gm), mat_mul(gm, a)):
            raise ValueError("endomorphism is not self-adjoint for the form")
        return cls(tuple(tuple(row) for row in a))

    def matrix(self) -> Mat:
        return [list(row) for row in self.mat]

    @property
    def m(self) -> int:
        return len(self.mat)


@dataclass(frozen=True)
class KernelFiltration:
    dims: tuple

    def __post_init__(self):
        d = tuple(int(x) for x in self.dims)
        if any(d[i] < d[i + 1] for i in range(len(d) - 1)) or (d and d[-1] < 0):
            raise ValueError("filtration dimensions must be non-increasing and >= 0")
        if sum(d) != len(d):
            raise ValueError("filtration dimensions must sum to the dimension")
        object.__setattr__(self, "dims", d)


@dataclass(frozen=True)
class CanonicalQuadruple:
    """Canonical basis data (m, epsilon, basis columns, scale_square)."""

    m: int
    epsilon: int
    basis: tuple  # m column vectors e_1, ..., e_m, exact rational
    scale_square: Fraction

    def basis_matrix(self) -> Mat:
        return linalg.transpose([list(col) for col in self.basis])

    def to_json(self, c: Mat | None = None) -> dict:
        out = {
            "m": self.m,
            "epsilon": self.epsilon,
            "scale_square": linalg.frac_to_str(self.scale_square),
            "basis": [linalg.vec_to_json(list(col)) for col in self.basis],
        }
        if c is not None:
            out["C"] = linalg.mat_to_json(c)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "CanonicalQuadruple":
        return cls(
            m=int(data["m"]),
            epsilon=int(data["epsilon"]),
            basis=tuple(tuple(linalg.vec_from_json(col)) for col in data["basis"]),
            scale_square=linalg.frac_from_str(data["scale_square"]),
        )


def kernel_filtration(a: NilpotentSelfAdjoint) -> KernelFiltration:
    """Quotient dimensions d_j = dim(Ker A^j / Ker A^{j-1}), j = 1..m."""
    am = a.matrix()
    m = a.m
    ranks = [m]
    power = linalg.identity(m)
    for _ in range(m):
        power = mat_mul(power, am)
        ranks.append(linalg.rank(power))
    if ranks[-1] != 0:
        raise ValueError(f"A^{m} != 0: endomorphism is not nilpotent")
    dims = tuple(ranks[j] - ranks[j + 1] for j in range(m))
    return KernelFiltration(dims)


def is_generic_nilpotent(a: NilpotentSelfAdjoint, g: InnerProduct) -> bool:
    """Genericity test: rank A = m-1, cross-checked against A^{m-1} != 0."""
    m = a.m
    am = a.matrix()
    by_rank = linalg.rank(am) == m - 1
    by_power = not linalg.is_zero(linalg.mat_pow(am, m - 1))
    if by_rank != by_power:
        raise AssertionError(
            "internal error: rank and power genericity tests disagree"
        )
    return by_rank


def unique_null_in_coset(form: Mat, v: Vec, u: Vec) -> Vec:
    """The unique null vector in the coset v + span(u) of a null line.

    Requires (u,u) = 0 and (v,u) != 0; the null vector is v + t u with
    t = -(v,v) / (2 (v,u)).
    """
    form = mat(form)
    v = linalg.vec(v)
    u = linalg.vec(u)
    if dot(form, u, u) != 0:
        raise ValueError("direction vector u is not null")
    vu = dot(form, v, u)
    if vu == 0:
        raise ValueError("coset lies in the orthogonal complement of its direction")
    t = -dot(form, v, v) / (2 * vu)
    return [vi + t * ui for vi, ui in zip(v, u)]


def _seed_candidates(m: int):
    """Standard basis vectors, then pairwise sums, in lexicographic order."""
    for i in range(m):
        e = [Fraction(0)] * m
        e[i] = Fraction(1)
        yield e
    for i in range(m):
        for j in range(i + 1, m):
            e = [Fraction(0)] * m
            e[i] = Fraction(1)
            e[j] = Fraction(1)
            yield e


def canonical_basis(a: NilpotentSelfAdjoint, g: InnerProduct) -> CanonicalQuadruple:
    """Canonical basis of a generic nilpotent self-adjoint endomorphism.

    Induction on the kernel filtration: a seed v with <A^{m-1} v, v> != 0 is
    corrected step by step, v <- v + t_j A^{j-1} v with
    t_j = -<A^{m-j} v, v> / (2 <A^{m-1} v, v>), killing the pairings
    <A^{m-j} v, v> for j = 2..m while preserving the earlier ones.  The
    output basis is e_j = A^{m-j} v.
    """
    if not is_generic_nilpotent(a, g):
        raise NonGenericError(
            "endomorphism is not generic (rank A != m-1); "
            f"kernel filtration is {kernel_filtration(a).dims}"
        )
    m = a.m
    am = a.matrix()
    gm = g.matrix()
    powers = [linalg.identity(m)]
    for _ in range(m):
        powers.append(mat_mul(powers[-1], am))

    def pairing(j: int, x: Vec, y: Vec) -> Fraction:
        # <A^j x, y>
        return dot(gm, mat_vec(powers[j], x), y)

    seed = None
    for cand in _seed_candidates(m):
        if pairing(m - 1, cand, cand) != 0:
            seed = cand
            break
    if seed is None:
        raise AssertionError(
            "internal error: no seed found although the form A^{m-1} is nonzero"
        )

    top = pairing(m - 1, seed, seed)
    epsilon = 1 if top > 0 else -1
    v = seed
    for j in range(2, m + 1):
        num = pairing(m - j, v, v)
        if num != 0:
            t = -num / (2 * top)
            step = mat_vec(powers[j - 1], v)
            v = [vi + t * si for vi, si in zip(v, step)]

    scale_square = epsilon * pairing(m - 1, v, v)
    root = linalg.rational_sqrt(scale_square)
    if root is not None:
        # the exact canonical normalization exists over Q; apply it
        v = [x / root for x in v]
        scale_square = Fraction(1)

    first_nonzero = next(x for x in v if x != 0)
    if first_nonzero < 0:
        v = [-x for x in v]

    basis = tuple(tuple(mat_vec(powers[m - j], v)) for j in range(1, m + 1))
    quad = CanonicalQuadruple(m=m, epsilon=epsilon, basis=basis,
                              scale_square=Fraction(scale_square))
    _check_quadruple(quad, a, g)
    return quad


def _check_quadruple(quad: CanonicalQuadruple, a: NilpotentSelfAdjoint,
                     g: InnerProduct) -> None:
    m = quad.m
    am = a.matrix()
    s2 = quad.scale_square
    if s2 <= 0:
        raise AssertionError("scale_square must be positive")
    cols = [list(c) for c in quad.basis]
    for j in range(m):
        image = mat_vec(am, cols[j])
        expected = cols[j - 1] if j > 0 else [Fraction(0)] * m
        if image != expected:
            raise AssertionError("basis fails A e_j = e_{j-1}")
    for i in range(m):
        for j in range(m):
            value = g.pair(cols[i], cols[j])
            want = quad.epsilon * s2 if i + j == m - 1 else Fraction(0)
            if value != want:
                raise AssertionError("basis fails the antidiagonal pairing")


def build_scaling_isometry(quad: CanonicalQuadruple, q) -> Mat:
    """The isometry C with C e_j = q^{m+1-2j} e_j, in original coordinates.

    Satisfies C A C^{-1} = q^2 A and C^T g C = g exactly for rational q > 0.
    """
    q = frac(q)
    if q <= 0:
        raise ValueError("scaling factor q must be positive")
    m = quad.m
    b = quad.basis_matrix()
    d = linalg.zeros(m, m)
    for j in range(1, m + 1):
        d[j - 1][j - 1] = q ** (m + 1 - 2 * j)
    return mat_mul(mat_mul(b, d), linalg.inverse(b))


def commutant_skew_dimension(a: NilpotentSelfAdjoint, g: InnerProduct) -> int:
    """dim{X : XA = AX and X^T g + g X = 0}, by exact nullspace."""
    m = a.m
    am = a.matrix()
    gm = g.matrix()
    rows: list[Vec] = []
    # unknowns X_{rs} flattened row-major; commutation: (XA - AX)_{ij} = 0
    for i in range(m):
        for j in range(m):
            row = [Fraction(0)] * (m * m)
            for s in range(m):
                row[i * m + s] += am[s][j]
                row[s * m + j] -= am[i][s]
            rows.append(row)
    # skew-adjointness: (X^T g + g X)_{ij} = sum_s X_{si} g_{sj} + g_{is} X_{sj}
    for i in range(m):
        for j in range(m):
            row = [Fraction(0)] * (m * m)
            for s in range(m):
                row[s * m + i] += gm[s][j]
                row[s * m + j] += gm[i][s]
            rows.append(row)
    return len(linalg.nullspace(rows))


def scaling_commutant(a: NilpotentSelfAdjoint, q) -> list[Mat]:
    """Basis of the space {X : X A = q^2 A X} (exact nullspace)."""
    q = frac(q)
    m = a.m
    am = a.matrix()
    q2 = q * q
    rows: list[Vec] = []
    for i in range(m):
        for j in range(m):
            row = [Fraction(0)] * (m * m)
            for s in range(m):
                row[i * m + s] += am[s][j]
                row[s * m + j] -= q2 * am[i][s]
            rows.append(row)
    basis = linalg.nullspace(rows)
    return [[v[i * m:(i + 1) * m] for i in range(m)] for v in basis]


def scaling_isometry_is_unique(a: NilpotentSelfAdjoint, g: InnerProduct,
                               quad: CanonicalQuadruple, q) -> bool:
    """Check that +-C are the only isometries X with X A = q^2 A X.

    Every solution of the linear condition factors as C Y with Y commuting
    with A; for generic A the commutant is spanned by the powers of A, so Y
    is g-self-adjoint and the isometry condition forces Y^2 = Id.  Writing
    Y = c_0 Id + c_1 A + ... and expanding Y^2 = Id coefficient by
    coefficient forces c_0 = +-1 and all other c_k = 0.
    """
    q = frac(q)
    m = a.m
    am = a.matrix()
    c = build_scaling_isometry(quad, q)
    space = scaling_commutant(a, q)
    if len(space) != m:
        return False
    # span{X : XA = q^2 AX} must equal span{C A^k}
    expected = []
    power = linalg.identity(m)
    for _ in range(m):
        expected.append(mat_mul(c, power))
        power = mat_mul(power, am)
    stacked = [[x for row in b for x in row] for b in space + expected]
    if linalg.rank(stacked) != m:
        return False
    # isometry condition on Y = sum c_k A^k reduces to sum_{i+j=k} c_i c_j = d_{k0};
    # the triangular recurrence admits exactly the solutions (c_0, ...) = (+-1, 0, ...).
    for c0 in (Fraction(1), Fraction(-1)):
        coeffs = [c0]
        for k in range(1, m):
            acc = sum(coeffs[i] * coeffs[k - i] for i in range(1, k))
            coeffs.append(-acc / (2 * c0))
        if any(x != 0 for x in coeffs[1:]):
            return False
    return True


def semi_neutral(g: InnerProduct) -> bool:
    """Signature test: positive and negative indices differ by at most one."""
    plus, minus = linalg.signature(g.matrix())
    return abs(plus - minus) <= 1


def single_block(m: int) -> Mat:
    """The m x m shift matrix with ones immediately above the diagonal."""
    a = linalg.zeros(m, m)
    for j in range(1, m):
        a[j - 1][j] = Fraction(1)
    return a


def canonical_pair(m: int, epsilon: int = 1) -> tuple[NilpotentSelfAdjoint, InnerProduct]:
    """The model pair: shift matrix A and antidiagonal form, already canonical."""
    g = InnerProduct.antidiagonal(m, epsilon)
    a = NilpotentSelfAdjoint.build(single_block(m), g)
    return a, g


def conjugated_pair(m: int, p: Mat, epsilon: int = 1
                    ) -> tuple[NilpotentSelfAdjoint, InnerProduct]:
    """The canonical pair pushed through an invertible matrix P.

    A' = P A P^{-1} and g' = P^{-T} g P^{-1}, so that the columns of P are
    the expected canonical basis of (A', g').
    """
    a, g = canonical_pair(m, epsilon)
    p_inv = linalg.inverse(p)
    a2 = mat_mul(mat_mul(p, a.matrix()), p_inv)
    g2 = mat_mul(mat_mul(linalg.transpose(p_inv), g.matrix()), p_inv)
    g2ip = InnerProduct(m, tuple(tuple(row) for row in g2))
    return NilpotentSelfAdjoint.build(a2, g2ip), g2ip

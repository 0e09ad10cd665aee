"""Exact integer-polynomial algebra: GL(Z)-polynomials and their root lore.

A GL(Z)-polynomial of degree d has integer coefficients, leading coefficient
(-1)^d and constant term +-1; these are exactly the characteristic
polynomials det(M - lambda Id) of unimodular integer matrices.  Polynomials
are stored densely as coefficient tuples, constant term first.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .linalg import IntMat


@dataclass(frozen=True)
class IntPolynomial:
    coeffs: tuple  # a_0, a_1, ..., a_d with a_d != 0

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        if len(c) == 0:
            c = (0,)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    @property
    def constant(self) -> int:
        return self.coeffs[0]

    def __call__(self, x):
        out = 0
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        out = [0] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(tuple(out))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def compose_power(self, k: int) -> "IntPolynomial":
        """P(lambda^k) for k >= 1."""
        out = [0] * (self.degree * k + 1)
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return IntPolynomial(tuple(out))

    def pretty(self, var: str = "x") -> str:
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else ("+" if parts else "")
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                head = "" if mag == 1 else str(mag)
                body = f"{head}{var}" + (f"^{i}" if i > 1 else "")
            parts.append(f"{sign}{body}" if not parts else f" {sign} {body}")
        return "".join(parts) if parts else "0"


def poly(*coeffs) -> IntPolynomial:
    """Polynomial from coefficients, constant term first."""
    return IntPolynomial(tuple(coeffs))


def is_glz(p: IntPolynomial) -> bool:
    d = p.degree
    return d >= 1 and p.leading == (-1) ** d and p.constant in (1, -1)


def _require_glz(p: IntPolynomial) -> None:
    if not is_glz(p):
        raise ValueError(f"not a GL(Z)-polynomial: {p.coeffs}")


def monic(p: IntPolynomial) -> IntPolynomial:
    """Monic normalization of a GL(Z)-polynomial (multiply by +-1)."""
    return p if p.leading == 1 else -p


def glz_normalize(p: IntPolynomial) -> IntPolynomial:
    """Sign-normalize an integer polynomial to leading coefficient (-1)^d."""
    return p if p.leading == (-1) ** p.degree else -p


def companion(p: IntPolynomial) -> IntMat:
    """Companion matrix of a GL(Z)-polynomial; unimodular by construction."""
    _require_glz(p)
    m = monic(p)
    d = m.degree
    out = [[0] * d for _ in range(d)]
    for i in range(1, d):
        out[i][i - 1] = 1
    for i in range(d):
        out[i][d - 1] = -m.coeffs[i]
    return out


def char_poly(mtx: IntMat) -> IntPolynomial:
    """Characteristic polynomial det(M - lambda Id) of a unimodular matrix.

    Faddeev-LeVerrier in exact rational arithmetic; the coefficients are
    integers and the result is sign-normalized to leading (-1)^d.
    """
    d = len(mtx)
    if abs(linalg.int_det(mtx)) != 1:
        raise ValueError("matrix is not unimodular")
    a = [[Fraction(x) for x in row] for row in mtx]
    # det(lambda Id - M) = lambda^d + c_1 lambda^{d-1} + ... + c_d
    coeffs = [Fraction(1)]
    work = linalg.identity(d)
    for k in range(1, d + 1):
        work = linalg.mat_mul(a, work)
        trace = sum(work[i][i] for i in range(d))
        ck = -trace / k
        coeffs.append(ck)
        for i in range(d):
            work[i][i] += ck
    ints = []
    for c in coeffs:
        if c.denominator != 1:
            raise AssertionError("characteristic polynomial is not integral")
        ints.append(c.numerator)
    monic_poly = IntPolynomial(tuple(reversed(ints)))
    return IntPolynomial(tuple((-1) ** d * c for c in monic_poly.coeffs))


def inversion_star(p: IntPolynomial) -> IntPolynomial:
    """Coefficient reversal lambda^d P(1/lambda), sign-normalized to GL(Z) form.

    The reversal of a GL(Z)-polynomial with constant term -1 has leading
    coefficient of the wrong sign; multiplying by -1 restores leading
    (-1)^d without moving any roots.
    """
    _require_glz(p)
    return glz_normalize(IntPolynomial(tuple(reversed(p.coeffs))))


def power_spectrum_poly(p: IntPolynomial, k: int) -> IntPolynomial:
    """GL(Z)-polynomial whose roots are the k-th powers of the roots of P."""
    _require_glz(p)
    if k == 0:
        raise ValueError("power exponent k must be nonzero")
    return char_poly(linalg.int_mat_pow(companion(p), k))


# ---------------------------------------------------------------------------
# factorization over Z (desk scale, root-subset reconstruction)
# ---------------------------------------------------------------------------

DEFAULT_FACTOR_DEGREE_BOUND = 10


def _poly_divmod(num: list[Fraction], den: list[Fraction]):
    num = num[:]
    q = [Fraction(0)] * max(len(num) - len(den) + 1, 0)
    inv_lead = 1 / den[-1]
    for i in range(len(num) - len(den), -1, -1):
        f = num[i + len(den) - 1] * inv_lead
        q[i] = f
        if f != 0:
            for j, dj in enumerate(den):
                num[i + j] -= f * dj
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return q, num


def exact_divide(p: IntPolynomial, d: IntPolynomial) -> IntPolynomial | None:
    """p / d over the rationals if the division is exact and integral."""
    q, r = _poly_divmod([Fraction(c) for c in p.coeffs],
                        [Fraction(c) for c in d.coeffs])
    if any(x != 0 for x in r) or not q:
        return None
    if any(x.denominator != 1 for x in q):
        return None
    return IntPolynomial(tuple(x.numerator for x in q))


def poly_gcd(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    """Monic-over-Q gcd scaled back to a primitive integer polynomial."""
    a = [Fraction(c) for c in p.coeffs]
    b = [Fraction(c) for c in q.coeffs]
    while any(x != 0 for x in b):
        _, r = _poly_divmod(a, b)
        a, b = b, r if any(x != 0 for x in r) else [Fraction(0)]
    lead = a[-1]
    a = [x / lead for x in a]
    denom = math.lcm(*(x.denominator for x in a))
    ints = [int(x * denom) for x in a]
    content = math.gcd(*(abs(c) for c in ints if c != 0))
    return IntPolynomial(tuple(c // content for c in ints))


def _roots_numeric(p: IntPolynomial, dps: int | None = None):
    if dps is None:
        return list(np.roots(list(reversed(p.coeffs))))
    import mpmath

    with mpmath.workdps(dps):
        return mpmath.polyroots([mpmath.mpf(c) for c in reversed(p.coeffs)],
                                maxsteps=200, extraprec=120)


def _expand_from_roots(roots):
    """Coefficients (constant first) of prod (lambda - r), generic arithmetic."""
    coeffs = [1]
    for r in roots:
        coeffs = [0] + coeffs
        for i in range(len(coeffs) - 1):
            coeffs[i] -= r * coeffs[i + 1]
    return coeffs


class FactorizationAmbiguity(RuntimeError):
    pass


def _find_factor(p: IntPolynomial, dps: int | None):
    """Smallest-degree nontrivial integer factor of a squarefree p, or None."""
    if dps is not None:
        # mpmath arithmetic takes its working precision from the active
        # context, so the subset expansion must happen inside it too
        import mpmath

        with mpmath.workdps(dps):
            return _find_factor_scan(p, dps)
    return _find_factor_scan(p, dps)


def _find_factor_scan(p: IntPolynomial, dps: int | None):
    d = p.degree
    roots = _roots_numeric(p, dps)
    lead = p.leading
    divisors = [l for l in range(1, abs(lead) + 1) if abs(lead) % l == 0]
    accept = 1e-4 if dps is None else 10.0 ** (-(dps // 2))
    for size in range(1, d // 2 + 1):
        for subset in itertools.combinations(range(d), size):
            prod = _expand_from_roots([roots[i] for i in subset])
            for l in divisors:
                cand = [l * c for c in prod]
                reals = [float(c.real) for c in cand]
                imags = [abs(float(c.imag)) for c in cand]
                if max(imags) > 0.4:
                    continue
                rounded = [round(x) for x in reals]
                err = max(abs(x - r) for x, r in zip(reals, rounded))
                if err > 0.49:
                    continue
                if err > accept:
                    if dps is None:
                        raise FactorizationAmbiguity(
                            f"coefficient rounding ambiguous (err={err:.3f})"
                        )
                    continue
                cand_poly = IntPolynomial(tuple(rounded))
                if cand_poly.degree != size or cand_poly.coeffs[-1] == 0:
                    continue
                q = exact_divide(p, cand_poly)
                if q is not None:
                    return cand_poly, q
    return None


def factor_irreducible(p: IntPolynomial,
                       degree_bound: int = DEFAULT_FACTOR_DEGREE_BOUND
                       ) -> list[IntPolynomial]:
    """Factor an integer polynomial into irreducibles over Z.

    Numeric roots plus root-subset reconstruction, confirmed by exact
    division; repeated factors are split off first through an exact gcd with
    the derivative.  Raises on degree above the configured bound and on
    persistent rounding ambiguity.
    """
    if p.degree > degree_bound:
        raise ValueError(
            f"degree {p.degree} exceeds factorization bound {degree_bound}"
        )
    if p.degree <= 0:
        return []
    deriv = IntPolynomial(tuple(i * c for i, c in enumerate(p.coeffs) if i >= 1)
                          or (0,))
    g = poly_gcd(p, deriv)
    if g.degree >= 1:
        reduced = exact_divide(p, g)
        if reduced is None:
            raise AssertionError("gcd with derivative must divide exactly")
        factors = factor_irreducible(reduced, degree_bound)
        for q in factor_irreducible(g, degree_bound):
            factors.append(q)
        return sorted(factors, key=lambda f: (f.degree, f.coeffs))

    factors = []
    work = p
    while work.degree >= 1:
        try:
            hit = _find_factor(work, dps=None)
        except FactorizationAmbiguity:
            hit = _find_factor(work, dps=60)
        if hit is None:
            factors.append(work)
            break
        factor, work = hit
        factors.append(factor)
    return sorted(factors, key=lambda f: (f.degree, f.coeffs))


def is_irreducible(p: IntPolynomial) -> bool:
    fs = factor_irreducible(p)
    return len(fs) == 1 and fs[0].degree == p.degree


# ---------------------------------------------------------------------------
# cyclotomic detection
# ---------------------------------------------------------------------------

# N(d) = max{n : phi(n) <= d}; a matrix power M^n = Id with n <= N(d)
# certifies that all roots of the (irreducible, hence squarefree) degree-d
# input are roots of unity.  Values checked by the test suite against a
# direct totient sweep.
MAX_ROOT_OF_UNITY_ORDER = {
    1: 2, 2: 6, 3: 6, 4: 12, 5: 12, 6: 18, 7: 18, 8: 30,
    9: 30, 10: 30, 11: 30, 12: 42, 13: 42, 14: 42, 15: 42, 16: 60,
}


def cyclotomic_order(p: IntPolynomial) -> int | None:
    """Smallest n with companion(p)^n = Id, or None if there is none.

    Requires irreducible GL(Z) input; by simple-rootedness the companion
    matrix is diagonalizable, so periodicity is equivalent to all roots
    being roots of unity.
    """
    _require_glz(p)
    factors = factor_irreducible(p)
    if len(factors) != 1:
        raise ValueError(
            "input is reducible; factors: "
            + ", ".join(str(f.coeffs) for f in factors)
        )
    d = p.degree
    bound = MAX_ROOT_OF_UNITY_ORDER[d] if d in MAX_ROOT_OF_UNITY_ORDER else 2 * d * d
    m = companion(p)
    ident = linalg.int_identity(d)
    power = ident
    for n in range(1, bound + 1):
        power = linalg.int_mat_mul(power, m)
        if power == ident:
            return n
    return None


def is_cyclotomic(p: IntPolynomial) -> bool:
    """True iff all roots of the irreducible GL(Z)-polynomial are roots of unity."""
    return cyclotomic_order(p) is not None


def cyclotomic_census(max_degree: int) -> list[IntPolynomial]:
    """All GL(Z)-normalized cyclotomic polynomials of degree <= max_degree.

    Built from scratch: Phi_n = (lambda^n - 1) / prod_{d | n, d < n} Phi_d,
    for every n whose totient is within range.
    """
    phi_cache: dict[int, IntPolynomial] = {}
    out = []
    n = 1
    while True:
        tot = _totient(n)
        if tot <= max_degree:
            xn_minus_1 = IntPolynomial(tuple([-1] + [0] * (n - 1) + [1]))
            div = poly(1)
            for d in range(1, n):
                if n % d == 0:
                    div = div * phi_cache[d]
            phi = exact_divide(xn_minus_1, div)
            assert phi is not None
            phi_cache[n] = phi
            out.append(glz_normalize(phi))
        if tot > max_degree and all(_totient(k) > max_degree
                                    for k in range(n, 2 * max_degree ** 2 + 2)):
            break
        n += 1
    return sorted(set(out), key=lambda f: (f.degree, f.coeffs))


def _totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


# ---------------------------------------------------------------------------
# divisibility identity and root-group probe
# ---------------------------------------------------------------------------

def divisibility_identity(p: IntPolynomial, k: int, r: int
                          ) -> list[IntPolynomial]:
    """The quotient chain Q(lambda), Q(lambda^k), ..., Q(lambda^{k^{r-1}}).

    Q = P(lambda^k) / P(lambda) by exact division (fails with a diagnostic
    if a^k is not a conjugate root), after which the full product identity
    P(lambda^{k^r}) = Q(lambda) Q(lambda^k) ... Q(lambda^{k^{r-1}}) P(lambda)
    is verified by exact polynomial arithmetic.
    """
    _require_glz(p)
    if k < 2 or r < 1:
        raise ValueError("need k >= 2 and r >= 1")
    q = exact_divide(p.compose_power(k), p)
    if q is None:
        raise ValueError(
            "hypothesis violated: a^k is not a root of P (division inexact)"
        )
    chain = [q.compose_power(k ** i) if i else q for i in range(r)]
    product = p
    for link in chain:
        product = product * link
    if product.coeffs != p.compose_power(k ** r).coeffs:
        raise AssertionError("divisibility identity failed to close")
    return chain


@dataclass(frozen=True)
class CyclicProbeVerdict:
    """Semi-decision outcome; never claims certified non-cyclicity.

    Relations are (sign, exponent) pairs, one per root, with
    root = sign * generator^exponent.  The sign slack matches the
    sign-inclusive convention used throughout: a quadratic with constant
    term -1 has roots a and -1/a, whose strict multiplicative group is
    {+-a^k} and only becomes singly generated once signs are absorbed.
    """

    cyclic: bool
    generator: complex | None
    relations: tuple | None
    exponent_bound: int
    tol: float


def cyclic_root_group_probe(p: IntPolynomial, exponent_bound: int = 12,
                            tol: float = 1e-9) -> CyclicProbeVerdict:
    """Numeric search for a single generator of the root group of P.

    Candidates are the roots themselves and pairwise root quotients; the
    verdict is a cyclic witness when every root is, within tol and up to
    sign, a power of a candidate with exponent bounded by exponent_bound.
    """
    _require_glz(p)
    roots = _roots_numeric(p)
    candidates = list(roots)
    for a, b in itertools.permutations(roots, 2):
        candidates.append(a / b)
    for gen in candidates:
        if abs(gen) < tol:
            continue
        relations = []
        for root in roots:
            hit = None
            for e in range(-exponent_bound, exponent_bound + 1):
                power = _cpow(gen, e)
                if abs(power - root) < tol:
                    hit = (1, e)
                    break
                if abs(power + root) < tol:
                    hit = (-1, e)
                    break
            if hit is None:
                relations = None
                break
            relations.append(hit)
        if relations is not None:
            return CyclicProbeVerdict(True, complex(gen), tuple(relations),
                                      exponent_bound, tol)
    return CyclicProbeVerdict(False, None, None, exponent_bound, tol)


def _cpow(z: complex, e: int) -> complex:
    if e >= 0:
        return z ** e
    return 1.0 / z ** (-e)


def random_glz(rng, degree: int, coeff_bound: int) -> IntPolynomial:
    """Uniformly random GL(Z)-polynomial with bounded middle coefficients."""
    middle = [rng.randint(-coeff_bound, coeff_bound) for _ in range(degree - 1)]
    const = rng.choice([1, -1])
    return IntPolynomial(tuple([const] + middle + [(-1) ** degree]))

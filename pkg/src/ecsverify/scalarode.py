"""Closed-form machinery for the scalar equation y'' = (c/t^2) y + rhs.

Solutions live in the span of t^e (log t)^p; the coefficient field is
either the exact rationals (when c and the indicial roots are rational)
or floats.  The indicial polynomial is D(s) = s(s-1) - c with roots
alpha+ >= alpha-; a right-hand-side exponent hitting a root escalates the
log degree, which is how resonance (alpha+ - alpha- an even integer,
including the double root at 1 + 4c = 0) is handled.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .linalg import rational_sqrt

_RESONANCE_TOL = 1e-12


class OscillatoryRegimeError(ValueError):
    """1 + 4c < 0: the indicial roots are complex, not supported here."""


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


def _log(t):
    return math.log(t) if not isinstance(t, (int, Fraction)) else math.log(float(t))


class LogPoly:
    """Finite sum of terms coef * t^e * (log t)^p.

    Terms are keyed by (e, p); exponents and coefficients are Fractions in
    the exact lane and floats otherwise.  Instances are immutable in spirit:
    all operations return new objects.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for (e, p), c in terms.items():
                if c != 0:
                    self.terms[(e, p)] = self.terms.get((e, p), 0) + c
            self.terms = {k: v for k, v in self.terms.items() if v != 0}

    @classmethod
    def power(cls, coef, e, p: int = 0) -> "LogPoly":
        return cls({(e, p): coef})

    @classmethod
    def zero(cls) -> "LogPoly":
        return cls()

    def is_zero(self) -> bool:
        return not self.terms

    def max_abs_coeff(self) -> float:
        return max((abs(float(c)) for c in self.terms.values()), default=0.0)

    def __add__(self, other: "LogPoly") -> "LogPoly":
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0) + c
        return LogPoly(out)

    def __sub__(self, other: "LogPoly") -> "LogPoly":
        return self + other.scale(-1)

    def scale(self, c) -> "LogPoly":
        if c == 0:
            return LogPoly()
        return LogPoly({key: c * v for key, v in self.terms.items()})

    def shift_exponent(self, delta) -> "LogPoly":
        """Multiply by t^delta."""
        return LogPoly({(e + delta, p): c for (e, p), c in self.terms.items()})

    def deriv(self) -> "LogPoly":
        out: dict = {}
        for (e, p), c in self.terms.items():
            if e != 0:
                key = (e - 1, p)
                out[key] = out.get(key, 0) + c * e
            if p > 0:
                key = (e - 1, p - 1)
                out[key] = out.get(key, 0) + c * p
        return LogPoly(out)

    def dilate(self, a) -> "LogPoly":
        """Substitute t -> t/a for a > 0.

        Exact when all log powers vanish and the exponents are integers;
        log terms pick up float coefficients through log(a).
        """
        if a <= 0:
            raise ValueError("dilation factor must be positive")
        out: dict = {}
        la = None
        for (e, p), c in self.terms.items():
            scale = _pow(a, -e)
            if p == 0:
                key = (e, p)
                out[key] = out.get(key, 0) + c * scale
                continue
            if la is None:
                la = math.log(float(a))
            for j in range(p + 1):
                coeff = (c * scale * math.comb(p, j)) * ((-la) ** (p - j))
                if p - j == 0:
                    coeff = c * scale  # keep exactness of the top log power
                key = (e, j)
                out[key] = out.get(key, 0) + coeff
        return LogPoly(out)

    def eval(self, t):
        if t <= 0:
            raise ValueError("log-power functions live on t > 0")
        total = None
        for (e, p), c in self.terms.items():
            value = c * _pow(t, e)
            if p > 0:
                lt = _log(t)
                if lt == 0:
                    continue
                value = float(value) * lt ** p
            total = value if total is None else total + value
        if total is None:
            return Fraction(0) if self._exact() else 0.0
        return total

    def _exact(self) -> bool:
        return all(_is_exact(c) and _is_exact(e)
                   for (e, _p), c in self.terms.items())

    def __repr__(self):
        if not self.terms:
            return "LogPoly(0)"
        bits = []
        for (e, p), c in sorted(self.terms.items(), key=lambda kv: (float(kv[0][0]), kv[0][1])):
            term = f"{c}*t^{e}"
            if p:
                term += f"*log^{p}"
            bits.append(term)
        return "LogPoly(" + " + ".join(bits) + ")"


def _pow(t, e):
    """t^e, exact for rational t and integer e."""
    if _is_exact(t) or isinstance(t, Fraction):
        ef = Fraction(e) if _is_exact(e) else None
        if ef is not None and ef.denominator == 1:
            return Fraction(t) ** int(ef)
        return float(t) ** float(e)
    return t ** float(e)


def indicial_roots(c):
    """Roots of s(s-1) = c, largest first; exact when the discriminant is
    a rational square.  Raises in the oscillatory regime 1 + 4c < 0."""
    if _is_exact(c):
        disc = 1 + 4 * Fraction(c)
        if disc < 0:
            raise OscillatoryRegimeError(
                f"1 + 4c = {disc} < 0: indicial roots are complex"
            )
        root = rational_sqrt(disc)
        if root is not None:
            return (Fraction(1, 2) + root / 2, Fraction(1, 2) - root / 2)
        s = math.sqrt(float(disc))
        return ((1 + s) / 2, (1 - s) / 2)
    disc = 1 + 4 * c
    if disc < 0:
        raise OscillatoryRegimeError(f"1 + 4c = {disc} < 0: indicial roots are complex")
    s = math.sqrt(disc)
    return ((1 + s) / 2, (1 - s) / 2)


def homogeneous_basis(c) -> tuple[LogPoly, LogPoly]:
    """Basis of solutions of y'' = (c/t^2) y on (0, infinity)."""
    hi, lo = indicial_roots(c)
    if hi == lo:
        return LogPoly.power(1 if _is_exact(hi) else 1.0, hi, 0), \
            LogPoly.power(1 if _is_exact(hi) else 1.0, hi, 1)
    one = Fraction(1) if _is_exact(hi) else 1.0
    return LogPoly.power(one, hi), LogPoly.power(one, lo)


def _indicial_value(sigma, c):
    return sigma * (sigma - 1) - c


def _is_resonant(value) -> bool:
    if _is_exact(value):
        return value == 0
    return abs(value) < _RESONANCE_TOL


def particular_solution(rhs: LogPoly, c) -> LogPoly:
    """A particular solution of y'' - (c/t^2) y = rhs.

    Per term of exponent gamma the ansatz is t^{gamma+2} times a log
    polynomial whose degree escalates by one for each coincidence with an
    indicial root (by two at the double root sigma = 1/2).
    """
    out = LogPoly()
    for (gamma, p), coef in rhs.terms.items():
        sigma = gamma + 2
        d = _indicial_value(sigma, c)
        two_sigma_1 = 2 * sigma - 1
        terms: dict = {}
        if not _is_resonant(d):
            b = {p: coef / d}
            for i in range(p - 1, -1, -1):
                acc = two_sigma_1 * (i + 1) * b.get(i + 1, 0) \
                    + (i + 2) * (i + 1) * b.get(i + 2, 0)
                b[i] = -acc / d
        elif not _is_resonant(two_sigma_1):
            b = {p + 1: coef / (two_sigma_1 * (p + 1))}
            for i in range(p - 1, -1, -1):
                b[i + 1] = -(i + 2) * b.get(i + 2, 0) / two_sigma_1
        else:
            b = {p + 2: coef / ((p + 2) * (p + 1))}
        for j, bj in b.items():
            if bj != 0:
                terms[(sigma, j)] = bj
        out = out + LogPoly(terms)
    return out


def apply_operator(y: LogPoly, c) -> LogPoly:
    """L[y] = y'' - (c/t^2) y."""
    return y.deriv().deriv() - y.shift_exponent(-2).scale(c)


def solve_scalar(c, rhs: LogPoly, t0, y0, dy0) -> LogPoly:
    """The solution of y'' = (c/t^2) y + rhs with data (y0, y'0) at t0."""
    part = particular_solution(rhs, c) if not rhs.is_zero() else LogPoly()
    h1, h2 = homogeneous_basis(c)
    dh1, dh2 = h1.deriv(), h2.deriv()
    dpart = part.deriv()
    r1 = y0 - part.eval(t0)
    r2 = dy0 - dpart.eval(t0)
    a11, a12 = h1.eval(t0), h2.eval(t0)
    a21, a22 = dh1.eval(t0), dh2.eval(t0)
    det = a11 * a22 - a12 * a21
    a = (r1 * a22 - r2 * a12) / det
    b = (r2 * a11 - r1 * a21) / det
    return part + h1.scale(a) + h2.scale(b)

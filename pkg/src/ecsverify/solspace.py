"""The solution space of u'' = f u + beta A u and its rescaling spectrum.

Everything is expressed in canonical coordinates: A is the shift matrix
(A e_j = e_{j-1}), the inner product is epsilon times the antidiagonal, and
the rescaling isometry C acts diagonally with eigenvalue q^{m+1-2j} on e_j.
The symplectic form Omega(u, w) = <u'(t), w(t)> - <u(t), w'(t)> is constant
in t, and the composed operator CT, [CTu](t) = C u(t/q), preserves the
solution space while neither C nor T alone does.

The vector equation splits along the basis into the scalar cascade
y_i'' = f y_i + beta y_{i+1}, solved in closed form for the homogeneity
family f(t) = c/t^2 (scalarode) and by adaptive integration otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import linalg, scalarode
from .linalg import frac
from .scalarode import LogPoly, OscillatoryRegimeError


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


# ---------------------------------------------------------------------------
# homogeneity functions: q^2 f(q t) = f(t)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HomogeneityFunction:
    """Either the power family c/t^2 or a log-periodic modulation of it."""

    kind: str  # "euler" | "log_periodic"
    c: object = None                      # euler coefficient
    q: object = None                      # log_periodic rescaling ratio
    profile: Callable | None = None      # 1-periodic smooth function

    @classmethod
    def euler(cls, c) -> "HomogeneityFunction":
        return cls(kind="euler", c=frac(c) if _is_exact(c) else float(c))

    @classmethod
    def log_periodic(cls, q, profile: Callable) -> "HomogeneityFunction":
        if float(q) <= 1:
            raise ValueError("log-periodic symmetry ratio must exceed 1")
        return cls(kind="log_periodic", q=float(q), profile=profile)

    def __call__(self, t):
        if t <= 0:
            raise ValueError("homogeneity functions live on t > 0")
        if self.kind == "euler":
            if _is_exact(self.c) and _is_exact(t):
                return frac(self.c) / (frac(t) * frac(t))
            return float(self.c) / float(t) ** 2
        x = math.log(float(t)) / math.log(self.q)
        return self.profile(x) / float(t) ** 2

    def symmetry_defect(self, q, n_samples: int = 64) -> float:
        """max |q^2 f(q t) - f(t)| over a sample grid."""
        qf = float(q)
        worst = 0.0
        for i in range(n_samples):
            t = 0.3 + 4.7 * i / (n_samples - 1)
            worst = max(worst, abs(qf * qf * float(self(qf * t)) - float(self(t))))
        return worst

    def key(self):
        if self.kind == "euler":
            return ("euler", self.c)
        return ("log_periodic", self.q, id(self.profile))

    def to_json(self) -> dict:
        if self.kind == "euler":
            return {"kind": "euler", "c": linalg.frac_to_str(frac(self.c))
                    if _is_exact(self.c) else float(self.c)}
        return {"kind": "log_periodic", "q": self.q}

    @classmethod
    def from_json(cls, data: dict) -> "HomogeneityFunction":
        if data["kind"] != "euler":
            raise ValueError("only euler descriptors are serializable")
        c = data["c"]
        return cls.euler(Fraction(c) if isinstance(c, str) else c)


# ---------------------------------------------------------------------------
# model data in canonical coordinates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Model:
    """Canonical model data for the CT-spectrum computations (q > 1)."""

    m: int
    q: object
    epsilon: int
    f: HomogeneityFunction
    beta: object = None  # coefficient of the nilpotent term; defaults to q^2

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("need m >= 2")
        if self.epsilon not in (1, -1):
            raise ValueError("epsilon must be +-1")
        q = frac(self.q) if _is_exact(self.q) else float(self.q)
        if q <= 1:
            raise ValueError("q is normalized to q > 1 (replace q by 1/q)")
        object.__setattr__(self, "q", q)
        beta = self.beta if self.beta is not None else q * q
        object.__setattr__(self, "beta", beta)
        if self.f.kind == "log_periodic":
            defect = self.f.symmetry_defect(q)
            if defect > 1e-12:
                raise ValueError(
                    f"homogeneity symmetry violated: q^2 f(qt) - f(t) ~ {defect:.2e}"
                )

    def gram_matrix(self):
        g = linalg.zeros(self.m, self.m)
        for i in range(self.m):
            g[i][self.m - 1 - i] = Fraction(self.epsilon)
        return g

    def ct_scales(self):
        """Diagonal of C in canonical coordinates: q^{m+1-2j}, j = 1..m."""
        return [_qpow(self.q, self.m + 1 - 2 * j) for j in range(1, self.m + 1)]

    def canonical_c_matrix(self):
        scales = self.ct_scales()
        c = linalg.zeros(self.m, self.m) if _is_exact(scales[0]) else \
            [[0.0] * self.m for _ in range(self.m)]
        for i, s in enumerate(scales):
            c[i][i] = s
        return c

    def shift_matrix(self):
        a = linalg.zeros(self.m, self.m)
        for j in range(1, self.m):
            a[j - 1][j] = Fraction(1)
        return a

    def space_key(self):
        return (self.m, self.f.key(),
                float(self.beta), "canonical", self.epsilon)

    def exact(self) -> bool:
        return self.f.kind == "euler" and _is_exact(self.f.c) and _is_exact(self.q)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "q": linalg.frac_to_str(frac(self.q)) if _is_exact(self.q) else float(self.q),
            "epsilon": self.epsilon,
            "f": self.f.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Model":
        q = data["q"]
        return cls(
            m=int(data["m"]),
            q=Fraction(q) if isinstance(q, str) else q,
            epsilon=int(data["epsilon"]),
            f=HomogeneityFunction.from_json(data["f"]),
        )


def _qpow(q, e):
    if _is_exact(q) and _is_exact(e) and Fraction(e).denominator == 1:
        return frac(q) ** int(e)
    return float(q) ** float(e)


# ---------------------------------------------------------------------------
# solutions
# ---------------------------------------------------------------------------

class SolutionBase:
    """Common surface: base point, initial data, evaluator on (0, infinity)."""

    model: object
    t0: object

    def evaluate(self, t):
        raise NotImplementedError

    @property
    def u0(self):
        return self.evaluate(self.t0)[0]

    @property
    def v0(self):
        return self.evaluate(self.t0)[1]

    def data_vector(self):
        u, v = self.evaluate(self.t0)
        return list(u) + list(v)


class ClosedFormSolution(SolutionBase):
    """Solution with log-power components; exact in the rational lane."""

    def __init__(self, model, t0, components: Sequence[LogPoly]):
        if len(components) != model.m:
            raise ValueError("component count must match the dimension")
        self.model = model
        self.t0 = t0
        self.components = list(components)
        self._derivs = [c.deriv() for c in self.components]

    def evaluate(self, t):
        if t <= 0:
            raise ValueError("solutions are defined for t > 0")
        return ([c.eval(t) for c in self.components],
                [d.eval(t) for d in self._derivs])

    def residual(self) -> float:
        """Symbolic defect of u'' - f u - beta A u; exactly zero in-space."""
        c = self.model.f.c
        beta = self.model.beta
        worst = 0.0
        for i, comp in enumerate(self.components):
            lhs = scalarode.apply_operator(comp, c)
            if i + 1 < self.model.m:
                lhs = lhs - self.components[i + 1].scale(beta)
            worst = max(worst, lhs.max_abs_coeff())
        return worst

    def scale(self, a) -> "ClosedFormSolution":
        return ClosedFormSolution(self.model, self.t0,
                                  [c.scale(a) for c in self.components])

    def __add__(self, other) -> "ClosedFormSolution":
        _check_same_space(self, other)
        return ClosedFormSolution(self.model, self.t0,
                                  [a + b for a, b in
                                   zip(self.components, other.components)])

    def __neg__(self):
        return self.scale(-1)


class NumericSolution(SolutionBase):
    """Adaptive-integration solution (DOP853, dense output, lazy span)."""

    def __init__(self, model, t0, u0, v0):
        self.model = model
        self.t0 = float(t0)
        self._u0 = [float(x) for x in u0]
        self._v0 = [float(x) for x in v0]
        self._fwd = None
        self._bwd = None

    def _rhs(self, t, y):
        m = self.model.m
        u, v = y[:m], y[m:]
        ft = float(self.model.f(t))
        beta = float(self.model.beta)
        du = v
        dv = [ft * u[i] + (beta * u[i + 1] if i + 1 < m else 0.0)
              for i in range(m)]
        return np.concatenate([du, dv])

    def _integrate(self, t_end):
        from scipy.integrate import solve_ivp

        y0 = np.array(self._u0 + self._v0, dtype=float)
        sol = solve_ivp(self._rhs, (self.t0, t_end), y0, method="DOP853",
                        rtol=1e-11, atol=1e-13, dense_output=True)
        if not sol.success:
            raise RuntimeError(f"integration failed: {sol.message}")
        return sol

    def evaluate(self, t):
        t = float(t)
        if t <= 0:
            raise ValueError("solutions are defined for t > 0")
        m = self.model.m
        if t == self.t0:
            return list(self._u0), list(self._v0)
        if t > self.t0:
            if self._fwd is None or self._fwd.t[-1] < t:
                self._fwd = self._integrate(max(t * 1.25, self.t0 * 2))
            y = self._fwd.sol(t)
        else:
            if self._bwd is None or self._bwd.t[-1] > t:
                self._bwd = self._integrate(max(t * 0.8, 1e-8))
            y = self._bwd.sol(t)
        return list(y[:m]), list(y[m:])

    def residual(self, ts=None, h: float = 1e-5) -> float:
        """Relative defect of the equation along sample points.

        u' is checked against a central difference of u, and v' (from the
        same difference applied to v) against f u + beta A u.
        """
        if ts is None:
            ts = [self.t0 * (1 + 0.37 * i) for i in range(1, 8)]
        m = self.model.m
        beta = float(self.model.beta)
        worst = 0.0
        for t in ts:
            um, vm = self.evaluate(t - h)
            up, vp = self.evaluate(t + h)
            u, v = self.evaluate(t)
            ft = float(self.model.f(t))
            scale = max(1.0, max(abs(x) for x in u + v))
            for i in range(m):
                du_fd = (up[i] - um[i]) / (2 * h)
                dv_fd = (vp[i] - vm[i]) / (2 * h)
                rhs = ft * u[i] + (beta * u[i + 1] if i + 1 < m else 0.0)
                worst = max(worst, abs(du_fd - v[i]) / scale,
                            abs(dv_fd - rhs) / scale)
        return worst


class TransformedSolution(SolutionBase):
    """Evaluator composition t -> C base((t - p)/q), value and derivative."""

    def __init__(self, model, base: SolutionBase, q, p=0, matrix=None):
        self.model = model
        self.base = base
        self.q = q
        self.p = p
        self.matrix = matrix
        self.t0 = base.t0

    def evaluate(self, t):
        if t <= 0:
            raise ValueError("solutions are defined for t > 0")
        s = (t - self.p) / self.q
        u, v = self.base.evaluate(s)
        if self.matrix is not None:
            u = linalg.mat_vec(self.matrix, [frac(x) for x in u]) \
                if all(_is_exact(x) for x in u) and _matrix_exact(self.matrix) \
                else list(np.array(linalg.to_float(self.matrix)) @ np.array(
                    [float(x) for x in u]))
            v = linalg.mat_vec(self.matrix, [frac(x) for x in v]) \
                if all(_is_exact(x) for x in v) and _matrix_exact(self.matrix) \
                else list(np.array(linalg.to_float(self.matrix)) @ np.array(
                    [float(x) for x in v]))
        return list(u), [x / self.q for x in v]


class CombinationSolution(SolutionBase):
    """Pointwise linear combination of solutions with a common base point."""

    def __init__(self, model, parts):
        self.model = model
        self.parts = list(parts)
        self.t0 = parts[0][1].t0

    def evaluate(self, t):
        m = self.model.m
        u = [0] * m
        v = [0] * m
        for coef, sol in self.parts:
            su, sv = sol.evaluate(t)
            u = [a + coef * b for a, b in zip(u, su)]
            v = [a + coef * b for a, b in zip(v, sv)]
        return u, v


def _matrix_exact(mtx) -> bool:
    return all(_is_exact(x) for row in mtx for x in row)


def _check_same_space(u: SolutionBase, w: SolutionBase) -> None:
    if u.model.space_key() != w.model.space_key():
        raise ValueError("solutions belong to different model data")
    if float(u.t0) != float(w.t0):
        raise ValueError("solutions carry different base points")


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

DEFAULT_T0 = Fraction(1)


def solution_from_data(model, u0, v0, t0=DEFAULT_T0) -> SolutionBase:
    """The element of the solution space with data (u0, v0) at t0."""
    if len(u0) != model.m or len(v0) != model.m:
        raise ValueError("initial data must have length m")
    if model.f.kind == "euler":
        exact = model.exact() and all(_is_exact(x) for x in list(u0) + list(v0)) \
            and _is_exact(t0)
        if not exact:
            u0 = [float(x) for x in u0]
            v0 = [float(x) for x in v0]
            t0 = float(t0)
        comps = _cascade(model, t0, u0, v0)
        return ClosedFormSolution(model, t0, comps)
    return NumericSolution(model, t0, u0, v0)


def _cascade(model, t0, u0, v0) -> list[LogPoly]:
    c = model.f.c
    beta = model.beta
    comps: list[LogPoly] = [LogPoly.zero()] * model.m
    for i in range(model.m - 1, -1, -1):
        rhs = comps[i + 1].scale(beta) if i + 1 < model.m else LogPoly.zero()
        comps[i] = scalarode.solve_scalar(c, rhs, t0, u0[i], v0[i])
    return comps


def solution_from_components(model, components, t0=DEFAULT_T0) -> ClosedFormSolution:
    return ClosedFormSolution(model, t0, components)


def random_solution(model, rng, denom: int = 4, t0=DEFAULT_T0) -> SolutionBase:
    u0 = [Fraction(rng.randint(-6, 6), rng.randint(1, denom)) for _ in range(model.m)]
    v0 = [Fraction(rng.randint(-6, 6), rng.randint(1, denom)) for _ in range(model.m)]
    return solution_from_data(model, u0, v0, t0)


# ---------------------------------------------------------------------------
# the symplectic form
# ---------------------------------------------------------------------------

def omega_at(u: SolutionBase, w: SolutionBase, t):
    """<u'(t), w(t)> - <u(t), w'(t)> under the model's inner product."""
    _check_same_space(u, w)
    gram = u.model.gram_matrix()
    uu, du = u.evaluate(t)
    ww, dw = w.evaluate(t)
    if all(_is_exact(x) for x in uu + du + ww + dw):
        return linalg.dot(gram, [frac(x) for x in du], [frac(x) for x in ww]) \
            - linalg.dot(gram, [frac(x) for x in uu], [frac(x) for x in dw])
    gm = linalg.to_float(gram)
    a = np.array([float(x) for x in du]) @ gm @ np.array([float(x) for x in ww])
    b = np.array([float(x) for x in uu]) @ gm @ np.array([float(x) for x in dw])
    return a - b


def omega(u: SolutionBase, w: SolutionBase):
    """The symplectic pairing, evaluated at the common base point."""
    return omega_at(u, w, u.t0)


def omega_drift(u: SolutionBase, w: SolutionBase, ts) -> float:
    base = float(omega(u, w))
    return max(abs(float(omega_at(u, w, t)) - base) for t in ts)


# ---------------------------------------------------------------------------
# the operators T, C and CT
# ---------------------------------------------------------------------------

def _validate_c_matrix(model, c_matrix) -> None:
    a = model.shift_matrix()
    q2 = frac(model.q) ** 2 if _is_exact(model.q) else float(model.q) ** 2
    if _matrix_exact(c_matrix) and _is_exact(q2):
        lhs = linalg.mat_mul(linalg.mat(c_matrix), a)
        rhs = linalg.mat_scale(linalg.mat_mul(a, linalg.mat(c_matrix)), q2)
        if not linalg.mat_eq(lhs, rhs):
            raise ValueError("matrix fails C A C^{-1} = q^2 A")
    else:
        cm = np.array([[float(x) for x in row] for row in c_matrix])
        am = linalg.to_float(a)
        if np.max(np.abs(cm @ am - float(q2) * am @ cm)) > 1e-9:
            raise ValueError("matrix fails C A C^{-1} = q^2 A")


def apply_CT(sol: SolutionBase, c_matrix=None) -> SolutionBase:
    """[CTu](t) = C u(t/q); preserves the solution space."""
    model = sol.model
    if c_matrix is None:
        c_matrix = model.canonical_c_matrix()
    _validate_c_matrix(model, c_matrix)
    q = model.q
    if isinstance(sol, ClosedFormSolution):
        dilated = [comp.dilate(q) for comp in sol.components]
        comps = []
        for i in range(model.m):
            acc = LogPoly.zero()
            for j in range(model.m):
                cij = c_matrix[i][j]
                if cij != 0:
                    acc = acc + dilated[j].scale(cij)
            comps.append(acc)
        return ClosedFormSolution(model, sol.t0, comps)
    return TransformedSolution(model, sol, q=float(q), p=0, matrix=c_matrix)


def apply_T(sol: SolutionBase) -> SolutionBase:
    """[Tu](t) = u(t/q); does NOT preserve the space once A is nonzero."""
    model = sol.model
    q = model.q
    if isinstance(sol, ClosedFormSolution):
        return ClosedFormSolution(model, sol.t0,
                                  [comp.dilate(q) for comp in sol.components])
    return TransformedSolution(model, sol, q=float(q), p=0, matrix=None)


def reintegrated(sol: SolutionBase) -> NumericSolution:
    """Fresh numeric solution grown from sol's initial data (dual-path probe)."""
    u0, v0 = sol.evaluate(sol.t0)
    return NumericSolution(sol.model, sol.t0, u0, v0)


# ---------------------------------------------------------------------------
# scalar monodromy
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalarMonodromy:
    matrix: tuple
    mu_plus: complex
    mu_minus: complex
    q: float

    @property
    def det_defect(self) -> float:
        (a, b), (c, d) = self.matrix
        return abs(complex(a * d - b * c) - 1.0 / self.q)

    @property
    def product_defect(self) -> float:
        return abs(self.mu_plus * self.mu_minus - 1.0 / self.q)


def scalar_monodromy(f: HomogeneityFunction, q, t0=DEFAULT_T0) -> ScalarMonodromy:
    """Matrix of [Ty](t) = y(t/q) on the scalar solution space of y'' = f y.

    Basis: solutions with data (1,0) and (0,1) at t0; eigenvalues ordered
    by modulus, |mu+| <= |mu-|, ties broken by argument.
    """
    qf = float(q)
    if qf <= 1:
        raise ValueError("q is normalized to q > 1")
    if f.kind == "euler":
        exact = _is_exact(f.c) and _is_exact(q) and _is_exact(t0)
        one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
        y1 = scalarode.solve_scalar(f.c, LogPoly.zero(), t0, one, zero)
        y2 = scalarode.solve_scalar(f.c, LogPoly.zero(), t0, zero, one)
        s = t0 / q if exact else float(t0) / qf
        col = lambda y: (y.eval(s), y.deriv().eval(s) / (q if exact else qf))  # noqa: E731
        (a, c), (b, d) = col(y1), col(y2)
    else:
        from scipy.integrate import solve_ivp

        def rhs(t, y):
            return [y[1], float(f(t)) * y[0]]

        cols = []
        for data in ([1.0, 0.0], [0.0, 1.0]):
            out = solve_ivp(rhs, (float(t0), float(t0) / qf), data,
                            method="DOP853", rtol=1e-12, atol=1e-14)
            if not out.success:
                raise RuntimeError(f"monodromy integration failed: {out.message}")
            cols.append((out.y[0][-1], out.y[1][-1] / qf))
        (a, c), (b, d) = cols
    mu_plus, mu_minus = _ordered_eigenvalues(a, b, c, d)
    return ScalarMonodromy(matrix=((a, b), (c, d)), mu_plus=mu_plus,
                           mu_minus=mu_minus, q=qf)


def _ordered_eigenvalues(a, b, c, d):
    tr = complex(a + d)
    det = complex(a * d - b * c)
    disc = (tr * tr - 4 * det) ** 0.5
    r1 = (tr + disc) / 2
    r2 = (tr - disc) / 2
    key = lambda z: (abs(z), abs(cmath_phase(z)))  # noqa: E731
    lo, hi = sorted((r1, r2), key=key)
    lo = _realify(lo)
    hi = _realify(hi)
    return lo, hi


def cmath_phase(z: complex) -> float:
    import cmath

    return cmath.phase(z)


def _realify(z: complex):
    return z.real if abs(z.imag) <= 1e-13 * max(1.0, abs(z)) else z


# ---------------------------------------------------------------------------
# the triangular basis
# ---------------------------------------------------------------------------

@dataclass
class TriangularBasis:
    """Basis u+_1, u-_1, ..., u+_m, u-_m making CT upper triangular."""

    model: Model
    solutions: tuple
    labels: tuple          # (j, "+") / (j, "-") in diagonal order
    lambdas: tuple         # q^{m+1-2j} mu_{+-}
    mu_plus: object
    mu_minus: object
    c_matrix: object = field(default=None)

    def data_matrix(self) -> np.ndarray:
        cols = [sol.data_vector() for sol in self.solutions]
        return np.array([[float(x) for x in col] for col in cols]).T

    def coordinates(self, sol: SolutionBase) -> np.ndarray:
        data = np.array([float(x) for x in sol.data_vector()])
        return np.linalg.solve(self.data_matrix(), data)


def triangular_basis(model: Model, c_matrix=None) -> TriangularBasis:
    """Construct the CT-triangular basis by the downward cascade.

    The j-th pair starts from the scalar T-eigenfunctions in slot j; the
    lower corrections are the particular cascade solutions with zero data
    at the base point, which pins the free combination coefficients and
    makes the output deterministic.
    """
    if c_matrix is None:
        c_matrix = model.canonical_c_matrix()
    _validate_c_matrix(model, c_matrix)
    m, q = model.m, model.q
    t0 = DEFAULT_T0 if model.exact() else float(DEFAULT_T0)
    if model.f.kind == "euler":
        hi, lo = scalarode.indicial_roots(model.f.c)
        if isinstance(hi, complex):
            raise OscillatoryRegimeError("complex indicial roots")
        y_plus = LogPoly.power(Fraction(1) if _is_exact(hi) else 1.0, hi)
        y_minus = LogPoly.power(Fraction(1) if _is_exact(lo) else 1.0, lo)
        if hi == lo:
            y_minus = LogPoly.power(1 if _is_exact(hi) else 1.0, hi, 1)
        mu_plus = _qpow(q, -hi) if _is_exact(hi) and Fraction(hi).denominator == 1 \
            else float(q) ** -float(hi)
        mu_minus = _qpow(q, -lo) if _is_exact(lo) and Fraction(lo).denominator == 1 \
            else float(q) ** -float(lo)
        scalar_pair = {"+": y_plus, "-": y_minus}
    else:
        mono = scalar_monodromy(model.f, q)
        if isinstance(mono.mu_plus, complex) or isinstance(mono.mu_minus, complex):
            raise OscillatoryRegimeError(
                "complex monodromy eigenvalues are outside the supported surface"
            )
        mu_plus, mu_minus = mono.mu_plus, mono.mu_minus
        scalar_pair = {"+": _eigenfunction_data(mono, mono.mu_plus),
                       "-": _eigenfunction_data(mono, mono.mu_minus)}

    solutions = []
    labels = []
    lambdas = []
    for j in range(1, m + 1):
        for sign in ("+", "-"):
            if model.f.kind == "euler":
                comps = [LogPoly.zero()] * m
                comps[j - 1] = scalar_pair[sign]
                for i in range(j - 2, -1, -1):
                    rhs = comps[i + 1].scale(model.beta)
                    zero = Fraction(0) if model.exact() else 0.0
                    comps[i] = scalarode.solve_scalar(model.f.c, rhs, t0,
                                                      zero, zero)
                sol = ClosedFormSolution(model, t0, comps)
            else:
                u0 = [0.0] * m
                v0 = [0.0] * m
                u0[j - 1], v0[j - 1] = scalar_pair[sign]
                sol = NumericSolution(model, t0, u0, v0)
            solutions.append(sol)
            labels.append((j, sign))
            mu = mu_plus if sign == "+" else mu_minus
            lambdas.append(_qpow(q, m + 1 - 2 * j) * mu
                           if _is_exact(mu) and _is_exact(q)
                           else float(q) ** (m + 1 - 2 * j) * float(mu))
    return TriangularBasis(model=model, solutions=tuple(solutions),
                           labels=tuple(labels), lambdas=tuple(lambdas),
                           mu_plus=mu_plus, mu_minus=mu_minus,
                           c_matrix=c_matrix)


def _eigenfunction_data(mono: ScalarMonodromy, mu):
    mtx = np.array([[float(x) for x in row] for row in mono.matrix])
    vals, vecs = np.linalg.eig(mtx)
    idx = int(np.argmin(np.abs(vals - complex(mu))))
    vec = np.real(vecs[:, idx])
    norm = vec[0] if abs(vec[0]) > 1e-12 else vec[1]
    vec = vec / norm
    return float(vec[0]), float(vec[1])


def ct_matrix(basis: TriangularBasis) -> np.ndarray:
    """Matrix of CT in the triangular basis (float coordinates)."""
    cols = []
    for sol in basis.solutions:
        cols.append(basis.coordinates(apply_CT(sol, basis.c_matrix)))
    return np.array(cols).T


def triangularity_defect(basis: TriangularBasis) -> tuple[float, float]:
    """(worst below-diagonal magnitude, worst relative diagonal error)."""
    mtx = ct_matrix(basis)
    n = mtx.shape[0]
    below = max((abs(mtx[i][j]) for i in range(n) for j in range(i)),
                default=0.0)
    diag = max(abs(mtx[i][i] - float(basis.lambdas[i])) /
               max(1e-30, abs(float(basis.lambdas[i]))) for i in range(n))
    return below, diag


# ---------------------------------------------------------------------------
# Omega structure of the basis
# ---------------------------------------------------------------------------

def omega_scaling_check(u: SolutionBase, w: SolutionBase, c_matrix=None):
    """(Omega(CTu, CTw), Omega(u, w)/q, defect)."""
    lhs = omega(apply_CT(u, c_matrix), apply_CT(w, c_matrix))
    rhs = omega(u, w) / u.model.q
    return lhs, rhs, abs(float(lhs) - float(rhs))


@dataclass(frozen=True)
class OmegaPattern:
    gram: tuple
    hypothesis_ok: bool
    same_sign_max: float
    antidiagonal_min: float
    off_antidiagonal_max: float


def integer_power_exponent(q, mu) -> int | None:
    """e with mu = q^e, or None (exact in the rational lane)."""
    if _is_exact(mu) and _is_exact(q):
        mu, q = frac(mu), frac(q)
        for e in range(-64, 65):
            if q ** e == mu:
                return e
        return None
    x = math.log(float(mu)) / math.log(float(q))
    return round(x) if abs(x - round(x)) < 1e-9 else None


def omega_pattern(basis: TriangularBasis) -> OmegaPattern:
    """Gram matrix of Omega on the basis and its block pattern.

    Under the hypothesis that both monodromy eigenvalues are integer powers
    of q: same-sign pairings vanish, and opposite-sign pairings are nonzero
    exactly on the antidiagonal i + j = m + 1.
    """
    model = basis.model
    ok = (integer_power_exponent(model.q, basis.mu_plus) is not None
          and integer_power_exponent(model.q, basis.mu_minus) is not None)
    n = len(basis.solutions)
    gram = [[float(omega(basis.solutions[i], basis.solutions[j]))
             for j in range(n)] for i in range(n)]
    same_sign = 0.0
    anti_min = math.inf
    off_max = 0.0
    m = model.m
    for i in range(n):
        ji, si = basis.labels[i]
        for j in range(n):
            jj, sj = basis.labels[j]
            value = abs(gram[i][j])
            if si == sj:
                same_sign = max(same_sign, value)
            elif ji + jj == m + 1:
                anti_min = min(anti_min, value)
            else:
                off_max = max(off_max, value)
    return OmegaPattern(gram=tuple(tuple(row) for row in gram),
                        hypothesis_ok=ok, same_sign_max=same_sign,
                        antidiagonal_min=anti_min,
                        off_antidiagonal_max=off_max)

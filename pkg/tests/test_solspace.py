import math
import random
from fractions import Fraction

import pytest

from ecsverify import solspace as S
from ecsverify.scalarode import LogPoly, OscillatoryRegimeError


def euler_model(m=2, q=Fraction(2), c=Fraction(2), epsilon=1):
    return S.Model(m=m, q=q, epsilon=epsilon, f=S.HomogeneityFunction.euler(c))


def ripple_profile(x):
    return 0.37 + 0.05 * math.sin(2 * math.pi * x)


def log_periodic_model(m=2, q=2.0):
    return S.Model(m=m, q=q, epsilon=1,
                   f=S.HomogeneityFunction.log_periodic(q, ripple_profile))


# ---------------------------------------------------------------------------
# homogeneity functions
# ---------------------------------------------------------------------------

def test_euler_symmetry_is_exact():
    f = S.HomogeneityFunction.euler(Fraction(2))
    q = Fraction(3, 2)
    for t in (Fraction(1), Fraction(5, 3), Fraction(7, 2)):
        assert q * q * f(q * t) == f(t)


def test_log_periodic_symmetry_sampled():
    f = S.HomogeneityFunction.log_periodic(2.0, ripple_profile)
    assert f.symmetry_defect(2.0) < 1e-12
    # the symmetry only holds for the profile's own ratio
    assert f.symmetry_defect(1.7) > 1e-3


def test_model_rejects_low_q():
    with pytest.raises(ValueError, match="normalized"):
        euler_model(q=Fraction(1, 2))


def test_model_json_roundtrip():
    model = euler_model(m=3, q=Fraction(3, 2), c=Fraction(6))
    back = S.Model.from_json(model.to_json())
    assert back == model


# ---------------------------------------------------------------------------
# solutions and residuals
# ---------------------------------------------------------------------------

def test_kernel_component_kills_a_term():
    # u = t^2 e_1 has values in Ker A, so the A-term drops out
    model = euler_model()
    u = S.solution_from_components(model, [LogPoly.power(Fraction(1), Fraction(2)),
                                           LogPoly.zero()])
    assert u.residual() == 0.0


def test_cascade_example_m2():
    # u = t^{-1} e_2 - (q^2/2) t e_1 solves the system for c = 2
    for q in (Fraction(2), Fraction(3, 2)):
        model = euler_model(q=q)
        coef = -q * q / 2
        u = S.solution_from_components(
            model, [LogPoly.power(coef, Fraction(1)),
                    LogPoly.power(Fraction(1), Fraction(-1))])
        assert u.residual() == 0.0


def test_solution_from_data_matches_data():
    model = euler_model(m=3)
    u0 = [Fraction(1), Fraction(-2), Fraction(1, 2)]
    v0 = [Fraction(0), Fraction(3), Fraction(-1)]
    sol = S.solution_from_data(model, u0, v0)
    uu, vv = sol.evaluate(Fraction(1))
    assert uu == u0 and vv == v0
    assert sol.residual() == 0.0


def test_evaluate_rejects_nonpositive_t():
    model = euler_model()
    sol = S.random_solution(model, random.Random(1))
    with pytest.raises(ValueError):
        sol.evaluate(0)


def test_oscillatory_regime_rejected():
    model = euler_model(c=Fraction(-1))  # 1 + 4c = -3 < 0
    with pytest.raises(OscillatoryRegimeError):
        S.solution_from_data(model, [1, 0], [0, 1])


def test_resonant_lane_supported():
    # c = 3/4 has roots 3/2, -1/2 differing by 2: cascade produces logs
    model = euler_model(m=2, c=Fraction(3, 4))
    sol = S.solution_from_data(model, [Fraction(1), Fraction(1)],
                               [Fraction(0), Fraction(0)])
    assert sol.residual() == 0.0
    assert any(p > 0 for comp in sol.components for (_e, p) in comp.terms)


def test_double_root_lane_supported():
    model = euler_model(m=2, c=Fraction(-1, 4))
    sol = S.solution_from_data(model, [1, 2], [3, 4])
    assert sol.residual() == 0.0


def test_numeric_twin_agrees_with_closed_form():
    model = euler_model(m=2, q=2, c=0.37)
    sol = S.solution_from_data(model, [1.0, 0.5], [0.25, -1.0])
    twin = S.reintegrated(sol)
    worst = 0.0
    for i in range(29):
        t = 1.0 + 7.0 * i / 28
        u1, v1 = sol.evaluate(t)
        u2, v2 = twin.evaluate(t)
        worst = max(worst, max(abs(a - b) for a, b in zip(u1 + v1, u2 + v2)))
    assert worst < 1e-7


def test_numeric_solution_residual():
    model = log_periodic_model()
    sol = S.NumericSolution(model, 1.0, [1.0, -0.5], [0.2, 0.4])
    assert sol.residual() < 1e-8


# ---------------------------------------------------------------------------
# the symplectic form
# ---------------------------------------------------------------------------

def test_omega_skew():
    model = euler_model(m=3)
    rng = random.Random(5)
    for _ in range(5):
        u = S.random_solution(model, rng)
        w = S.random_solution(model, rng)
        assert S.omega(u, u) == 0
        assert S.omega(u, w) == -S.omega(w, u)


def test_omega_frozen_value():
    model = euler_model()
    u = S.solution_from_components(model, [LogPoly.power(Fraction(1), Fraction(2)),
                                           LogPoly.zero()])
    w = S.solution_from_components(
        model, [LogPoly.power(Fraction(-2), Fraction(1)),
                LogPoly.power(Fraction(1), Fraction(-1))])
    assert S.omega(u, w) == 3


def test_omega_constant_in_t():
    model = euler_model(m=3, q=Fraction(2))
    rng = random.Random(9)
    ts = [1 + 7 * i / 40 for i in range(41)]
    for _ in range(4):
        u = S.random_solution(model, rng)
        w = S.random_solution(model, rng)
        assert S.omega_drift(u, w, ts) < 1e-8


def test_omega_rejects_mismatched_models():
    u = S.random_solution(euler_model(), random.Random(1))
    w = S.random_solution(euler_model(c=Fraction(6)), random.Random(1))
    with pytest.raises(ValueError, match="different model"):
        S.omega(u, w)


# ---------------------------------------------------------------------------
# the operators
# ---------------------------------------------------------------------------

def test_ct_closure_exact():
    model = euler_model(m=3)
    rng = random.Random(2)
    for _ in range(5):
        sol = S.random_solution(model, rng)
        assert S.apply_CT(sol).residual() == 0.0


def test_ct_eigenvalue_on_kernel_line():
    # CT(t^2 e_1) = q^{m-1} q^{-2} t^2 e_1 = lambda^+_1 u for m = 2, c = 2
    model = euler_model()
    u = S.solution_from_components(model, [LogPoly.power(Fraction(1), Fraction(2)),
                                           LogPoly.zero()])
    ct_u = S.apply_CT(u)
    assert ct_u.components[0].terms == {(Fraction(2), 0): Fraction(1, 2)}
    assert ct_u.components[1].is_zero()


def test_t_alone_leaves_the_space():
    model = euler_model(m=2)
    sol = S.solution_from_data(model, [Fraction(0), Fraction(1)],
                               [Fraction(1), Fraction(0)])
    assert S.apply_T(sol).residual() > 0.1


def test_ct_composition_consistency():
    model = euler_model(m=2)
    rng = random.Random(3)
    sol = S.random_solution(model, rng)
    twice = S.apply_CT(S.apply_CT(sol))
    for t in (Fraction(1), Fraction(3, 2), Fraction(4)):
        a = twice.evaluate(t)
        # (CT)^2 u = C^2 u(t/q^2)
        q2 = model.q * model.q
        scales = model.ct_scales()
        uu, vv = sol.evaluate(t / q2)
        expected_u = [s * s * x for s, x in zip(scales, uu)]
        expected_v = [s * s * x / q2 for s, x in zip(scales, vv)]
        assert a[0] == expected_u and a[1] == expected_v


def test_ct_rejects_bad_matrix():
    model = euler_model(m=2)
    sol = S.random_solution(model, random.Random(4))
    bad = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    with pytest.raises(ValueError, match="C A C"):
        S.apply_CT(sol, bad)


def test_omega_ct_scaling_random():
    model = euler_model(m=3, q=Fraction(3, 2))
    rng = random.Random(8)
    for _ in range(5):
        u = S.random_solution(model, rng)
        w = S.random_solution(model, rng)
        lhs, rhs, defect = S.omega_scaling_check(u, w)
        assert defect == 0.0  # exact lane


def test_omega_ct_scaling_frozen():
    model = euler_model()
    u = S.solution_from_components(model, [LogPoly.power(Fraction(1), Fraction(2)),
                                           LogPoly.zero()])
    w = S.solution_from_components(
        model, [LogPoly.power(Fraction(-2), Fraction(1)),
                LogPoly.power(Fraction(1), Fraction(-1))])
    lhs, _rhs, defect = S.omega_scaling_check(u, w)
    assert lhs == Fraction(3, 2)
    assert defect == 0.0


# ---------------------------------------------------------------------------
# scalar monodromy
# ---------------------------------------------------------------------------

def test_monodromy_c2_q2():
    mono = S.scalar_monodromy(S.HomogeneityFunction.euler(Fraction(2)), Fraction(2))
    assert abs(mono.mu_plus - 0.25) < 1e-10
    assert abs(mono.mu_minus - 2.0) < 1e-10
    assert mono.det_defect < 1e-12
    assert mono.product_defect < 1e-12


def test_monodromy_c6_q32():
    q = Fraction(3, 2)
    mono = S.scalar_monodromy(S.HomogeneityFunction.euler(Fraction(6)), q)
    assert abs(mono.mu_plus - float(q) ** -3) < 1e-10
    assert abs(mono.mu_minus - float(q) ** 2) < 1e-10


@pytest.mark.parametrize("c", [2, 6, 0.37])
@pytest.mark.parametrize("q", [2, 1.5])
def test_monodromy_product_law(c, q):
    mono = S.scalar_monodromy(S.HomogeneityFunction.euler(c), q)
    assert mono.product_defect < 1e-9
    assert mono.det_defect < 1e-9


def test_monodromy_log_periodic():
    f = S.HomogeneityFunction.log_periodic(2.0, ripple_profile)
    mono = S.scalar_monodromy(f, 2.0)
    assert mono.product_defect < 1e-9
    assert mono.det_defect < 1e-9


# ---------------------------------------------------------------------------
# the triangular basis
# ---------------------------------------------------------------------------

def test_triangular_basis_m2_diagonal():
    basis = S.triangular_basis(euler_model())
    assert basis.lambdas == (Fraction(1, 2), Fraction(4), Fraction(1, 8),
                             Fraction(1))


@pytest.mark.parametrize("m", [2, 3, 4])
def test_triangular_basis_structure(m):
    basis = S.triangular_basis(euler_model(m=m))
    below, diag = S.triangularity_defect(basis)
    assert below < 1e-8
    assert diag < 1e-8
    for sol, (j, _sign) in zip(basis.solutions, basis.labels):
        assert sol.residual() == 0.0
        # values in Ker A^j: components above j vanish
        for i in range(j, m):
            assert sol.components[i].is_zero()


def test_first_pair_is_kernel_line():
    basis = S.triangular_basis(euler_model(m=3))
    for sol in basis.solutions[:2]:
        assert all(sol.components[i].is_zero() for i in (1, 2))


def test_ct_preserves_filtration():
    model = euler_model(m=3)
    basis = S.triangular_basis(model)
    for sol, (j, _sign) in zip(basis.solutions, basis.labels):
        image = S.apply_CT(sol)
        assert image.residual() == 0.0
        for i in range(j, model.m):
            assert image.components[i].is_zero()


def test_omega_pattern_m2_and_m3():
    for m in (2, 3):
        pattern = S.omega_pattern(S.triangular_basis(euler_model(m=m)))
        assert pattern.hypothesis_ok
        assert pattern.same_sign_max < 1e-8
        assert pattern.off_antidiagonal_max < 1e-8
        assert pattern.antidiagonal_min > 1e-3


def test_omega_pattern_warning_flag():
    pattern = S.omega_pattern(S.triangular_basis(euler_model(m=2, q=2, c=0.37)))
    assert not pattern.hypothesis_ok


def test_triangular_basis_log_periodic():
    basis = S.triangular_basis(log_periodic_model())
    below, diag = S.triangularity_defect(basis)
    assert below < 1e-7
    assert diag < 1e-7

import random
from fractions import Fraction

import pytest

from ecsverify import linalg, nullforms
from ecsverify.nullforms import (
    CanonicalQuadruple,
    InnerProduct,
    NilpotentSelfAdjoint,
    NonGenericError,
    build_scaling_isometry,
    canonical_basis,
    canonical_pair,
    commutant_skew_dimension,
    conjugated_pair,
    is_generic_nilpotent,
    kernel_filtration,
    scaling_isometry_is_unique,
    semi_neutral,
    single_block,
    unique_null_in_coset,
)


def random_unimodular(rng, m, steps=12):
    """Random integer matrix with determinant +-1 (row operations on Id)."""
    p = linalg.identity(m)
    for _ in range(steps):
        i, j = rng.sample(range(m), 2)
        c = rng.choice([-2, -1, 1, 2])
        p[i] = [x + c * y for x, y in zip(p[i], p[j])]
    if rng.random() < 0.5:
        p[0] = [-x for x in p[0]]
    return p


def two_blocks(m):
    """Direct sum of two shift blocks of size m//2 (m even)."""
    half = m // 2
    a = linalg.zeros(m, m)
    for j in range(1, half):
        a[j - 1][j] = Fraction(1)
        a[half + j - 1][half + j] = Fraction(1)
    return a


def two_block_form(m):
    g = linalg.zeros(m, m)
    half = m // 2
    for i in range(half):
        g[i][half - 1 - i] = Fraction(1)
        g[half + i][m - 1 - i] = Fraction(1)
    return g


# ---------------------------------------------------------------------------
# kernel filtration
# ---------------------------------------------------------------------------

def test_filtration_single_block():
    a, _ = canonical_pair(3)
    assert kernel_filtration(a).dims == (1, 1, 1)


def test_filtration_two_blocks():
    g = InnerProduct(4, two_block_form(4))
    a = NilpotentSelfAdjoint.build(two_blocks(4), g)
    assert kernel_filtration(a).dims == (2, 2, 0, 0)


def test_filtration_conjugation_invariant():
    rng = random.Random(7)
    for _ in range(5):
        p = random_unimodular(rng, 3)
        a, g = conjugated_pair(3, p)
        assert kernel_filtration(a).dims == (1, 1, 1)


def test_filtration_rejects_non_nilpotent():
    g = InnerProduct.antidiagonal(2)
    with pytest.raises(ValueError, match="not nilpotent"):
        NilpotentSelfAdjoint.build([[1, 0], [0, -1]], g)


# ---------------------------------------------------------------------------
# genericity
# ---------------------------------------------------------------------------

def test_generic_single_block():
    a, g = canonical_pair(3)
    assert is_generic_nilpotent(a, g)


def test_not_generic_two_blocks():
    g = InnerProduct(4, two_block_form(4))
    a = NilpotentSelfAdjoint.build(two_blocks(4), g)
    assert not is_generic_nilpotent(a, g)


def test_generic_iff_trivial_skew_commutant():
    cases = []
    for m in (2, 3, 4, 5):
        cases.append(canonical_pair(m))
    g4 = InnerProduct(4, two_block_form(4))
    cases.append((NilpotentSelfAdjoint.build(two_blocks(4), g4), g4))
    rng = random.Random(3)
    for m in (3, 4):
        cases.append(conjugated_pair(m, random_unimodular(rng, m)))
    for a, g in cases:
        assert is_generic_nilpotent(a, g) == (commutant_skew_dimension(a, g) == 0)


def test_skew_commutant_dimensions():
    a3, g3 = canonical_pair(3)
    assert commutant_skew_dimension(a3, g3) == 0
    a2, g2 = canonical_pair(2)
    assert commutant_skew_dimension(a2, g2) == 0
    g4 = InnerProduct(4, two_block_form(4))
    a4 = NilpotentSelfAdjoint.build(two_blocks(4), g4)
    assert commutant_skew_dimension(a4, g4) >= 1


# ---------------------------------------------------------------------------
# the null-vector-in-a-coset primitive
# ---------------------------------------------------------------------------

def test_null_coset_hyperbolic_plane():
    form = [[0, 1], [1, 0]]
    out = unique_null_in_coset(form, [1, 1], [1, 0])
    assert out == [Fraction(0), Fraction(1)]


def test_null_coset_already_null():
    form = [[0, 1], [1, 0]]
    assert unique_null_in_coset(form, [1, 0], [0, 1]) == [Fraction(1), Fraction(0)]


def test_null_coset_random_is_null():
    rng = random.Random(11)
    form = [[0, 0, 1], [0, 1, 0], [1, 0, 0]]
    hits = 0
    while hits < 20:
        v = [Fraction(rng.randint(-5, 5)) for _ in range(3)]
        u = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(3)]
        if linalg.dot(linalg.mat(form), u, u) != 0:
            continue
        if linalg.dot(linalg.mat(form), v, u) == 0:
            continue
        x = unique_null_in_coset(form, v, u)
        assert linalg.dot(linalg.mat(form), x, x) == 0
        hits += 1


def test_null_coset_orthogonal_error():
    form = [[0, 1], [1, 0]]
    with pytest.raises(ValueError, match="orthogonal complement"):
        unique_null_in_coset(form, [0, 3], [0, 1])


# ---------------------------------------------------------------------------
# canonical basis
# ---------------------------------------------------------------------------

def test_canonical_basis_m2_standard():
    a, g = canonical_pair(2)
    quad = canonical_basis(a, g)
    assert quad.epsilon == 1
    assert quad.scale_square == 1
    assert quad.basis == ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))


def test_canonical_basis_recovers_scramble():
    rng = random.Random(23)
    for m in (2, 3, 4, 5):
        for _ in range(10):
            p = random_unimodular(rng, m)
            a, g = conjugated_pair(m, p)
            quad = canonical_basis(a, g)
            assert quad.scale_square == 1
            cols = [tuple(row[j] for row in p) for j in range(m)]
            flipped = tuple(tuple(-x for x in col) for col in cols)
            assert quad.basis in (tuple(tuple(col) for col in cols), flipped)


def test_canonical_basis_negative_epsilon():
    a, g = canonical_pair(3, epsilon=-1)
    quad = canonical_basis(a, g)
    assert quad.epsilon == -1
    assert quad.scale_square == 1


def test_canonical_basis_rejects_non_generic():
    g = InnerProduct(4, two_block_form(4))
    a = NilpotentSelfAdjoint.build(two_blocks(4), g)
    with pytest.raises(NonGenericError, match=r"\(2, 2, 0, 0\)"):
        canonical_basis(a, g)


def test_semi_neutral_on_generic_inputs():
    rng = random.Random(5)
    for m in (2, 3, 4, 5):
        _, g = conjugated_pair(m, random_unimodular(rng, m))
        assert semi_neutral(g)
        plus, minus = linalg.signature(g.matrix())
        assert plus + minus == m


def test_scale_square_device():
    # scaling the form by 2 makes <A^{m-1} v, v> = 2: not a rational square,
    # so the exact canonical normalization lives in Q(sqrt 2)
    g = InnerProduct(2, [[0, 2], [2, 0]])
    a = NilpotentSelfAdjoint.build(single_block(2), g)
    quad = canonical_basis(a, g)
    assert quad.scale_square == 2
    e1, e2 = [list(c) for c in quad.basis]
    assert g.pair(e1, e2) == quad.epsilon * quad.scale_square
    assert g.pair(e1, e1) == 0
    assert g.pair(e2, e2) == 0


# ---------------------------------------------------------------------------
# scaling isometry
# ---------------------------------------------------------------------------

def test_scaling_isometry_canonical_m3_q2():
    a, g = canonical_pair(3)
    quad = canonical_basis(a, g)
    c = build_scaling_isometry(quad, 2)
    expected = linalg.mat([[4, 0, 0], [0, 1, 0], [0, 0, Fraction(1, 4)]])
    assert linalg.mat_eq(c, expected)


@pytest.mark.parametrize("q", [Fraction(2), Fraction(3, 2)])
@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_scaling_isometry_exact_identities(m, q):
    rng = random.Random(100 * m + int(q * 2))
    p = random_unimodular(rng, m)
    a, g = conjugated_pair(m, p)
    quad = canonical_basis(a, g)
    c = build_scaling_isometry(quad, q)
    am, gm = a.matrix(), g.matrix()
    lhs = linalg.mat_mul(linalg.mat_mul(c, am), linalg.inverse(c))
    assert linalg.mat_eq(lhs, linalg.mat_scale(am, q * q))
    assert linalg.mat_eq(linalg.mat_mul(linalg.mat_mul(linalg.transpose(c), gm), c), gm)


def test_scaling_isometry_rejects_nonpositive_q():
    a, g = canonical_pair(2)
    quad = canonical_basis(a, g)
    with pytest.raises(ValueError, match="positive"):
        build_scaling_isometry(quad, -2)


def test_scaling_isometry_uniqueness():
    rng = random.Random(41)
    for m in (2, 3, 4):
        a, g = conjugated_pair(m, random_unimodular(rng, m))
        quad = canonical_basis(a, g)
        assert scaling_isometry_is_unique(a, g, quad, Fraction(3, 2))


# ---------------------------------------------------------------------------
# determinism and serialization
# ---------------------------------------------------------------------------

def test_canonical_basis_deterministic():
    rng = random.Random(77)
    a, g = conjugated_pair(4, random_unimodular(rng, 4))
    q1 = canonical_basis(a, g)
    q2 = canonical_basis(a, g)
    assert q1 == q2


def test_quadruple_json_roundtrip():
    a, g = canonical_pair(3)
    quad = canonical_basis(a, g)
    c = build_scaling_isometry(quad, Fraction(3, 2))
    blob = quad.to_json(c)
    back = CanonicalQuadruple.from_json(blob)
    assert back == quad
    assert linalg.mat_from_json(blob["C"]) == c

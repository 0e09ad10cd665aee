import pytest

from ecsverify.selectors import (
    Instance,
    anchors,
    conditions,
    eval_E,
    eval_E_inverse,
    eval_Phi,
    exhaustive_search,
    intermediate_claims,
    mask_to_set,
    maximal_symmetric_intervals,
    relaxed_search,
    _selector_mask,
)


# ---------------------------------------------------------------------------
# the window functions E, Phi and the anchors
# ---------------------------------------------------------------------------

def test_window_functions_m3_k0():
    assert eval_E(1, 3, 0) == 2
    assert eval_Phi(1, 3, 0) == 5
    assert anchors(3, 0) == (3, 2)  # (a_0, a_1)


def test_anchor_sum():
    for m in range(2, 33):
        for k in range(-(m - 1), m):
            a0, a1 = anchors(m, k)
            assert a0 + a1 == 2 * m - 1
            assert eval_E(a0, m, k) == 0
            assert eval_E(a1, m, k) == 1


def test_involution_and_negation():
    for m in (2, 3, 5, 8):
        for k in (-3, -1, 0, 1, 4):
            for a in range(-100, 101):
                assert eval_Phi(eval_Phi(a, m, k), m, k) == a
                assert eval_E(eval_Phi(a, m, k), m, k) == -eval_E(a, m, k)


def test_E_inverse_formula_matches_search():
    for m in (2, 4, 7):
        for k in (-2, 0, 3):
            for a in range(-50, 51):
                b = eval_E(a, m, k)
                assert eval_E_inverse(b, m, k) == a


def test_E_bijective_on_window():
    for m in (2, 5, 9):
        for k in (0, -1, 2):
            values = [eval_E(a, m, k) for a in range(1, 2 * m + 1)]
            assert len(set(values)) == 2 * m


# ---------------------------------------------------------------------------
# conditions
# ---------------------------------------------------------------------------

def test_conditions_literal_m3_k0():
    inst = Instance(3, 0)
    rec = conditions(frozenset({1, 2, 3}), inst)
    assert rec.c          # pairs {1,6}, {2,5}, {3,4}
    assert not rec.e      # |S cap {1,2}| = 2 > 1


def test_conditions_empty_selector():
    rec = conditions(frozenset(), Instance(2, 1))
    assert not rec.c


def test_conditions_rejects_out_of_range():
    with pytest.raises(ValueError, match="outside"):
        conditions(frozenset({0, 3}), Instance(3, 0))


def test_selector_enumeration_count_and_size():
    inst = Instance(4, 0)
    masks = [_selector_mask(c, 4) for c in range(16)]
    assert len(set(masks)) == 16
    for mask in masks:
        s = mask_to_set(mask)
        assert len(s) == 4
        assert conditions(s, inst).c


# ---------------------------------------------------------------------------
# the exhaustive search
# ---------------------------------------------------------------------------

def test_theorem_holds_small():
    assert exhaustive_search(Instance(3, 0)) == []
    assert exhaustive_search(Instance(2, 1)) == []


def test_theorem_sweep_medium():
    for m in range(2, 9):
        for k in range(-(m - 1), m):
            assert exhaustive_search(Instance(m, k)) == []


def test_theorem_outside_k_window():
    # the theorem holds for all k; spot sweep past |k| <= m-1
    for m in (2, 3, 4):
        for k in range(-(m + 2), m + 3):
            assert exhaustive_search(Instance(m, k)) == []


def test_search_agrees_with_literal_conditions():
    inst = Instance(4, -1)
    from ecsverify.selectors import _search_masks
    for drop in (None, "a", "b", "d", "e"):
        fast = set(mask_to_set(m) for m in _search_masks(inst, drop=drop))
        slow = set()
        for choice in range(16):
            s = mask_to_set(_selector_mask(choice, 4))
            if conditions(s, inst).all_of(drop=drop):
                slow.add(s)
        assert fast == slow


def test_relaxed_drop_e_has_witness():
    hits = relaxed_search(Instance(2, 0), drop="e")
    assert frozenset({1, 2}) in hits


def test_relaxed_drop_c_widens_space():
    hits = relaxed_search(Instance(2, 0), drop="c")
    for s in hits:
        rec = conditions(s, Instance(2, 0))
        assert rec.a and rec.b and rec.d and rec.e
    with pytest.raises(ValueError, match="bound"):
        relaxed_search(Instance(11, 0), drop="c")


def test_search_thread_count_irrelevant():
    inst = Instance(6, -1)
    assert relaxed_search(inst, "e", threads=1) == relaxed_search(inst, "e", threads=4)
    assert exhaustive_search(inst, threads=3) == exhaustive_search(inst, threads=1)


def test_search_rejects_oversized_m():
    with pytest.raises(ValueError, match="bound"):
        exhaustive_search(Instance(21, 0))


# ---------------------------------------------------------------------------
# intermediate structure claims
# ---------------------------------------------------------------------------

def test_intervals_m4_k0():
    r_plus, r_minus = maximal_symmetric_intervals(4, 0)
    assert r_plus == frozenset({2, 4, 6})          # even numbers in [2, 2m-2]
    assert r_minus == frozenset({1, 3, 5, 7})      # odd numbers in [1, 2m-1]


def test_intermediate_claims_sweep():
    for m in range(2, 9):
        for k in range(-(m - 1), m):
            report = intermediate_claims(Instance(m, k))
            assert report.sizes_ok
            assert report.phi_invariant
            assert report.parity_parts_in_intervals
            assert report.k_in_proof_range
            if report.survivors:
                assert k in (0, -1)

"""Exhaustive verification of the combinatorial nonexistence theorem.

For fixed integers m >= 2 and k, the window is V = {1, ..., 2m} and a
selector is a subset containing exactly one element of each pair {a, b}
with a + b = 2m + 1.  The five conditions (a)-(e) below are tested over
all 2^m selectors; the theorem asserts that no selector satisfies all of
them, for any (m, k).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass


def _sign(a: int) -> int:
    return -1 if a % 2 else 1


def eval_E(a: int, m: int, k: int) -> int:
    """E(a) = m - (-1)^a k - a."""
    return m - _sign(a) * k - a


def eval_Phi(a: int, m: int, k: int) -> int:
    """Phi(a) = 2m - 2 (-1)^a k - a; an involution with E(Phi(a)) = -E(a)."""
    return 2 * m - 2 * _sign(a) * k - a


def eval_E_inverse(b: int, m: int, k: int) -> int:
    """E^{-1}(b) = m - (-1)^{m+k+b} k - b."""
    return m - _sign(m + k + b) * k - b


def anchors(m: int, k: int) -> tuple[int, int]:
    """(a_0, a_1) with E(a_0) = 0 and E(a_1) = 1; a_0 + a_1 = 2m - 1."""
    s = _sign(m + k)
    return m - s * k, m + s * k - 1


@dataclass(frozen=True)
class Instance:
    m: int
    k: int

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("need m >= 2")


@dataclass(frozen=True)
class ConditionRecord:
    a: bool
    b: bool
    c: bool
    d: bool
    e: bool

    def all_of(self, drop: str | None = None) -> bool:
        values = {"a": self.a, "b": self.b, "c": self.c, "d": self.d, "e": self.e}
        return all(v for name, v in values.items() if name != drop)


def conditions(selector: frozenset, inst: Instance) -> ConditionRecord:
    """Evaluate conditions (a)-(e) literally on an arbitrary subset of V."""
    m, k = inst.m, inst.k
    if any(a < 1 or a > 2 * m for a in selector):
        raise ValueError("selector contains elements outside {1, ..., 2m}")
    a0, a1 = anchors(m, k)
    cond_a = a1 in selector and eval_Phi(a1, m, k) not in selector
    cond_b = (a0 in selector) == (m % 2 == 0)
    cond_c = all((a in selector) + ((2 * m + 1 - a) in selector) == 1
                 for a in range(1, m + 1))
    cond_d = all(any(eval_E(b, m, k) == -eval_E(a, m, k) for b in selector)
                 for a in selector if a != a1)
    cond_e = all(sum(1 for x in selector if x <= 2 * j) <= j
                 for j in range(1, m + 1))
    return ConditionRecord(cond_a, cond_b, cond_c, cond_d, cond_e)


# ---------------------------------------------------------------------------
# fast enumeration (bitmask layout: bit a-1 holds element a)
# ---------------------------------------------------------------------------

MAX_M = 20
MAX_M_UNRESTRICTED = 10  # dropping (c) widens the space to 2^{2m} subsets


def _tables(inst: Instance):
    m, k = inst.m, inst.k
    a0, a1 = anchors(m, k)
    phi_bit = []  # bit of Phi(a) if it lands inside V, else None
    for a in range(1, 2 * m + 1):
        p = eval_Phi(a, m, k)
        phi_bit.append(1 << (p - 1) if 1 <= p <= 2 * m else None)
    prefix_masks = [(1 << (2 * j)) - 1 for j in range(1, m + 1)]
    a0_bit = 1 << (a0 - 1) if 1 <= a0 <= 2 * m else None
    a1_bit = 1 << (a1 - 1) if 1 <= a1 <= 2 * m else None
    phi_a1 = eval_Phi(a1, m, k)
    phi_a1_bit = 1 << (phi_a1 - 1) if 1 <= phi_a1 <= 2 * m else None
    return a0_bit, a1_bit, phi_a1_bit, phi_bit, prefix_masks


def _passes(mask: int, inst: Instance, tables, drop: str | None) -> bool:
    m = inst.m
    a0_bit, a1_bit, phi_a1_bit, phi_bit, prefix_masks = tables
    if drop != "a":
        if a1_bit is None or not mask & a1_bit:
            return False
        if phi_a1_bit is not None and mask & phi_a1_bit:
            return False
    if drop != "b":
        present = a0_bit is not None and bool(mask & a0_bit)
        if present != (m % 2 == 0):
            return False
    if drop != "e":
        for j, pm in enumerate(prefix_masks, start=1):
            if (mask & pm).bit_count() > j:
                return False
    if drop != "d":
        # (d) via the inversion formula: the unique integer b with
        # E(b) = -E(a) is Phi(a), so membership of Phi(a) decides it
        rest = mask & ~(a1_bit or 0) if a1_bit is not None else mask
        while rest:
            low = rest & -rest
            pb = phi_bit[low.bit_length() - 1]
            if pb is None or not mask & pb:
                return False
            rest ^= low
    return True


def _selector_mask(choice: int, m: int) -> int:
    """Selector indexed by an m-bit integer; bit j-1 picks j over 2m+1-j."""
    mask = 0
    for j in range(1, m + 1):
        if (choice >> (j - 1)) & 1:
            mask |= 1 << (j - 1)
        else:
            mask |= 1 << (2 * m - j)
    return mask


def mask_to_set(mask: int) -> frozenset:
    out = set()
    a = 1
    while mask:
        if mask & 1:
            out.add(a)
        mask >>= 1
        a += 1
    return frozenset(out)


def _search_masks(inst: Instance, drop: str | None, threads: int = 1) -> list[int]:
    m = inst.m
    tables = _tables(inst)
    if drop == "c":
        if m > MAX_M_UNRESTRICTED:
            raise ValueError(
                f"m={m} exceeds bound {MAX_M_UNRESTRICTED} for unrestricted search"
            )
        space = range(1 << (2 * m))
        emit = lambda mask: mask  # noqa: E731
    else:
        if m > MAX_M:
            raise ValueError(f"m={m} exceeds search bound {MAX_M}")
        space = range(1 << m)
        emit = lambda choice: _selector_mask(choice, m)  # noqa: E731

    def scan(chunk) -> list[int]:
        hits = []
        for item in chunk:
            mask = emit(item)
            if _passes(mask, inst, tables, drop):
                hits.append(mask)
        return hits

    if threads <= 1:
        results = scan(space)
    else:
        n = len(space)
        bounds = [(i * n // threads, (i + 1) * n // threads) for i in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = pool.map(scan, [space[lo:hi] for lo, hi in bounds])
        results = [mask for part in parts for mask in part]
    return sorted(results)


def exhaustive_search(inst: Instance, threads: int = 1) -> list[frozenset]:
    """All selectors satisfying (a)-(e); the theorem says there are none."""
    return [mask_to_set(m) for m in _search_masks(inst, drop=None, threads=threads)]


def relaxed_search(inst: Instance, drop: str, threads: int = 1) -> list[frozenset]:
    """Same search with one condition dropped (positive control)."""
    if drop not in ("a", "b", "c", "d", "e"):
        raise ValueError("drop must be one of a, b, c, d, e")
    return [mask_to_set(m) for m in _search_masks(inst, drop=drop, threads=threads)]


# ---------------------------------------------------------------------------
# intermediate structure of (a)-(d) survivors
# ---------------------------------------------------------------------------

def maximal_symmetric_intervals(m: int, k: int) -> tuple[frozenset, frozenset]:
    """(R_+, R_-): maximal even/odd subintervals of V symmetric about m -+ k."""
    if k >= 0:
        r_plus = range(2, 2 * m - 2 * k - 1, 2)
        r_minus = range(2 * k + 1, 2 * m, 2)
    else:
        r_plus = range(-2 * k, 2 * m + 1, 2)
        r_minus = range(1, 2 * m + 2 * k, 2)
    window = set(range(1, 2 * m + 1))
    return frozenset(r_plus) & window, frozenset(r_minus) & window


@dataclass(frozen=True)
class IntermediateReport:
    instance: Instance
    survivors: tuple
    sizes_ok: bool
    phi_invariant: bool
    parity_parts_in_intervals: bool
    k_in_proof_range: bool


def intermediate_claims(inst: Instance, threads: int = 1) -> IntermediateReport:
    """Structure checks on every selector surviving (a)-(d).

    Survivors must have m elements, S \\ {a_1} must be Phi-invariant, the
    even/odd parts must sit inside the maximal symmetric subintervals, and
    survivors may exist only when k is 0 or -1.
    """
    m, k = inst.m, inst.k
    _, a1 = anchors(m, k)
    survivors = relaxed_search(inst, drop="e", threads=threads)
    r_plus, r_minus = maximal_symmetric_intervals(m, k)
    sizes_ok = all(len(s) == m for s in survivors)
    phi_ok = all(
        frozenset(eval_Phi(a, m, k) for a in s - {a1}) == s - {a1}
        for s in survivors
    )
    parts_ok = True
    for s in survivors:
        rest = s - {a1}
        s_plus = frozenset(a for a in rest if a % 2 == 0)
        s_minus = frozenset(a for a in rest if a % 2 == 1)
        if not (s_plus <= r_plus and s_minus <= r_minus):
            parts_ok = False
    k_ok = (not survivors) or k in (0, -1)
    return IntermediateReport(
        instance=inst,
        survivors=tuple(sorted(tuple(sorted(s)) for s in survivors)),
        sizes_ok=sizes_ok,
        phi_invariant=phi_ok,
        parity_parts_in_intervals=parts_ok,
        k_in_proof_range=k_ok,
    )

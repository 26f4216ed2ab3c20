"""Independent reference implementations used as test oracles.

Everything here is deliberately naive: schoolbook polynomial arithmetic,
itertools scans over all k-subsets, exact Fraction products.  Slow but
obviously correct, so the fast package code can be judged against it.
Nothing in this module imports the package under test.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import factorial


def ref_mul(a: int, b: int, modulus: int, m: int) -> int:
    """Carry-less product reduced modulo the degree-m bitmask polynomial."""
    acc = 0
    top = 1 << m
    while b:
        if b & 1:
            acc ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= modulus
    return acc


def ref_pow(a: int, e: int, modulus: int, m: int) -> int:
    acc = 1
    while e:
        if e & 1:
            acc = ref_mul(acc, a, modulus, m)
        a = ref_mul(a, a, modulus, m)
        e >>= 1
    return acc


def multiplicative_order(a: int, modulus: int, m: int) -> int:
    acc = a
    order = 1
    while acc != 1:
        acc = ref_mul(acc, a, modulus, m)
        order += 1
    return order


def xor_sum(items) -> int:
    acc = 0
    for x in items:
        acc ^= x
    return acc


def subset_sum_form(block) -> bool:
    """Block validity, closed form: the whole set sums to 1 over GF(2)
    coordinates and no nonempty proper subset does."""
    items = tuple(block)
    if len(set(items)) != len(items):
        return False
    if xor_sum(items) != 1:
        return False
    for r in range(1, len(items)):
        for sub in itertools.combinations(items, r):
            if xor_sum(sub) == 1:
                return False
    return True


def recursive_family(m: int, up_to: int) -> dict[int, set[frozenset[int]]]:
    """Block validity, recursive form, built level by level.

    Level k keeps the k-subsets of X = {2, ..., 2^m - 1} that sum to 1
    and contain no member of any level of size 2 through k - 3.  Sizes
    k - 2 and k - 1 never occur as sub-blocks (they would force 0 or a
    repeat into the set), so stopping at k - 3 loses nothing; the
    equivalence tests exercise that claim rather than assume it.
    """
    xs = range(2, 1 << m)
    fam: dict[int, set[frozenset[int]]] = {}
    for k in range(2, up_to + 1):
        level: set[frozenset[int]] = set()
        for combo in itertools.combinations(xs, k):
            if xor_sum(combo) != 1:
                continue
            if any(frozenset(sub) in fam[ell]
                   for ell in range(2, k - 2)
                   for sub in itertools.combinations(combo, ell)):
                continue
            level.add(frozenset(combo))
        fam[k] = level
    return fam


@lru_cache(maxsize=None)
def brute_blocks(m: int, k: int) -> frozenset[frozenset[int]]:
    """All valid k-blocks by exhaustive scan with the closed predicate."""
    return frozenset(
        frozenset(c) for c in itertools.combinations(range(2, 1 << m), k)
        if subset_sum_form(c))


def brute_pair_count(blocks, x: int, y: int) -> int:
    return sum(1 for b in blocks if x in b and y in b)


def _falling_product(m: int, lo: int, hi: int) -> int:
    acc = 1
    for i in range(lo, hi):
        acc *= (1 << m) - (1 << i)
    return acc


def ref_lambda(m: int, k: int) -> int:
    val = Fraction(_falling_product(m, 3, k), factorial(k - 2))
    assert val.denominator == 1
    return int(val)


def ref_r(m: int, k: int) -> int:
    val = Fraction(_falling_product(m, 2, k), factorial(k - 1))
    assert val.denominator == 1
    return int(val)


def ref_b(m: int, k: int) -> int:
    val = Fraction(_falling_product(m, 1, k), factorial(k))
    assert val.denominator == 1
    return int(val)


def ref_tau(m: int, k: int) -> int:
    """Common size of the marker pair-sum classes, k = 4, 5, 6 only."""
    q = 1 << m
    if k == 4:
        val = Fraction(q - 8, 2)
    elif k == 5:
        val = Fraction((q - 8) * (q - 16), 4)
    elif k == 6:
        val = Fraction((q - 8) * (q - 16) * (q - 32), 12)
    else:
        raise ValueError(f"no closed pair-sum class size for k={k}")
    assert val.denominator == 1
    return int(val)

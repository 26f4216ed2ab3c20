"""Exact design parameters as products over the field order q = 2^m.

For block size k on the point set X of size q - 2:

    lambda_k = prod(q - 2^i, i = 3..k-1) / (k - 2)!   blocks on a cross pair
    r_k      = prod(q - 2^i, i = 2..k-1) / (k - 1)!   blocks through a point
    b_k      = prod(q - 2^i, i = 1..k-1) / k!         blocks in total

All three are exact integers for every 3 <= k <= m (empty products for
the smallest k).  The counts are theorems for k <= 7; for k >= 8 they
are a conjectured extrapolation and every consumer must surface that
flag.  Arithmetic is plain Python int, so no precision is lost at any
supported m.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial, prod

CONJECTURED_MIN_K = 8


def _check_domain(m: int, k: int, k_lo: int = 3) -> None:
    for name, val in (("m", m), ("k", k)):
        if not isinstance(val, int) or isinstance(val, bool):
            raise ValueError(f"{name} must be an int, got {val!r}")
    if k < k_lo:
        raise ValueError(f"k={k} below minimum block size {k_lo}")
    if k > m:
        raise ValueError(f"k={k} exceeds m={m}: no blocks of that size exist")


def _exact_div(num: int, den: int) -> int:
    q, r = divmod(num, den)
    if r:
        raise AssertionError(f"{num} not divisible by {den}")
    return q


def is_conjectured(k: int) -> bool:
    """True when the parameter values for this k are conjectural."""
    return k >= CONJECTURED_MIN_K


def lambda_closed(m: int, k: int) -> int:
    """Blocks of size k on a fixed pair of points from distinct groups."""
    _check_domain(m, k)
    q = 1 << m
    return _exact_div(prod(q - (1 << i) for i in range(3, k)), factorial(k - 2))


def r_closed(m: int, k: int) -> int:
    """Blocks of size k through a fixed point."""
    _check_domain(m, k)
    q = 1 << m
    return _exact_div(prod(q - (1 << i) for i in range(2, k)), factorial(k - 1))


def b_closed(m: int, k: int) -> int:
    """Total number of blocks of size k."""
    _check_domain(m, k)
    q = 1 << m
    return _exact_div(prod(q - (1 << i) for i in range(1, k)), factorial(k))


def tau_closed(m: int, k: int) -> int:
    """Blocks through a fixed point z that keep a marker value alpha as
    the sum of two of their other elements.  Closed forms exist for
    k in {4, 5, 6} and any marker outside {0, 1, z} off the block."""
    _check_domain(m, k, k_lo=4)
    if k > 6:
        raise ValueError(f"no closed form for k={k}; supported k: 4, 5, 6")
    q = 1 << m
    if k == 4:
        return _exact_div(q - 8, 2)
    if k == 5:
        return _exact_div((q - 8) * (q - 16), 4)
    return _exact_div((q - 8) * (q - 16) * (q - 32), 12)


@dataclass(frozen=True)
class DesignParams:
    """The exact parameter triple for one (m, k), with provenance flag."""

    m: int
    k: int
    lambda_: int
    r: int
    b: int
    conjectured: bool

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "k": self.k,
            "lambda": self.lambda_,
            "r": self.r,
            "b": self.b,
            "conjectured": self.conjectured,
        }


def design_params(m: int, k: int) -> DesignParams:
    return DesignParams(
        m=m,
        k=k,
        lambda_=lambda_closed(m, k),
        r=r_closed(m, k),
        b=b_closed(m, k),
        conjectured=is_conjectured(k),
    )


def consistency_identities(m: int, k: int) -> list[tuple[str, bool, int, int]]:
    """Cross-checks tying the closed forms together at this (m, k).

    Returns (name, ok, lhs, rhs) rows:
      * r_k (k-1) = lambda_k (2^m - 4)        counting flags through a pair
      * b_k k = r_k (2^m - 2)                 counting flags through a point
      * inclusion-exclusion steps lambda_j for j = 4..min(k, 7), which
        peel pair-through counts into marked and unmarked parts
    """
    _check_domain(m, k)
    q = 1 << m
    rows = [
        ("r_pair_flags", r_closed(m, k) * (k - 1), lambda_closed(m, k) * (q - 4)),
        ("b_point_flags", b_closed(m, k) * k, r_closed(m, k) * (q - 2)),
    ]
    for j in range(4, min(k, 7) + 1):
        lhs = lambda_closed(m, j)
        if j == 4:
            rhs = r_closed(m, 3) - 2 * lambda_closed(m, 3)
        elif j == 5:
            rhs = r_closed(m, 4) - 4 * lambda_closed(m, 4)
        elif j == 6:
            rhs = r_closed(m, 5) - 4 * lambda_closed(m, 5) - 2 * tau_closed(m, 5)
        else:
            rhs = r_closed(m, 6) - 4 * lambda_closed(m, 6) - 4 * tau_closed(m, 6)
        rows.append((f"lambda_{j}_peel", lhs, rhs))
    return [(name, lhs == rhs, lhs, rhs) for name, lhs, rhs in rows]

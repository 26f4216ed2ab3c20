"""Pure-Python search kernel for sum-one block enumeration.

A block is a k-subset of X = GF(2^m) \\ {0, 1} whose XOR over all
elements is 1 while no nonempty proper subset XORs to 1.  The search
keeps, for the chosen prefix, a bitset W over field values in which bit
s is set exactly when some nonempty subset of the prefix XORs to s.
Appending an element e updates W to W | (W ^-shifted by e) | {e}, where
the ^-shift permutes bit positions by XOR with e, a butterfly of
swap-distance 2^b for every set bit b of e.

Two prefix constraints prune the tree.  Bit 0 of W must stay clear: a
subset XORing to 0 makes its complement inside a sum-one block XOR to 1.
Bit 1 must stay clear for the proper-subset rule directly.  A candidate
e appended to prefix W is admissible iff e is not in W | (W shifted by
1): the first part keeps subsets nonzero, the shifted part keeps them
off 1.  Once k-1 elements are placed, the last element is forced to
1 ^ prefix-sum, and any forced value larger than the previous element
always completes a valid block, so the deepest level needs no checks
beyond ordering.

This module is the reference implementation; gf2gdd.kernels._core is a
compiled mirror with identical signatures and identical outputs.
"""

from __future__ import annotations

from functools import lru_cache

BACKEND = "python"


@lru_cache(maxsize=None)
def _shift_masks(m: int) -> tuple[int, ...]:
    # masks[b] selects the bit positions whose index bit b is clear
    nv = 1 << m
    masks = []
    for b in range(m):
        step = 1 << b
        block = (1 << step) - 1
        pat = 0
        for off in range(0, nv, 2 * step):
            pat |= block << off
        masks.append(pat)
    return tuple(masks)


def xor_shift(bits: int, e: int, masks: tuple[int, ...]) -> int:
    """Permute bit positions of a bitset by s -> s ^ e."""
    for b in range(e.bit_length()):
        if e >> b & 1:
            s = 1 << b
            mb = masks[b]
            bits = ((bits & mb) << s) | ((bits >> s) & mb)
    return bits


def _seed_state(m: int, k: int, seed: tuple[int, ...]) -> tuple[int, int, int]:
    """Validate a seed and return (W, prefix_sum, t = free slots)."""
    nv = 1 << m
    t = k - len(seed)
    if t < 1:
        raise ValueError(f"seed of size {len(seed)} leaves no free slot for k={k}")
    masks = _shift_masks(m)
    w = 0
    p = 0
    for s in seed:
        if not 2 <= s < nv:
            raise ValueError(f"seed element {s:#x} outside X")
        w = w | xor_shift(w, s, masks) | (1 << s)
        p ^= s
    if w & 3:
        raise ValueError("seed has a nonempty subset XORing to 0 or 1")
    return w, p, t


def count_completions(m: int, k: int, seed: tuple[int, ...] = (),
                      first_lo: int = 2, first_hi: int | None = None) -> int:
    """Number of valid blocks of size k containing every seed element,
    whose smallest non-seed element lies in [first_lo, first_hi)."""
    nv = 1 << m
    if first_hi is None:
        first_hi = nv
    first_lo = max(first_lo, 2)
    seed = tuple(seed)
    w0, p0, t = _seed_state(m, k, seed)
    if first_lo >= first_hi:
        return 0
    masks = _shift_masks(m)
    xmask = ((1 << nv) - 1) ^ 3
    seed_set = frozenset(seed)

    def rec(w: int, p: int, rem: int, lo: int, hi: int) -> int:
        if rem == 1:
            f = 1 ^ p
            return 1 if lo <= f < hi and f not in seed_set else 0
        cand = ~(w | xor_shift(w, 1, masks)) & xmask
        cand &= (1 << hi) - (1 << lo)
        if rem == 2:
            c = 1 ^ p
            h = c.bit_length() - 1
            cand &= masks[h]
            n = cand.bit_count()
            for s in seed_set:
                if cand >> (c ^ s) & 1:
                    n -= 1
            return n
        total = 0
        while cand:
            lsb = cand & -cand
            cand ^= lsb
            e = lsb.bit_length() - 1
            w2 = w | xor_shift(w, e, masks) | lsb
            total += rec(w2, p ^ e, rem - 1, e + 1, nv)
        return total

    return rec(w0, p0, t, first_lo, first_hi)


def fill_completions(m: int, k: int, seed: tuple[int, ...], out,
                     first_lo: int = 2, first_hi: int | None = None) -> int:
    """Write the non-seed elements of each matching block into out, one
    ascending row per block in lexicographic order.  Returns row count."""
    nv = 1 << m
    if first_hi is None:
        first_hi = nv
    first_lo = max(first_lo, 2)
    seed = tuple(seed)
    w0, p0, t = _seed_state(m, k, seed)
    if out.ndim != 2 or out.shape[1] != t:
        raise ValueError(f"out must have {t} columns")
    if first_lo >= first_hi:
        return 0
    masks = _shift_masks(m)
    xmask = ((1 << nv) - 1) ^ 3
    seed_set = frozenset(seed)
    chosen: list[int] = []
    found = 0

    def rec(w: int, p: int, rem: int, lo: int, hi: int) -> None:
        nonlocal found
        if rem == 1:
            f = 1 ^ p
            if lo <= f < hi and f not in seed_set:
                out[found, : t - 1] = chosen
                out[found, t - 1] = f
                found += 1
            return
        cand = ~(w | xor_shift(w, 1, masks)) & xmask
        cand &= (1 << hi) - (1 << lo)
        while cand:
            lsb = cand & -cand
            cand ^= lsb
            e = lsb.bit_length() - 1
            chosen.append(e)
            rec(w | xor_shift(w, e, masks) | lsb, p ^ e, rem - 1, e + 1, nv)
            chosen.pop()

    rec(w0, p0, t, first_lo, first_hi)
    return found


def accumulate_pair_counts(m: int, k: int, counts,
                           first_lo: int = 2, first_hi: int | None = None) -> int:
    """Enumerate seedless blocks and bump counts[a, b] for every a < b in
    each block.  Returns the number of blocks visited."""
    nv = 1 << m
    if first_hi is None:
        first_hi = nv
    first_lo = max(first_lo, 2)
    _, _, t = _seed_state(m, k, ())
    if counts.shape != (nv, nv):
        raise ValueError(f"counts must be ({nv}, {nv})")
    if first_lo >= first_hi:
        return 0
    masks = _shift_masks(m)
    xmask = ((1 << nv) - 1) ^ 3
    chosen: list[int] = []
    found = 0

    def rec(w: int, p: int, rem: int, lo: int, hi: int) -> None:
        nonlocal found
        if rem == 1:
            f = 1 ^ p
            if lo <= f < hi:
                block = chosen + [f]
                for i in range(k):
                    for j in range(i + 1, k):
                        counts[block[i], block[j]] += 1
                found += 1
            return
        cand = ~(w | xor_shift(w, 1, masks)) & xmask
        cand &= (1 << hi) - (1 << lo)
        while cand:
            lsb = cand & -cand
            cand ^= lsb
            e = lsb.bit_length() - 1
            chosen.append(e)
            rec(w | xor_shift(w, e, masks) | lsb, p ^ e, rem - 1, e + 1, nv)
            chosen.pop()

    rec(0, 0, t, first_lo, first_hi)
    return found

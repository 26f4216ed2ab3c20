"""Design construction on the punctured field X = GF(2^m) \\ {0, 1}.

Points are field elements as int bitmasks.  The groups are the pairs
{a, a + 1}, which partition X.  A block of size k is a k-subset of X
that sums to 1 while no nonempty proper subset sums to 1; the block
family for a given k, together with the groups, forms a group divisible
design whose parameters are in gf2gdd.closed_forms.

Enumeration work is delegated to gf2gdd.kernels.  The search space is
partitioned by the smallest non-seed element, so partitions can run on
worker threads and their disjoint results are merged in partition
order; exports are byte-identical for every thread count.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb
from typing import Callable, Iterable, Sequence

import numpy as np

from . import kernels
from .field import FieldContext

Block = tuple[int, ...]

_COLLECT_MAX_M = 16  # uint16 block matrices


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        return os.cpu_count() or 1
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    return threads


def _check_k(ctx: FieldContext, k: int, k_lo: int) -> None:
    if not isinstance(k, int) or isinstance(k, bool):
        raise ValueError(f"k must be an int, got {k!r}")
    if not k_lo <= k <= ctx.m:
        raise ValueError(f"k={k} out of range [{k_lo}, m={ctx.m}]")


# ----------------------------------------------------------------------
# groups and the block predicate
# ----------------------------------------------------------------------

def group_set(ctx: FieldContext) -> tuple[tuple[int, int], ...]:
    """All groups {a, a+1}, ascending; they partition X."""
    return tuple((a, a ^ 1) for a in range(2, ctx.size, 2))


def is_valid_block(ctx: FieldContext, candidate: Iterable[int], k: int) -> bool:
    """Decide whether candidate is a valid block of size k.

    Valid means: k distinct elements of X, total sum 1, and no nonempty
    proper subset summing to 1.  The subset scan is exhaustive over all
    2^k - 2 proper subsets, which caps this predicate at k <= 16; the
    enumeration kernels do not share this limit.
    """
    if not 2 <= k <= ctx.m:
        raise ValueError(f"k={k} out of range [2, m={ctx.m}]")
    if k > 16:
        raise ValueError(f"subset scan not supported beyond k=16, got k={k}")
    elems = [ctx.check_element(a) for a in candidate]
    if len(elems) != k or len(set(elems)) != k:
        return False
    if any(a < 2 for a in elems):
        return False
    total = 0
    for a in elems:
        total ^= a
    if total != 1:
        return False
    for pick in range(1, (1 << k) - 1):
        s = 0
        rest = pick
        while rest:
            low = rest & -rest
            s ^= elems[low.bit_length() - 1]
            rest ^= low
        if s == 1:
            return False
    return True


# ----------------------------------------------------------------------
# pair contexts
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PairContext:
    """A cross-group pair u, v with its derived data.

    z = u + v is the pair sum, never 0 or 1 for a cross-group pair, and
    s lists the four distinct marker values (u, v, u+1, v+1); z is never
    among them.
    """

    u: int
    v: int
    z: int
    s: tuple[int, int, int, int]


def pair_context(ctx: FieldContext, u: int, v: int) -> PairContext:
    ctx.check_element(u)
    ctx.check_element(v)
    if u < 2 or v < 2:
        raise ValueError("pair elements must lie in X")
    if u == v:
        raise ValueError("pair elements must be distinct")
    z = u ^ v
    if z == 1:
        raise ValueError(f"{u:#x}, {v:#x} lie in the same group")
    return PairContext(u=u, v=v, z=z, s=(u, v, u ^ 1, v ^ 1))


def sample_pair_contexts(ctx: FieldContext, n: int, seed: int = 0) -> list[PairContext]:
    """n cross-group pairs drawn uniformly with a deterministic RNG."""
    if n < 1:
        raise ValueError(f"need n >= 1 pairs, got {n}")
    rng = random.Random(seed)
    lo, hi = 2, ctx.size - 1
    out = []
    for _ in range(n):
        u = rng.randint(lo, hi)
        v = rng.randint(lo, hi)
        while v == u or v == (u ^ 1):
            v = rng.randint(lo, hi)
        out.append(pair_context(ctx, u, v))
    return out


# ----------------------------------------------------------------------
# partitioned enumeration
# ----------------------------------------------------------------------

def _partition_ranges(nv: int, t: int, parts: int) -> list[tuple[int, int]]:
    """Split first-element values [2, nv) into ranges of similar subtree
    weight, estimated by the unpruned count comb(nv - 1 - first, t - 1)."""
    if parts <= 1 or t < 2:
        return [(2, nv)]
    weights = [comb(nv - 1 - f, t - 1) for f in range(2, nv)]
    total = sum(weights)
    if total == 0:
        return [(2, nv)]
    ranges = []
    target = total / parts
    lo = 2
    acc = 0
    for f, wt in zip(range(2, nv), weights):
        acc += wt
        if acc >= target and f + 1 < nv and len(ranges) < parts - 1:
            ranges.append((lo, f + 1))
            lo = f + 1
            acc = 0
    ranges.append((lo, nv))
    return ranges


def _map_partitions(fn: Callable[[int, int], object], ranges: Sequence[tuple[int, int]],
                    threads: int) -> list[object]:
    if threads == 1 or len(ranges) == 1:
        return [fn(lo, hi) for lo, hi in ranges]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(lambda r: fn(*r), ranges))


def _count_seeded(ctx: FieldContext, k: int, seed: Block, threads: int) -> int:
    nv = ctx.size
    t = k - len(seed)
    ranges = _partition_ranges(nv, t, 1 if threads == 1 else threads * 4)
    parts = _map_partitions(
        lambda lo, hi: kernels.count_completions(ctx.m, k, seed, lo, hi),
        ranges, threads)
    return sum(parts)  # type: ignore[arg-type]


def _collect_seeded(ctx: FieldContext, k: int, seed: Block, threads: int) -> np.ndarray:
    """Non-seed columns of every matching block, rows in ascending
    lexicographic order, dtype uint16."""
    if ctx.m > _COLLECT_MAX_M:
        raise ValueError(f"collection capped at m={_COLLECT_MAX_M}; use counting")
    nv = ctx.size
    t = k - len(seed)
    ranges = _partition_ranges(nv, t, 1 if threads == 1 else threads * 4)
    counts = _map_partitions(
        lambda lo, hi: kernels.count_completions(ctx.m, k, seed, lo, hi),
        ranges, threads)
    total = sum(counts)  # type: ignore[arg-type]
    out = np.empty((total, t), dtype=np.uint16)
    offsets = []
    off = 0
    for c in counts:
        offsets.append(off)
        off += c  # type: ignore[operator]

    def fill(idx: int) -> None:
        lo, hi = ranges[idx]
        n = counts[idx]
        got = kernels.fill_completions(ctx.m, k, seed, out[offsets[idx]:offsets[idx] + n],
                                       lo, hi)
        if got != n:
            raise RuntimeError(f"partition [{lo},{hi}) count drifted: {got} != {n}")

    if threads == 1 or len(ranges) == 1:
        for i in range(len(ranges)):
            fill(i)
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            list(ex.map(fill, range(len(ranges))))
    return out


def enumerate_wk(ctx: FieldContext, k: int, sink: Callable[[Block], None] | None = None,
                 threads: int | None = None) -> int:
    """Enumerate all blocks of size k; returns the block count.

    With no sink this is a pure count.  With a sink, every block is
    delivered exactly once as an ascending tuple, in canonical
    lexicographic order; blocks are materialized one search partition
    at a time, so memory stays bounded by the largest partition.
    """
    _check_k(ctx, k, 3)
    threads = _resolve_threads(threads)
    if sink is None:
        return _count_seeded(ctx, k, (), threads)
    if ctx.m > _COLLECT_MAX_M:
        raise ValueError(f"sink delivery capped at m={_COLLECT_MAX_M}; use count mode")
    total = 0
    for lo, hi in _partition_ranges(ctx.size, k, max(8, threads * 4)):
        n = kernels.count_completions(ctx.m, k, (), lo, hi)
        part = np.empty((n, k), dtype=np.uint16)
        kernels.fill_completions(ctx.m, k, (), part, lo, hi)
        for row in part.tolist():
            sink(tuple(row))
        total += n
    return total


def collect_wk(ctx: FieldContext, k: int, threads: int | None = None) -> np.ndarray:
    """All blocks of size k as an (n, k) uint16 array, canonical order."""
    _check_k(ctx, k, 3)
    return _collect_seeded(ctx, k, (), _resolve_threads(threads))


def blocks_through_pair(ctx: FieldContext, k: int, pc: PairContext,
                        count_only: bool = True,
                        threads: int | None = None) -> int | np.ndarray:
    """Blocks of size k containing both pair elements.

    Returns the count, or with count_only=False the full blocks as an
    (n, k) uint16 array with each row ascending.
    """
    _check_k(ctx, k, 3)
    threads = _resolve_threads(threads)
    seed = (pc.u, pc.v)
    if count_only:
        return _count_seeded(ctx, k, seed, threads)
    free = _collect_seeded(ctx, k, seed, threads)
    return _attach_seed(free, seed)


def _attach_seed(free: np.ndarray, seed: Block) -> np.ndarray:
    n, t = free.shape
    full = np.empty((n, t + len(seed)), dtype=np.uint16)
    full[:, :len(seed)] = np.asarray(seed, dtype=np.uint16)
    full[:, len(seed):] = free
    full.sort(axis=1)
    return full


# ----------------------------------------------------------------------
# block-set helpers
# ----------------------------------------------------------------------

def block_set(blocks: np.ndarray) -> set[Block]:
    """Rows of a block matrix as a set of ascending tuples."""
    return {tuple(sorted(row)) for row in blocks.tolist()}


def row_keys(blocks: np.ndarray, m: int) -> np.ndarray:
    """Encode each ascending row into one uint64 key; requires k*m <= 63."""
    n, k = blocks.shape
    if k * m > 63:
        raise ValueError(f"rows of {k} elements at m={m} exceed a 64-bit key")
    shifts = (np.arange(k, dtype=np.uint64) * np.uint64(m))[::-1]
    return (blocks.astype(np.uint64) << shifts).sum(axis=1, dtype=np.uint64)


def sort_block_rows(blocks: np.ndarray) -> np.ndarray:
    """Rows sorted lexicographically; canonical order for exports."""
    if len(blocks) == 0:
        return blocks
    order = np.lexsort(blocks.T[::-1])
    return blocks[order]


# ----------------------------------------------------------------------
# the marked decomposition of blocks through a point
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class OmegaTauDecomposition:
    """Blocks through z = u + v, classified against the four markers.

    omega_all holds every block through z.  For each marker a in s,
    omega[a] are the blocks that contain a, and tau[a] are the blocks
    with two elements besides z summing to a.  Rows are uint16 block
    matrices with z present in every row.
    """

    pc: PairContext
    k: int
    omega_all: np.ndarray
    omega: dict[int, np.ndarray]
    tau: dict[int, np.ndarray]

    def counts(self) -> dict:
        return {
            "omega_all": len(self.omega_all),
            "omega": {a: len(v) for a, v in self.omega.items()},
            "tau": {a: len(v) for a, v in self.tau.items()},
        }


def partition_omega_tau(ctx: FieldContext, k: int, pc: PairContext,
                        threads: int | None = None) -> OmegaTauDecomposition:
    """Decompose the blocks through z = u + v by marker membership.

    The marker values are s = (u, v, u+1, v+1).  tau classification
    looks only at element pairs away from z; at k = 3 that single pair
    sums to z + 1, never a marker, so every tau set comes out empty.
    """
    _check_k(ctx, k, 3)
    threads = _resolve_threads(threads)
    rest = _collect_seeded(ctx, k, (pc.z,), threads)  # the k-1 non-z columns
    blocks = _attach_seed(rest, (pc.z,))
    omega: dict[int, np.ndarray] = {}
    tau: dict[int, np.ndarray] = {}
    t = rest.shape[1]
    pair_sums = [rest[:, i] ^ rest[:, j] for i in range(t) for j in range(i + 1, t)]
    for a in pc.s:
        omega[a] = blocks[(rest == a).any(axis=1)]
        if pair_sums:
            hit = np.zeros(len(rest), dtype=bool)
            for ps in pair_sums:
                hit |= ps == a
            tau[a] = blocks[hit]
        else:
            tau[a] = blocks[:0]
    return OmegaTauDecomposition(pc=pc, k=k, omega_all=blocks, omega=omega, tau=tau)

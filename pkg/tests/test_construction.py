"""Block enumeration, pair contexts, and the marker decomposition."""

from __future__ import annotations

import numpy as np
import pytest

from gf2gdd.closed_forms import b_closed, lambda_closed, r_closed, tau_closed
from gf2gdd.construction import (block_set, blocks_through_pair, collect_wk,
                                 enumerate_wk, group_set, is_valid_block,
                                 pair_context, partition_omega_tau, row_keys,
                                 sample_pair_contexts, sort_block_rows)

from _reference import brute_blocks, recursive_family, subset_sum_form

# worked m=3 family, frozen as bitmasks: powers g^1..g^6 are
# 2, 4, 3, 6, 7, 5
W2_M3 = {frozenset({2, 3}), frozenset({4, 5}), frozenset({6, 7})}
W3_M3 = {frozenset({2, 4, 7}), frozenset({2, 5, 6}),
         frozenset({3, 4, 6}), frozenset({3, 5, 7})}


def gp(ctx, *exponents):
    """Block given by generator exponents, as a frozenset of bitmasks."""
    return frozenset(ctx.exp_table[i] for i in exponents)


def test_group_set_m3(ctx3):
    assert {frozenset(g) for g in group_set(ctx3)} == W2_M3


@pytest.mark.parametrize("m", [4, 6, 9, 12, 16])
def test_group_set_partitions_x(m):
    from gf2gdd import build_field
    ctx = build_field(m)
    groups = group_set(ctx)
    assert len(groups) == (ctx.size - 2) // 2
    seen: set[int] = set()
    for a, b in groups:
        assert b == a ^ 1 and a % 2 == 0
        seen.update((a, b))
    assert seen == set(ctx.x_elements())


def test_collect_wk_m3_golden(ctx3):
    blocks = collect_wk(ctx3, 3)
    assert block_set(blocks) == {tuple(sorted(b)) for b in W3_M3}
    # and in generator notation, matching the worked listing
    assert {frozenset(r) for r in blocks.tolist()} == {
        gp(ctx3, 1, 2, 5), gp(ctx3, 1, 6, 4), gp(ctx3, 3, 2, 4),
        gp(ctx3, 3, 6, 5)}


@pytest.mark.parametrize("m,k", [(3, 3), (4, 3), (4, 4), (5, 4), (5, 5)])
def test_collect_wk_matches_brute_force(m, k):
    from gf2gdd import build_field
    ctx = build_field(m)
    blocks = collect_wk(ctx, k)
    assert len(blocks) == b_closed(m, k)
    assert {frozenset(r) for r in blocks.tolist()} == set(brute_blocks(m, k))


def test_collect_rows_canonical(ctx5):
    blocks = collect_wk(ctx5, 4)
    as_lists = blocks.tolist()
    assert all(r == sorted(r) for r in as_lists)
    assert as_lists == sorted(as_lists)
    assert blocks.dtype == np.uint16
    # stitching partitions back together cannot depend on thread count
    assert np.array_equal(blocks, collect_wk(ctx5, 4, threads=3))


def test_enumerate_wk_count_and_sink(ctx4):
    assert enumerate_wk(ctx4, 4) == 56
    rows = []
    n = enumerate_wk(ctx4, 4, sink=rows.append)
    assert n == 56 and len(rows) == 56
    assert rows == sorted(rows)
    assert all(isinstance(r, tuple) and len(r) == 4 for r in rows)
    assert {frozenset(r) for r in rows} == set(brute_blocks(4, 4))


def test_is_valid_block_accepts(ctx4):
    assert is_valid_block(ctx4, (6, 2, 8, 13), 4)
    for b in brute_blocks(4, 4):
        assert is_valid_block(ctx4, b, 4)
    for b in brute_blocks(4, 3):
        assert is_valid_block(ctx4, b, 3)
    # groups are the valid blocks of size 2
    assert is_valid_block(ctx4, (8, 9), 2)


def test_is_valid_block_rejects(ctx4):
    assert not is_valid_block(ctx4, (2, 4, 6, 8), 4)  # sum is 8, not 1
    assert not is_valid_block(ctx4, (2, 3, 8, 9), 4)  # contains a group
    assert not is_valid_block(ctx4, (6, 2, 8), 4)  # size mismatch
    assert not is_valid_block(ctx4, (6, 2, 8, 8), 4)  # repeat
    assert not is_valid_block(ctx4, (0, 6, 2, 5), 4)  # 0 is not in X
    assert not is_valid_block(ctx4, (1, 6, 2, 4), 4)


def test_is_valid_block_rejects_inner_triple(ctx6):
    # sums to 1, yet {2, 4, 7} already sums to 1 on its own (and the
    # complementary triple {8, 16, 24} to 0); smallest k where a
    # violation needs more than a group pair
    assert not is_valid_block(ctx6, (2, 4, 7, 8, 16, 24), 6)
    assert is_valid_block(ctx6, (2, 4, 8, 16, 32, 1 ^ 2 ^ 4 ^ 8 ^ 16 ^ 32), 6)


def test_is_valid_block_domain(ctx4):
    with pytest.raises(ValueError):
        is_valid_block(ctx4, (2, 4), 1)
    with pytest.raises(ValueError):
        is_valid_block(ctx4, (2, 4, 5, 6, 7), 5)  # k > m
    with pytest.raises(ValueError):
        is_valid_block(ctx4, (2, 4, 16, 5), 4)  # outside the field


@pytest.mark.parametrize("m", [4, 5])
def test_predicate_equivalence_exhaustive(m):
    from itertools import combinations

    from gf2gdd import build_field
    ctx = build_field(m)
    fam = recursive_family(m, m)
    for k in range(2, min(m, 5) + 1):
        got_pkg = set()
        for c in combinations(ctx.x_elements(), k):
            pkg = is_valid_block(ctx, c, k)
            assert pkg == subset_sum_form(c)
            assert pkg == (frozenset(c) in fam[k])
            if pkg:
                got_pkg.add(frozenset(c))
        if k >= 3:
            assert len(got_pkg) == b_closed(m, k)


def test_mutating_a_block_invalidates_it(ctx5):
    blocks = collect_wk(ctx5, 4).tolist()
    for row in blocks[:40]:
        others = [x for x in ctx5.x_elements() if x not in row]
        # swapping one element for an outsider always moves the sum off 1
        mutated = row[:3] + [others[7]]
        assert not is_valid_block(ctx5, mutated, 4)


def test_pair_context_fields(ctx4):
    pc = pair_context(ctx4, 2, 4)
    assert (pc.u, pc.v, pc.z) == (2, 4, 6)
    assert pc.s == (2, 4, 3, 5)
    assert pc.z not in pc.s and len(set(pc.s)) == 4


def test_pair_context_rejects(ctx4):
    for u, v in [(2, 2), (2, 3), (8, 9), (0, 4), (4, 1)]:
        with pytest.raises(ValueError):
            pair_context(ctx4, u, v)
    with pytest.raises(ValueError):
        pair_context(ctx4, 2, 16)


def test_sample_pair_contexts(ctx6):
    pcs = sample_pair_contexts(ctx6, 25, seed=7)
    assert len(pcs) == 25
    for pc in pcs:
        assert 2 <= pc.u < 64 and 2 <= pc.v < 64
        assert pc.z not in (0, 1)
    assert pcs == sample_pair_contexts(ctx6, 25, seed=7)
    assert pcs != sample_pair_contexts(ctx6, 25, seed=8)
    with pytest.raises(ValueError):
        sample_pair_contexts(ctx6, 0)


@pytest.mark.parametrize("m,k", [(5, 4), (6, 5)])
def test_blocks_through_pair_hits_lambda(m, k):
    from gf2gdd import build_field
    ctx = build_field(m)
    lam = lambda_closed(m, k)
    for pc in sample_pair_contexts(ctx, 6, seed=3):
        assert blocks_through_pair(ctx, k, pc) == lam
    pc = sample_pair_contexts(ctx, 1, seed=9)[0]
    rows = blocks_through_pair(ctx, k, pc, count_only=False)
    assert len(rows) == lam
    for row in rows.tolist():
        assert pc.u in row and pc.v in row
        assert is_valid_block(ctx, row, k)
        assert row == sorted(row)


def test_omega_tau_m3_golden(ctx3):
    # u = g, v = g^2: z = g^4 sits in two blocks; the marker cells pair
    # up under the shift map and no off-z pair can sum to a marker
    pc = pair_context(ctx3, 2, 4)
    assert pc.z == 6
    d = partition_omega_tau(ctx3, 3, pc)
    omega_all = {frozenset(r) for r in d.omega_all.tolist()}
    assert omega_all == {gp(ctx3, 1, 6, 4), gp(ctx3, 3, 2, 4)}
    assert {frozenset(r) for r in d.omega[pc.u].tolist()} == {gp(ctx3, 1, 6, 4)}
    assert np.array_equal(d.omega[pc.u], d.omega[pc.v ^ 1])
    assert {frozenset(r) for r in d.omega[pc.v].tolist()} == {gp(ctx3, 3, 2, 4)}
    assert np.array_equal(d.omega[pc.v], d.omega[pc.u ^ 1])
    assert all(len(t) == 0 for t in d.tau.values())
    assert len(d.omega_all) == r_closed(3, 3)


def test_omega_tau_m4_golden(ctx4):
    # the worked m=4 decomposition at u = g, v = g^2, k = 4
    pc = pair_context(ctx4, ctx4.exp_table[1], ctx4.exp_table[2])
    assert pc.z == ctx4.exp_table[5]
    d = partition_omega_tau(ctx4, 4, pc)
    omega_all = {frozenset(r) for r in d.omega_all.tolist()}
    assert omega_all == {
        gp(ctx4, 5, 1, 3, 13), gp(ctx4, 5, 1, 6, 14), gp(ctx4, 5, 1, 7, 11),
        gp(ctx4, 5, 1, 9, 12), gp(ctx4, 5, 2, 3, 7), gp(ctx4, 5, 2, 6, 12),
        gp(ctx4, 5, 2, 9, 14), gp(ctx4, 5, 2, 11, 13), gp(ctx4, 5, 3, 4, 6),
        gp(ctx4, 5, 3, 8, 9), gp(ctx4, 5, 4, 7, 12), gp(ctx4, 5, 4, 9, 11),
        gp(ctx4, 5, 4, 13, 14), gp(ctx4, 5, 6, 8, 11), gp(ctx4, 5, 7, 8, 14),
        gp(ctx4, 5, 8, 12, 13)}
    assert len(omega_all) == 16 == r_closed(4, 4)

    def cell(arr):
        return {frozenset(r) for r in arr.tolist()}

    u, v, u1, v1 = pc.s
    assert cell(d.omega[u]) == {gp(ctx4, 5, 1, 3, 13), gp(ctx4, 5, 1, 6, 14),
                                gp(ctx4, 5, 1, 7, 11), gp(ctx4, 5, 1, 9, 12)}
    assert cell(d.omega[v]) == {gp(ctx4, 5, 2, 3, 7), gp(ctx4, 5, 2, 6, 12),
                                gp(ctx4, 5, 2, 9, 14), gp(ctx4, 5, 2, 11, 13)}
    assert cell(d.omega[u1]) == {gp(ctx4, 5, 3, 4, 6), gp(ctx4, 5, 4, 7, 12),
                                 gp(ctx4, 5, 4, 9, 11), gp(ctx4, 5, 4, 13, 14)}
    assert cell(d.omega[v1]) == {gp(ctx4, 5, 3, 8, 9), gp(ctx4, 5, 6, 8, 11),
                                 gp(ctx4, 5, 7, 8, 14), gp(ctx4, 5, 8, 12, 13)}
    # at k = 4 each tau cell equals the omega cell of the shifted marker
    shift = pc.z ^ 1
    for a in pc.s:
        assert cell(d.tau[a]) == cell(d.omega[a ^ shift])
        assert len(d.tau[a]) == tau_closed(4, 4)
    counts = d.counts()
    assert counts["omega_all"] == 16
    assert set(counts["omega"].values()) == {lambda_closed(4, 4)}


def test_omega_tau_consistency_m5(ctx5):
    pc = pair_context(ctx5, 7, 19)
    k = 5
    d = partition_omega_tau(ctx5, k, pc)
    assert len(d.omega_all) == r_closed(5, 5)
    through = {frozenset(b) for b in brute_blocks(5, 5) if pc.z in b}
    assert {frozenset(r) for r in d.omega_all.tolist()} == through
    for a in pc.s:
        assert {frozenset(r) for r in d.omega[a].tolist()} == {
            b for b in through if a in b}
        want_tau = {b for b in through
                    if any(x ^ y == a for x in b for y in b
                           if x < y and pc.z not in (x, y))}
        assert {frozenset(r) for r in d.tau[a].tolist()} == want_tau


def test_blocks_independent_of_modulus():
    # validity only reads XOR structure, so any irreducible modulus of
    # the same degree yields the identical block set; only the display
    # notation moves
    from gf2gdd import build_field
    default = collect_wk(build_field(5), 4)
    other = collect_wk(build_field(5, 0x3B), 4)
    assert np.array_equal(default, other)


def test_row_keys_and_sorting(ctx5):
    blocks = collect_wk(ctx5, 4)
    keys = row_keys(blocks, 5)
    assert keys.dtype == np.uint64
    assert len(np.unique(keys)) == len(blocks)
    shuffled = blocks[::-1].copy()
    assert np.array_equal(sort_block_rows(shuffled), blocks)

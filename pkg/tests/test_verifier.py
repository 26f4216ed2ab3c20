"""Design verification: full balance, sampling, marker relations."""

from __future__ import annotations

import dataclasses

import numpy as np
import pytest

from gf2gdd import build_field
from gf2gdd.closed_forms import b_closed, lambda_closed, r_closed, tau_closed
from gf2gdd.construction import (collect_wk, pair_context,
                                 sample_pair_contexts)
from gf2gdd.reporting import FAIL, PASS, SKIP, VerificationReport
from gf2gdd.verifier import (EVIDENCE_NOTE, PairCountMatrix, conjecture_probe,
                             design_triple, verify_balance,
                             verify_cardinalities, verify_gdd,
                             verify_lemma_relations)

from _reference import brute_pair_count, brute_blocks


def cross_pairs(m: int) -> int:
    v = (1 << m) - 2
    return v * (v - 2) // 2


# -- full design verification ------------------------------------------

@pytest.mark.parametrize("m,k", [(3, 3), (4, 3), (4, 4), (5, 4)])
def test_verify_gdd_passes(m, k):
    ctx = build_field(m)
    triple = design_triple(ctx, k)
    rep = verify_gdd(triple)
    assert rep.ok(), rep.failures()
    assert rep.lambda_observed == lambda_closed(m, k)
    assert rep.pairs_tested == cross_pairs(m)
    names = {c.name for c in rep.checks}
    assert {"group_partition", "blocks_in_universe",
            "block_contains_no_group", "cross_pair_balance"} <= names


def test_verify_gdd_catches_any_deleted_block(ctx4):
    base = design_triple(ctx4, 4)
    assert len(base.blocks) == 56
    for i in range(56):
        broken = dataclasses.replace(
            base, blocks=base.blocks[:i] + base.blocks[i + 1:])
        rep = verify_gdd(broken)
        assert not rep.ok()
        failed = {c.name for c in rep.failures()}
        assert "cross_pair_balance" in failed
        witness = rep.failures()[0].witness
        assert witness is not None


def test_verify_gdd_catches_foreign_block(ctx4):
    base = design_triple(ctx4, 4)
    # a block swallowing a whole group: balanced or not, it is illegal
    bad = dataclasses.replace(base, blocks=base.blocks + ((2, 3, 8, 9),))
    rep = verify_gdd(bad)
    assert not rep.ok()
    assert "block_contains_no_group" in {c.name for c in rep.failures()}


def test_verify_gdd_catches_bad_groups(ctx4):
    base = design_triple(ctx4, 4)
    groups = ((2, 4),) + base.groups[2:]  # drops 3 and 5, repeats none
    rep = verify_gdd(dataclasses.replace(base, groups=groups))
    assert not rep.ok()
    assert "group_partition" in {c.name for c in rep.failures()}


# -- balance policies --------------------------------------------------

@pytest.mark.parametrize("m,k", [(3, 3), (4, 4), (5, 4), (6, 5)])
def test_verify_balance_all(m, k):
    ctx = build_field(m)
    rep = verify_balance(ctx, k, policy="all")
    assert rep.ok(), rep.failures()
    assert rep.lambda_observed == lambda_closed(m, k)
    assert rep.pairs_tested == cross_pairs(m)
    by_name = {c.name: c for c in rep.checks}
    assert by_name["block_count"].observed == b_closed(m, k)
    assert by_name["group_pairs_in_blocks"].observed == 0
    assert by_name["point_replication"].status == PASS


def test_verify_balance_sample(ctx6):
    rep = verify_balance(ctx6, 5, policy="sample", pairs=6, seed=11)
    assert rep.ok()
    assert rep.pairs_tested == 6
    assert rep.lambda_observed == lambda_closed(6, 5)
    assert sum(c.name.startswith("pair_balance[") for c in rep.checks) == 6
    # same seed, same checks; different seed, different pairs
    again = verify_balance(ctx6, 5, policy="sample", pairs=6, seed=11)
    assert [c.name for c in again.checks] == [c.name for c in rep.checks]
    other = verify_balance(ctx6, 5, policy="sample", pairs=6, seed=12)
    assert [c.name for c in other.checks] != [c.name for c in rep.checks]


def test_verify_balance_sample_frobenius(ctx6):
    rep = verify_balance(ctx6, 4, policy="sample", pairs=10, seed=2,
                         use_frobenius=True)
    assert rep.ok()
    assert rep.pairs_tested == 10
    names = [c.name for c in rep.checks]
    assert any(n.startswith("frobenius_orbit_agreement[") for n in names)
    # orbit reuse can only shrink the number of fresh enumerations
    fresh = [n for n in names if n.startswith("pair_balance[")
             and not n.endswith("@orbit")]
    assert len(fresh) <= 10


def test_verify_balance_rejects_unknown_policy(ctx4):
    with pytest.raises(ValueError):
        verify_balance(ctx4, 4, policy="firehose")


def test_pair_count_matrix_merges(ctx5):
    blocks = collect_wk(ctx5, 4)
    whole = PairCountMatrix(ctx5.m)
    whole.add_blocks(blocks)
    left = PairCountMatrix(ctx5.m)
    right = PairCountMatrix(ctx5.m)
    left.add_blocks(blocks[:300])
    right.add_blocks(blocks[300:])
    merged = left.merge(right)
    assert np.array_equal(merged.symmetric(), whole.symmetric())
    ref = brute_blocks(5, 4)
    for x, y in [(2, 4), (7, 9), (3, 30)]:
        want = brute_pair_count(ref, x, y)
        assert whole.pair_count(x, y) == want
        assert whole.pair_count(y, x) == want


# -- marker relations ---------------------------------------------------

LEMMA_GRID = [(3, 3), (4, 3), (5, 3), (4, 4), (5, 4), (6, 4), (5, 5),
              (6, 5), (6, 6)]


@pytest.mark.parametrize("m,k", LEMMA_GRID)
def test_lemma_relations_hold(m, k):
    ctx = build_field(m)
    for pc in sample_pair_contexts(ctx, 3, seed=5):
        rep = verify_lemma_relations(ctx, k, pc)
        assert rep.ok(), (m, k, pc, rep.failures())
        by_name = {c.name: c for c in rep.checks}
        un = by_name["uncovered_matches_next_lambda"]
        want = lambda_closed(m, k + 1) if k + 1 <= m else 0
        assert un.observed == want


def test_lemma_relations_k3_names(ctx4):
    pc = pair_context(ctx4, 2, 4)
    rep = verify_lemma_relations(ctx4, 3, pc)
    names = {c.name for c in rep.checks}
    assert "tau_empty" in names
    assert any(n.startswith("omega_shift_equal[") for n in names)


def test_lemma_relations_k4_names(ctx5):
    pc = pair_context(ctx5, 2, 4)
    rep = verify_lemma_relations(ctx5, 4, pc)
    names = {c.name for c in rep.checks}
    assert "omega_pairwise_disjoint" in names
    assert any(n.startswith("omega_eq_tau_shift[") for n in names)


@pytest.mark.parametrize("m,k", [(4, 4), (5, 4), (6, 4), (5, 5), (6, 5),
                                 (6, 6)])
def test_cardinalities_match_closed_forms(m, k):
    ctx = build_field(m)
    for pc in sample_pair_contexts(ctx, 2, seed=1):
        rep = verify_cardinalities(ctx, k, pc)
        assert rep.ok(), (m, k, rep.failures())
        by_name = {c.name: c for c in rep.checks}
        assert by_name["omega_all_size"].observed == r_closed(m, k)
        for a in pc.s:
            assert by_name[f"omega_size[{a:#x}]"].observed == lambda_closed(m, k)
            assert by_name[f"tau_size[{a:#x}]"].observed == tau_closed(m, k)


def test_cardinalities_reject_k3(ctx4):
    pc = pair_context(ctx4, 2, 4)
    with pytest.raises(ValueError):
        verify_cardinalities(ctx4, 3, pc)


def test_lemma_skips_beyond_k6():
    ctx = build_field(7)
    pc = sample_pair_contexts(ctx, 1, seed=0)[0]
    rep = verify_lemma_relations(ctx, 7, pc)
    assert rep.ok()
    skipped = [c for c in rep.checks if c.status == SKIP]
    assert any(c.name == "uncovered_matches_next_lambda" for c in skipped)
    card = verify_cardinalities(ctx, 7, pc)
    assert card.ok()
    assert any(c.status == SKIP and c.name == "tau_sizes" for c in card.checks)


# -- the conjectured regime --------------------------------------------

def test_conjecture_probe_guards(ctx6):
    with pytest.raises(ValueError):
        conjecture_probe(ctx6, 7)  # proven range
    with pytest.raises(ValueError):
        conjecture_probe(ctx6, 8)  # k > m, no such blocks


def test_conjecture_probe_smallest_case():
    ctx = build_field(8)
    rep = conjecture_probe(ctx, 8, pair_budget=1, seed=4)
    assert rep.ok()
    assert rep.conjectured
    assert rep.title == "conjecture-probe"
    assert rep.lambda_observed == 455081984
    assert EVIDENCE_NOTE in rep.notes


# -- report plumbing ----------------------------------------------------

def test_report_record_and_merge():
    rep = VerificationReport(title="demo")
    assert rep.record("eq", 3, 3)
    assert not rep.record("ne", 3, 4)
    rep.skip("later", "not in scope here")
    assert not rep.ok()
    assert [c.name for c in rep.failures()] == ["ne"]
    assert rep.checks[0].status == PASS
    assert rep.checks[1].status == FAIL
    assert rep.checks[2].status == SKIP
    other = VerificationReport(title="extra")
    other.record("also", "x", "x")
    other.pairs_tested = 5
    rep.pairs_tested = 2
    rep.merge(other)
    assert len(rep.checks) == 4
    assert rep.pairs_tested == 7
    d = rep.as_dict()
    assert d["title"] == "demo"
    assert len(d["checks"]) == 4
    assert d["passed"] is False


def test_report_witness_on_failure():
    rep = VerificationReport(title="w")
    rep.record("boom", 1, 2)
    c = rep.checks[0]
    assert c.witness is not None
    assert c.as_dict()["status"] == FAIL

"""Quadrant classification, bridging, and value-timing tests."""

import itertools

import pytest

from tokenlab.taxonomy import (
    REWRITE_CAUSES_COLLAPSE,
    LedgerKind,
    Locus,
    TokenProfile,
    ValueBacking,
    ValueTiming,
    bridge,
    canonical_text,
    classify,
    trust_locus_for,
    value_timing_heuristic,
)

ENDO, EXO = Locus.ENDOGENOUS, Locus.EXOGENOUS
PUBLIC, PRIVATE = LedgerKind.PUBLIC_PERMISSIONLESS, LedgerKind.PRIVATE_OR_CONSORTIUM


def stablecoin():
    return TokenProfile(
        security_locus=ENDO,
        trust_locus=EXO,
        value_backing=ValueBacking.CLAIM_BASED,
        value_timing=ValueTiming.AT_REDEMPTION,
        host_ledger=PRIVATE,
    )


def cbdc():
    return TokenProfile(
        security_locus=EXO,
        trust_locus=EXO,
        value_backing=ValueBacking.OBJECT_BASED,
        value_timing=ValueTiming.EX_POST,
        host_ledger=PRIVATE,
    )


def test_classify_proof_of_stake_cell():
    q = classify(ENDO, ENDO)
    assert canonical_text(q.exemplar).startswith("Typical Proof-of-Stake chain")
    assert q.attack_effect == REWRITE_CAUSES_COLLAPSE
    assert q.position == "top-left"


def test_classify_cbdc_cell():
    q = classify(EXO, EXO)
    assert canonical_text(q.exemplar) == "Cash-like CBDC"
    assert q.position == "bottom-right"


def test_classify_stablecoin_cell():
    q = classify(ENDO, EXO)
    assert canonical_text(q.exemplar).startswith("Privately operated stablecoin")
    assert q.position == "top-right"


def test_classify_proof_of_work_cell():
    q = classify(EXO, ENDO)
    assert canonical_text(q.exemplar).startswith("Typical Proof-of-Work chain")
    assert q.attack_effect == REWRITE_CAUSES_COLLAPSE


def test_classify_total_and_injective():
    quadrants = [classify(s, t) for s, t in itertools.product((ENDO, EXO), repeat=2)]
    assert len({(q.exemplar, q.attack_effect) for q in quadrants}) == 4
    assert len({q.position for q in quadrants}) == 4


def test_endogenous_trust_always_collapses_on_rewrite():
    for security in (ENDO, EXO):
        assert classify(security, ENDO).attack_effect == REWRITE_CAUSES_COLLAPSE


def test_bridge_stablecoin_to_public_moves_top_right_to_top_left():
    before = stablecoin()
    assert before.quadrant.position == "top-right"
    after = bridge(before, PUBLIC)
    assert after.trust_locus is ENDO
    assert after.host_ledger is PUBLIC
    assert after.quadrant.position == "top-left"


def test_bridge_to_current_host_is_identity():
    profile = stablecoin()
    assert bridge(profile, PRIVATE) == profile


def test_bridge_cbdc_to_public_lands_in_unlabeled_corner():
    # (exogenous security, endogenous trust): the matrix is total here even
    # though the only canonical exemplar for that quadrant is proof-of-work
    after = bridge(cbdc(), PUBLIC)
    assert (after.security_locus, after.trust_locus) == (EXO, ENDO)
    assert after.quadrant.position == "bottom-left"
    assert canonical_text(after.quadrant.exemplar).startswith("Typical Proof-of-Work chain")


def test_bridge_idempotent_and_preserves_everything_else():
    for profile in (stablecoin(), cbdc()):
        for destination in (PUBLIC, PRIVATE):
            once = bridge(profile, destination)
            assert bridge(once, destination) == once
            assert once.security_locus is profile.security_locus
            assert once.value_backing is profile.value_backing
            assert once.value_timing is profile.value_timing


def test_trust_locus_follows_host():
    assert trust_locus_for(PUBLIC) is ENDO
    assert trust_locus_for(PRIVATE) is EXO
    with pytest.raises(ValueError):
        TokenProfile(ENDO, EXO, ValueBacking.OBJECT_BASED, ValueTiming.EX_ANTE, PUBLIC)


def test_value_timing_heuristic():
    pow_token = TokenProfile(EXO, ENDO, ValueBacking.OBJECT_BASED, ValueTiming.EX_POST, PUBLIC)
    pos_token = TokenProfile(ENDO, ENDO, ValueBacking.OBJECT_BASED, ValueTiming.EX_ANTE, PUBLIC)
    assert value_timing_heuristic(pow_token) is ValueTiming.EX_POST
    assert value_timing_heuristic(pos_token) is ValueTiming.EX_ANTE
    assert value_timing_heuristic(stablecoin()) is ValueTiming.AT_REDEMPTION

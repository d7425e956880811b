"""Token classification by security locus and trust locus.

A token's security locus says whether its value rests on consuming a
resource outside the system; its trust locus says whether anything outside
the ledger guarantees finality. The 2x2 matrix over those axes is total:
every (security, trust) pair maps to exactly one quadrant, each carrying a
canonical exemplar and attack-effect description. Text comparisons are done
on whitespace-collapsed ("canonical") form.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Dict, Tuple


class Locus(enum.Enum):
    ENDOGENOUS = "endogenous"
    EXOGENOUS = "exogenous"


class LedgerKind(enum.Enum):
    PUBLIC_PERMISSIONLESS = "public_permissionless"
    PRIVATE_OR_CONSORTIUM = "private_or_consortium"


class ValueBacking(enum.Enum):
    OBJECT_BASED = "object_based"
    CLAIM_BASED = "claim_based"


class ValueTiming(enum.Enum):
    EX_ANTE = "ex_ante"
    EX_POST = "ex_post"
    AT_REDEMPTION = "at_redemption"


def canonical_text(text: str) -> str:
    """Collapse runs of whitespace; the comparison form for quadrant texts."""
    return " ".join(text.split())


REWRITE_CAUSES_COLLAPSE = "Rewrite causes collapse"


@dataclass(frozen=True)
class Quadrant:
    security_locus: Locus
    trust_locus: Locus
    attack_effect: str
    exemplar: str

    @property
    def position(self) -> str:
        row = "top" if self.security_locus is Locus.ENDOGENOUS else "bottom"
        col = "left" if self.trust_locus is Locus.ENDOGENOUS else "right"
        return f"{row}-{col}"


_QUADRANTS: Dict[Tuple[Locus, Locus], Quadrant] = {
    (Locus.ENDOGENOUS, Locus.ENDOGENOUS): Quadrant(
        security_locus=Locus.ENDOGENOUS,
        trust_locus=Locus.ENDOGENOUS,
        exemplar="Typical Proof-of-Stake chain (e.g. Cosmos chain) with object-based value backing",
        attack_effect=REWRITE_CAUSES_COLLAPSE,
    ),
    (Locus.ENDOGENOUS, Locus.EXOGENOUS): Quadrant(
        security_locus=Locus.ENDOGENOUS,
        trust_locus=Locus.EXOGENOUS,
        exemplar=(
            "Privately operated stablecoin with claim-based value backing, "
            "operated on private or consortium ledger"
        ),
        attack_effect=(
            "Operator or consortium retain control of finality subject to "
            "enforcement (e.g. regulation)"
        ),
    ),
    (Locus.EXOGENOUS, Locus.ENDOGENOUS): Quadrant(
        security_locus=Locus.EXOGENOUS,
        trust_locus=Locus.ENDOGENOUS,
        exemplar="Typical Proof-of-Work chain (e.g. Bitcoin)",
        attack_effect=REWRITE_CAUSES_COLLAPSE,
    ),
    (Locus.EXOGENOUS, Locus.EXOGENOUS): Quadrant(
        security_locus=Locus.EXOGENOUS,
        trust_locus=Locus.EXOGENOUS,
        exemplar="Cash-like CBDC",
        attack_effect=(
            "Individual notes are hard to target, meaning they are fungible even "
            "if stolen (in the case of digital cash) and there is a system-level "
            "cost in switching off the system. Thus any attack is likely causally "
            "reversed, i.e. an attack on the currency exogenously results in "
            "effects on the CBDC."
        ),
    ),
}


def classify(security: Locus, trust: Locus) -> Quadrant:
    """Map a (security, trust) pair to its quadrant. Total over the 2x2 domain."""
    return _QUADRANTS[(security, trust)]


def trust_locus_for(host: LedgerKind) -> Locus:
    """Trust locus follows the governance of the hosting ledger, not token origin."""
    if host is LedgerKind.PUBLIC_PERMISSIONLESS:
        return Locus.ENDOGENOUS
    return Locus.EXOGENOUS


@dataclass(frozen=True)
class TokenProfile:
    """A token as currently represented: loci, backing, timing, and host ledger.

    The trust locus is constrained to match the host ledger's governance; a
    profile claiming exogenous trust on a public permissionless host is
    rejected at construction.
    """

    security_locus: Locus
    trust_locus: Locus
    value_backing: ValueBacking
    value_timing: ValueTiming
    host_ledger: LedgerKind

    def __post_init__(self) -> None:
        expected = trust_locus_for(self.host_ledger)
        if self.trust_locus is not expected:
            raise ValueError(
                f"trust_locus must be {expected.value} on a "
                f"{self.host_ledger.value} host"
            )

    @property
    def quadrant(self) -> Quadrant:
        return classify(self.security_locus, self.trust_locus)


def bridge(profile: TokenProfile, destination: LedgerKind) -> TokenProfile:
    """Move a token to another ledger.

    Only the host and (consequently) the trust locus change: a public
    permissionless destination takes over finality, so trust becomes
    endogenous there; a private or consortium destination keeps an operator
    in control, so trust is exogenous. Idempotent for a fixed destination.
    """
    return replace(
        profile,
        host_ledger=destination,
        trust_locus=trust_locus_for(destination),
    )


def value_timing_heuristic(profile: TokenProfile) -> ValueTiming:
    """When is the token's value established?

    Object-based tokens minted against consumed entropy (exogenous security,
    the proof-of-work pattern) are valued ex post: the work is already done.
    Object-based tokens minted without entropy consumption (stake-minted)
    are issued ex ante. Claim-based tokens are valued at redemption.
    """
    if profile.value_backing is ValueBacking.CLAIM_BASED:
        return ValueTiming.AT_REDEMPTION
    if profile.security_locus is Locus.EXOGENOUS:
        return ValueTiming.EX_POST
    return ValueTiming.EX_ANTE

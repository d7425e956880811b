"""Closed-form evaluators for theft, sustainability, and attack profitability.

Every function here is a pure expression over the model parameter vector.
Comparisons are exact floating point: strict and inclusive relations follow
the printed inequalities they encode (EQ1 and EQ17 strict, EQ6-EQ10 and EQ14
inclusive), so a tie at zero benefit means "no attack".
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Tuple

# Per-field constraints, shared with the scenario loader so validation
# errors can name the offending key.
PARAM_CONSTRAINTS = (
    ("alpha", "0 <= alpha <= 1", lambda v: 0 <= v <= 1),
    ("epsilon", "0 < epsilon < 1", lambda v: 0 < v < 1),
    ("f", "f >= 0", lambda v: v >= 0),
    ("u", "u >= 0", lambda v: v >= 0),
    ("s", "s >= 0", lambda v: v >= 0),
    ("delta", "0 < delta <= 1", lambda v: 0 < v <= 1),
    ("n", "n >= 2 (integer)", lambda v: isinstance(v, int) and v >= 2),
)


@dataclass(frozen=True)
class ModelParams:
    """Parameter vector of the theft model.

    alpha:   probability a theft attempt succeeds, given the victim holds
             the asset
    epsilon: fraction of the victim's loss f captured by the robber
    f:       cost of a theft to the victim, in utils
    u:       utility of the good (or of one token) to the consumer
    c:       robber's cost per attempt; may be negative
    s:       supplier's cost of supply (network transaction fees)
    delta:   common discount factor
    n:       number of agents
    """

    alpha: float
    epsilon: float
    f: float
    u: float
    c: float
    s: float
    delta: float
    n: int

    def __post_init__(self) -> None:
        for name, constraint, ok in PARAM_CONSTRAINTS:
            if not ok(getattr(self, name)):
                raise ValueError(f"{name}: {constraint}")


@dataclass(frozen=True)
class ExogenousParams:
    """Off-ledger utility and cost of an attack (both nonnegative)."""

    u_e: float = 0.0
    c_e: float = 0.0

    def __post_init__(self) -> None:
        if self.u_e < 0:
            raise ValueError("u_e: u_e >= 0")
        if self.c_e < 0:
            raise ValueError("c_e: c_e >= 0")


class LedgerFate(enum.Enum):
    """What happens to the ledger after an attack."""

    SURVIVES = "survives"
    COLLAPSES = "collapses"
    REWRITTEN = "rewritten"


@dataclass(frozen=True)
class TheftEvaluation:
    """Benefit of an attack plus the condition identifiers it was judged by."""

    benefit: float
    attractive: bool
    condition_refs: Tuple[str, ...]

    def __post_init__(self) -> None:
        if self.attractive != (self.benefit > 0):
            raise ValueError("attractive must equal (benefit > 0)")


def theft_evaluation(benefit: float, refs: Iterable[str]) -> TheftEvaluation:
    return TheftEvaluation(benefit=benefit, attractive=benefit > 0, condition_refs=tuple(refs))


def random_theft_deterred(p: ModelParams) -> bool:
    """EQ1: random-target theft is deterred iff alpha*epsilon*f/(N-1) < c."""
    return p.alpha * p.epsilon * p.f / (p.n - 1) < p.c


def resolve_upsilon(u: float, fate: LedgerFate) -> float:
    """EQ2: value of a stolen unit is all-or-nothing, u if the ledger
    survives and 0 if it collapses; a governance rewrite also zeroes it."""
    if u < 0:
        raise ValueError("u: u >= 0")
    return u if fate is LedgerFate.SURVIVES else 0.0


def resolve_mu(t: int, u: float, fate: LedgerFate) -> float:
    """EQ15: value of t stolen units, t*u or 0 under the same all-or-nothing rule."""
    if not isinstance(t, int) or t < 1:
        raise ValueError("t: t >= 1 (integer)")
    if u < 0:
        raise ValueError("u: u >= 0")
    return t * u if fate is LedgerFate.SURVIVES else 0.0


def crypto_theft_condition(p: ModelParams, upsilon: float) -> bool:
    """EQ4: single-unit theft of a ledger asset is worthwhile iff
    alpha*upsilon/(N-1) > c."""
    return p.alpha * upsilon / (p.n - 1) > p.c


def crypto_theft_benefit(p: ModelParams, upsilon: float) -> float:
    """EQ5: instantaneous expected benefit alpha*upsilon - c.

    No 1/(N-1) factor: balances are visible, so the robber targets a known
    holder instead of guessing.
    """
    return p.alpha * upsilon - p.c


def full_info_sustainable_goods(p: ModelParams) -> bool:
    """EQ6: full information over goods is theft-free iff alpha*epsilon*f - c <= 0."""
    return p.alpha * p.epsilon * p.f - p.c <= 0


def full_info_sustainable_crypto(p: ModelParams) -> bool:
    """EQ7: full information over ledger assets is theft-free iff alpha*u - c <= 0."""
    return p.alpha * p.u - p.c <= 0


@dataclass(frozen=True)
class CreditEquilibrium:
    """The three conditions for a sustainable pure-credit equilibrium with theft.

    Intermediate values are exposed so callers can check margins, not just
    the booleans.
    """

    theft_temptation: float  # alpha*upsilon - c
    surplus: float  # u - alpha*f - s + alpha*upsilon - c
    continuation: float  # surplus / (delta * N)
    outside_option: float  # s - alpha*upsilon/(N-1)
    cond_theft_tempting: bool
    cond_surplus: bool
    cond_dynamic: bool
    all: bool


def credit_equilibrium_sustainable(p: ModelParams, upsilon: float) -> CreditEquilibrium:
    """EQ8-EQ10: pure-credit equilibrium with theft is sustainable iff
    theft is tempting (EQ8), trade surplus is nonnegative (EQ9), and the
    per-cycle continuation value beats the defection payoff (EQ10)."""
    temptation = p.alpha * upsilon - p.c
    surplus = p.u - p.alpha * p.f - p.s + p.alpha * upsilon - p.c
    continuation = surplus / (p.delta * p.n)
    outside = p.s - p.alpha * upsilon / (p.n - 1)
    c_tempting = temptation >= 0
    c_surplus = surplus >= 0
    c_dynamic = continuation >= outside
    return CreditEquilibrium(
        theft_temptation=temptation,
        surplus=surplus,
        continuation=continuation,
        outside_option=outside,
        cond_theft_tempting=c_tempting,
        cond_surplus=c_surplus,
        cond_dynamic=c_dynamic,
        all=c_tempting and c_surplus and c_dynamic,
    )


def expected_value_of_exchange(p: ModelParams, upsilon: float) -> float:
    """EQ11: (u - s - alpha*upsilon - c) / (delta * N), exactly as printed.

    Note the sign of alpha*upsilon differs from its appearance in EQ9; both
    forms are implemented literally as distinct operations.
    """
    return (p.u - p.s - p.alpha * upsilon - p.c) / (p.delta * p.n)


def money_theft_benefit(p: ModelParams) -> float:
    """EQ12: stolen money keeps its fungibility, so the benefit is alpha*u - c."""
    return p.alpha * p.u - p.c


def exogenous_theft_benefit(p: ModelParams, exo: ExogenousParams, endogenous_gain: float) -> float:
    """EQ13/EQ16: alpha*(gain + u_e) - (c + c_e), where gain is an already
    resolved upsilon or mu."""
    return p.alpha * (endogenous_gain + exo.u_e) - (p.c + exo.c_e)


def exogenous_sustainable(p: ModelParams, exo: ExogenousParams, upsilon: float) -> bool:
    """EQ14: theft-free iff alpha*(upsilon + u_e) - (c + c_e) <= 0."""
    return p.alpha * (upsilon + exo.u_e) - (p.c + exo.c_e) <= 0


@dataclass(frozen=True)
class ScenarioOutcome:
    """Realized outcome of an attack: endogenous gain, net payoff, scenario id."""

    mu: float
    net: float
    scenario_id: int


_SCENARIO_IDS = {
    LedgerFate.REWRITTEN: 1,
    LedgerFate.COLLAPSES: 2,
    LedgerFate.SURVIVES: 3,
}


def scenario_outcome(
    fate: LedgerFate, t: int, u: float, exo: ExogenousParams, p: ModelParams
) -> ScenarioOutcome:
    """Resolve one of the three attack scenarios with probability realized.

    1: rewritten/reverted (mu = 0), 2: ledger collapses (mu = 0),
    3: ledger survives unrewritten (mu = t*u). Since the fate is given,
    alpha is treated as 1 and net = (mu + u_e) - (c + c_e).
    """
    mu = resolve_mu(t, u, fate)
    net = (mu + exo.u_e) - (p.c + exo.c_e)
    return ScenarioOutcome(mu=mu, net=net, scenario_id=_SCENARIO_IDS[fate])


def mev_profitable(expected_extraction: float, gas: float, bid: float) -> bool:
    """EQ17: an ordering attack pays iff extraction - (gas + bid) > 0.

    A winning bid brings the success probability to 1 and the extractable
    amount is known ex ante from the public mempool, so only costs remain.
    """
    if gas < 0:
        raise ValueError("gas: gas >= 0")
    if bid < 0:
        raise ValueError("bid: bid >= 0")
    return expected_extraction - (gas + bid) > 0

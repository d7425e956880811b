"""Discrete-cycle agent simulator over goods, money, and token-ledger economies.

Each cycle: agents participate with probability p_part, participants are
paired by a uniform random matching with coin-flip roles, consumer and
supplier play one-shot rational policies (driven by the closed-form
evaluators in `analytic`), then a single robber drawn from the participants
decides whether to attack. Interaction modes differ in what the robber can
see, what settles a trade, and how defection is punished:

  Bilateral22        credit only; defection burns that one pair's privilege
  FullInfo23         credit only; defection is public, defector -> autarky
  MoneySemianon31    money only; consumers stay anonymous
  MoneyOrBilateral32 money or credit revealed to the supplier alone
  MoneyOrFullInfo33  money or credit revealed to everyone; a defecting
                     supplier is reduced to monetary trades
  CryptoLedger       token transfers on an account ledger all can read;
                     theft, governance rewrite, and collapse mechanics apply

All randomness flows through per-trial substreams derived from the config
seed, so a (config, seed) pair fully determines every trajectory.
"""

from __future__ import annotations

import enum
import hashlib
import math
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .analytic import (
    ExogenousParams,
    ModelParams,
    credit_equilibrium_sustainable,
)
from .ledger import Event, LedgerState


class Mode(enum.Enum):
    BILATERAL_22 = "Bilateral22"
    FULL_INFO_23 = "FullInfo23"
    MONEY_SEMIANON_31 = "MoneySemianon31"
    MONEY_OR_BILATERAL_32 = "MoneyOrBilateral32"
    MONEY_OR_FULL_INFO_33 = "MoneyOrFullInfo33"
    CRYPTO_LEDGER = "CryptoLedger"


MONEY_MODES = {Mode.MONEY_SEMIANON_31, Mode.MONEY_OR_BILATERAL_32, Mode.MONEY_OR_FULL_INFO_33}
CREDIT_MODES = {
    Mode.BILATERAL_22,
    Mode.FULL_INFO_23,
    Mode.MONEY_OR_BILATERAL_32,
    Mode.MONEY_OR_FULL_INFO_33,
    Mode.CRYPTO_LEDGER,
}
BILATERAL_MODES = {Mode.BILATERAL_22, Mode.MONEY_OR_BILATERAL_32}
# Modes where the robber can identify holders instead of guessing.
INFORMED_MODES = {Mode.FULL_INFO_23, Mode.MONEY_OR_FULL_INFO_33, Mode.CRYPTO_LEDGER}


@dataclass
class AgentState:
    id: int
    has_good: bool = False
    money: int = 0  # capacity one: 0 or 1
    tokens: int = 0  # cached ledger view, synced before policy calls
    revealed: bool = False
    autarkic: bool = False
    reciprocal_partners: Set[int] = field(default_factory=set)
    reduced_to_money_only: bool = False


@dataclass(frozen=True)
class CollapseRule:
    """When does a theft undermine trust?

    theta: stolen fraction of supply (cumulative, net of rewrites) at or
           above which the ledger collapses; 1.0 means collapse only if the
           entire supply is stolen and kept.
    p_r:   probability a theft from an important account is reverted by a
           governance rewrite the same cycle. The collapse check runs first;
           a theft that triggers collapse is never rewritten.
    """

    theta: float = 1.0
    p_r: float = 0.0

    def __post_init__(self) -> None:
        if not 0 <= self.theta <= 1:
            raise ValueError("theta: 0 <= theta <= 1")
        if not 0 <= self.p_r <= 1:
            raise ValueError("p_r: 0 <= p_r <= 1")


@dataclass(frozen=True)
class CycleConfig:
    params: ModelParams
    exo: ExogenousParams = ExogenousParams()
    mode: Mode = Mode.FULL_INFO_23
    cycles: int = 100
    trials: int = 1000
    seed: int = 0
    collapse_rule: CollapseRule = CollapseRule()
    p_part: float = 0.5  # per-cycle participation probability
    money_supply: Optional[int] = None  # default n // 2 in money modes
    n_important: int = 0  # agents 0..n_important-1 hold important accounts
    initial_balance: int = 1  # tokens per agent in CryptoLedger mode

    def __post_init__(self) -> None:
        if self.cycles < 1:
            raise ValueError("cycles: cycles >= 1")
        if self.trials < 1:
            raise ValueError("trials: trials >= 1")
        if not 0 < self.p_part <= 1:
            raise ValueError("p_part: 0 < p_part <= 1")
        if self.money_supply is not None and not 0 <= self.money_supply < self.params.n:
            raise ValueError("money_supply: 0 <= M < n")
        if not 0 <= self.n_important <= self.params.n:
            raise ValueError("n_important: 0 <= n_important <= n")
        if self.initial_balance < 0:
            raise ValueError("initial_balance: initial_balance >= 0")

    @property
    def effective_money_supply(self) -> int:
        if self.money_supply is not None:
            return self.money_supply
        return self.params.n // 2


@dataclass
class SimStats:
    trades: int
    theft_attempts: int
    theft_successes: int
    defections: int
    collapse_cycle: Optional[int]
    mean_robber_payoff: Optional[float]
    stderr_robber_payoff: Optional[float]
    money_share: float


@dataclass(frozen=True)
class TheftBenefitEstimate:
    mean: float
    stderr: float


def substream_seed(seed: int, index: int) -> int:
    """Independent 64-bit substream seed; stable across platforms and runs."""
    digest = hashlib.sha256(f"{seed}:{index}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


# --------------------------------------------------------------------------
# policies
# --------------------------------------------------------------------------


class ConsumerChoice(enum.Enum):
    USE_MONEY = "use_money"
    USE_CREDIT = "use_credit"
    ABSTAIN = "abstain"


class SupplierAction(enum.Enum):
    SUPPLY = "supply"
    DEFECT = "defect"


def mode_upsilon_hat(
    mode: Mode,
    params: ModelParams,
    rule: CollapseRule,
    supply: int = 0,
    stolen: int = 0,
    victim_important: bool = False,
) -> float:
    """The robber's expected capture value per theft, by mode.

    Goods modes: epsilon*f, the captured share of the victim's loss. The
    CryptoLedger mode values a stolen unit at u times the probability the
    gain survives the configured collapse rule (robbers know theta and p_r).
    """
    if mode is not Mode.CRYPTO_LEDGER:
        return params.epsilon * params.f
    if supply <= 0:
        return 0.0
    if (stolen + 1) / supply >= rule.theta:
        return 0.0
    keep = 1.0 - rule.p_r if victim_important else 1.0
    return params.u * keep


def consumer_policy(mode: Mode, agent: AgentState, params: ModelParams) -> ConsumerChoice:
    """Pick the higher one-shot value: money at u - s, credit at
    u - s - alpha*f (revealing identity risks theft). Abstain when every
    feasible option is worth <= 0; ties go to money, which reveals nothing.
    """
    money_value = params.u - params.s
    credit_value = params.u - params.s - params.alpha * params.f
    money_ok = mode in MONEY_MODES and agent.money == 1
    credit_ok = mode in CREDIT_MODES
    if mode is Mode.CRYPTO_LEDGER:
        credit_ok = agent.tokens >= 1
    # money_value >= credit_value always (alpha*f >= 0), so money wins ties
    if money_ok and money_value > 0:
        return ConsumerChoice.USE_MONEY
    if credit_ok and credit_value > 0:
        return ConsumerChoice.USE_CREDIT
    return ConsumerChoice.ABSTAIN


def supplier_policy(
    mode: Mode,
    agent: AgentState,
    params: ModelParams,
    upsilon: Optional[float] = None,
) -> SupplierAction:
    """Supply when staying in good standing beats pocketing the supply cost.

    The continuation proxy is the per-cycle equilibrium condition
    (surplus / (delta*N) >= s - alpha*upsilon/(N-1)); with s == 0 defection
    gains nothing, so the supplier always supplies.
    """
    if params.s == 0:
        return SupplierAction.SUPPLY
    ups = mode_upsilon_hat(mode, params, CollapseRule()) if upsilon is None else upsilon
    eq = credit_equilibrium_sustainable(params, ups)
    return SupplierAction.SUPPLY if eq.cond_dynamic else SupplierAction.DEFECT


@dataclass(frozen=True)
class RobberView:
    """What the cycle's robber can observe before choosing a target."""

    candidates: Tuple[int, ...]  # every other agent
    holdings: Dict[int, int]  # id -> visible holdings; empty when oblivious
    important: frozenset
    stolen: int  # cumulative successfully stolen tokens
    supply: int
    rule: CollapseRule


def robber_policy(
    mode: Mode, params: ModelParams, view: RobberView, rng: random.Random
) -> Optional[int]:
    """Choose a victim, or None when deterred.

    Oblivious modes target a uniformly random other agent and attack only if
    the random-target benefit alpha*epsilon*f/(N-1) - c is positive. Informed
    modes pick a known holder and attack only if alpha*upsilon_hat - c is
    positive; in CryptoLedger mode upsilon_hat is computed per victim under
    the collapse rule, preferring the highest-value then largest holder.
    Zero-benefit ties never attack.
    """
    if mode not in INFORMED_MODES:
        benefit = params.alpha * params.epsilon * params.f / (params.n - 1) - params.c
        if benefit > 0 and view.candidates:
            return rng.choice(view.candidates)
        return None

    holders = [a for a in view.candidates if view.holdings.get(a, 0) >= 1]
    if not holders:
        return None
    if mode is not Mode.CRYPTO_LEDGER:
        benefit = params.alpha * params.epsilon * params.f - params.c
        if benefit > 0:
            return rng.choice(holders)
        return None

    def value(victim: int) -> Tuple[float, int, int]:
        ups = mode_upsilon_hat(
            Mode.CRYPTO_LEDGER,
            params,
            view.rule,
            supply=view.supply,
            stolen=view.stolen,
            victim_important=victim in view.important,
        )
        return (ups, view.holdings[victim], -victim)

    best = max(holders, key=value)
    if params.alpha * value(best)[0] - params.c > 0:
        return best
    return None


# --------------------------------------------------------------------------
# simulation state
# --------------------------------------------------------------------------


@dataclass
class TheftAttempt:
    cycle: int
    robber: int
    victim: int
    tokens: int
    success: bool
    rewritten: bool = False
    event: Optional[Event] = None


@dataclass
class CycleRecord:
    cycle: int
    trades: int
    money_trades: int
    credit_trades: int
    defections: int
    theft_attempted: bool
    theft_succeeded: bool
    rewritten: bool
    money_vector: Tuple[int, ...]
    collapsed: bool


@dataclass
class SimState:
    agents: List[AgentState]
    ledger: Optional[LedgerState]
    cycle: int = 0
    stolen: int = 0
    trades: int = 0
    money_trades: int = 0
    credit_trades: int = 0
    theft_attempts: int = 0
    theft_successes: int = 0
    defections: int = 0
    collapse_cycle: Optional[int] = None
    terminated: bool = False
    goods_payoffs: List[float] = field(default_factory=list)
    crypto_attempts: List[TheftAttempt] = field(default_factory=list)
    records: List[CycleRecord] = field(default_factory=list)


@dataclass
class TrialResult:
    trades: int
    money_trades: int
    credit_trades: int
    theft_attempts: int
    theft_successes: int
    defections: int
    collapse_cycle: Optional[int]
    attempt_payoffs: List[float]
    records: List[CycleRecord]
    agents: List[AgentState]
    ledger: Optional[LedgerState]


def _account(agent_id: int) -> str:
    return f"a{agent_id}"


def init_state(config: CycleConfig, rng: random.Random) -> SimState:
    n = config.params.n
    agents = [AgentState(i) for i in range(n)]
    if config.mode in BILATERAL_MODES:
        everyone = set(range(n))
        for agent in agents:
            agent.reciprocal_partners = everyone - {agent.id}
    if config.mode in MONEY_MODES:
        for i in rng.sample(range(n), config.effective_money_supply):
            agents[i].money = 1
    ledger = None
    if config.mode is Mode.CRYPTO_LEDGER:
        ledger = LedgerState(
            {_account(i): config.initial_balance for i in range(n)},
            important=[_account(i) for i in range(config.n_important)],
        )
        for agent in agents:
            agent.tokens = config.initial_balance
    return SimState(agents=agents, ledger=ledger)


def _settle_trade(
    state: SimState,
    config: CycleConfig,
    consumer: AgentState,
    supplier: AgentState,
    upsilon: float,
    credit_buyers: Set[int],
) -> None:
    mode, params = config.mode, config.params
    if mode is Mode.CRYPTO_LEDGER:
        consumer.tokens = state.ledger.balance(_account(consumer.id))
    choice = consumer_policy(mode, consumer, params)
    if choice is ConsumerChoice.ABSTAIN:
        return

    if choice is ConsumerChoice.USE_MONEY:
        if supplier.money == 1:
            return  # supplier at money capacity; anonymity is not traded away
        consumer.money = 0
        supplier.money = 1
        consumer.has_good = True
        state.trades += 1
        state.money_trades += 1
        return

    # credit-like trade: identity is revealed before the supplier moves
    if supplier.reduced_to_money_only:
        return
    if mode in BILATERAL_MODES and supplier.id not in consumer.reciprocal_partners:
        return
    consumer.revealed = True
    action = supplier_policy(mode, supplier, params, upsilon)
    if action is SupplierAction.DEFECT:
        state.defections += 1
        if mode in (Mode.FULL_INFO_23, Mode.CRYPTO_LEDGER):
            supplier.autarkic = True
        elif mode in BILATERAL_MODES:
            consumer.reciprocal_partners.discard(supplier.id)
        elif mode is Mode.MONEY_OR_FULL_INFO_33:
            supplier.reduced_to_money_only = True
        return
    if mode is Mode.CRYPTO_LEDGER:
        state.ledger.transfer(_account(consumer.id), _account(supplier.id), 1, state.cycle)
        consumer.tokens -= 1
        supplier.tokens += 1
    consumer.has_good = True
    credit_buyers.add(consumer.id)
    state.trades += 1
    state.credit_trades += 1


def _robbery_phase(
    state: SimState,
    config: CycleConfig,
    participants: Sequence[AgentState],
    credit_buyers: Set[int],
    rng: random.Random,
) -> Tuple[bool, bool, bool]:
    """Returns (attempted, succeeded, rewritten) for the cycle record."""
    mode, params, rule = config.mode, config.params, config.collapse_rule
    robber = rng.choice(list(participants))
    others = tuple(a.id for a in state.agents if a.id != robber.id)

    if mode is Mode.CRYPTO_LEDGER:
        balances = state.ledger.visible_balances()
        holdings = {a.id: balances[_account(a.id)] for a in state.agents}
        supply = state.ledger.total_supply
    elif mode is Mode.MONEY_OR_FULL_INFO_33:
        # only credit purchases reveal identity; money buyers stay dark
        holdings = {i: 1 for i in credit_buyers if state.agents[i].has_good}
        supply = 0
    elif mode is Mode.FULL_INFO_23:
        holdings = {a.id: 1 for a in state.agents if a.has_good}
        supply = 0
    else:
        holdings = {}
        supply = 0

    view = RobberView(
        candidates=others,
        holdings=holdings,
        important=frozenset(range(config.n_important)),
        stolen=state.stolen,
        supply=supply,
        rule=rule,
    )
    victim_id = robber_policy(mode, params, view, rng)
    if victim_id is None:
        return False, False, False

    state.theft_attempts += 1
    victim = state.agents[victim_id]

    if mode is Mode.CRYPTO_LEDGER:
        success = state.ledger.steal(
            _account(robber.id), _account(victim.id), 1, params.alpha, rng, state.cycle
        )
        attempt = TheftAttempt(
            cycle=state.cycle,
            robber=robber.id,
            victim=victim.id,
            tokens=1,
            success=success,
            event=state.ledger.history[-1] if success else None,
        )
        state.crypto_attempts.append(attempt)
        rewritten = False
        if success:
            state.theft_successes += 1
            state.stolen += 1
            if state.ledger.total_supply and (
                state.stolen / state.ledger.total_supply >= rule.theta
            ):
                state.ledger.collapse(state.cycle)
                state.collapse_cycle = state.cycle
                state.terminated = True
            elif victim.id in view.important and rng.random() < rule.p_r:
                state.ledger.governance_rewrite(attempt.event, state.cycle)
                attempt.rewritten = True
                rewritten = True
                state.stolen -= 1  # the stolen fraction is net of rewrites
        return True, success, rewritten

    # goods theft: the victim must actually hold a good this cycle
    success = rng.random() < params.alpha and victim.has_good
    if success:
        victim.has_good = False
        state.theft_successes += 1
        state.goods_payoffs.append(params.epsilon * params.f - params.c)
    else:
        state.goods_payoffs.append(-params.c)
    return True, success, False


def run_cycle(state: SimState, config: CycleConfig, rng: random.Random) -> SimState:
    """Advance one cycle in place: endow, match, trade, rob, apply collapse rule."""
    if state.terminated:
        raise RuntimeError("trial has terminated")
    params = config.params
    for agent in state.agents:
        agent.has_good = False  # goods do not persist across cycles

    trades0, money0, credit0, defect0 = (
        state.trades,
        state.money_trades,
        state.credit_trades,
        state.defections,
    )

    participants = [
        a for a in state.agents if not a.autarkic and rng.random() < config.p_part
    ]
    order = participants[:]
    rng.shuffle(order)

    upsilon = mode_upsilon_hat(
        config.mode, params, config.collapse_rule,
        supply=state.ledger.total_supply if state.ledger else 0,
        stolen=state.stolen,
    )
    credit_buyers: Set[int] = set()
    for i in range(0, len(order) - 1, 2):
        a, b = order[i], order[i + 1]
        consumer, supplier = (a, b) if rng.random() < 0.5 else (b, a)
        _settle_trade(state, config, consumer, supplier, upsilon, credit_buyers)

    attempted = succeeded = rewritten = False
    if participants:
        attempted, succeeded, rewritten = _robbery_phase(
            state, config, participants, credit_buyers, rng
        )

    state.records.append(
        CycleRecord(
            cycle=state.cycle,
            trades=state.trades - trades0,
            money_trades=state.money_trades - money0,
            credit_trades=state.credit_trades - credit0,
            defections=state.defections - defect0,
            theft_attempted=attempted,
            theft_succeeded=succeeded,
            rewritten=rewritten,
            money_vector=tuple(a.money for a in state.agents),
            collapsed=state.ledger.collapsed if state.ledger else False,
        )
    )
    state.cycle += 1
    return state


def _resolve_crypto_payoffs(state: SimState, config: CycleConfig) -> List[float]:
    """Value each theft attempt after the trial: all-or-nothing.

    A successful theft is worth tokens*u only if it was never rewritten and
    the ledger never collapsed during the trial; every attempt paid c.
    """
    collapsed = state.collapse_cycle is not None
    payoffs = []
    for attempt in state.crypto_attempts:
        gain = 0.0
        if attempt.success and not attempt.rewritten and not collapsed:
            gain = attempt.tokens * config.params.u
        payoffs.append(gain - config.params.c)
    return payoffs


def run_trial(config: CycleConfig, trial_index: int = 0) -> TrialResult:
    rng = random.Random(substream_seed(config.seed, trial_index))
    state = init_state(config, rng)
    for _ in range(config.cycles):
        if state.terminated:
            break
        run_cycle(state, config, rng)
    payoffs = state.goods_payoffs + _resolve_crypto_payoffs(state, config)
    return TrialResult(
        trades=state.trades,
        money_trades=state.money_trades,
        credit_trades=state.credit_trades,
        theft_attempts=state.theft_attempts,
        theft_successes=state.theft_successes,
        defections=state.defections,
        collapse_cycle=state.collapse_cycle,
        attempt_payoffs=payoffs,
        records=state.records,
        agents=state.agents,
        ledger=state.ledger,
    )


def _mean_stderr(values: Sequence[float]) -> Tuple[Optional[float], Optional[float]]:
    if not values:
        return None, None
    n = len(values)
    mean = sum(values) / n
    if n == 1:
        return mean, 0.0
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var / n)


def run_simulation(config: CycleConfig) -> SimStats:
    """K independent trials of T cycles each, folded into aggregate stats."""
    trades = money_trades = attempts = successes = defections = 0
    collapse_cycle: Optional[int] = None
    payoffs: List[float] = []
    for j in range(config.trials):
        trial = run_trial(config, j)
        trades += trial.trades
        money_trades += trial.money_trades
        attempts += trial.theft_attempts
        successes += trial.theft_successes
        defections += trial.defections
        if trial.collapse_cycle is not None:
            if collapse_cycle is None or trial.collapse_cycle < collapse_cycle:
                collapse_cycle = trial.collapse_cycle
        payoffs.extend(trial.attempt_payoffs)
    mean, stderr = _mean_stderr(payoffs)
    return SimStats(
        trades=trades,
        theft_attempts=attempts,
        theft_successes=successes,
        defections=defections,
        collapse_cycle=collapse_cycle,
        mean_robber_payoff=mean,
        stderr_robber_payoff=stderr,
        money_share=(money_trades / trades) if trades else 0.0,
    )


def estimate_theft_benefit(
    config: CycleConfig, upsilon: Optional[float] = None
) -> TheftBenefitEstimate:
    """Monte Carlo mean and standard error of the payoff per theft attempt.

    Runs config.trials single-attempt trials on independent substreams: each
    attempt succeeds with probability alpha and a success is worth upsilon
    (default u, i.e. the ledger survives); every attempt costs c. The mean
    converges on alpha*upsilon - c.
    """
    ups = config.params.u if upsilon is None else upsilon
    alpha, c = config.params.alpha, config.params.c
    payoffs = []
    for j in range(config.trials):
        rng = random.Random(substream_seed(config.seed, j))
        gain = ups if rng.random() < alpha else 0.0
        payoffs.append(gain - c)
    mean, stderr = _mean_stderr(payoffs)
    return TheftBenefitEstimate(mean=mean, stderr=stderr)

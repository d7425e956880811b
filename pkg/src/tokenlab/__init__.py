"""tokenlab: a token-economy equilibrium laboratory.

Closed-form theft and sustainability conditions, an agent-based repeated-game
simulator over account ledgers with collapse and rewrite mechanics, a token
trust/security classifier, and a constant-product sandwich-attack model.
"""

__version__ = "0.1.0"

from .analytic import (  # noqa: F401
    CreditEquilibrium,
    ExogenousParams,
    LedgerFate,
    ModelParams,
    ScenarioOutcome,
    TheftEvaluation,
)
from .engine import (  # noqa: F401
    AgentState,
    CollapseRule,
    CycleConfig,
    Mode,
    SimStats,
    estimate_theft_benefit,
    run_simulation,
    run_trial,
)
from .ledger import (  # noqa: F401
    AttackResult,
    LedgerState,
    PoolState,
    SwapOrder,
    sandwich_attack,
    swap,
)
from .taxonomy import (  # noqa: F401
    LedgerKind,
    Locus,
    Quadrant,
    TokenProfile,
    bridge,
    classify,
    value_timing_heuristic,
)

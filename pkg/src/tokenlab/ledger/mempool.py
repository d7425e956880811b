"""Constant-product pool and the sandwich attack over a public mempool.

The pool is the minimal x*y=k market. A pending victim order is visible to
everyone, so an attacker can buy ahead of it (front-run), let the victim
trade at the worsened price, and sell back after (back-run). The victim's
only defence is the min_out slippage control: if the attacked fill drops
below it, the order cancels and the attacker eats gas and bid.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Tuple

from . import EmptyPool


class SwapSide(enum.Enum):
    X_TO_Y = "x_to_y"
    Y_TO_X = "y_to_x"


@dataclass(frozen=True)
class PoolState:
    reserve_x: float
    reserve_y: float

    def __post_init__(self) -> None:
        if self.reserve_x <= 0 or self.reserve_y <= 0:
            raise EmptyPool("pool reserves must be positive")

    @property
    def k(self) -> float:
        return self.reserve_x * self.reserve_y


@dataclass(frozen=True)
class SwapOrder:
    trader: str
    amount_in: float
    min_out: float = 0.0
    side: SwapSide = SwapSide.X_TO_Y

    def __post_init__(self) -> None:
        if self.amount_in <= 0:
            raise ValueError("amount_in must be positive")
        if self.min_out < 0:
            raise ValueError("min_out must be nonnegative")


class AttackStatus(enum.Enum):
    EXECUTED = "executed"
    VICTIM_CANCELLED = "victim_cancelled"


@dataclass(frozen=True)
class AttackResult:
    status: AttackStatus
    attacker_profit: float  # net of gas and bid
    victim_received: float  # 0 when the victim order cancelled


def _swap(pool: PoolState, amount_in: float, side: SwapSide) -> Tuple[PoolState, float]:
    """out = reserve_out - k/(reserve_in + amount_in); k is preserved."""
    if amount_in == 0:
        return pool, 0.0
    k = pool.k
    if side is SwapSide.X_TO_Y:
        new_x = pool.reserve_x + amount_in
        new_y = k / new_x
        return PoolState(new_x, new_y), pool.reserve_y - new_y
    new_y = pool.reserve_y + amount_in
    new_x = k / new_y
    return PoolState(new_x, new_y), pool.reserve_x - new_x


def swap(pool: PoolState, order: SwapOrder) -> Tuple[PoolState, float]:
    """Apply a swap at the constant-product price; slippage enforcement is
    the execution context's job (see sandwich_attack)."""
    return _swap(pool, order.amount_in, order.side)


def _opposite(side: SwapSide) -> SwapSide:
    return SwapSide.Y_TO_X if side is SwapSide.X_TO_Y else SwapSide.X_TO_Y


def sandwich_attack(
    pool: PoolState,
    victim: SwapOrder,
    frontrun_amount: float,
    gas: float,
    bid: float,
) -> AttackResult:
    """Front-run the victim's order by `frontrun_amount` on the same side.

    If the victim's attacked fill stays at or above min_out, the victim
    executes and the attacker back-runs, selling everything acquired;
    profit = back-run proceeds - frontrun_amount - gas - bid. If the fill
    drops below min_out the victim cancels and the attacker unwinds at the
    untouched price, losing only gas + bid.
    """
    if frontrun_amount < 0:
        raise ValueError("frontrun_amount must be nonnegative")
    if gas < 0 or bid < 0:
        raise ValueError("gas and bid must be nonnegative")
    costs = gas + bid

    after_front, acquired = _swap(pool, frontrun_amount, victim.side)
    attacked_pool, victim_out = _swap(after_front, victim.amount_in, victim.side)

    if victim_out < victim.min_out:
        # Victim cancels; attacker sells the acquired amount back into the
        # un-traded pool. Round-trip is exact under x*y=k, but clamp so
        # float noise can never show a positive unwind.
        _, unwound = _swap(after_front, acquired, _opposite(victim.side))
        profit = min(unwound - frontrun_amount, 0.0) - costs
        return AttackResult(AttackStatus.VICTIM_CANCELLED, profit, 0.0)

    _, proceeds = _swap(attacked_pool, acquired, _opposite(victim.side))
    profit = proceeds - frontrun_amount - costs
    return AttackResult(AttackStatus.EXECUTED, profit, victim_out)

"""Account-based ledger with full balance visibility and collapse mechanics.

Balances live in an id -> account map that any observer can read in full.
Theft moves tokens like any transfer but is tagged as such in the event log;
a governance rewrite reverts a specific theft (and is itself logged: the
record of history is never erased, only balances change); collapse freezes
the ledger permanently. Conservation of total supply holds across any
sequence of transfer/steal/rewrite events.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union


class LedgerError(Exception):
    """Base for all ledger faults."""


class InsufficientBalance(LedgerError):
    pass


class LedgerCollapsed(LedgerError):
    pass


class UnknownAccount(LedgerError):
    pass


class EventNotFound(LedgerError):
    pass


class EmptyPool(LedgerError):
    pass


@dataclass
class Account:
    id: str
    balance: int
    important: bool = False  # Foundation / Community-Pool style holding

    def __post_init__(self) -> None:
        if self.balance < 0:
            raise ValueError("balance must be nonnegative")


@dataclass
class Event:
    """One ledger event. `pre_balances` snapshots the two accounts a theft
    touched, so a later rewrite can verify what it is reverting."""

    seq: int
    kind: str  # transfer | theft | attempt | rewrite | collapse
    src: Optional[str]
    dst: Optional[str]
    amount: int
    cycle: Optional[int] = None
    pre_balances: Optional[Dict[str, int]] = None
    rewritten: bool = False

    def export(self) -> Dict[str, object]:
        return {
            "seq": self.seq,
            "kind": self.kind,
            "from": self.src,
            "to": self.dst,
            "amount": self.amount,
            "cycle": self.cycle,
        }


class LedgerState:
    """Mutable ledger: all writes go through the operations below."""

    def __init__(self, balances: Mapping[str, int], important: Iterable[str] = ()):
        important = set(important)
        unknown = important - set(balances)
        if unknown:
            raise UnknownAccount(f"important accounts not in ledger: {sorted(unknown)}")
        self.accounts: Dict[str, Account] = {
            acct_id: Account(acct_id, bal, acct_id in important)
            for acct_id, bal in balances.items()
        }
        self.total_supply: int = sum(a.balance for a in self.accounts.values())
        self.collapsed: bool = False
        self.history: List[Event] = []

    # -- internal helpers ---------------------------------------------------

    def _require_live(self) -> None:
        if self.collapsed:
            raise LedgerCollapsed("ledger has collapsed; state is frozen")

    def _account(self, acct_id: str) -> Account:
        try:
            return self.accounts[acct_id]
        except KeyError:
            raise UnknownAccount(acct_id) from None

    def _log(self, kind: str, src: Optional[str], dst: Optional[str], amount: int,
             cycle: Optional[int], pre_balances: Optional[Dict[str, int]] = None) -> Event:
        event = Event(
            seq=len(self.history),
            kind=kind,
            src=src,
            dst=dst,
            amount=amount,
            cycle=cycle,
            pre_balances=pre_balances,
        )
        self.history.append(event)
        return event

    # -- operations ---------------------------------------------------------

    def balance(self, acct_id: str) -> int:
        return self._account(acct_id).balance

    def transfer(self, src: str, dst: str, amount: int, cycle: Optional[int] = None) -> Event:
        """Move `amount` tokens src -> dst. Zero-amount transfers are legal
        and still logged."""
        self._require_live()
        if amount < 0:
            raise ValueError("amount must be nonnegative")
        src_acct = self._account(src)
        dst_acct = self._account(dst)
        if src_acct.balance < amount:
            raise InsufficientBalance(f"{src} holds {src_acct.balance} < {amount}")
        src_acct.balance -= amount
        dst_acct.balance += amount
        return self._log("transfer", src, dst, amount, cycle)

    def steal(self, robber: str, victim: str, t: int, alpha: float,
              rng: random.Random, cycle: Optional[int] = None) -> bool:
        """Attempt to move t tokens victim -> robber.

        Succeeds only when the Bernoulli(alpha) draw comes up AND the victim
        actually holds t tokens; the draw is consumed either way so streams
        stay aligned. Failed attempts leave balances untouched but are
        logged.
        """
        self._require_live()
        if t < 1:
            raise ValueError("t must be >= 1")
        robber_acct = self._account(robber)
        victim_acct = self._account(victim)
        drew_success = rng.random() < alpha
        if drew_success and victim_acct.balance >= t:
            pre = {victim: victim_acct.balance, robber: robber_acct.balance}
            victim_acct.balance -= t
            robber_acct.balance += t
            self._log("theft", victim, robber, t, cycle, pre_balances=pre)
            return True
        self._log("attempt", victim, robber, t, cycle)
        return False

    def governance_rewrite(self, theft: Union[Event, int], cycle: Optional[int] = None) -> Event:
        """Revert one theft: move the stolen amount back robber -> victim.

        The theft event stays in history (marked rewritten) and the rewrite
        itself is logged; memory is never erased. A theft can be rewritten
        once. If the robber has since spent the loot the rewrite fails with
        InsufficientBalance rather than forging supply.
        """
        self._require_live()
        seq = theft.seq if isinstance(theft, Event) else theft
        if not 0 <= seq < len(self.history):
            raise EventNotFound(f"no event with seq {seq}")
        event = self.history[seq]
        if event.kind != "theft" or event.rewritten:
            raise EventNotFound(f"event {seq} is not a rewritable theft")
        victim, robber = event.src, event.dst
        robber_acct = self._account(robber)
        if robber_acct.balance < event.amount:
            raise InsufficientBalance(
                f"{robber} holds {robber_acct.balance} < {event.amount}; loot already spent"
            )
        robber_acct.balance -= event.amount
        self._account(victim).balance += event.amount
        event.rewritten = True
        return self._log("rewrite", robber, victim, event.amount, cycle)

    def collapse(self, cycle: Optional[int] = None) -> None:
        """Freeze the ledger. Idempotent: a second call changes nothing."""
        if self.collapsed:
            return
        self._log("collapse", None, None, 0, cycle)
        self.collapsed = True

    def visible_balances(self, observer: Optional[str] = None) -> Dict[str, int]:
        """Full balance map, identical for every observer (full information).

        The observer argument exists only to make that explicit; oblivious
        interaction modes simply never call this.
        """
        return {acct_id: acct.balance for acct_id, acct in self.accounts.items()}

    def export_events(self) -> str:
        """Event log as JSON lines, one event per line."""
        return "\n".join(json.dumps(e.export(), sort_keys=True) for e in self.history)

    @property
    def sum_balances(self) -> int:
        return sum(a.balance for a in self.accounts.values())


from .mempool import (  # noqa: E402  (errors above must exist first)
    AttackResult,
    AttackStatus,
    PoolState,
    SwapOrder,
    SwapSide,
    sandwich_attack,
    swap,
)

__all__ = [
    "Account",
    "AttackResult",
    "AttackStatus",
    "EmptyPool",
    "Event",
    "EventNotFound",
    "InsufficientBalance",
    "LedgerCollapsed",
    "LedgerError",
    "LedgerState",
    "PoolState",
    "SwapOrder",
    "SwapSide",
    "UnknownAccount",
    "sandwich_attack",
    "swap",
]

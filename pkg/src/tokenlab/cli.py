"""Command-line interface: scenario files, dispatch, sweeps, reports.

Commands: classify, eval, simulate, sweep, mev. Single evaluations emit a
JSON report {command, config, results, provenance}; simulate/sweep can emit
plot-ready CSV. Reports are reproducible: same scenario + seed (and a fixed
SOURCE_DATE_EPOCH for the provenance timestamp) gives byte-identical output.
Exit codes: 0 success, 1 validation error, 2 runtime fault.
"""

from __future__ import annotations

import argparse
import datetime
import io
import json
import os
import sys
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__, analytic
from .analytic import ExogenousParams, LedgerFate, ModelParams
from .engine import (
    CollapseRule,
    CycleConfig,
    Mode,
    SimStats,
    run_simulation,
)
from .ledger import AttackResult, LedgerError, PoolState, SwapOrder, sandwich_attack
from .taxonomy import (
    LedgerKind,
    Locus,
    TokenProfile,
    ValueBacking,
    ValueTiming,
    classify,
    trust_locus_for,
    value_timing_heuristic,
)

SEED_ENV_VAR = "TOKENLAB_SEED"

CSV_COLUMNS = [
    "mode", "alpha", "epsilon", "f", "u", "c", "s", "delta", "n",
    "theta", "p_r",
    "trades", "theft_attempts", "theft_successes", "defections",
    "collapse_cycle", "mean_robber_payoff", "stderr", "money_share",
]


class ParseError(Exception):
    pass


class UnknownCommand(Exception):
    pass


class ValidationError(Exception):
    def __init__(self, key: str, constraint: str):
        super().__init__(f"{key}: {constraint}")
        self.key = key
        self.constraint = constraint


# --------------------------------------------------------------------------
# scenario files
# --------------------------------------------------------------------------

_TOP_LEVEL_KEYS = {
    "params", "exo", "mode", "collapse_rule", "cycles", "trials", "seed",
    "p_part", "money_supply", "n_important", "initial_balance",
    "pool", "token_profile", "attack", "mev",
}

_LOCI = {"endo": Locus.ENDOGENOUS, "exo": Locus.EXOGENOUS}
_BACKINGS = {"object": ValueBacking.OBJECT_BASED, "claim": ValueBacking.CLAIM_BASED}
_HOSTS = {
    "public": LedgerKind.PUBLIC_PERMISSIONLESS,
    "private": LedgerKind.PRIVATE_OR_CONSORTIUM,
}


@dataclass(frozen=True)
class AttackSpec:
    """Optional attack description: units stolen and their off-ledger unit price."""

    t: int = 1
    unit_price: float = 0.0


@dataclass(frozen=True)
class MevSpec:
    extraction: float
    gas: float
    bid: float


@dataclass(frozen=True)
class Scenario:
    config: CycleConfig
    pool: Optional[PoolState] = None
    token_profile: Optional[TokenProfile] = None
    attack: AttackSpec = AttackSpec()
    mev: Optional[MevSpec] = None

    def effective_exo(self) -> ExogenousParams:
        """Exogenous params with the attack's unit price folded into u_e."""
        return ExogenousParams(
            u_e=self.config.exo.u_e + self.attack.t * self.attack.unit_price,
            c_e=self.config.exo.c_e,
        )

    def echo(self) -> Dict[str, object]:
        cfg = self.config
        out: Dict[str, object] = {
            "params": {
                "alpha": cfg.params.alpha, "epsilon": cfg.params.epsilon,
                "f": cfg.params.f, "u": cfg.params.u, "c": cfg.params.c,
                "s": cfg.params.s, "delta": cfg.params.delta, "n": cfg.params.n,
            },
            "exo": {"u_e": cfg.exo.u_e, "c_e": cfg.exo.c_e},
            "mode": cfg.mode.value,
            "collapse_rule": {"theta": cfg.collapse_rule.theta, "p_r": cfg.collapse_rule.p_r},
            "cycles": cfg.cycles,
            "trials": cfg.trials,
            "seed": cfg.seed,
            "p_part": cfg.p_part,
            "money_supply": cfg.effective_money_supply,
            "n_important": cfg.n_important,
            "initial_balance": cfg.initial_balance,
            "attack": {"t": self.attack.t, "unit_price": self.attack.unit_price},
        }
        if self.pool is not None:
            out["pool"] = {"x": self.pool.reserve_x, "y": self.pool.reserve_y}
        if self.mev is not None:
            out["mev"] = {
                "extraction": self.mev.extraction,
                "gas": self.mev.gas,
                "bid": self.mev.bid,
            }
        return out


def _require_number(section: Dict, key: str, qualified: str) -> float:
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(qualified, "must be a number")
    return value


def _require_int(value, qualified: str, constraint: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ValidationError(qualified, constraint)
    return value


def _parse_params(section) -> ModelParams:
    if not isinstance(section, dict):
        raise ValidationError("params", "must be an object")
    fields = [name for name, _, _ in analytic.PARAM_CONSTRAINTS] + ["c"]
    unknown = set(section) - set(fields)
    if unknown:
        raise ValidationError(f"params.{sorted(unknown)[0]}", "unknown key")
    missing = set(fields) - set(section)
    if missing:
        raise ValidationError(f"params.{sorted(missing)[0]}", "required")
    for name, constraint, ok in analytic.PARAM_CONSTRAINTS:
        value = _require_number(section, name, f"params.{name}")
        if not ok(value):
            raise ValidationError(name, constraint)
    _require_number(section, "c", "params.c")
    return ModelParams(**section)


def parse_scenario(path: str) -> Scenario:
    """Load and validate a scenario file, applying documented defaults."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read scenario file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed scenario file: {exc}") from exc
    return scenario_from_dict(raw)


def scenario_from_dict(raw: Dict) -> Scenario:
    if not isinstance(raw, dict):
        raise ParseError("scenario root must be an object")
    unknown = set(raw) - _TOP_LEVEL_KEYS
    if unknown:
        raise ValidationError(sorted(unknown)[0], "unknown key")
    if "params" not in raw:
        raise ValidationError("params", "required")
    params = _parse_params(raw["params"])

    exo_raw = raw.get("exo", {})
    if not isinstance(exo_raw, dict) or set(exo_raw) - {"u_e", "c_e"}:
        raise ValidationError("exo", "object with keys u_e, c_e")
    u_e = _require_number(exo_raw, "u_e", "exo.u_e") if "u_e" in exo_raw else 0.0
    c_e = _require_number(exo_raw, "c_e", "exo.c_e") if "c_e" in exo_raw else 0.0
    if u_e < 0:
        raise ValidationError("exo.u_e", "u_e >= 0")
    if c_e < 0:
        raise ValidationError("exo.c_e", "c_e >= 0")

    mode_name = raw.get("mode", Mode.FULL_INFO_23.value)
    try:
        mode = Mode(mode_name)
    except ValueError:
        valid = ", ".join(m.value for m in Mode)
        raise ValidationError("mode", f"one of: {valid}") from None

    rule_raw = raw.get("collapse_rule", {})
    if not isinstance(rule_raw, dict) or set(rule_raw) - {"theta", "p_r"}:
        raise ValidationError("collapse_rule", "object with keys theta, p_r")
    theta = _require_number(rule_raw, "theta", "collapse_rule.theta") if "theta" in rule_raw else 1.0
    p_r = _require_number(rule_raw, "p_r", "collapse_rule.p_r") if "p_r" in rule_raw else 0.0
    if not 0 <= theta <= 1:
        raise ValidationError("collapse_rule.theta", "0 <= theta <= 1")
    if not 0 <= p_r <= 1:
        raise ValidationError("collapse_rule.p_r", "0 <= p_r <= 1")

    cycles = _require_int(raw.get("cycles", 100), "cycles", "cycles >= 1", 1)
    trials = _require_int(raw.get("trials", 1000), "trials", "trials >= 1", 1)
    seed = raw.get("seed", default_seed())
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ValidationError("seed", "must be an integer")

    p_part = raw.get("p_part", 0.5)
    if isinstance(p_part, bool) or not isinstance(p_part, (int, float)) or not 0 < p_part <= 1:
        raise ValidationError("p_part", "0 < p_part <= 1")

    money_supply = raw.get("money_supply")
    if money_supply is not None:
        money_supply = _require_int(money_supply, "money_supply", "0 <= M < n", 0)
        if money_supply >= params.n:
            raise ValidationError("money_supply", "0 <= M < n")
    n_important = _require_int(
        raw.get("n_important", 0), "n_important", "0 <= n_important <= n", 0
    )
    if n_important > params.n:
        raise ValidationError("n_important", "0 <= n_important <= n")
    initial_balance = _require_int(
        raw.get("initial_balance", 1), "initial_balance", "initial_balance >= 0", 0
    )

    pool = None
    if "pool" in raw:
        pool_raw = raw["pool"]
        if not isinstance(pool_raw, dict) or set(pool_raw) != {"x", "y"}:
            raise ValidationError("pool", "object with keys x, y")
        x = _require_number(pool_raw, "x", "pool.x")
        y = _require_number(pool_raw, "y", "pool.y")
        if x <= 0 or y <= 0:
            raise ValidationError("pool", "reserves must be positive")
        pool = PoolState(float(x), float(y))

    token_profile = None
    if "token_profile" in raw:
        tp = raw["token_profile"]
        if not isinstance(tp, dict) or set(tp) - {"security", "backing", "host"}:
            raise ValidationError("token_profile", "object with keys security, backing, host")
        try:
            token_profile = build_profile(
                tp.get("security", "endo"), tp.get("backing", "object"), tp.get("host", "public")
            )
        except KeyError as exc:
            raise ValidationError("token_profile", f"bad value {exc}") from None

    attack = AttackSpec()
    if "attack" in raw:
        at = raw["attack"]
        if not isinstance(at, dict) or set(at) - {"t", "unit_price"}:
            raise ValidationError("attack", "object with keys t, unit_price")
        t = _require_int(at.get("t", 1), "attack.t", "t >= 1 (integer)", 1)
        unit_price = at.get("unit_price", 0.0)
        if isinstance(unit_price, bool) or not isinstance(unit_price, (int, float)) or unit_price < 0:
            raise ValidationError("attack.unit_price", "unit_price >= 0")
        attack = AttackSpec(t=t, unit_price=float(unit_price))

    mev = None
    if "mev" in raw:
        mv = raw["mev"]
        if not isinstance(mv, dict) or set(mv) != {"extraction", "gas", "bid"}:
            raise ValidationError("mev", "object with keys extraction, gas, bid")
        for key in ("extraction", "gas", "bid"):
            if _require_number(mv, key, f"mev.{key}") < 0:
                raise ValidationError(f"mev.{key}", f"{key} >= 0")
        mev = MevSpec(float(mv["extraction"]), float(mv["gas"]), float(mv["bid"]))

    config = CycleConfig(
        params=params,
        exo=ExogenousParams(float(u_e), float(c_e)),
        mode=mode,
        cycles=cycles,
        trials=trials,
        seed=seed,
        collapse_rule=CollapseRule(float(theta), float(p_r)),
        p_part=float(p_part),
        money_supply=money_supply,
        n_important=n_important,
        initial_balance=initial_balance,
    )
    return Scenario(
        config=config, pool=pool, token_profile=token_profile, attack=attack, mev=mev
    )


def build_profile(security: str, backing: str, host: str) -> TokenProfile:
    sec = _LOCI[security]
    back = _BACKINGS[backing]
    kind = _HOSTS[host]
    provisional = TokenProfile(
        security_locus=sec,
        trust_locus=trust_locus_for(kind),
        value_backing=back,
        value_timing=ValueTiming.EX_ANTE,
        host_ledger=kind,
    )
    return replace(provisional, value_timing=value_timing_heuristic(provisional))


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(SEED_ENV_VAR, "must be an integer") from None


# --------------------------------------------------------------------------
# reports
# --------------------------------------------------------------------------


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        moment = datetime.datetime.fromtimestamp(int(epoch), tz=datetime.timezone.utc)
    else:
        moment = datetime.datetime.now(tz=datetime.timezone.utc)
    return moment.isoformat()


def build_report(command: str, config: Dict, results, seed: Optional[int]) -> Dict:
    return {
        "command": command,
        "config": config,
        "results": results,
        "provenance": {"seed": seed, "version": __version__, "timestamp": _timestamp()},
    }


def render_report(report: Dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _write_output(text: str, out_path: Optional[str]) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# eval: one report entry per closed-form operation
# --------------------------------------------------------------------------

_FATES = {
    "survives": LedgerFate.SURVIVES,
    "collapses": LedgerFate.COLLAPSES,
    "rewritten": LedgerFate.REWRITTEN,
}


def evaluation_entries(
    p: ModelParams, exo: ExogenousParams, fate: LedgerFate, t: int, mev: Optional[MevSpec]
) -> List[Dict]:
    upsilon = analytic.resolve_upsilon(p.u, fate)
    mu = analytic.resolve_mu(t, p.u, fate)
    eq = analytic.credit_equilibrium_sustainable(p, upsilon)
    outcome = analytic.scenario_outcome(fate, t, p.u, exo, p)
    exchange = analytic.expected_value_of_exchange(p, upsilon)
    crypto_eval = analytic.theft_evaluation(
        analytic.crypto_theft_benefit(p, upsilon), ("EQ4", "EQ5")
    )
    money_eval = analytic.theft_evaluation(analytic.money_theft_benefit(p), ("EQ12",))
    exo_eval = analytic.theft_evaluation(
        analytic.exogenous_theft_benefit(p, exo, upsilon), ("EQ13",)
    )
    exo_multi_eval = analytic.theft_evaluation(
        analytic.exogenous_theft_benefit(p, exo, mu), ("EQ16",)
    )

    entries = [
        {
            "name": "random_theft_deterred",
            "inputs": {"alpha": p.alpha, "epsilon": p.epsilon, "f": p.f, "n": p.n, "c": p.c},
            "value": p.alpha * p.epsilon * p.f / (p.n - 1),
            "condition": analytic.random_theft_deterred(p),
            "anchor": "EQ1",
        },
        {
            "name": "resolve_upsilon",
            "inputs": {"u": p.u, "fate": fate.value},
            "value": upsilon,
            "condition": None,
            "anchor": "EQ2",
        },
        {
            "name": "crypto_theft_condition",
            "inputs": {"alpha": p.alpha, "upsilon": upsilon, "n": p.n, "c": p.c},
            "value": p.alpha * upsilon / (p.n - 1),
            "condition": analytic.crypto_theft_condition(p, upsilon),
            "anchor": "EQ4",
        },
        {
            "name": "crypto_theft_benefit",
            "inputs": {"alpha": p.alpha, "upsilon": upsilon, "c": p.c},
            "value": crypto_eval.benefit,
            "condition": crypto_eval.attractive,
            "anchor": "EQ5",
        },
        {
            "name": "full_info_sustainable_goods",
            "inputs": {"alpha": p.alpha, "epsilon": p.epsilon, "f": p.f, "c": p.c},
            "value": p.alpha * p.epsilon * p.f - p.c,
            "condition": analytic.full_info_sustainable_goods(p),
            "anchor": "EQ6",
        },
        {
            "name": "full_info_sustainable_crypto",
            "inputs": {"alpha": p.alpha, "u": p.u, "c": p.c},
            "value": p.alpha * p.u - p.c,
            "condition": analytic.full_info_sustainable_crypto(p),
            "anchor": "EQ7",
        },
        {
            "name": "credit_equilibrium_sustainable",
            "inputs": {"upsilon": upsilon},
            "value": {
                "theft_temptation": eq.theft_temptation,
                "surplus": eq.surplus,
                "continuation": eq.continuation,
                "outside_option": eq.outside_option,
                "cond_theft_tempting": eq.cond_theft_tempting,
                "cond_surplus": eq.cond_surplus,
                "cond_dynamic": eq.cond_dynamic,
            },
            "condition": eq.all,
            "anchor": "EQ8-EQ10",
        },
        {
            "name": "expected_value_of_exchange",
            "inputs": {"upsilon": upsilon},
            "value": exchange,
            "condition": exchange > 0,
            "anchor": "EQ11",
        },
        {
            "name": "money_theft_benefit",
            "inputs": {"alpha": p.alpha, "u": p.u, "c": p.c},
            "value": money_eval.benefit,
            "condition": money_eval.attractive,
            "anchor": "EQ12",
        },
        {
            "name": "exogenous_theft_benefit",
            "inputs": {"upsilon": upsilon, "u_e": exo.u_e, "c_e": exo.c_e},
            "value": exo_eval.benefit,
            "condition": exo_eval.attractive,
            "anchor": "EQ13",
        },
        {
            "name": "exogenous_sustainable",
            "inputs": {"upsilon": upsilon, "u_e": exo.u_e, "c_e": exo.c_e},
            "value": p.alpha * (upsilon + exo.u_e) - (p.c + exo.c_e),
            "condition": analytic.exogenous_sustainable(p, exo, upsilon),
            "anchor": "EQ14",
        },
        {
            "name": "resolve_mu",
            "inputs": {"t": t, "u": p.u, "fate": fate.value},
            "value": mu,
            "condition": None,
            "anchor": "EQ15",
        },
        {
            "name": "exogenous_theft_benefit_multi",
            "inputs": {"mu": mu, "u_e": exo.u_e, "c_e": exo.c_e},
            "value": exo_multi_eval.benefit,
            "condition": exo_multi_eval.attractive,
            "anchor": "EQ16",
        },
        {
            "name": "scenario_outcome",
            "inputs": {"fate": fate.value, "t": t, "u": p.u, "u_e": exo.u_e, "c_e": exo.c_e},
            "value": {"mu": outcome.mu, "net": outcome.net, "scenario_id": outcome.scenario_id},
            "condition": outcome.net > 0,
            "anchor": f"SCENARIO{outcome.scenario_id}",
        },
    ]
    if mev is not None:
        entries.append(
            {
                "name": "mev_profitable",
                "inputs": {"extraction": mev.extraction, "gas": mev.gas, "bid": mev.bid},
                "value": mev.extraction - (mev.gas + mev.bid),
                "condition": analytic.mev_profitable(mev.extraction, mev.gas, mev.bid),
                "anchor": "EQ17",
            }
        )
    return entries


# --------------------------------------------------------------------------
# CSV rendering
# --------------------------------------------------------------------------


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def stats_row(config: CycleConfig, stats: SimStats) -> List[str]:
    p = config.params
    values = [
        config.mode.value, p.alpha, p.epsilon, p.f, p.u, p.c, p.s, p.delta, p.n,
        config.collapse_rule.theta, config.collapse_rule.p_r,
        stats.trades, stats.theft_attempts, stats.theft_successes, stats.defections,
        stats.collapse_cycle, stats.mean_robber_payoff, stats.stderr_robber_payoff,
        stats.money_share,
    ]
    return [_csv_cell(v) for v in values]


def render_csv(rows: List[List[str]]) -> str:
    buf = io.StringIO()
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for row in rows:
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


def _stats_payload(stats: SimStats) -> Dict:
    return {
        "trades": stats.trades,
        "theft_attempts": stats.theft_attempts,
        "theft_successes": stats.theft_successes,
        "defections": stats.defections,
        "collapse_cycle": stats.collapse_cycle,
        "mean_robber_payoff": stats.mean_robber_payoff,
        "stderr_robber_payoff": stats.stderr_robber_payoff,
        "money_share": stats.money_share,
    }


# --------------------------------------------------------------------------
# sweeps
# --------------------------------------------------------------------------

_SWEEPABLE_PARAMS = {"alpha", "epsilon", "f", "u", "c", "s", "delta", "n"}
_SWEEPABLE_RULE = {"theta", "p_r"}


def parse_vary(spec: str) -> Tuple[str, List[float]]:
    """Parse name=lo:hi:steps into an inclusive grid of `steps` points."""
    try:
        name, rng = spec.split("=", 1)
        lo_s, hi_s, steps_s = rng.split(":")
        lo, hi, steps = float(lo_s), float(hi_s), int(steps_s)
    except ValueError:
        raise ValidationError("vary", f"expected name=lo:hi:steps, got {spec!r}") from None
    if name not in _SWEEPABLE_PARAMS | _SWEEPABLE_RULE:
        raise ValidationError("vary", f"unknown sweep dimension {name!r}")
    if steps < 1:
        raise ValidationError("vary", "steps >= 1")
    if steps == 1:
        return name, [lo]
    return name, [lo + i * (hi - lo) / (steps - 1) for i in range(steps)]


def _override_config(config: CycleConfig, assignment: Dict[str, float]) -> CycleConfig:
    params_kv = {
        "alpha": config.params.alpha, "epsilon": config.params.epsilon,
        "f": config.params.f, "u": config.params.u, "c": config.params.c,
        "s": config.params.s, "delta": config.params.delta, "n": config.params.n,
    }
    theta, p_r = config.collapse_rule.theta, config.collapse_rule.p_r
    for name, value in assignment.items():
        if name in _SWEEPABLE_PARAMS:
            params_kv[name] = int(round(value)) if name == "n" else value
        elif name == "theta":
            theta = value
        else:
            p_r = value
    try:
        params = ModelParams(**params_kv)
        rule = CollapseRule(theta, p_r)
    except ValueError as exc:
        key, _, constraint = str(exc).partition(": ")
        raise ValidationError(key, constraint or "invalid sweep value") from None
    return CycleConfig(
        params=params,
        exo=config.exo,
        mode=config.mode,
        cycles=config.cycles,
        trials=config.trials,
        seed=config.seed,
        collapse_rule=rule,
        p_part=config.p_part,
        money_supply=config.money_supply,
        n_important=config.n_important,
        initial_balance=config.initial_balance,
    )


def sweep_rows(config: CycleConfig, varies: List[Tuple[str, List[float]]]) -> List[List[str]]:
    grids: List[Dict[str, float]] = [{}]
    for name, values in varies:
        grids = [dict(g, **{name: v}) for g in grids for v in values]
    rows = []
    for assignment in grids:
        point = _override_config(config, assignment)
        rows.append(stats_row(point, run_simulation(point)))
    return rows


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def _cmd_classify(args) -> int:
    try:
        security = _LOCI[args.security]
        trust = _LOCI[args.trust]
    except KeyError as exc:
        raise ValidationError("classify", f"bad locus {exc}") from None
    quadrant = classify(security, trust)
    if args.host is not None:
        kind = _HOSTS[args.host]
        if trust is not trust_locus_for(kind):
            raise ValidationError(
                "trust", f"trust must be {trust_locus_for(kind).value} on a {args.host} host"
            )
    results = {
        "quadrant": quadrant.position,
        "exemplar": quadrant.exemplar,
        "attack_effect": quadrant.attack_effect,
    }
    config = {
        "security": args.security,
        "trust": args.trust,
        "backing": args.backing,
        "host": args.host,
    }
    report = build_report("classify", config, results, seed=None)
    _write_output(render_report(report), args.out)
    return 0


def _cmd_eval(args) -> int:
    scenario = parse_scenario(args.params)
    config = scenario.config
    fate = _FATES[args.upsilon_fate]
    exo = scenario.effective_exo()
    if args.exo is not None:
        try:
            u_e_s, c_e_s = args.exo.split(",")
            exo = ExogenousParams(float(u_e_s), float(c_e_s))
        except ValueError as exc:
            raise ValidationError("exo", f"expected u_e,c_e: {exc}") from None
    entries = evaluation_entries(config.params, exo, fate, scenario.attack.t, scenario.mev)
    echo = dict(scenario.echo(), upsilon_fate=fate.value,
                effective_exo={"u_e": exo.u_e, "c_e": exo.c_e})
    report = build_report("eval", echo, entries, seed=config.seed)
    _write_output(render_report(report), args.out)
    return 0


def _cmd_simulate(args) -> int:
    scenario = parse_scenario(args.config)
    config = scenario.config
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    stats = run_simulation(config)
    if args.format == "csv":
        text = render_csv([stats_row(config, stats)])
    else:
        echo = dict(scenario.echo(), seed=config.seed)
        report = build_report("simulate", echo, _stats_payload(stats), seed=config.seed)
        text = render_report(report)
    _write_output(text, args.out)
    return 0


def _cmd_sweep(args) -> int:
    scenario = parse_scenario(args.config)
    config = scenario.config
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    varies = [parse_vary(spec) for spec in args.vary]
    text = render_csv(sweep_rows(config, varies))
    _write_output(text, args.out)
    return 0


def _cmd_mev(args) -> int:
    try:
        x_s, y_s = args.pool.split(",")
        pool = PoolState(float(x_s), float(y_s))
    except (ValueError, LedgerError) as exc:
        raise ValidationError("pool", f"expected X,Y with positive reserves: {exc}") from None
    try:
        amount_s, min_out_s = args.victim.split(",")
        victim = SwapOrder(trader="victim", amount_in=float(amount_s), min_out=float(min_out_s))
    except ValueError as exc:
        raise ValidationError("victim", f"expected amount,min_out: {exc}") from None
    if args.frontrun < 0 or args.gas < 0 or args.bid < 0:
        raise ValidationError("mev", "frontrun, gas, bid must be nonnegative")
    result = sandwich_attack(pool, victim, args.frontrun, args.gas, args.bid)
    config = {
        "pool": {"x": pool.reserve_x, "y": pool.reserve_y},
        "victim": {"amount_in": victim.amount_in, "min_out": victim.min_out},
        "frontrun": args.frontrun,
        "gas": args.gas,
        "bid": args.bid,
    }
    results = {
        "status": result.status.value,
        "attacker_profit": result.attacker_profit,
        "victim_received": result.victim_received,
    }
    report = build_report("mev", config, results, seed=None)
    _write_output(render_report(report), args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tokenlab")
    sub = parser.add_subparsers(dest="command")

    p_classify = sub.add_parser("classify", help="classify a token's quadrant")
    p_classify.add_argument("--security", required=True, choices=["endo", "exo"])
    p_classify.add_argument("--trust", required=True, choices=["endo", "exo"])
    p_classify.add_argument("--backing", choices=["object", "claim"])
    p_classify.add_argument("--host", choices=["public", "private"])
    p_classify.add_argument("--out")
    p_classify.set_defaults(func=_cmd_classify)

    p_eval = sub.add_parser("eval", help="closed-form evaluation report")
    p_eval.add_argument("--params", required=True, help="scenario file")
    p_eval.add_argument(
        "--upsilon-fate", default="survives", choices=sorted(_FATES),
        dest="upsilon_fate",
    )
    p_eval.add_argument("--exo", help="override as u_e,c_e")
    p_eval.add_argument("--out")
    p_eval.set_defaults(func=_cmd_eval)

    p_sim = sub.add_parser("simulate", help="run the agent simulation")
    p_sim.add_argument("--config", required=True)
    p_sim.add_argument("--seed", type=int)
    p_sim.add_argument("--out")
    p_sim.add_argument("--format", default="json", choices=["csv", "json"])
    p_sim.set_defaults(func=_cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="grid sweep, one CSV row per point")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--vary", action="append", required=True,
                         help="name=lo:hi:steps (repeatable)")
    p_sweep.add_argument("--seed", type=int)
    p_sweep.add_argument("--out")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_mev = sub.add_parser("mev", help="sandwich-attack a victim order")
    p_mev.add_argument("--pool", required=True, help="X,Y reserves")
    p_mev.add_argument("--victim", required=True, help="amount,min_out")
    p_mev.add_argument("--frontrun", type=float, required=True)
    p_mev.add_argument("--gas", type=float, default=0.0)
    p_mev.add_argument("--bid", type=float, default=0.0)
    p_mev.add_argument("--out")
    p_mev.set_defaults(func=_cmd_mev)
    return parser


COMMANDS = {"classify", "eval", "simulate", "sweep", "mev"}


def dispatch(argv: Sequence[str]) -> int:
    """Run one command; returns the process exit status instead of exiting."""
    parser = _build_parser()
    try:
        if not argv or (not argv[0].startswith("-") and argv[0] not in COMMANDS):
            raise UnknownCommand(argv[0] if argv else "(no command)")
        try:
            args = parser.parse_args(list(argv))
        except SystemExit as exc:
            if exc.code == 0:  # --help
                return 0
            raise ValidationError("argv", f"invalid arguments: {' '.join(argv)}") from None
        if args.command is None:
            raise UnknownCommand("(no command)")
        return args.func(args)
    except (ValidationError, ParseError, UnknownCommand) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (LedgerError, ValueError, OSError, RuntimeError) as exc:
        print(f"fault: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()

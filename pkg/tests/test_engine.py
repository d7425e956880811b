"""Simulator tests: policies, mode mechanics, determinism, oracle agreement."""

import random

import pytest

from tokenlab.analytic import ModelParams, credit_equilibrium_sustainable
from tokenlab.engine import (
    AgentState,
    CollapseRule,
    ConsumerChoice,
    CycleConfig,
    Mode,
    RobberView,
    SupplierAction,
    consumer_policy,
    estimate_theft_benefit,
    mode_upsilon_hat,
    robber_policy,
    run_simulation,
    run_trial,
    substream_seed,
    supplier_policy,
)


def make_params(**over):
    base = dict(alpha=0.5, epsilon=0.5, f=1.0, u=1.0, c=0.1, s=0.05, delta=0.9, n=10)
    base.update(over)
    return ModelParams(**base)


def make_config(**over):
    kwargs = dict(params=make_params(), cycles=40, trials=5, seed=13)
    params_over = {
        k: over.pop(k) for k in list(over) if k in
        ("alpha", "epsilon", "f", "u", "c", "s", "delta", "n")
    }
    if params_over:
        kwargs["params"] = make_params(**params_over)
    kwargs.update(over)
    return CycleConfig(**kwargs)


# -- policies ------------------------------------------------------------------


def test_consumer_prefers_money_when_theft_risk_positive():
    agent = AgentState(0, money=1)
    choice = consumer_policy(Mode.MONEY_OR_FULL_INFO_33, agent, make_params(alpha=0.3, f=1.0))
    assert choice is ConsumerChoice.USE_MONEY


def test_consumer_tie_goes_to_money_then_credit():
    params = make_params(alpha=0.0)
    with_money = AgentState(0, money=1)
    without = AgentState(1, money=0)
    assert consumer_policy(Mode.MONEY_OR_FULL_INFO_33, with_money, params) is ConsumerChoice.USE_MONEY
    assert consumer_policy(Mode.MONEY_OR_FULL_INFO_33, without, params) is ConsumerChoice.USE_CREDIT


def test_consumer_abstains_when_surplus_negative():
    params = make_params(u=0.4, s=0.5)
    agent = AgentState(0, money=1)
    assert consumer_policy(Mode.MONEY_OR_FULL_INFO_33, agent, params) is ConsumerChoice.ABSTAIN


def test_consumer_needs_tokens_on_ledger_mode():
    params = make_params(alpha=0.1)
    broke = AgentState(0, tokens=0)
    funded = AgentState(1, tokens=2)
    assert consumer_policy(Mode.CRYPTO_LEDGER, broke, params) is ConsumerChoice.ABSTAIN
    assert consumer_policy(Mode.CRYPTO_LEDGER, funded, params) is ConsumerChoice.USE_CREDIT


def test_supplier_supplies_for_free():
    assert supplier_policy(Mode.FULL_INFO_23, AgentState(0), make_params(s=0.0)) is SupplierAction.SUPPLY


def test_supplier_follows_equilibrium_condition():
    good = make_params(alpha=0.2, c=0.1, s=0.05)
    bad = make_params(alpha=0.2, c=0.1, s=0.5)
    ups = mode_upsilon_hat(Mode.FULL_INFO_23, good, CollapseRule())
    assert credit_equilibrium_sustainable(good, ups).cond_dynamic
    assert supplier_policy(Mode.FULL_INFO_23, AgentState(0), good, ups) is SupplierAction.SUPPLY
    ups_bad = mode_upsilon_hat(Mode.FULL_INFO_23, bad, CollapseRule())
    assert not credit_equilibrium_sustainable(bad, ups_bad).cond_dynamic
    assert supplier_policy(Mode.FULL_INFO_23, AgentState(0), bad, ups_bad) is SupplierAction.DEFECT


def oblivious_view(candidates):
    return RobberView(
        candidates=tuple(candidates), holdings={}, important=frozenset(),
        stolen=0, supply=0, rule=CollapseRule(),
    )


def test_robber_deterred_parameters_never_attack():
    # 0.5*0.5*1/10 = 0.025 < c = 0.05
    params = make_params(alpha=0.5, epsilon=0.5, f=1.0, n=11, c=0.05)
    rng = random.Random(1)
    for _ in range(200):
        assert robber_policy(Mode.MONEY_SEMIANON_31, params, oblivious_view(range(1, 11)), rng) is None


def test_robber_two_agent_money_mode_targets_the_other():
    params = make_params(alpha=1.0, epsilon=0.5, f=1.0, n=2, c=0.1)
    rng = random.Random(2)
    assert robber_policy(Mode.MONEY_SEMIANON_31, params, oblivious_view([1]), rng) == 1


def test_robber_targets_maximal_balance_holder_on_ledger():
    params = make_params(alpha=1.0, u=1.0, c=0.1)
    view = RobberView(
        candidates=(1, 2, 3), holdings={1: 2, 2: 7, 3: 0}, important=frozenset(),
        stolen=0, supply=12, rule=CollapseRule(theta=1.0),
    )
    rng = random.Random(3)
    assert robber_policy(Mode.CRYPTO_LEDGER, params, view, rng) == 2


def test_robber_avoids_important_account_when_rewrite_certain():
    params = make_params(alpha=1.0, u=1.0, c=0.1)
    view = RobberView(
        candidates=(1, 2), holdings={1: 9, 2: 1}, important=frozenset({1}),
        stolen=0, supply=12, rule=CollapseRule(theta=1.0, p_r=1.0),
    )
    rng = random.Random(4)
    # the whale is protected by certain rewrite; the small fish is worth more
    assert robber_policy(Mode.CRYPTO_LEDGER, params, view, rng) == 2


def test_robber_ties_at_zero_do_not_attack():
    params = make_params(alpha=1.0, u=1.0, c=1.0)  # alpha*u - c == 0
    view = RobberView(
        candidates=(1,), holdings={1: 1}, important=frozenset(),
        stolen=0, supply=2, rule=CollapseRule(),
    )
    assert robber_policy(Mode.CRYPTO_LEDGER, params, view, random.Random(5)) is None


# -- determinism -----------------------------------------------------------------


def test_identical_seeds_reproduce_stats_exactly():
    config = make_config(mode=Mode.CRYPTO_LEDGER, trials=8, cycles=30)
    assert run_simulation(config) == run_simulation(config)


def test_different_trials_use_independent_substreams():
    assert substream_seed(7, 0) != substream_seed(7, 1)
    assert substream_seed(7, 0) != substream_seed(8, 0)
    config = make_config(trials=1)
    a = run_trial(config, 0)
    b = run_trial(config, 1)
    assert a.records != b.records


# -- mode mechanics -----------------------------------------------------------------


def test_zero_alpha_means_zero_successes():
    for mode in (Mode.FULL_INFO_23, Mode.MONEY_SEMIANON_31, Mode.CRYPTO_LEDGER):
        stats = run_simulation(make_config(alpha=0.0, c=-0.05, mode=mode, trials=4))
        assert stats.theft_successes == 0


def test_deterred_trajectories_record_no_attempts():
    # oblivious: 0.025 < c; informed goods: alpha*eps*f - c = 0.25 - 0.3 < 0
    oblivious = make_config(alpha=0.5, epsilon=0.5, f=1.0, n=11, c=0.05,
                            mode=Mode.MONEY_SEMIANON_31, trials=6)
    informed = make_config(alpha=0.5, epsilon=0.5, f=1.0, c=0.3,
                           mode=Mode.FULL_INFO_23, trials=6)
    crypto = make_config(alpha=0.5, u=1.0, c=0.6, mode=Mode.CRYPTO_LEDGER, trials=6)
    for config in (oblivious, informed, crypto):
        assert run_simulation(config).theft_attempts == 0


def test_money_conservation_and_anonymity():
    config = make_config(mode=Mode.MONEY_SEMIANON_31, money_supply=4, trials=6, cycles=25)
    for trial_index in range(config.trials):
        trial = run_trial(config, trial_index)
        for record in trial.records:
            assert all(m in (0, 1) for m in record.money_vector)
            assert sum(record.money_vector) == 4
        assert all(not agent.revealed for agent in trial.agents)
        if trial.trades:
            assert trial.money_trades == trial.trades  # money_share == 1


def test_autarky_absorbs_defectors():
    config = make_config(alpha=0.2, c=0.1, s=0.5, mode=Mode.FULL_INFO_23,
                         trials=10, cycles=50)
    ups = mode_upsilon_hat(Mode.FULL_INFO_23, config.params, config.collapse_rule)
    assert not credit_equilibrium_sustainable(config.params, ups).cond_dynamic
    for trial_index in range(config.trials):
        trial = run_trial(config, trial_index)
        assert trial.defections >= 1
        assert trial.credit_trades == 0  # every would-be trade is a defection
        assert any(agent.autarkic for agent in trial.agents)


def test_collapse_on_theta_zero_terminates_trial():
    config = make_config(alpha=1.0, u=0.1, s=1.0, c=-0.1, mode=Mode.CRYPTO_LEDGER,
                         collapse_rule=CollapseRule(theta=0.0), trials=3, cycles=30)
    for trial_index in range(config.trials):
        trial = run_trial(config, trial_index)
        assert trial.theft_successes >= 1
        assert trial.collapse_cycle is not None
        assert trial.records[-1].cycle == trial.collapse_cycle
        assert trial.ledger.collapsed
        # collapsed holdings are worthless: every attempt nets only -c
        assert all(p == pytest.approx(0.1) for p in trial.attempt_payoffs)


def test_certain_rewrite_restores_important_balances_same_cycle():
    config = make_config(alpha=1.0, u=0.1, s=1.0, c=-0.1, mode=Mode.CRYPTO_LEDGER,
                         collapse_rule=CollapseRule(theta=1.0, p_r=1.0),
                         n_important=10, initial_balance=2, trials=3, cycles=20)
    for trial_index in range(config.trials):
        trial = run_trial(config, trial_index)
        assert trial.theft_successes >= 1
        assert trial.collapse_cycle is None
        balances = trial.ledger.visible_balances()
        assert all(balance == 2 for balance in balances.values())
        assert all(p == pytest.approx(0.1) for p in trial.attempt_payoffs)
        assert any(r.rewritten for r in trial.records)


def test_ledger_conservation_through_simulation():
    config = make_config(mode=Mode.CRYPTO_LEDGER, alpha=0.8, c=0.05, s=0.0,
                         initial_balance=2, trials=4, cycles=60)
    for trial_index in range(config.trials):
        trial = run_trial(config, trial_index)
        assert trial.ledger.sum_balances == trial.ledger.total_supply


def test_targeting_advantage_of_informed_robbery():
    shared = dict(alpha=0.8, epsilon=0.5, f=1.0, u=1.0, c=0.01, s=0.0, n=6)
    crypto = run_simulation(make_config(mode=Mode.CRYPTO_LEDGER, trials=60, cycles=40, **shared))
    money = run_simulation(
        make_config(mode=Mode.MONEY_SEMIANON_31, trials=60, cycles=40, **shared)
    )
    assert crypto.theft_attempts > 0 and money.theft_attempts > 0
    informed_rate = crypto.theft_successes / crypto.theft_attempts
    random_rate = money.theft_successes / money.theft_attempts
    assert informed_rate >= random_rate


def test_mode33_robber_only_sees_credit_buyers():
    # credit value u - s - alpha*f < 0, so non-holders abstain and every
    # trade is anonymous money; the informed robber then has no revealed
    # target even though alpha*eps*f - c is well above zero
    config = make_config(mode=Mode.MONEY_OR_FULL_INFO_33, money_supply=9,
                         alpha=0.96, epsilon=0.5, f=1.0, u=1.0, s=0.05,
                         c=0.01, n=10, trials=6, cycles=30)
    stats = run_simulation(config)
    assert stats.trades > 0
    assert stats.money_share == 1.0
    assert stats.theft_attempts == 0
    # relaxing theft risk makes credit viable again: revealed buyers appear
    # and the robber attacks them
    relaxed = make_config(mode=Mode.MONEY_OR_FULL_INFO_33, money_supply=9,
                          alpha=0.3, epsilon=0.5, f=1.0, u=1.0, s=0.05,
                          c=0.01, n=10, trials=6, cycles=30)
    relaxed_stats = run_simulation(relaxed)
    assert 0.0 < relaxed_stats.money_share < 1.0
    assert relaxed_stats.theft_attempts > 0


# -- oracle agreement -----------------------------------------------------------------


def test_estimate_matches_instantaneous_benefit():
    config = make_config(alpha=0.2, u=1.0, c=0.1, trials=100_000, seed=42)
    est = estimate_theft_benefit(config, upsilon=1.0)
    assert est.stderr > 0
    assert abs(est.mean - 0.1) <= 3 * est.stderr


def test_simulated_ledger_payoffs_match_closed_form():
    config = make_config(mode=Mode.CRYPTO_LEDGER, alpha=0.6, u=1.0, c=0.1, s=0.0,
                         trials=300, cycles=30, seed=9)
    stats = run_simulation(config)
    assert stats.theft_attempts > 1000
    target = 0.6 * 1.0 - 0.1
    assert abs(stats.mean_robber_payoff - target) <= 4 * stats.stderr_robber_payoff


def test_goods_mode_payoffs_match_capture_value():
    config = make_config(mode=Mode.FULL_INFO_23, alpha=0.5, epsilon=0.5, f=1.0,
                         c=0.1, s=0.0, trials=300, cycles=30, seed=10)
    stats = run_simulation(config)
    assert stats.theft_attempts > 1000
    # per-attempt payoff mixes hits (eps*f - c) and misses (-c): mean is
    # alpha_hit*eps*f - c with alpha_hit = alpha * P(victim holds a good) <= alpha
    assert stats.mean_robber_payoff <= 0.5 * 0.5 * 1.0 - 0.1 + 3 * stats.stderr_robber_payoff


def test_config_validation():
    with pytest.raises(ValueError):
        make_config(trials=0)
    with pytest.raises(ValueError):
        make_config(p_part=0.0)
    with pytest.raises(ValueError):
        make_config(money_supply=10)  # must stay below n
    with pytest.raises(ValueError):
        CollapseRule(theta=1.5)

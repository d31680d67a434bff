"""Tick planning: rate credit, sampling priority, greedy drain."""

import math

import pytest

import itsense as it
from itsense.errors import InputError


def _state(charge_uj, capacity_uj=500.0):
    return it.EnergyState(charge_j=charge_uj * 1e-6, capacity_j=capacity_uj * 1e-6,
                          harvest_power_w=0.0)


def test_plan_matches_arithmetic_oracle(table_costs):
    # 500 uJ, sampling reserved first, remainder over the 172 uJ service unit
    sched = it.TickScheduler()
    plan = sched.plan_tick(0, 0.6, _state(500.0), table_costs, queue_len=5)
    assert plan.take_sample  # first due tick is tick 0
    oracle = math.floor((500e-6 - table_costs.e_sample_j) / table_costs.e_service_j)
    assert oracle == 2
    assert plan.n_dequeues == oracle


def test_no_queue_and_no_sample_means_no_service(table_costs):
    sched = it.TickScheduler()
    sched.plan_tick(0, 0.4, _state(500.0), table_costs, queue_len=0)
    plan = sched.plan_tick(1, 0.4, _state(500.0), table_costs, queue_len=0)
    assert not plan.take_sample  # credit 0.8 < 1
    assert plan.n_dequeues == 0  # nothing to serve, charge irrelevant


def test_no_charge_means_no_service(table_costs):
    sched = it.TickScheduler()
    sched.plan_tick(0, 0.4, _state(500.0), table_costs, queue_len=0)
    plan = sched.plan_tick(1, 0.4, _state(0.0), table_costs, queue_len=9)
    assert not plan.take_sample
    assert plan.n_dequeues == 0


def test_fresh_sample_is_servable_same_tick(table_costs):
    sched = it.TickScheduler()
    plan = sched.plan_tick(0, 1.0, _state(500.0), table_costs, queue_len=0)
    assert plan.take_sample
    assert plan.n_dequeues == 1  # the tick's own sample


def test_work_conservation(table_costs):
    # charge for one service and queued work: at least one dequeue planned
    sched = it.TickScheduler()
    sched.plan_tick(0, 0.4, _state(500.0), table_costs, queue_len=0)
    plan = sched.plan_tick(1, 0.4, _state(180.0), table_costs, queue_len=3)
    assert not plan.take_sample
    assert plan.n_dequeues >= 1


def test_planned_service_never_exceeds_charge(table_costs):
    sched = it.TickScheduler()
    for tick, charge in enumerate([0.0, 10.0, 42.0, 100.0, 214.0, 500.0]):
        state = _state(charge)
        plan = sched.plan_tick(tick, 0.7, state, table_costs, queue_len=50)
        spend = plan.n_dequeues * table_costs.e_service_j
        if plan.take_sample and state.charge_j >= table_costs.e_sample_j:
            spend += table_costs.e_sample_j
        assert spend <= state.charge_j + 1e-18


def test_credit_accumulator_matches_uniform_density(table_costs):
    for rate in (0.25, 0.5, 0.6, 0.9, 1.0):
        sched = it.TickScheduler()
        state = _state(500.0)
        taken = sum(
            sched.plan_tick(t, rate, state, table_costs, 0).take_sample
            for t in range(1000))
        expected = sum(it.uniform_decide(t, rate) for t in range(1000))
        assert abs(taken - expected) <= 1


def test_first_tick_samples_like_uniform_decide(table_costs):
    for rate in (0.1, 0.5, 1.0):
        sched = it.TickScheduler()
        plan = sched.plan_tick(0, rate, _state(500.0), table_costs, 0)
        assert plan.take_sample == it.uniform_decide(0, rate)


def test_time_varying_rate_tracks_mean(table_costs):
    sched = it.TickScheduler()
    state = _state(500.0)
    rates = [0.2 if t < 500 else 0.8 for t in range(1000)]
    taken = sum(
        sched.plan_tick(t, r, state, table_costs, 0).take_sample
        for t, r in enumerate(rates))
    assert abs(taken - 500) <= 1


def test_max_dequeues_cap(table_costs):
    sched = it.TickScheduler(max_dequeues_per_tick=1)
    plan = sched.plan_tick(0, 0.5, _state(500.0), table_costs, queue_len=10)
    assert plan.n_dequeues <= 1


def test_plan_validation(table_costs):
    sched = it.TickScheduler()
    with pytest.raises(InputError):
        sched.plan_tick(0, 0.0, _state(1.0), table_costs, 0)
    with pytest.raises(InputError):
        it.TickScheduler(max_dequeues_per_tick=-1)

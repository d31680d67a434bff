"""Per-run discrete-time loop binding supply, policy, queue, limiter, and
scheduler into the four runtime configurations.

Modes:
  ei            uniform sampling at the budget fraction, capacitor buffer,
                immediate per-sample service
  seb           adaptive sampling backed by a whole-run energy buffer
  seasons_nolg  adaptive sampling, capacitor buffer, time buffering,
                expired samples dropped, no rate limiter
  seasons       seasons_nolg plus the critical-count rate limiter

Tick order: harvest; expire; observe and decide the safe rate; plan; execute
(sampling before service; service may include the tick's own sample);
bookkeeping.  A failed sample draw is a power failure and that opportunity is
lost; failed service simply waits in the queue.  A run is a pure function of
its config: identical configs give identical metrics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

from . import evaluation
from .controller import ControllerState, make_controller
from .controller import safe_rate as controller_safe_rate
from .energy import (DEFAULT_CAPACITOR_J, EnergyState, TaskCosts, budget_to_power,
                     default_costs, harvest_with_loss, try_consume)
from .errors import ConfigError, QueueOverflowError
from .policies import AsaWrapper, LinearAsa, PolicyConfig, UniformPolicy
from .queueing import Sample, SampleQueue
from .scheduler import TickScheduler
from .signals import GroundTruth

MODES = ("ei", "seb", "seasons_nolg", "seasons")


@dataclass
class RunConfig:
    """Everything one run needs; metrics are a pure function of this.

    f_max and harvest power default to the signal's native rate and the
    budget-derived supply.  The policy's target rate defaults to the budget
    fraction, which keeps the adaptive modes on the uniform baseline's energy
    budget.  seed is recorded for provenance (the loop itself has no
    randomness; seeds matter to whoever generated the signal).
    """

    mode: str
    ground_truth: GroundTruth
    budget_rate: float
    latency_s: float
    costs: TaskCosts = field(default_factory=default_costs)
    capacitor_j: float = DEFAULT_CAPACITOR_J
    f_max_hz: float | None = None
    harvest_power_w: float | None = None
    policy: PolicyConfig | None = None
    window_s: float = 1.0
    queue_capacity: int | None = None
    max_dequeues_per_tick: int | None = None
    release_fraction: float = 0.8
    seed: int = 0


class TraceRow(NamedTuple):
    tick: int
    charge_j: float
    queue_len: int
    safe_rate: float
    took_sample: bool
    n_dequeued: int
    n_expired: int
    power_failure: bool


@dataclass
class RunMetrics:
    """Per-run outcome.  The accounting identity
    taken = sent + expired + overflowed + residual holds at every tick."""

    mae: float
    samples_taken: int
    samples_sent: int
    samples_expired: int
    samples_overflowed: int
    power_failures: int
    queue_residual: int
    energy_harvested_j: float
    energy_consumed_j: float
    energy_clamped_j: float
    initial_charge_j: float
    final_charge_j: float
    per_window_energy_j: list[float]
    per_window_min_queue: list[int]
    received_log: list[tuple[int, float]]
    empty_log: bool


def _build_policy(config: RunConfig) -> AsaWrapper:
    if config.mode == "ei":
        return AsaWrapper(UniformPolicy(config.budget_rate))
    policy_cfg = config.policy if config.policy is not None else PolicyConfig()
    if policy_cfg.target_rate is None:
        policy_cfg = replace(policy_cfg, target_rate=config.budget_rate)
    return AsaWrapper(LinearAsa(policy_cfg))


def run(config: RunConfig, trace: list[TraceRow] | None = None,
        check_invariants: bool = False) -> RunMetrics:
    """Simulate one run tick by tick and evaluate the received stream."""
    if config.mode not in MODES:
        raise ConfigError(f"unknown mode {config.mode!r}; expected one of {MODES}")
    if not 0.0 < config.budget_rate <= 1.0:
        raise ConfigError("budget_rate must lie in (0, 1]")
    if config.latency_s <= 0:
        raise ConfigError("latency must be positive")

    gt = config.ground_truth
    values = gt.values
    n_ticks = len(values)
    tick_period = gt.tick_period
    f_max = config.f_max_hz if config.f_max_hz is not None else gt.f_max_hz
    costs = config.costs
    power = (config.harvest_power_w if config.harvest_power_w is not None
             else budget_to_power(config.budget_rate, costs, f_max))
    latency_ticks = max(1, math.floor(config.latency_s * f_max + 1e-9))

    # seb's buffer holds the whole run's budget, so burstiness never fails it.
    if config.mode == "seb":
        capacity = max(config.capacitor_j, power * n_ticks * tick_period)
    else:
        capacity = config.capacitor_j
    state = EnergyState(charge_j=capacity, capacity_j=capacity, harvest_power_w=power)
    initial_charge = state.charge_j

    expiry_enabled = config.mode != "seb"
    wrapper = _build_policy(config)
    limiter: ControllerState | None = None
    if config.mode == "seasons":
        limiter = make_controller(power, costs, config.budget_rate, f_max,
                                  config.latency_s, config.release_fraction)

    queue = SampleQueue(tick_period, history_s=config.window_s,
                        capacity=config.queue_capacity)
    scheduler = TickScheduler(config.max_dequeues_per_tick)
    e_sample = costs.e_sample_j
    e_service = costs.e_service_j

    taken = sent = expired = overflowed = power_failures = 0
    harvested = consumed = clamped = 0.0
    received: list[tuple[int, float]] = []
    pending_observation: float | None = None

    window_ticks = max(1, round(config.window_s * f_max))
    per_window_energy: list[float] = []
    per_window_min_queue: list[int] = []
    window_energy = 0.0
    window_min_queue = n_ticks + 1

    for tick in range(n_ticks):
        state, lost = harvest_with_loss(state, tick_period)
        harvested += power * tick_period
        clamped += lost

        expired_now = queue.drop_expired(tick) if expiry_enabled else 0
        expired += expired_now

        if pending_observation is not None:
            wrapper.observe(pending_observation)
            pending_observation = None

        requested = wrapper.current_rate()
        if limiter is not None:
            rate = controller_safe_rate(requested, len(queue), limiter, f_max)
        else:
            rate = requested

        plan = scheduler.plan_tick(tick, rate, state, costs, len(queue))

        tick_energy = 0.0
        sampled = False
        failed = False
        if plan.take_sample:
            state, ok = try_consume(state, e_sample)
            if ok:
                tick_energy += e_sample
                taken += 1
                sampled = True
                value = float(values[tick])
                pending_observation = value
                try:
                    queue.enqueue(Sample(tick, value, tick + latency_ticks))
                except QueueOverflowError:
                    overflowed += 1
            else:
                failed = True
                power_failures += 1

        dequeued = 0
        for _ in range(plan.n_dequeues):
            if len(queue) == 0:
                break
            state, ok = try_consume(state, e_service)
            if not ok:
                break
            sample = queue.dequeue_oldest(tick)
            received.append((sample.tick, sample.value))
            sent += 1
            dequeued += 1
            tick_energy += e_service
        consumed += tick_energy

        queue.record_tick()
        window_energy += tick_energy
        window_min_queue = min(window_min_queue, len(queue))
        if (tick + 1) % window_ticks == 0:
            per_window_energy.append(window_energy)
            per_window_min_queue.append(window_min_queue)
            window_energy = 0.0
            window_min_queue = n_ticks + 1

        if trace is not None:
            trace.append(TraceRow(tick, state.charge_j, len(queue), rate,
                                  sampled, dequeued, expired_now, failed))
        if check_invariants:
            assert taken == sent + expired + overflowed + len(queue), \
                f"accounting identity broken at tick {tick}"
            assert 0.0 <= state.charge_j <= state.capacity_j, \
                f"charge out of bounds at tick {tick}"

    recon = evaluation.reconstruct(received, n_ticks)
    return RunMetrics(
        mae=evaluation.mae(recon, values),
        samples_taken=taken,
        samples_sent=sent,
        samples_expired=expired,
        samples_overflowed=overflowed,
        power_failures=power_failures,
        queue_residual=len(queue),
        energy_harvested_j=harvested,
        energy_consumed_j=consumed,
        energy_clamped_j=clamped,
        initial_charge_j=initial_charge,
        final_charge_j=state.charge_j,
        per_window_energy_j=per_window_energy,
        per_window_min_queue=per_window_min_queue,
        received_log=received,
        empty_log=not received,
    )


def compare_modes(base: RunConfig, modes=MODES) -> dict[str, RunMetrics]:
    """Run several modes against identical signal, budget, and costs."""
    return {mode: run(replace(base, mode=mode)) for mode in modes}

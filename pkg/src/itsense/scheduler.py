"""Tick planning: spend the sampling share first, drain the queue with the rest.

Sampling decisions come from a rate-credit accumulator (add the safe rate each
tick, sample when the credit reaches one), which follows time-varying rates
smoothly and reduces to the even uniform pattern when the rate is constant.
Whatever charge sampling does not need is handed to queue service in the same
tick, so quiet phases fast-track buffered samples instead of letting the
capacity clamp waste the surplus.  Sampling has strict priority: a skipped
sample opportunity is gone, while service can wait.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .energy import EnergyState, TaskCosts
from .errors import InputError


@dataclass(frozen=True)
class TickPlan:
    take_sample: bool
    n_dequeues: int  # bounded by queue length plus this tick's own sample


class TickScheduler:
    def __init__(self, max_dequeues_per_tick: int | None = None):
        if max_dequeues_per_tick is not None and max_dequeues_per_tick < 0:
            raise InputError("max_dequeues_per_tick cannot be negative")
        self._max_dequeues = max_dequeues_per_tick
        self._credit: float | None = None

    def plan_tick(self, tick: int, safe_rate: float, energy: EnergyState,
                  costs: TaskCosts, queue_len: int) -> TickPlan:
        """Decide this tick's sampling and service load.

        The dequeue count covers queued samples plus the sample taken this
        tick, so a fully funded pipeline services readings the instant they
        arrive.  Dequeues never plan past the charge left after the sample's
        reservation; an unaffordable sample itself is still planned and
        surfaces as a power failure when executed.
        """
        if not 0.0 < safe_rate <= 1.0:
            raise InputError("safe rate must lie in (0, 1]")
        if self._credit is None:
            self._credit = 1.0 - safe_rate  # first due tick is tick 0
        self._credit += safe_rate
        take_sample = self._credit >= 1.0
        if take_sample:
            self._credit -= 1.0

        servable = queue_len + (1 if take_sample else 0)
        budget_j = energy.charge_j - (costs.e_sample_j if take_sample else 0.0)
        affordable = math.floor(budget_j / costs.e_service_j) if budget_j > 0 else 0
        n_dequeues = min(servable, affordable)
        if self._max_dequeues is not None:
            n_dequeues = min(n_dequeues, self._max_dequeues)
        return TickPlan(take_sample, max(0, n_dequeues))

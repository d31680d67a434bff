"""Critical-count rate limiting.

A FIFO of length q drains in q/d seconds at sustainable dequeue rate d, so
holding q at or below floor(d * latency) keeps the head sample inside its
deadline.  Once the queue reaches that critical count, the requested sampling
rate is capped at the dequeue-matched uniform rate d / f_max: the queue stops
growing, samples keep arriving at a predictable rate, and a policy requesting
less than the cap drains the queue.  The cap is released when the queue falls
below a hysteresis fraction of the critical count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .energy import TaskCosts
from .errors import ConfigError, InputError

DEFAULT_RELEASE_FRACTION = 0.8

# The latch engages this many samples before the critical count.  The fluid
# drain bound q/d <= latency holds with equality at q = critical, but tick
# granularity (integer services, the rate-credit's +-1 sample, the one
# unclamped tick while the queue crosses the threshold) costs up to about two
# services of phase debt, which a standing queue at exactly the critical
# count cannot absorb when d * latency has a small fractional part.
LATCH_ENTRY_MARGIN = 2


@dataclass
class ControllerState:
    critical_count: int
    dequeue_rate_sustainable: float  # samples per second
    release_fraction: float = DEFAULT_RELEASE_FRACTION
    in_critical: bool = False


def sustainable_dequeue_rate(harvest_power_w: float, costs: TaskCosts,
                             budget_rate: float, f_max_hz: float) -> float:
    """Samples per second the supply can service while sampling at the budget rate."""
    if harvest_power_w <= 0 or budget_rate <= 0 or f_max_hz <= 0:
        raise InputError("harvest power, budget rate, and f_max must be positive")
    sampling_draw_w = budget_rate * f_max_hz * costs.e_sample_j
    if harvest_power_w < sampling_draw_w:
        raise ConfigError("harvest power cannot sustain sampling at the budget rate")
    rate = (harvest_power_w - sampling_draw_w) / costs.e_service_j
    if rate <= 0:
        raise ConfigError("budget infeasible: no energy left for processing and transmission")
    return rate


def critical_count(harvest_power_w: float, costs: TaskCosts, budget_rate: float,
                   f_max_hz: float, latency_s: float) -> int:
    """Queue length above which the head sample can no longer be guaranteed fresh."""
    if latency_s <= 0:
        raise InputError("latency must be positive")
    d = sustainable_dequeue_rate(harvest_power_w, costs, budget_rate, f_max_hz)
    return max(1, math.floor(d * latency_s + 1e-9))


def make_controller(harvest_power_w: float, costs: TaskCosts, budget_rate: float,
                    f_max_hz: float, latency_s: float,
                    release_fraction: float = DEFAULT_RELEASE_FRACTION) -> ControllerState:
    if not 0.0 < release_fraction <= 1.0:
        raise InputError("release fraction must lie in (0, 1]")
    return ControllerState(
        critical_count=critical_count(harvest_power_w, costs, budget_rate, f_max_hz, latency_s),
        dequeue_rate_sustainable=sustainable_dequeue_rate(harvest_power_w, costs,
                                                          budget_rate, f_max_hz),
        release_fraction=release_fraction,
    )


def safe_rate(requested: float, queue_len: int, state: ControllerState,
              f_max_hz: float) -> float:
    """Cap the requested rate while the queue sits in the critical band.

    The cap is a maximum, not a floor: requests below it pass through.
    Release needs both a drained queue and a request back at or below the
    cap; releasing on queue length alone thrashes when the critical count is
    small (the very next over-budget sample re-enters critical), which both
    breaks the freshness guarantee and makes short-latency behavior erratic.
    Updates the critical latch in place.
    """
    if not 0.0 < requested <= 1.0:
        raise InputError("requested rate must lie in (0, 1]")
    cap = state.dequeue_rate_sustainable / f_max_hz
    entry = max(1, state.critical_count - LATCH_ENTRY_MARGIN)
    if queue_len >= entry:
        state.in_critical = True
    elif (state.in_critical and requested <= cap
          and queue_len < state.critical_count * state.release_fraction):
        state.in_critical = False
    if state.in_critical:
        return min(requested, cap)
    return requested

"""Sampling-rate policies: uniform baseline and a difference-driven adaptive
policy behind a shared wrapper.

The adaptive policy reacts multiplicatively to significant changes (halving
its inter-sample interval) and backs off additively when the signal is quiet.
A slow multiplicative nudge on the significance threshold steers the long-run
collection rate toward a target budget fraction, so the policy spends roughly
the same total energy as a uniform sampler at that fraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InputError

THETA_FLOOR = 1e-12  # keeps the multiplicative nudge reversible


def uniform_decide(tick: int, rate: float) -> bool:
    """Evenly spread sampling that hits exactly ``rate`` over any long window."""
    if not 0.0 < rate <= 1.0:
        raise InputError("rate must lie in (0, 1]")
    return math.floor(tick * rate) > math.floor((tick - 1) * rate)


@dataclass(frozen=True)
class PolicyConfig:
    """Knobs for the adaptive policy.

    target_rate is the budget fraction the threshold adaptation steers toward;
    the engine fills it from the run budget when left unset.  theta_step is
    the threshold's multiplicative budget nudge per elapsed tick; it must be
    gentle enough not to erase significance over one volatile burst.
    """

    k_min: int = 1
    k_max: int = 10
    theta_init: float = 0.1
    theta_step: float = 1.005
    ewma_weight: float = 0.01
    target_rate: float | None = None

    def __post_init__(self) -> None:
        if self.k_min < 1 or self.k_max < self.k_min:
            raise InputError("interval bounds must satisfy 1 <= k_min <= k_max")
        if self.theta_init < 0:
            raise InputError("theta_init cannot be negative")
        if self.theta_step < 1.0:
            raise InputError("theta_step must be >= 1 (1 disables budget tracking)")
        if not 0.0 < self.ewma_weight < 1.0:
            raise InputError("ewma_weight must lie in (0, 1)")
        if self.target_rate is not None and not 0.0 < self.target_rate <= 1.0:
            raise InputError("target_rate must lie in (0, 1]")


class UniformPolicy:
    """Requests one fixed rate forever; observations are ignored."""

    def __init__(self, rate: float):
        if not 0.0 < rate <= 1.0:
            raise InputError("rate must lie in (0, 1]")
        self._rate = rate

    def observe(self, value: float) -> None:
        pass

    def current_rate(self) -> float:
        return self._rate


class LinearAsa:
    """AIMD interval control on consecutive-sample differences.

    observe() is called once per collected sample, with its value.  A
    difference above theta halves the interval (rate up, floor k_min); at or
    below theta the interval grows by one (rate down, cap k_max).  theta then
    moves one multiplicative step against the rate EWMA's error from the
    target, which self-budgets the policy.  The EWMA update is gap-weighted
    (gap proxy: the interval that scheduled the sample) so sparse observations
    do not bias it toward fast phases.
    """

    def __init__(self, config: PolicyConfig):
        if config.target_rate is None:
            raise InputError("LinearAsa requires a resolved target_rate")
        self.config = config
        start = round(1.0 / config.target_rate)
        self.interval = min(config.k_max, max(config.k_min, start))
        self.theta = config.theta_init
        self.rate_ewma = config.target_rate
        self.last_value: float | None = None
        self.prev_value: float | None = None
        # Decayed samples over decayed ticks: an unbiased rate estimate under
        # any mix of gaps, unlike a plain per-observation EWMA of 1/gap.
        decay_ticks = 1.0 / config.ewma_weight
        self._rate_num = config.target_rate * decay_ticks
        self._rate_den = decay_ticks

    def observe(self, value: float) -> None:
        cfg = self.config
        if self.last_value is None:
            self.last_value = value
            return
        gap = self.interval
        decay = (1.0 - cfg.ewma_weight) ** gap
        self._rate_num = self._rate_num * decay + 1.0
        self._rate_den = self._rate_den * decay + gap
        self.rate_ewma = self._rate_num / self._rate_den
        if abs(value - self.last_value) > self.theta:
            self.interval = max(cfg.k_min, self.interval // 2)
        else:
            self.interval = min(cfg.k_max, self.interval + 1)
        # One theta_step per elapsed tick, not per observation: at slow rates
        # observations arrive rarely, and un-scaled nudges would correct the
        # budget an order of magnitude slower in real time than at fast rates.
        step = cfg.theta_step ** gap
        if self.rate_ewma > cfg.target_rate:
            self.theta *= step
        else:
            self.theta = max(THETA_FLOOR, self.theta / step)
        self.prev_value, self.last_value = self.last_value, value

    def current_rate(self) -> float:
        return 1.0 / self.interval


class AsaWrapper:
    """Uniform front the runtime talks to; any rate policy plugs in behind it.

    clamp_max_rate installs (or clears) an external rate cap; the cap stays in
    force until replaced.
    """

    def __init__(self, policy):
        self._policy = policy
        self._cap: float | None = None

    def observe(self, value: float) -> None:
        self._policy.observe(value)

    def clamp_max_rate(self, cap: float | None) -> None:
        if cap is not None and not 0.0 < cap <= 1.0:
            raise InputError("rate cap must lie in (0, 1]")
        self._cap = cap

    def requested_rate(self) -> float:
        """The policy's own request, before any cap."""
        return self._policy.current_rate()

    def current_rate(self) -> float:
        rate = self._policy.current_rate()
        return rate if self._cap is None else min(rate, self._cap)

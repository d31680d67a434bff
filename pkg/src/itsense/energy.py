"""Harvest supply, capacitor buffer, and per-task energy costs."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import InputError

# Bench figures for a 50 Hz accelerometer pipeline on an edge sensor:
# IMU sampling, on-MCU encryption, BLE transmission.  Watts, over a
# one-second reporting window.
REFERENCE_SAMPLING_W = 2.1e-3
REFERENCE_ENCRYPTION_W = 0.2e-3
REFERENCE_RADIO_W = 8.4e-3
REFERENCE_SAMPLES_PER_WINDOW = 50
REFERENCE_WINDOW_S = 1.0

# Tens of milliseconds of full-pipeline operation; the defining constraint of
# a capacitor-backed node.
DEFAULT_CAPACITOR_J = 500e-6


@dataclass(frozen=True)
class TaskCosts:
    """Per-sample energy of each pipeline stage, in joules."""

    e_sample_j: float
    e_process_j: float
    e_transmit_j: float

    def __post_init__(self) -> None:
        if min(self.e_sample_j, self.e_process_j, self.e_transmit_j) <= 0:
            raise InputError("all per-sample costs must be strictly positive")

    @property
    def e_pipeline_j(self) -> float:
        """Total energy to sample, process, and transmit one reading."""
        return self.e_sample_j + self.e_process_j + self.e_transmit_j

    @property
    def e_service_j(self) -> float:
        """Energy to process and transmit one queued reading."""
        return self.e_process_j + self.e_transmit_j


@dataclass(frozen=True)
class EnergyState:
    """Capacitor charge under a constant harvest supply."""

    charge_j: float
    capacity_j: float
    harvest_power_w: float

    def __post_init__(self) -> None:
        if self.capacity_j <= 0:
            raise InputError("capacity must be positive")
        if not 0.0 <= self.charge_j <= self.capacity_j:
            raise InputError("charge must lie in [0, capacity]")
        if self.harvest_power_w < 0:
            raise InputError("harvest power cannot be negative")


def derive_costs(sampling_w: float, encryption_w: float, radio_w: float,
                 samples_per_window: int, window_s: float) -> TaskCosts:
    """Convert stage powers over a fixed window into per-sample energies."""
    if min(sampling_w, encryption_w, radio_w) <= 0:
        raise InputError("stage powers must be strictly positive")
    if samples_per_window <= 0 or window_s <= 0:
        raise InputError("window and sample count must be positive")
    per_sample = window_s / samples_per_window
    return TaskCosts(sampling_w * per_sample, encryption_w * per_sample, radio_w * per_sample)


def default_costs() -> TaskCosts:
    """Costs from the reference pipeline figures: 42/4/168 uJ per sample."""
    return derive_costs(REFERENCE_SAMPLING_W, REFERENCE_ENCRYPTION_W, REFERENCE_RADIO_W,
                        REFERENCE_SAMPLES_PER_WINDOW, REFERENCE_WINDOW_S)


def harvest(state: EnergyState, dt_s: float) -> EnergyState:
    """Advance the supply by dt seconds; surplus beyond capacity is lost."""
    new_state, _ = harvest_with_loss(state, dt_s)
    return new_state


def harvest_with_loss(state: EnergyState, dt_s: float) -> tuple[EnergyState, float]:
    """Like :func:`harvest`, also returning energy lost to the capacity clamp."""
    if dt_s <= 0:
        raise InputError("dt must be positive")
    unclamped = state.charge_j + state.harvest_power_w * dt_s
    charge = min(state.capacity_j, unclamped)
    return replace(state, charge_j=charge), unclamped - charge


def try_consume(state: EnergyState, cost_j: float) -> tuple[EnergyState, bool]:
    """All-or-nothing draw: on insufficient charge the state is returned untouched."""
    if cost_j < 0:
        raise InputError("cost cannot be negative")
    if state.charge_j >= cost_j:
        return replace(state, charge_j=state.charge_j - cost_j), True
    return state, False


def budget_to_power(collection_rate: float, costs: TaskCosts, f_max_hz: float) -> float:
    """Constant harvest power that sustains end-to-end service of the given
    fraction of possible samples."""
    if not 0.0 < collection_rate <= 1.0:
        raise InputError("collection rate must lie in (0, 1]")
    if f_max_hz <= 0:
        raise InputError("f_max must be positive")
    return collection_rate * f_max_hz * costs.e_pipeline_j

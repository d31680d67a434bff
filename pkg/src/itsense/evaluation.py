"""Server-side reconstruction and accuracy metrics."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import InputError
from .signals import GroundTruth


def reconstruct(entries: Sequence[tuple[int, float]], horizon: int) -> np.ndarray:
    """Linearly interpolate received (tick, value) pairs onto a full tick grid.

    Ticks before the first entry hold the first value, ticks after the last
    hold the last; an empty log reconstructs as all zeros.
    """
    if horizon < 1:
        raise InputError("horizon must be at least 1")
    if len(entries) == 0:
        return np.zeros(horizon)
    ticks = np.array([t for t, _ in entries], dtype=np.float64)
    if np.any(np.diff(ticks) <= 0):
        raise InputError("received ticks must be strictly increasing")
    values = np.array([v for _, v in entries], dtype=np.float64)
    return np.interp(np.arange(horizon, dtype=np.float64), ticks, values)


def mae(recon, truth) -> float:
    """Mean absolute pointwise error between a reconstruction and the truth."""
    reference = truth.values if isinstance(truth, GroundTruth) else np.asarray(truth, dtype=np.float64)
    series = np.asarray(recon, dtype=np.float64)
    if series.shape != reference.shape:
        raise InputError(f"length mismatch: {series.shape} vs {reference.shape}")
    return float(np.mean(np.abs(series - reference)))


def improvement(mae_x: float, mae_ei: float) -> float:
    """Fractional accuracy gain over the uniform baseline; NaN when undefined.

    Negative values are meaningful: the candidate was worse than uniform.
    """
    if mae_ei <= 0.0:
        return math.nan
    return (mae_ei - mae_x) / mae_ei


def normalized_improvement(imp_x: float, imp_seb: float) -> float:
    """Improvement rescaled so the battery-backed policy sits at 1; NaN when undefined."""
    if not imp_seb > 0.0:
        return math.nan
    return imp_x / imp_seb

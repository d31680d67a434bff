"""Ground-truth signals: dataset loading, synthetic generation, summary stats."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InputError

DEFAULT_TICK_PERIOD_S = 0.02  # 50 readings per second

SERIES_FORMATS = ("csv-rows", "tsv-ucr")


@dataclass(eq=False)
class GroundTruth:
    """Uniformly spaced scalar readings; reading i occurs at time i * tick_period."""

    values: np.ndarray
    tick_period: float = DEFAULT_TICK_PERIOD_S

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 1 or self.values.size == 0:
            raise InputError("signal must be a non-empty 1-D sequence of readings")
        if not self.tick_period > 0:
            raise InputError("tick_period must be positive")

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def f_max_hz(self) -> float:
        return 1.0 / self.tick_period

    @property
    def duration_s(self) -> float:
        return self.values.size * self.tick_period


@dataclass(frozen=True)
class DatasetStats:
    mean: float
    std_dev: float  # population standard deviation
    cv: float       # std_dev / |mean|; NaN when the mean is zero


def _parse_number(token: str, path, lineno: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise InputError(f"{path}:{lineno}: not a number: {token!r}") from None


def load_series(path, fmt: str = "csv-rows",
                tick_period: float = DEFAULT_TICK_PERIOD_S) -> GroundTruth:
    """Read a signal file into one concatenated stream.

    ``csv-rows`` holds one reading per line.  ``tsv-ucr`` holds one series per
    line, whitespace separated, with a leading class label that is discarded;
    rows are concatenated in file order.  Loading is a pure function of the
    file bytes.
    """
    if fmt not in SERIES_FORMATS:
        raise InputError(f"unknown series format {fmt!r}; expected one of {SERIES_FORMATS}")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None

    values: list[float] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if fmt == "csv-rows":
            fields = line.split(",")
            if len(fields) != 1:
                raise InputError(
                    f"{path}:{lineno}: expected one reading per row, got {len(fields)} fields")
            payload = fields
        else:
            fields = line.split()
            if len(fields) < 2:
                raise InputError(f"{path}:{lineno}: expected a label plus at least one reading")
            _parse_number(fields[0], path, lineno)  # class label, discarded
            payload = fields[1:]
        for token in payload:
            values.append(_parse_number(token, path, lineno))

    if not values:
        raise InputError(f"{path}: no readings found")
    return GroundTruth(np.array(values), tick_period)


def gen_two_phase(volatile_len: int, flat_len: int, amplitude: float, period: int,
                  seed: int, tick_period: float = DEFAULT_TICK_PERIOD_S) -> GroundTruth:
    """Random-walk-plus-sinusoid burst followed by a perfectly flat tail.

    The first phase stacks a seeded +-amplitude random walk on a unit sinusoid
    of the given period (in ticks); the second phase holds the last volatile
    value, so any reconstruction of it is exact.  Deterministic for a fixed
    seed.
    """
    if volatile_len <= 0 or flat_len <= 0:
        raise InputError("phase lengths must be positive")
    if period < 2:
        raise InputError("period must be at least 2 ticks")
    if amplitude < 0:
        raise InputError("amplitude must be non-negative")
    rng = np.random.default_rng(seed)
    steps = amplitude * (2.0 * rng.integers(0, 2, size=volatile_len) - 1.0)
    ticks = np.arange(volatile_len)
    volatile = np.cumsum(steps) + np.sin(2.0 * math.pi * ticks / period)
    flat = np.full(flat_len, volatile[-1])
    return GroundTruth(np.concatenate([volatile, flat]), tick_period)


def stats(gt: GroundTruth) -> DatasetStats:
    """Mean, population standard deviation, and coefficient of variation."""
    mean = float(np.mean(gt.values))
    std = float(np.std(gt.values))
    cv = std / abs(mean) if mean != 0.0 else math.nan
    return DatasetStats(mean=mean, std_dev=std, cv=cv)

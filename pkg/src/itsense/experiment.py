"""Sweep harness and command-line entry point.

Builds run grids over signals, energy budgets, and latency constraints, and
writes one CSV row per run.  Improvement columns are computed against the
matching uniform (ei) and battery-backed (seb) rows of the same group.  Rows
are emitted in a fixed order and floats with nine significant digits, so an
identical sweep reproduces a byte-identical file.

Exit codes: 0 clean, 1 usage error, 2 at least one run errored (errors go to
stderr; the sweep itself never aborts on a run error).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

from .energy import DEFAULT_CAPACITOR_J, TaskCosts, default_costs, derive_costs
from .engine import MODES, RunConfig, RunMetrics, TraceRow, run
from .errors import ConfigError, InputError, UsageError
from .evaluation import improvement, normalized_improvement
from .policies import PolicyConfig
from .signals import SERIES_FORMATS, GroundTruth, gen_two_phase, load_series

DEFAULT_BUDGETS = (0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
DEFAULT_LATENCIES_S = (0.5, 1.0, 2.0, 5.0)
DEFAULT_SYNTHETIC = {"volatile": 300, "flat": 2700, "amplitude": 1.0, "period": 25}
DEFAULT_OUT = "sweep.csv"

CSV_COLUMNS = ("signal", "budget", "latency_s", "mode", "seed", "mae", "improvement",
               "normalized_improvement", "samples_taken", "samples_sent",
               "samples_expired", "power_failures", "energy_consumed_j",
               "energy_clamped_j")

TRACE_COLUMNS = ("signal", "budget", "latency_s", "mode", "seed", "tick", "charge_j",
                 "queue_len", "safe_rate", "event")

_CONFIG_KEYS = {"budgets", "latencies", "modes", "seeds", "datasets", "synthetic",
                "policy", "costs", "capacitor_uj", "f_max_hz", "window_s",
                "release_fraction"}
_POLICY_KEYS = {"k_min", "k_max", "theta_init", "theta_step", "ewma_weight",
                "target_rate"}
_COSTS_KEYS = {"sample_mw", "encrypt_mw", "ble_mw", "samples_per_window", "window_s"}
_DATASET_KEYS = {"path", "format"}
_SYNTHETIC_KEYS = {"volatile", "flat", "amplitude", "period"}


@dataclass(frozen=True)
class SignalSpec:
    """A signal source: a dataset file or a synthetic two-phase recipe."""

    name: str
    kind: str  # "dataset" | "two-phase"
    path: str | None = None
    fmt: str = "csv-rows"
    volatile: int = 300
    flat: int = 2700
    amplitude: float = 1.0
    period: int = 25

    def materialize(self, seed: int, tick_period: float) -> GroundTruth:
        if self.kind == "dataset":
            return load_series(self.path, self.fmt, tick_period)
        return gen_two_phase(self.volatile, self.flat, self.amplitude, self.period,
                             seed, tick_period)


@dataclass
class SweepSpec:
    """Fully resolved sweep grid; sweep output is a pure function of it."""

    signals: list[SignalSpec]
    budgets: list[float] = field(default_factory=lambda: list(DEFAULT_BUDGETS))
    latencies_s: list[float] = field(default_factory=lambda: list(DEFAULT_LATENCIES_S))
    modes: list[str] = field(default_factory=lambda: list(MODES))
    seeds: list[int] = field(default_factory=lambda: [0])
    policy: PolicyConfig | None = None
    costs: TaskCosts = field(default_factory=default_costs)
    capacitor_j: float = DEFAULT_CAPACITOR_J
    f_max_hz: float = 50.0
    window_s: float = 1.0
    release_fraction: float = 0.8

    def validate(self) -> None:
        if not self.signals:
            raise UsageError("no signals: give --dataset, --synthetic, or a config file entry")
        for axis, name in ((self.budgets, "budgets"), (self.latencies_s, "latencies"),
                           (self.modes, "modes"), (self.seeds, "seeds")):
            if not axis:
                raise UsageError(f"{name} must be non-empty")
        for b in self.budgets:
            if not 0.0 < b <= 1.0:
                raise UsageError(f"budget {b} out of range (0, 1]")
        for lat in self.latencies_s:
            if lat <= 0:
                raise UsageError(f"latency {lat} must be positive")
        for mode in self.modes:
            if mode not in MODES:
                raise UsageError(f"unknown mode {mode!r}; expected one of {MODES}")
        if self.capacitor_j <= 0:
            raise UsageError("capacitor_uj must be positive")
        if self.f_max_hz <= 0:
            raise UsageError("f_max_hz must be positive")
        if self.window_s <= 0:
            raise UsageError("window_s must be positive")
        if not 0.0 < self.release_fraction <= 1.0:
            raise UsageError("release_fraction must lie in (0, 1]")


@dataclass
class SweepRow:
    """One run's result.  `error` stays out of the CSV and drives exit code 2."""

    signal: str
    budget: float
    latency_s: float
    mode: str
    seed: int
    mae: float = math.nan
    improvement: float = math.nan
    normalized_improvement: float = math.nan
    samples_taken: int = 0
    samples_sent: int = 0
    samples_expired: int = 0
    power_failures: int = 0
    energy_consumed_j: float = math.nan
    energy_clamped_j: float = math.nan
    error: str | None = None


def _require_keys(mapping: dict, allowed: set[str], context: str) -> None:
    for key in mapping:
        if key not in allowed:
            raise UsageError(f"unknown {context} key {key!r}")


def _policy_from_mapping(mapping: dict) -> PolicyConfig:
    _require_keys(mapping, _POLICY_KEYS, "policy")
    try:
        return PolicyConfig(**mapping)
    except InputError as exc:
        raise UsageError(f"policy: {exc}") from None


def _costs_from_mapping(mapping: dict) -> TaskCosts:
    _require_keys(mapping, _COSTS_KEYS, "costs")
    try:
        return derive_costs(
            mapping.get("sample_mw", 2.1) * 1e-3,
            mapping.get("encrypt_mw", 0.2) * 1e-3,
            mapping.get("ble_mw", 8.4) * 1e-3,
            mapping.get("samples_per_window", 50),
            mapping.get("window_s", 1.0),
        )
    except InputError as exc:
        raise UsageError(f"costs: {exc}") from None


def _synthetic_spec(volatile: int, flat: int, amplitude: float, period: int) -> SignalSpec:
    name = f"two-phase:{volatile:g},{flat:g},{amplitude:g},{period:g}"
    return SignalSpec(name=name, kind="two-phase", volatile=int(volatile), flat=int(flat),
                      amplitude=float(amplitude), period=int(period))


def _parse_synthetic_flag(text: str) -> SignalSpec:
    head, sep, rest = text.partition(":")
    if head != "two-phase" or not sep:
        raise UsageError(f"--synthetic expects two-phase:V,F,A,P, got {text!r}")
    parts = rest.split(",")
    if len(parts) != 4:
        raise UsageError(f"--synthetic expects four comma-separated values, got {text!r}")
    try:
        volatile, flat = int(parts[0]), int(parts[1])
        amplitude, period = float(parts[2]), int(parts[3])
    except ValueError:
        raise UsageError(f"--synthetic has non-numeric fields: {text!r}") from None
    if volatile <= 0 or flat <= 0 or period < 2 or amplitude < 0:
        raise UsageError(f"--synthetic values out of range: {text!r}")
    return _synthetic_spec(volatile, flat, amplitude, period)


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok != ""]
    except ValueError:
        raise UsageError(f"{flag} expects comma-separated numbers, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; the spec reserves 2 for run errors.
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="itsense", add_help=True,
                     description="Sweep sampling modes over energy budgets and "
                                 "latency constraints; write one CSV row per run.")
    parser.add_argument("--config", metavar="PATH", help="JSON config file")
    parser.add_argument("--dataset", metavar="PATH", help="signal file to load")
    parser.add_argument("--format", choices=SERIES_FORMATS, default=None,
                        help="dataset file format (default csv-rows)")
    parser.add_argument("--synthetic", metavar="two-phase:V,F,A,P",
                        help="synthetic signal: volatile ticks, flat ticks, "
                             "amplitude, sinusoid period")
    parser.add_argument("--budget", metavar="F[,F...]",
                        help="collection budget fractions in (0, 1]")
    parser.add_argument("--latency", metavar="S[,S...]",
                        help="latency constraints in seconds")
    parser.add_argument("--mode", metavar="NAME[,NAME...]",
                        help=f"modes to run, from {','.join(MODES)}")
    parser.add_argument("--seed", metavar="N", type=int, help="signal seed")
    parser.add_argument("--out", metavar="PATH", default=None,
                        help=f"result CSV path (default {DEFAULT_OUT})")
    parser.add_argument("--trace", metavar="PATH", default=None,
                        help="also write a per-tick trace CSV")
    return parser


def parse_config(argv: list[str] | None = None) -> tuple[SweepSpec, str, str | None]:
    """Resolve flags, config file, and defaults (precedence in that order)."""
    args = _build_parser().parse_args(argv)

    file_cfg: dict = {}
    if args.config is not None:
        try:
            file_cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except OSError as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"config {args.config} is not valid JSON: {exc}") from None
        if not isinstance(file_cfg, dict):
            raise UsageError(f"config {args.config} must hold a JSON object")
        _require_keys(file_cfg, _CONFIG_KEYS, "config")

    signals: list[SignalSpec] = []
    for entry in file_cfg.get("datasets", []):
        if not isinstance(entry, dict):
            raise UsageError("config datasets entries must be objects")
        _require_keys(entry, _DATASET_KEYS, "dataset")
        if "path" not in entry:
            raise UsageError("dataset entry missing 'path'")
        fmt = entry.get("format", "csv-rows")
        if fmt not in SERIES_FORMATS:
            raise UsageError(f"unknown dataset format {fmt!r}")
        signals.append(SignalSpec(name=Path(entry["path"]).stem, kind="dataset",
                                  path=entry["path"], fmt=fmt))
    if "synthetic" in file_cfg:
        synth = file_cfg["synthetic"]
        if not isinstance(synth, dict):
            raise UsageError("config synthetic must be an object")
        _require_keys(synth, _SYNTHETIC_KEYS, "synthetic")
        merged = {**DEFAULT_SYNTHETIC, **synth}
        signals.append(_synthetic_spec(merged["volatile"], merged["flat"],
                                       merged["amplitude"], merged["period"]))

    if args.dataset is not None:
        signals.append(SignalSpec(name=Path(args.dataset).stem, kind="dataset",
                                  path=args.dataset, fmt=args.format or "csv-rows"))
    elif args.format is not None:
        raise UsageError("--format requires --dataset")
    if args.synthetic is not None:
        signals.append(_parse_synthetic_flag(args.synthetic))
    if not signals:
        signals.append(_synthetic_spec(**DEFAULT_SYNTHETIC))

    spec = SweepSpec(signals=signals)
    if "budgets" in file_cfg:
        spec.budgets = [float(b) for b in file_cfg["budgets"]]
    if "latencies" in file_cfg:
        spec.latencies_s = [float(s) for s in file_cfg["latencies"]]
    if "modes" in file_cfg:
        spec.modes = list(file_cfg["modes"])
    if "seeds" in file_cfg:
        spec.seeds = [int(s) for s in file_cfg["seeds"]]
    if "policy" in file_cfg:
        spec.policy = _policy_from_mapping(file_cfg["policy"])
    if "costs" in file_cfg:
        spec.costs = _costs_from_mapping(file_cfg["costs"])
    if "capacitor_uj" in file_cfg:
        spec.capacitor_j = float(file_cfg["capacitor_uj"]) * 1e-6
    if "f_max_hz" in file_cfg:
        spec.f_max_hz = float(file_cfg["f_max_hz"])
    if "window_s" in file_cfg:
        spec.window_s = float(file_cfg["window_s"])
    if "release_fraction" in file_cfg:
        spec.release_fraction = float(file_cfg["release_fraction"])

    if args.budget is not None:
        spec.budgets = _parse_float_list(args.budget, "--budget")
    if args.latency is not None:
        spec.latencies_s = _parse_float_list(args.latency, "--latency")
    if args.mode is not None:
        spec.modes = [tok for tok in args.mode.split(",") if tok != ""]
    if args.seed is not None:
        spec.seeds = [args.seed]

    spec.validate()
    return spec, args.out or DEFAULT_OUT, args.trace


def run_sweep(spec: SweepSpec,
              trace_sink: list[tuple[SweepRow, list[TraceRow]]] | None = None
              ) -> list[SweepRow]:
    """One row per (signal, budget, latency, mode, seed), deterministic order.

    Per-run errors land in the row's `error` field; the sweep continues.
    """
    spec.validate()
    tick_period = 1.0 / spec.f_max_hz
    rows: list[SweepRow] = []

    for sig in spec.signals:
        for seed in spec.seeds:
            try:
                gt = sig.materialize(seed, tick_period)
            except InputError as exc:
                rows.extend(SweepRow(signal=sig.name, budget=b, latency_s=lat,
                                     mode=mode, seed=seed, error=str(exc))
                            for b in spec.budgets for lat in spec.latencies_s
                            for mode in spec.modes)
                continue
            for budget in spec.budgets:
                for latency in spec.latencies_s:
                    group: list[tuple[SweepRow, RunMetrics | None]] = []
                    for mode in spec.modes:
                        row = SweepRow(signal=sig.name, budget=budget,
                                       latency_s=latency, mode=mode, seed=seed)
                        config = RunConfig(
                            mode=mode, ground_truth=gt, budget_rate=budget,
                            latency_s=latency, costs=spec.costs,
                            capacitor_j=spec.capacitor_j, policy=spec.policy,
                            window_s=spec.window_s,
                            release_fraction=spec.release_fraction, seed=seed)
                        trace: list[TraceRow] | None = \
                            [] if trace_sink is not None else None
                        try:
                            metrics = run(config, trace=trace)
                        except (ConfigError, InputError) as exc:
                            row.error = str(exc)
                            group.append((row, None))
                            continue
                        row.mae = metrics.mae
                        row.samples_taken = metrics.samples_taken
                        row.samples_sent = metrics.samples_sent
                        row.samples_expired = metrics.samples_expired
                        row.power_failures = metrics.power_failures
                        row.energy_consumed_j = metrics.energy_consumed_j
                        row.energy_clamped_j = metrics.energy_clamped_j
                        group.append((row, metrics))
                        if trace_sink is not None:
                            trace_sink.append((row, trace))
                    _annotate_improvements(group)
                    rows.extend(row for row, _ in group)
    return rows


def _annotate_improvements(group: list[tuple[SweepRow, RunMetrics | None]]) -> None:
    mae_ei = next((r.mae for r, m in group if r.mode == "ei" and m is not None), None)
    if mae_ei is None:
        return
    for row, metrics in group:
        if metrics is not None:
            row.improvement = improvement(row.mae, mae_ei)
    imp_seb = next((r.improvement for r, m in group
                    if r.mode == "seb" and m is not None), None)
    if imp_seb is None:
        return
    for row, metrics in group:
        if metrics is not None:
            row.normalized_improvement = normalized_improvement(row.improvement, imp_seb)


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def emit_csv(rows: list[SweepRow], path) -> None:
    """Header plus one line per row, 14 columns, 9 significant digits."""
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for r in rows:
                writer.writerow([r.signal, _fmt(r.budget), _fmt(r.latency_s), r.mode,
                                 r.seed, _fmt(r.mae), _fmt(r.improvement),
                                 _fmt(r.normalized_improvement), r.samples_taken,
                                 r.samples_sent, r.samples_expired, r.power_failures,
                                 _fmt(r.energy_consumed_j), _fmt(r.energy_clamped_j)])
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from None


def emit_trace_csv(traces: list[tuple[SweepRow, list[TraceRow]]], path) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(TRACE_COLUMNS)
            for row, trace in traces:
                for t in trace:
                    events = []
                    if t.took_sample:
                        events.append("sample")
                    if t.n_dequeued:
                        events.append(f"dequeue:{t.n_dequeued}")
                    if t.n_expired:
                        events.append(f"expire:{t.n_expired}")
                    if t.power_failure:
                        events.append("power_failure")
                    writer.writerow([row.signal, _fmt(row.budget), _fmt(row.latency_s),
                                     row.mode, row.seed, t.tick, _fmt(t.charge_j),
                                     t.queue_len, _fmt(t.safe_rate),
                                     ";".join(events)])
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from None


def _print_summary(rows: list[SweepRow], stream) -> None:
    """Mean improvement per mode, both per-signal-averaged and pooled."""
    modes = sorted({r.mode for r in rows})
    signals = sorted({r.signal for r in rows})
    print("mode  mean_improvement  pooled_improvement", file=stream)
    for mode in modes:
        ok = [r for r in rows if r.mode == mode and r.error is None
              and not math.isnan(r.improvement)]
        mean_imp = sum(r.improvement for r in ok) / len(ok) if ok else math.nan
        pooled = _pooled_improvement(rows, mode, signals)
        print(f"{mode:<13}{_fmt(mean_imp):>12}{_fmt(pooled):>16}", file=stream)


def _pooled_improvement(rows: list[SweepRow], mode: str, signals: list[str]) -> float:
    mode_mae = sum(r.mae for r in rows if r.mode == mode and r.error is None
                   and not math.isnan(r.mae))
    ei_mae = sum(r.mae for r in rows if r.mode == "ei" and r.error is None
                 and not math.isnan(r.mae))
    return improvement(mode_mae, ei_mae) if ei_mae > 0 else math.nan


def main(argv: list[str] | None = None) -> int:
    try:
        spec, out_path, trace_path = parse_config(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1

    trace_sink = [] if trace_path is not None else None
    rows = run_sweep(spec, trace_sink=trace_sink)
    try:
        emit_csv(rows, out_path)
        if trace_path is not None:
            emit_trace_csv(trace_sink, trace_path)
    except InputError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1

    _print_summary(rows, sys.stdout)
    print(f"wrote {len(rows)} rows to {out_path}")
    errored = [r for r in rows if r.error is not None]
    for r in errored:
        print(f"run error: {r.signal} budget={_fmt(r.budget)} "
              f"latency={_fmt(r.latency_s)} mode={r.mode} seed={r.seed}: {r.error}",
              file=sys.stderr)
    return 2 if errored else 0


if __name__ == "__main__":
    sys.exit(main())

"""Discrete-time simulation of signal-aware adaptive sampling on
energy-harvesting sensor nodes with capacitor-sized buffers.

The library models a sample/process/transmit pipeline fed by constant
harvested power, the time buffering that decouples sampling bursts from
energy draw, and the queue-dynamics rate limiting that keeps buffered
samples inside an application latency bound.  See the engine module for the
four runtime configurations and the experiment module for the sweep CLI.
"""

from .controller import (ControllerState, critical_count, make_controller, safe_rate,
                         sustainable_dequeue_rate)
from .energy import (DEFAULT_CAPACITOR_J, EnergyState, TaskCosts, budget_to_power,
                     default_costs, derive_costs, harvest, harvest_with_loss,
                     try_consume)
from .engine import MODES, RunConfig, RunMetrics, TraceRow, compare_modes, run
from .errors import ConfigError, InputError, QueueOverflowError, UsageError
from .evaluation import improvement, mae, normalized_improvement, reconstruct
from .experiment import (SignalSpec, SweepRow, SweepSpec, emit_csv, parse_config,
                         run_sweep)
from .policies import (AsaWrapper, LinearAsa, PolicyConfig, UniformPolicy,
                       uniform_decide)
from .queueing import QueueDynamics, Sample, SampleQueue
from .scheduler import TickPlan, TickScheduler
from .signals import (DEFAULT_TICK_PERIOD_S, DatasetStats, GroundTruth, gen_two_phase,
                      load_series, stats)

__all__ = [
    "AsaWrapper",
    "ConfigError",
    "ControllerState",
    "DEFAULT_CAPACITOR_J",
    "DEFAULT_TICK_PERIOD_S",
    "DatasetStats",
    "EnergyState",
    "GroundTruth",
    "InputError",
    "LinearAsa",
    "MODES",
    "PolicyConfig",
    "QueueDynamics",
    "QueueOverflowError",
    "RunConfig",
    "RunMetrics",
    "Sample",
    "SampleQueue",
    "SignalSpec",
    "SweepRow",
    "SweepSpec",
    "TaskCosts",
    "TickPlan",
    "TickScheduler",
    "TraceRow",
    "UniformPolicy",
    "UsageError",
    "budget_to_power",
    "compare_modes",
    "critical_count",
    "default_costs",
    "derive_costs",
    "emit_csv",
    "gen_two_phase",
    "harvest",
    "harvest_with_loss",
    "improvement",
    "load_series",
    "mae",
    "make_controller",
    "normalized_improvement",
    "parse_config",
    "reconstruct",
    "run",
    "run_sweep",
    "safe_rate",
    "stats",
    "sustainable_dequeue_rate",
    "try_consume",
    "uniform_decide",
]

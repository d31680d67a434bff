"""Reconstruction and accuracy metrics, checked against a brute-force oracle."""

import math

import numpy as np
import pytest

import itsense as it
from itsense.errors import InputError


def interp_oracle(entries, horizon):
    """Independent per-tick interpolation: segment walk plus edge holds."""
    out = []
    for t in range(horizon):
        if not entries:
            out.append(0.0)
        elif t <= entries[0][0]:
            out.append(entries[0][1])
        elif t >= entries[-1][0]:
            out.append(entries[-1][1])
        else:
            for (t0, v0), (t1, v1) in zip(entries, entries[1:]):
                if t0 <= t <= t1:
                    out.append(v0 + (v1 - v0) * (t - t0) / (t1 - t0))
                    break
    return np.array(out)


def mae_oracle(recon, truth):
    return sum(abs(a - b) for a, b in zip(recon, truth)) / len(truth)


def test_reconstruct_exact_linear_segment():
    assert it.reconstruct([(0, 0.0), (2, 2.0)], 3).tolist() == [0.0, 1.0, 2.0]


def test_reconstruct_holds_edges():
    assert it.reconstruct([(1, 5.0)], 3).tolist() == [5.0, 5.0, 5.0]


def test_reconstruct_misses_interior_peak():
    truth = [0.0, 1.0, 2.0, 1.0, 0.0]
    recon = it.reconstruct([(0, 0.0), (4, 0.0)], 5)
    assert recon.tolist() == [0.0] * 5
    assert it.mae(recon, truth) == pytest.approx(0.8)


def test_reconstruct_empty_log_is_zeros():
    assert it.reconstruct([], 4).tolist() == [0.0] * 4


def test_reconstruct_rejects_unsorted_ticks():
    with pytest.raises(InputError):
        it.reconstruct([(3, 1.0), (3, 2.0)], 5)
    with pytest.raises(InputError):
        it.reconstruct([(3, 1.0), (1, 2.0)], 5)
    with pytest.raises(InputError):
        it.reconstruct([(0, 1.0)], 0)


def test_mae_basics():
    assert it.mae([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert it.mae([2.0, 3.0], [1.0, 2.0]) == pytest.approx(1.0)  # constant shift
    with pytest.raises(InputError):
        it.mae([1.0], [1.0, 2.0])


def test_mae_translation_invariant():
    rng = np.random.default_rng(4)
    a, b = rng.normal(size=50), rng.normal(size=50)
    assert it.mae(a + 3.7, b + 3.7) == pytest.approx(it.mae(a, b), rel=1e-12)


def test_full_log_reproduces_ground_truth():
    gt = it.gen_two_phase(50, 50, 1.0, 8, 2)
    log = [(t, float(v)) for t, v in enumerate(gt.values)]
    assert it.mae(it.reconstruct(log, len(gt)), gt) == 0.0


def test_reconstruct_and_mae_match_oracle_on_random_logs():
    rng = np.random.default_rng(77)
    for _ in range(200):
        horizon = int(rng.integers(1, 100))
        n = int(rng.integers(0, min(20, horizon) + 1))
        ticks = sorted(rng.choice(horizon, size=n, replace=False).tolist())
        entries = [(int(t), float(rng.normal())) for t in ticks]
        truth = rng.normal(size=horizon)
        recon = it.reconstruct(entries, horizon)
        expected = interp_oracle(entries, horizon)
        assert np.max(np.abs(recon - expected)) <= 1e-12
        assert it.mae(recon, truth) == pytest.approx(mae_oracle(expected, truth), abs=1e-12)


def test_dropping_a_received_sample_never_helps_on_piecewise_linear_truth():
    # zigzag truth sampled exactly: removing any single point cannot lower mae
    truth = [0.0, 2.0, 4.0, 2.0, 0.0, 3.0, 6.0, 3.0, 0.0]
    full = [(t, v) for t, v in enumerate(truth)]
    base = it.mae(it.reconstruct(full, len(truth)), truth)
    for drop in range(len(full)):
        thinned = full[:drop] + full[drop + 1:]
        thinned_mae = it.mae(it.reconstruct(thinned, len(truth)), truth)
        assert base <= thinned_mae + 1e-15


def test_improvement_definition():
    assert it.improvement(0.65, 1.0) == pytest.approx(0.35)
    assert it.improvement(1.0, 1.0) == 0.0
    assert it.improvement(1.2, 1.0) == pytest.approx(-0.2)  # worse than uniform
    assert math.isnan(it.improvement(0.5, 0.0))


def test_normalized_improvement_definition():
    assert it.normalized_improvement(0.31, 0.35) == pytest.approx(0.31 / 0.35)
    assert it.normalized_improvement(0.35, 0.35) == 1.0
    assert it.normalized_improvement(0.0, 0.35) == 0.0
    assert math.isnan(it.normalized_improvement(0.1, 0.0))
    assert math.isnan(it.normalized_improvement(0.1, -0.2))

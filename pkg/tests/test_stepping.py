"""Integration grid construction: breakpoints, step counts, snapshots."""

import math

import pytest

from relqrc.errors import ConfigurationError, OutOfRangeError
from relqrc.stepping import MIN_STEPS, StepConfig, build_grid
from relqrc.worldline import AccelerationProfile


def test_step_config_floor():
    StepConfig(16)
    with pytest.raises(ConfigurationError):
        StepConfig(15)


def test_grid_covers_domain_and_hits_edges_and_samples():
    profile = AccelerationProfile([(1.0, 1.0), (-1.0, 1.0)])
    samples = [0.7, 2.0]
    intervals, snap_zero = build_grid(profile, samples, rate=10.0,
                                      cfg=StepConfig(64))
    assert not snap_zero
    assert intervals[0].tau_a == 0.0
    assert intervals[-1].tau_b == pytest.approx(2.0)
    bounds = [iv.tau_b for iv in intervals]
    for point in [0.7, 1.0, 2.0]:
        assert any(abs(b - point) < 1e-12 for b in bounds)
    emitted = [iv.tau_b for iv in intervals if iv.emit_sample]
    assert emitted == pytest.approx(samples)
    for a, b in zip(intervals[:-1], intervals[1:]):
        assert a.tau_b == b.tau_a


def test_step_counts_scale_with_rate():
    profile = AccelerationProfile([(1.0, 1.0)])
    cfg = StepConfig(100)
    slow, _ = build_grid(profile, [], rate=1.0, cfg=cfg)
    fast, _ = build_grid(profile, [], rate=1000.0, cfg=cfg)
    assert slow[0].n_steps == MIN_STEPS  # floor applies
    expected = math.ceil(100 * 1.0 / (2 * math.pi / 1000.0))
    assert fast[0].n_steps == expected


def test_snapshot_at_zero_flag():
    profile = AccelerationProfile([(1.0, 1.0)])
    _, snap = build_grid(profile, [0.0, 1.0], rate=1.0, cfg=StepConfig(32))
    assert snap


def test_invalid_sample_times():
    profile = AccelerationProfile([(1.0, 1.0)])
    cfg = StepConfig(32)
    with pytest.raises(OutOfRangeError):
        build_grid(profile, [1.5], rate=1.0, cfg=cfg)
    with pytest.raises(ConfigurationError):
        build_grid(profile, [0.5, 0.5], rate=1.0, cfg=cfg)
    with pytest.raises(ConfigurationError):
        build_grid(profile, [[0.1], [0.2]], rate=1.0, cfg=cfg)


def test_coincident_sample_and_edge_not_duplicated():
    profile = AccelerationProfile([(1.0, 1.0), (-1.0, 1.0)])
    intervals, _ = build_grid(profile, [1.0], rate=1.0, cfg=StepConfig(32))
    assert len(intervals) == 2
    assert intervals[0].emit_sample

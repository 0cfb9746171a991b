"""Feature map layout, determinism, and engine plumbing."""

import numpy as np
import pytest

from relqrc.encoding import EncodingConfig
from relqrc.errors import ConfigurationError
from relqrc.gaussian import ModeSet
from relqrc.reservoir import (ReservoirConfig, feature_matrix, feature_names,
                              features_for)
from relqrc.stepping import StepConfig
from relqrc.worldline import KinematicsMode

RANGES = ((-1.0, 1.0), (-1.0, 1.0))


def make_cfg(engine="gaussian", kinematics="relativistic", n_modes=1,
             coupling=0.1, alpha=0.5j, T=1.0, m=1, a0=2.0, delta_T=None,
             spp=64, n_max=None):
    enc = EncodingConfig(a0=a0, delta_a=0.1 * a0, T=T, m=m,
                         input_ranges=RANGES)
    modes = ModeSet.resonant(n_modes=n_modes, coupling=coupling, alpha=alpha)
    return ReservoirConfig(encoding=enc, modes=modes,
                           kinematics=KinematicsMode(kinematics),
                           engine=engine, step=StepConfig(spp),
                           delta_T=delta_T, n_max=n_max)


def test_feature_layout_and_names():
    cfg = make_cfg(T=2.0, m=4)
    # two inputs, four blocks each of length T, measured every T/2
    assert cfg.n_measurements == 32
    assert cfg.feature_dim == 97
    np.testing.assert_allclose(cfg.sample_times(), np.arange(1, 33))
    names = feature_names(cfg)
    assert len(names) == 97
    assert names[:3] == ["n_1", "q_1", "p_1"]
    assert names[-1] == "bias"


def test_custom_measurement_interval():
    cfg = make_cfg(T=2.0, m=1, delta_T=2.0)
    assert cfg.n_measurements == 4
    with pytest.raises(ConfigurationError):
        make_cfg(T=2.0, delta_T=3.0)  # does not divide the duration
    with pytest.raises(ConfigurationError):
        make_cfg(delta_T=-1.0)


def test_zero_coupling_features_carry_no_information():
    cfg = make_cfg(coupling=0.0)
    f1 = features_for([0.2, -0.7], cfg)
    f2 = features_for([-0.9, 0.4], cfg)
    np.testing.assert_array_equal(f1, f2)
    np.testing.assert_allclose(f1[:-1], 0.0, atol=1e-14)
    assert f1[-1] == 1.0


def test_features_deterministic_and_informative():
    cfg = make_cfg()
    x = [0.3, -0.5]
    f1, f2 = features_for(x, cfg), features_for(x, cfg)
    np.testing.assert_array_equal(f1, f2)
    f3 = features_for([-0.3, 0.5], cfg)
    assert np.max(np.abs(f1 - f3)) > 1e-8


def test_relativistic_and_newtonian_features_differ():
    x = [0.3, -0.5]
    f_rel = features_for(x, make_cfg(kinematics="relativistic"))
    f_newt = features_for(x, make_cfg(kinematics="newtonian"))
    assert np.max(np.abs(f_rel - f_newt)) > 1e-6


def test_qubit_engine_requires_single_mode():
    with pytest.raises(ConfigurationError):
        make_cfg(engine="qubit", n_modes=3)
    with pytest.raises(ConfigurationError):
        make_cfg(engine="bogus")


def test_qubit_features_shape_and_range():
    # the tail criterion bounds only the initial state; the driven dynamics
    # needs extra headroom, so the cutoff is widened explicitly here
    cfg = make_cfg(engine="qubit", alpha=1.0j, n_max=30)
    f = features_for([0.1, 0.9], cfg)
    assert f.shape == (cfg.feature_dim,)
    pz = f[:-1:3]
    assert np.all((pz >= 0.0) & (pz <= 1.0))
    assert make_cfg(engine="qubit", alpha=1.0j).fock_cutoff() == 9


def test_repetition_scales_feature_count():
    assert make_cfg(m=4).feature_dim - 1 == 4 * (make_cfg(m=1).feature_dim - 1)


def test_feature_matrix_preserves_input_order():
    cfg = make_cfg()
    pts = np.array([[0.1, 0.2], [-0.4, 0.9], [0.8, -0.3]])
    mat = feature_matrix(pts, cfg, workers=1)
    assert mat.shape == (3, cfg.feature_dim)
    for row, x in zip(mat, pts):
        np.testing.assert_array_equal(row, features_for(x, cfg))

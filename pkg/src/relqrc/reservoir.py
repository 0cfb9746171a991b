"""Feature map: input point -> acceleration schedule -> dynamics -> features.

For each input, the detector is measured at tau_k = k * delta_T
(k = 1 .. K_tot) and the triples (n, q, p) — or their Pauli analogues for
the qubit engine — are stacked, followed by a constant bias entry 1.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import dense, gaussian
from .encoding import EncodingConfig, build_profile, map_input
from .errors import ConfigurationError, NumericalValidityError
from .stepping import StepConfig
from .worldline import KinematicsMode, check_inside_cavity

ENGINE_GAUSSIAN = "gaussian"
ENGINE_QUBIT = "qubit"

SYMPLECTICITY_GUARD = 1e-7


@dataclass(frozen=True)
class ReservoirConfig:
    encoding: EncodingConfig
    modes: gaussian.ModeSet
    kinematics: KinematicsMode
    engine: str = ENGINE_GAUSSIAN
    step: StepConfig = field(default_factory=StepConfig)
    delta_T: float | None = None  # measurement interval; None -> T/2
    n_max: int | None = None      # Fock cutoff for the qubit engine
    standardize: bool = False     # optional per-feature z-scoring (off)

    def __post_init__(self):
        if self.engine not in (ENGINE_GAUSSIAN, ENGINE_QUBIT):
            raise ConfigurationError(f"unknown engine {self.engine!r}")
        if self.engine == ENGINE_QUBIT and self.modes.n_modes != 1:
            raise ConfigurationError(
                "qubit engine is single-mode; use ModeSet.single_mode()")
        total = self.encoding.total_duration()
        dt = self.measure_interval
        if dt <= 0:
            raise ConfigurationError("delta_T must be positive")
        ratio = total / dt
        if abs(ratio - round(ratio)) > 1e-12 * max(1.0, ratio):
            raise ConfigurationError(
                f"delta_T={dt} does not divide the total duration {total}")

    @property
    def measure_interval(self) -> float:
        return self.encoding.T / 2.0 if self.delta_T is None else self.delta_T

    @property
    def n_measurements(self) -> int:
        return round(self.encoding.total_duration() / self.measure_interval)

    @property
    def feature_dim(self) -> int:
        return 3 * self.n_measurements + 1

    def sample_times(self) -> np.ndarray:
        dt = self.measure_interval
        return dt * np.arange(1, self.n_measurements + 1)

    def fock_cutoff(self) -> int:
        if self.n_max is not None:
            return self.n_max
        return dense.required_cutoff(self.modes.alpha)


def feature_names(cfg: ReservoirConfig) -> list[str]:
    names = []
    for k in range(1, cfg.n_measurements + 1):
        names += [f"n_{k}", f"q_{k}", f"p_{k}"]
    return names + ["bias"]


def features_for(x, cfg: ReservoirConfig) -> np.ndarray:
    """Deterministic feature vector of one input point."""
    a = map_input(x, cfg.encoding)
    profile = build_profile(a, cfg.encoding)
    check_inside_cavity(profile, cfg.modes.L, cfg.kinematics)
    taus = cfg.sample_times()
    out = np.empty(cfg.feature_dim)
    if cfg.engine == ENGINE_GAUSSIAN:
        props = gaussian.propagate(cfg.modes, profile, cfg.kinematics,
                                   cfg.step, taus)
        defect = gaussian.symplecticity_defect(props[-1].matrix)
        if defect > SYMPLECTICITY_GUARD:
            raise NumericalValidityError(
                f"symplecticity defect {defect:.3e} exceeds "
                f"{SYMPLECTICITY_GUARD}; reduce the step size")
        state0 = gaussian.initial_state(cfg.modes)
        for k, prop in enumerate(props):
            n, q, p = gaussian.detector_observables(
                gaussian.evolve(state0, prop))
            out[3 * k:3 * k + 3] = (n, q, p)
    else:
        kind = dense.TwoLevel()
        n_max = cfg.fock_cutoff()
        state0 = dense.dense_initial(kind, cfg.modes.alpha, n_max)
        run = dense.dense_propagate(state0, kind, cfg.modes, profile,
                                    cfg.kinematics, cfg.step, taus)
        dense.require_valid(run)
        for k, st in enumerate(run.states):
            out[3 * k:3 * k + 3] = dense.qubit_features(st)
    out[-1] = 1.0
    if not np.all(np.isfinite(out)):
        raise NumericalValidityError("non-finite feature values")
    return out


def _worker(args):
    x, cfg = args
    return features_for(x, cfg)


def feature_matrix(points, cfg: ReservoirConfig,
                   workers: int | None = None) -> np.ndarray:
    """Features for many points, one row per sample, input order preserved."""
    pts = np.asarray(points, dtype=float)
    if workers is None:
        workers = int(os.environ.get("RELQRC_WORKERS", "0")) or None
    if workers is not None and workers > 1 and len(pts) > 1:
        chunk = max(1, math.ceil(len(pts) / (4 * workers)))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_worker, ((x, cfg) for x in pts),
                                 chunksize=chunk))
    else:
        rows = [features_for(x, cfg) for x in pts]
    return np.vstack(rows)

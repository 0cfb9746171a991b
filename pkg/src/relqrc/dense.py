"""Dense state-vector evolution: detector x single truncated Fock mode.

The detector is either a two-level system (qubit) or a truncated harmonic
oscillator; the latter serves as a brute-force oracle for the Gaussian
engine.  The Hamiltonian is the single-mode interaction
H(tau) = g(tau) [ D a e^{-i(Omega tau + omega t)}
                + D a^dag e^{-i(Omega tau - omega t)} ] + h.c.
with D the detector lowering operator and g(tau) the position-dependent
mode-function coupling.  It is applied as a structured ladder product, never
materialized densely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import rk4_dense
from .errors import ConfigurationError, NumericalValidityError
from .gaussian import ModeSet, phase_rate
from .stepping import StepConfig, build_grid
from .worldline import AccelerationProfile, KinematicsMode

LEAKAGE_LIMIT = 1e-6
NORM_DRIFT_LIMIT = 1e-8


@dataclass(frozen=True)
class TwoLevel:
    """Qubit detector; b is replaced by the Pauli lowering operator."""

    @property
    def levels(self) -> int:
        return 2


@dataclass(frozen=True)
class Harmonic:
    """Truncated harmonic detector, the oracle for the Gaussian engine."""

    levels: int = 12

    def __post_init__(self):
        if self.levels < 2:
            raise ConfigurationError("harmonic detector needs >= 2 levels")


DetectorKind = TwoLevel | Harmonic


@dataclass
class DenseState:
    """Detector (x) truncated-Fock amplitudes, shape (levels, n_max + 1)."""

    amplitudes: np.ndarray
    n_max: int

    @property
    def levels(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def top_leakage(self) -> float:
        """Probability in the top three Fock levels (>= n_max - 2)."""
        return float(np.sum(np.abs(self.amplitudes[:, self.n_max - 2:]) ** 2))


@dataclass
class DenseRun:
    """Snapshots plus the validity diagnostics of one trajectory."""

    states: list[DenseState]
    max_leakage: float
    max_norm_drift: float

    @property
    def valid(self) -> bool:
        return self.max_leakage < LEAKAGE_LIMIT


def required_cutoff(alpha: complex) -> int:
    """Coherent-tail criterion n_max >= |alpha|^2 + 8 |alpha|."""
    return math.ceil(abs(alpha) ** 2 + 8.0 * abs(alpha))


def dense_initial(kind: DetectorKind, alpha: complex, n_max: int) -> DenseState:
    """Detector ground state (x) truncated coherent state |alpha>."""
    if n_max < required_cutoff(alpha):
        raise ConfigurationError(
            f"n_max={n_max} below the coherent-tail criterion "
            f"{required_cutoff(alpha)} for alpha={alpha}")
    n = np.arange(n_max + 1)
    # log-domain amplitudes: alpha^n / sqrt(n!) * e^{-|alpha|^2/2}
    log_mag = n * np.log(np.maximum(abs(alpha), 1e-300)) \
        - 0.5 * np.cumsum(np.concatenate(([0.0], np.log(np.arange(1, n_max + 1))))) \
        - 0.5 * abs(alpha) ** 2
    phase = np.angle(alpha) * n
    fock = np.exp(log_mag) * np.exp(1j * phase)
    if abs(alpha) == 0.0:
        fock = np.zeros(n_max + 1, dtype=complex)
        fock[0] = 1.0
    fock /= math.sqrt(float(np.sum(np.abs(fock) ** 2)))
    amps = np.zeros((kind.levels, n_max + 1), dtype=complex)
    amps[0] = fock
    return DenseState(amplitudes=amps, n_max=n_max)


def _ladder_elements(kind: DetectorKind) -> np.ndarray:
    """sd[l] = <l-1|D|l>: sqrt(l) for harmonic, (0, 1) for the qubit."""
    d = kind.levels
    if isinstance(kind, TwoLevel):
        return np.array([0.0, 1.0])
    return np.sqrt(np.arange(d, dtype=float))


def dense_propagate(state: DenseState, kind: DetectorKind, modes: ModeSet,
                    profile: AccelerationProfile, kmode: KinematicsMode,
                    cfg: StepConfig, sample_times) -> DenseRun:
    """Fixed-step RK4 trajectory with snapshots at sample_times."""
    if modes.n_modes != 1:
        raise ConfigurationError(
            "dense engine is single-mode; restrict the ModeSet first")
    if state.levels != kind.levels:
        raise ConfigurationError("state/detector level mismatch")
    omega = float(modes.omega[0])
    sd = _ladder_elements(kind)
    sf = np.sqrt(np.arange(state.n_max + 1, dtype=float))
    intervals, snap_zero = build_grid(
        profile, sample_times, phase_rate(modes, profile, kmode), cfg)
    psi = state.amplitudes.copy()
    snapshots: list[DenseState] = []
    if snap_zero:
        snapshots.append(DenseState(psi.copy(), state.n_max))
    max_leak = DenseState(psi, state.n_max).top_leakage()
    max_drift = abs(float(np.sum(np.abs(psi) ** 2)) - 1.0)
    for iv in intervals:
        h = (iv.tau_b - iv.tau_a) / iv.n_steps
        stage_taus = iv.tau_a + 0.5 * h * np.arange(2 * iv.n_steps + 1)
        _, x, t = profile.evaluate_arrays(stage_taus, kmode)
        g = modes.coupling * np.sin(omega * x) / math.sqrt(modes.L * omega)
        z1 = g * np.exp(-1j * (modes.Omega * stage_taus + omega * t))
        z2 = g * np.exp(-1j * (modes.Omega * stage_taus - omega * t))
        rk4_dense(psi, np.ascontiguousarray(z1), np.ascontiguousarray(z2),
                  sd, sf, h, iv.n_steps)
        snap = DenseState(psi.copy(), state.n_max)
        max_leak = max(max_leak, snap.top_leakage())
        max_drift = max(max_drift, abs(snap.norm() - 1.0))
        if iv.emit_sample:
            snapshots.append(snap)
    return DenseRun(states=snapshots, max_leakage=max_leak,
                    max_norm_drift=max_drift)


def qubit_features(state: DenseState) -> tuple[float, float, float]:
    """(pz, px, py): excited population and the sigma_x/sigma_y analogues
    of the quadratures, both normalized by 1/sqrt(2)."""
    if state.levels != 2:
        raise ConfigurationError("qubit features need a two-level detector")
    g, e = state.amplitudes[0], state.amplitudes[1]
    pz = float(np.sum(np.abs(e) ** 2))
    coh = complex(np.vdot(g, e))  # <sigma^-> = sum_n conj(g_n) e_n
    px = math.sqrt(2.0) * coh.real
    py = math.sqrt(2.0) * coh.imag
    return pz, px, py


def detector_observables(state: DenseState) -> tuple[float, float, float]:
    """(<n>, <q>, <p>) of a (possibly truncated) harmonic detector."""
    amps = state.amplitudes
    d = state.levels
    levels = np.arange(d)[:, None]
    n = float(np.sum(levels * np.abs(amps) ** 2))
    # <b> = sum_l sqrt(l+1) conj(psi_l) psi_{l+1}
    b = complex(np.sum(np.sqrt(np.arange(1, d))[:, None]
                       * np.conj(amps[:-1]) * amps[1:]))
    q = math.sqrt(2.0) * b.real
    p = math.sqrt(2.0) * b.imag
    return n, q, p


def require_valid(run: DenseRun) -> DenseRun:
    """Raise when the run violated the Fock-leakage or norm invariants."""
    if not run.valid:
        raise NumericalValidityError(
            f"Fock truncation leakage {run.max_leakage:.3e} exceeds "
            f"{LEAKAGE_LIMIT}")
    if run.max_norm_drift > NORM_DRIFT_LIMIT:
        raise NumericalValidityError(
            f"norm drift {run.max_norm_drift:.3e} exceeds {NORM_DRIFT_LIMIT}")
    return run

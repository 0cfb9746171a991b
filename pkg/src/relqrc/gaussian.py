"""Exact Gaussian evolution of the detector + cavity-mode system.

Mode operators are ordered (a_0, ..., a_N, a_0^dag, ..., a_N^dag) with
a_0 = b the detector.  A Gaussian state is the pair (mean vector,
covariance matrix sigma_ij = <Psi_i Psi_j> - <Psi_i><Psi_j>), and the
quadratic interaction Hamiltonian evolves it through the propagator S(tau)
solving dS/dtau = -i Omega_sympl F_sym(tau) S with S(0) = 1; then
sigma(tau) = S sigma(0) S^T and mean(tau) = S mean(0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import rk4_propagator
from .errors import ConfigurationError
from .stepping import StepConfig, build_grid
from .worldline import AccelerationProfile, KinematicsMode, WorldlinePoint

RESONANCE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ModeSet:
    """Detector frequency plus the retained cavity modes.

    mode_indices are cavity mode numbers n (omega_n = k_n = n*pi/L); the
    coherent mode must be among them and resonant with the detector.
    """

    mode_indices: tuple[int, ...]
    L: float
    Omega: float
    coupling: float
    coherent_mode: int
    alpha: complex

    def __post_init__(self):
        if not self.mode_indices:
            raise ConfigurationError("need at least one field mode")
        if len(set(self.mode_indices)) != len(self.mode_indices):
            raise ConfigurationError("duplicate mode indices")
        if any(n < 1 for n in self.mode_indices):
            raise ConfigurationError("mode indices must be >= 1")
        if self.L <= 0 or self.Omega <= 0 or self.coupling < 0:
            raise ConfigurationError("L, Omega must be positive; coupling >= 0")
        if self.coherent_mode not in self.mode_indices:
            raise ConfigurationError(
                f"coherent mode {self.coherent_mode} not among retained "
                f"modes {self.mode_indices}")
        omega_c = self.coherent_mode * math.pi / self.L
        if abs(self.Omega - omega_c) > RESONANCE_TOLERANCE * self.Omega:
            raise ConfigurationError(
                f"detector frequency {self.Omega} not resonant with mode "
                f"{self.coherent_mode} (omega = {omega_c})")

    @classmethod
    def resonant(cls, n_modes: int = 10, coherent_mode: int = 3,
                 Omega: float = 1.0, coupling: float = 0.1,
                 alpha: complex = 10j) -> "ModeSet":
        """Cavity sized so the detector is resonant with `coherent_mode`.

        n_modes = 1 keeps only the coherent mode itself; otherwise the
        lowest n_modes cavity modes are retained (and must include it).
        """
        L = coherent_mode * math.pi / Omega
        if n_modes == 1:
            indices: tuple[int, ...] = (coherent_mode,)
        elif n_modes >= coherent_mode:
            indices = tuple(range(1, n_modes + 1))
        else:
            raise ConfigurationError(
                f"n_modes={n_modes} would drop the coherent mode "
                f"{coherent_mode}; use n_modes=1 or >= {coherent_mode}")
        return cls(indices, L, Omega, coupling, coherent_mode, alpha)

    @property
    def n_modes(self) -> int:
        return len(self.mode_indices)

    @property
    def omega(self) -> np.ndarray:
        """Field-mode frequencies omega_n = k_n = n*pi/L."""
        return np.asarray(self.mode_indices, dtype=float) * math.pi / self.L

    @property
    def coherent_slot(self) -> int:
        """Index of the coherent mode in the (detector-first) slot layout."""
        return 1 + self.mode_indices.index(self.coherent_mode)

    @property
    def n_slots(self) -> int:
        return self.n_modes + 1

    def single_mode(self) -> "ModeSet":
        """Same physics restricted to the coherent mode only."""
        return ModeSet((self.coherent_mode,), self.L, self.Omega,
                       self.coupling, self.coherent_mode, self.alpha)


@dataclass
class GaussianState:
    mean: np.ndarray  # complex, length 2*(N+1)
    cov: np.ndarray   # complex, (2*(N+1))^2

    @property
    def n_slots(self) -> int:
        return self.mean.shape[0] // 2


@dataclass
class Propagator:
    tau: float
    matrix: np.ndarray


def symplectic_form(n_slots: int) -> np.ndarray:
    """Omega = [[0, 1], [-1, 0]] in annihilation/creation block form."""
    eye = np.eye(n_slots)
    zero = np.zeros((n_slots, n_slots))
    return np.block([[zero, eye], [-eye, zero]])


def initial_state(modes: ModeSet) -> GaussianState:
    """Detector ground state, coherent mode displaced by alpha, rest vacuum."""
    P = modes.n_slots
    mean = np.zeros(2 * P, dtype=complex)
    mean[modes.coherent_slot] = modes.alpha
    mean[P + modes.coherent_slot] = np.conj(modes.alpha)
    cov = np.zeros((2 * P, 2 * P), dtype=complex)
    for k in range(P):
        cov[k, P + k] = 1.0
    return GaussianState(mean=mean, cov=cov)


def _coupling_phases(modes: ModeSet, tau, x, t):
    """Coefficients c1 (b a_n term) and c2 (b a_n^dag term) per field mode.

    Shapes broadcast to (n_times, n_modes).
    """
    omega = modes.omega  # (N,)
    tau = np.asarray(tau, dtype=float)[:, None]
    x = np.asarray(x, dtype=float)[:, None]
    t = np.asarray(t, dtype=float)[:, None]
    g = modes.coupling * np.sin(omega * x) / np.sqrt(modes.L * omega)
    c1 = g * np.exp(-1j * (modes.Omega * tau + omega * t))
    c2 = g * np.exp(-1j * (modes.Omega * tau - omega * t))
    return c1, c2


def hamiltonian_fsym(modes: ModeSet, wp: WorldlinePoint) -> np.ndarray:
    """F_sym(tau) = F + F^T for H = Psi^T F Psi at one world-line point."""
    c1, c2 = _coupling_phases(modes, [wp.tau], [wp.x], [wp.t])
    c1, c2 = c1[0], c2[0]
    P = modes.n_slots
    F = np.zeros((2 * P, 2 * P), dtype=complex)
    for j in range(modes.n_modes):
        s = 1 + j
        F[0, s] += c1[j] / 2
        F[s, 0] += c1[j] / 2
        F[0, P + s] += c2[j] / 2
        F[P + s, 0] += c2[j] / 2
        F[P, P + s] += np.conj(c1[j]) / 2
        F[P + s, P] += np.conj(c1[j]) / 2
        F[P, s] += np.conj(c2[j]) / 2
        F[s, P] += np.conj(c2[j]) / 2
    return F + F.T


def _generator_indices(modes: ModeSet) -> tuple[np.ndarray, np.ndarray]:
    """Nonzero positions of A = -i Omega_sympl F_sym, in vals order."""
    N = modes.n_modes
    P = modes.n_slots
    field = np.arange(1, N + 1)
    ri = np.concatenate([np.zeros(N, int), np.zeros(N, int),
                         field, field,
                         np.full(N, P), np.full(N, P),
                         P + field, P + field])
    ci = np.concatenate([field, P + field,
                         np.zeros(N, int), np.full(N, P),
                         field, P + field,
                         np.zeros(N, int), np.full(N, P)])
    return ri.astype(np.int64), ci.astype(np.int64)


def _generator_values(c1: np.ndarray, c2: np.ndarray) -> np.ndarray:
    """A-entry values matching `_generator_indices`, shape (n_times, 8N)."""
    return np.concatenate([
        -1j * np.conj(c2),   # A[0, n]
        -1j * np.conj(c1),   # A[0, P+n]
        -1j * c2,            # A[n, 0]
        -1j * np.conj(c1),   # A[n, P]
        1j * c1,             # A[P, n]
        1j * c2,             # A[P, P+n]
        1j * c1,             # A[P+n, 0]
        1j * np.conj(c2),    # A[P+n, P]
    ], axis=1)


def generator(modes: ModeSet, wp: WorldlinePoint) -> np.ndarray:
    """Dense A(tau) = -i Omega_sympl F_sym(tau), for tests and diagnostics."""
    P = modes.n_slots
    A = np.zeros((2 * P, 2 * P), dtype=complex)
    c1, c2 = _coupling_phases(modes, [wp.tau], [wp.x], [wp.t])
    ri, ci = _generator_indices(modes)
    A[ri, ci] = _generator_values(c1, c2)[0]
    return A


def phase_rate(modes: ModeSet, profile: AccelerationProfile,
               kmode: KinematicsMode) -> float:
    """Fastest phase rate of the interaction coefficients, for step sizing."""
    omega_max = float(np.max(modes.omega))
    xi_max = profile.max_abs_rapidity()
    if kmode is KinematicsMode.RELATIVISTIC:
        return modes.Omega + omega_max * math.cosh(xi_max)
    # Newtonian: dt/dtau = 1 but sin(k x) is modulated at rate k*|xi|.
    return modes.Omega + omega_max * (1.0 + xi_max)


def propagate(modes: ModeSet, profile: AccelerationProfile,
              kmode: KinematicsMode, cfg: StepConfig,
              sample_times) -> list[Propagator]:
    """Propagators S(tau_s) at the requested sample times (one pass)."""
    P = modes.n_slots
    intervals, snap_zero = build_grid(
        profile, sample_times, phase_rate(modes, profile, kmode), cfg)
    ri, ci = _generator_indices(modes)
    S = np.eye(2 * P, dtype=complex)
    out: list[Propagator] = []
    if snap_zero:
        out.append(Propagator(0.0, S.copy()))
    for iv in intervals:
        h = (iv.tau_b - iv.tau_a) / iv.n_steps
        stage_taus = iv.tau_a + 0.5 * h * np.arange(2 * iv.n_steps + 1)
        _, x, t = profile.evaluate_arrays(stage_taus, kmode)
        c1, c2 = _coupling_phases(modes, stage_taus, x, t)
        vals = np.ascontiguousarray(_generator_values(c1, c2))
        rk4_propagator(S, vals, ri, ci, h, iv.n_steps)
        if iv.emit_sample:
            out.append(Propagator(iv.tau_b, S.copy()))
    return out


def evolve(state0: GaussianState, S: Propagator) -> GaussianState:
    """mean -> S mean, cov -> S cov S^T."""
    mat = S.matrix if isinstance(S, Propagator) else np.asarray(S)
    if mat.shape != state0.cov.shape:
        raise ConfigurationError(
            f"propagator shape {mat.shape} does not match state "
            f"{state0.cov.shape}")
    return GaussianState(mean=mat @ state0.mean,
                         cov=mat @ state0.cov @ mat.T)


def detector_observables(state: GaussianState) -> tuple[float, float, float]:
    """(<n>, <q>, <p>) of the detector with q = (b+b^dag)/sqrt2,
    p = i(b^dag-b)/sqrt2."""
    P = state.n_slots
    beta = state.mean[0]
    n = float(np.real(state.cov[P, 0])) + abs(beta) ** 2
    q = math.sqrt(2.0) * float(np.real(beta))
    p = math.sqrt(2.0) * float(np.imag(beta))
    return n, q, p


def symplecticity_defect(S: np.ndarray) -> float:
    """max |S Omega S^T - Omega|; zero for exact Hamiltonian flow."""
    form = symplectic_form(S.shape[0] // 2)
    return float(np.max(np.abs(S @ form @ S.T - form)))


def conjugation_defect(S: np.ndarray) -> float:
    """max |S - X conj(S) X| with X swapping the two operator blocks."""
    P = S.shape[0] // 2
    sw = np.roll(np.arange(2 * P), P)
    return float(np.max(np.abs(S - np.conj(S)[np.ix_(sw, sw)])))

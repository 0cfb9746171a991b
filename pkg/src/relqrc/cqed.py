"""Circuit-QED drive synthesis for a target simulated world line.

A Josephson atom (frequency epsilon) coupled to a microwave cavity mode
(frequency omega0) reproduces the accelerated-detector interaction when its
energy is modulated by zeta(tau) = dF/dtau with
F_pm = cos[omega_pm tau -+ theta_mp(tau)] - cos[omega_pm tau -+ theta_pm(tau)],
drive tones omega_pm = epsilon +- omega0 - Omega, and phase modulations
theta_pm(tau) = omega_n t(tau) +- k_n x(tau) read off the relativistic
world line.  zeta is produced analytically (the phase rates have closed
forms in the rapidity), never by numerical differentiation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .gaussian import ModeSet
from .worldline import AccelerationProfile, KinematicsMode

ETA_HARD_LIMIT = 0.1
ETA_WARN_LIMIT = 0.05
RWA_RATIO_WARN = 20.0
MIN_SAMPLES_PER_PERIOD = 20


@dataclass(frozen=True)
class DriveParams:
    """Physical drive parameters; frequencies share one declared unit and
    times are measured in its inverse (default MHz and microseconds)."""

    omega0: float        # cavity frequency
    epsilon: float       # atom energy
    Omega_sim: float     # simulated detector proper frequency
    g: float             # atom-cavity coupling
    eta: float           # drive strength, must stay well below 1
    omega_n: float       # simulated field-mode frequency
    k_n: float           # simulated field-mode wavenumber
    frequency_unit: str = "MHz"

    def __post_init__(self):
        if min(self.omega0, self.epsilon, self.Omega_sim, self.g,
               self.omega_n, self.k_n) <= 0:
            raise ConfigurationError("all drive frequencies must be positive")
        if self.eta < 0 or self.eta >= ETA_HARD_LIMIT:
            raise ConfigurationError(
                f"eta={self.eta} outside [0, {ETA_HARD_LIMIT}): the weak-"
                "drive expansion no longer holds")
        if self.eta > ETA_WARN_LIMIT:
            warnings.warn(f"eta={self.eta} > {ETA_WARN_LIMIT}: weak-drive "
                          "expansion is getting marginal", stacklevel=2)
        ratio = min(self.epsilon, self.omega0,
                    abs(self.epsilon - self.omega0),
                    self.epsilon + self.omega0) / self.g
        if ratio < RWA_RATIO_WARN:
            warnings.warn(
                f"rotating-wave validity ratio {ratio:.1f} < "
                f"{RWA_RATIO_WARN}: keep g much smaller than the detunings",
                stacklevel=2)


@dataclass
class DriveSignal:
    tau: np.ndarray
    theta_plus: np.ndarray
    theta_minus: np.ndarray
    theta_dot_plus: np.ndarray
    theta_dot_minus: np.ndarray
    F_plus: np.ndarray
    F_minus: np.ndarray
    F: np.ndarray
    zeta_exact: np.ndarray
    zeta_slow: np.ndarray
    diagnostics: dict = field(default_factory=dict)


@dataclass
class CouplingReport:
    simulated_value: float
    physical_value: float

    @property
    def ratio(self) -> float:
        """simulated / physical; inf flags a vanishing physical coupling."""
        if self.physical_value == 0.0:
            return math.inf if self.simulated_value else 1.0
        return self.simulated_value / self.physical_value

    @property
    def matches(self) -> bool:
        return (self.physical_value > 0.0
                and abs(self.ratio - 1.0) < 1e-6)


def drive_frequencies(p: DriveParams) -> tuple[float, float]:
    """omega_pm = epsilon +- omega0 - Omega_sim."""
    plus = p.epsilon + p.omega0 - p.Omega_sim
    minus = p.epsilon - p.omega0 - p.Omega_sim
    if plus <= 0 or minus <= 0:
        raise ConfigurationError(
            f"degenerate drive tones omega_+={plus}, omega_-={minus}: "
            "both must be positive")
    return plus, minus


def phase_modulation(profile: AccelerationProfile, p: DriveParams, tau):
    """theta_pm = omega_n t +- k_n x and the closed-form rates
    theta_dot_pm = omega_n cosh(xi) +- k_n sinh(xi)."""
    xi, x, t = profile.evaluate_arrays(tau, KinematicsMode.RELATIVISTIC)
    theta_p = p.omega_n * t + p.k_n * x
    theta_m = p.omega_n * t - p.k_n * x
    dot_p = p.omega_n * np.cosh(xi) + p.k_n * np.sinh(xi)
    dot_m = p.omega_n * np.cosh(xi) - p.k_n * np.sinh(xi)
    return theta_p, theta_m, dot_p, dot_m


def drive_waveform(p: DriveParams, profile: AccelerationProfile,
                   tau_grid) -> DriveSignal:
    """Drive tones, exact zeta, and the slow four-sine approximation."""
    tau = np.asarray(tau_grid, dtype=float)
    if tau.size == 0:
        empty = np.empty(0)
        return DriveSignal(tau, *([empty.copy() for _ in range(9)]),
                           diagnostics={})
    w_p, w_m = drive_frequencies(p)
    if tau.size > 1:
        h = float(np.max(np.diff(tau)))
        per_period = 2.0 * math.pi / w_p / h
        if per_period < MIN_SAMPLES_PER_PERIOD:
            raise ConfigurationError(
                f"tau grid undersampled: {per_period:.1f} samples per "
                f"2*pi/omega_+ period, need >= {MIN_SAMPLES_PER_PERIOD}")
    th_p, th_m, dot_p, dot_m = phase_modulation(profile, p, tau)
    F_plus = np.cos(w_p * tau - th_m) - np.cos(w_p * tau - th_p)
    F_minus = np.cos(w_m * tau + th_p) - np.cos(w_m * tau + th_m)
    F = F_plus + F_minus
    zeta_exact = (-(w_p - dot_m) * np.sin(w_p * tau - th_m)
                  + (w_p - dot_p) * np.sin(w_p * tau - th_p)
                  - (w_m + dot_p) * np.sin(w_m * tau + th_p)
                  + (w_m + dot_m) * np.sin(w_m * tau + th_m))
    zeta_slow = (-w_p * np.sin(w_p * tau - th_m)
                 + w_p * np.sin(w_p * tau - th_p)
                 - w_m * np.sin(w_m * tau + th_p)
                 + w_m * np.sin(w_m * tau + th_m))
    max_rate = float(max(np.max(np.abs(dot_p)), np.max(np.abs(dot_m))))
    diagnostics = {
        "max_abs_zeta_error": float(np.max(np.abs(zeta_exact - zeta_slow))),
        "max_theta_dot": max_rate,
        "modulation_ratio": max_rate / min(w_p, w_m),
        "omega_plus": w_p,
        "omega_minus": w_m,
    }
    return DriveSignal(tau, th_p, th_m, dot_p, dot_m, F_plus, F_minus, F,
                       zeta_exact, zeta_slow, diagnostics)


def effective_coupling_check(p: DriveParams, modes: ModeSet) -> CouplingReport:
    """g * eta (in units of Omega_sim) must equal lambda / sqrt(L omega_n)
    of the simulated cavity model."""
    omega_coherent = modes.coherent_mode * math.pi / modes.L
    simulated = modes.coupling / math.sqrt(modes.L * omega_coherent)
    physical = p.g * p.eta / p.Omega_sim
    return CouplingReport(simulated_value=simulated, physical_value=physical)


def export_csv(signal: DriveSignal, path) -> None:
    """tau, theta_pm, theta_dot_pm, F, zeta columns, directly plottable."""
    header = ("tau,theta_plus,theta_minus,theta_dot_plus,theta_dot_minus,"
              "F,zeta_exact,zeta_slow")
    cols = np.column_stack([
        signal.tau, signal.theta_plus, signal.theta_minus,
        signal.theta_dot_plus, signal.theta_dot_minus, signal.F,
        signal.zeta_exact, signal.zeta_slow])
    np.savetxt(path, cols, delimiter=",", header=header, comments="",
               fmt="%.12g")

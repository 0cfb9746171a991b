"""World lines of a detector with piecewise-constant proper acceleration.

All trajectories live in 1+1D Minkowski spacetime with metric diag(+1, -1)
and natural units (hbar = c = 1).  Within a constant-acceleration segment
the trajectory has an exact closed form, so no quadrature is ever needed:
segment boundaries are the only special points.

Two kinematics are supported: the physical relativistic world line
(x' = sinh(xi), t' = cosh(xi)) and the "Newtonian" control variant
(x' = xi, t = tau), where xi(tau) is the rapidity, i.e. the running
integral of the proper acceleration.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, OutOfRangeError

# Below this magnitude a segment is treated as unaccelerated to avoid the
# 0/0 in the cosh/sinh closed forms.
ZERO_ACCEL_THRESHOLD = 1e-12


class KinematicsMode(enum.Enum):
    RELATIVISTIC = "relativistic"
    NEWTONIAN = "newtonian"


@dataclass(frozen=True)
class WorldlinePoint:
    """Kinematic state at proper time tau: coordinate time, position, rapidity."""

    tau: float
    t: float
    x: float
    xi: float


def _segment_xtx(a: float, d: float, xi0: float, x0: float, t0: float,
                 mode: KinematicsMode) -> tuple[float, float, float]:
    """Advance (xi, x, t) across one constant-acceleration piece of duration d."""
    xi1 = xi0 + a * d
    if mode is KinematicsMode.RELATIVISTIC:
        if abs(a) < ZERO_ACCEL_THRESHOLD:
            return xi0, x0 + d * math.sinh(xi0), t0 + d * math.cosh(xi0)
        x1 = x0 + (math.cosh(xi1) - math.cosh(xi0)) / a
        t1 = t0 + (math.sinh(xi1) - math.sinh(xi0)) / a
        return xi1, x1, t1
    # Newtonian: position integrates the rapidity, time is proper time.
    x1 = x0 + d * xi0 + 0.5 * a * d * d
    return xi1, x1, t0 + d


@dataclass(frozen=True)
class AccelerationProfile:
    """Ordered (proper acceleration, proper duration) segments.

    Immutable; the per-segment boundary tables for both kinematics modes are
    precomputed once so that evaluation at arbitrary proper times is O(log K).
    """

    segments: tuple[tuple[float, float], ...]
    initial: tuple[float, float, float] = (0.0, 0.0, 0.0)  # (t0, x0, xi0)
    _tables: dict = field(default_factory=dict, repr=False, compare=False)

    def __init__(self, segments, initial=(0.0, 0.0, 0.0)):
        segs = tuple((float(a), float(d)) for a, d in segments)
        for a, d in segs:
            if not (d > 0.0) or not math.isfinite(d) or not math.isfinite(a):
                raise ConfigurationError(
                    f"segment durations must be finite and positive, got {(a, d)}")
        if not segs:
            raise ConfigurationError("profile needs at least one segment")
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "initial", tuple(float(v) for v in initial))
        object.__setattr__(self, "_tables", {})

    @property
    def total_duration(self) -> float:
        return float(self.edges[-1])

    @property
    def edges(self) -> np.ndarray:
        """Strictly increasing proper-time grid tau_0 = 0 < ... < tau_K."""
        key = "edges"
        if key not in self._tables:
            durs = np.array([d for _, d in self.segments])
            self._tables[key] = np.concatenate(([0.0], np.cumsum(durs)))
        return self._tables[key]

    @property
    def accelerations(self) -> np.ndarray:
        key = "accel"
        if key not in self._tables:
            self._tables[key] = np.array([a for a, _ in self.segments])
        return self._tables[key]

    def _edge_table(self, mode: KinematicsMode) -> tuple[np.ndarray, ...]:
        """(xi, x, t) at every segment boundary, including the start."""
        if mode not in self._tables:
            t0, x0, xi0 = self.initial[0], self.initial[1], self.initial[2]
            xi = [xi0]
            x = [x0]
            t = [t0]
            for a, d in self.segments:
                xi0, x0, t0 = _segment_xtx(a, d, xi0, x0, t0, mode)
                xi.append(xi0)
                x.append(x0)
                t.append(t0)
            self._tables[mode] = (np.array(xi), np.array(x), np.array(t))
        return self._tables[mode]

    def max_abs_rapidity(self) -> float:
        """Largest |xi| over the whole profile (attained at a boundary)."""
        xi, _, _ = self._edge_table(KinematicsMode.RELATIVISTIC)
        return float(np.max(np.abs(xi)))

    def _locate(self, tau: np.ndarray) -> np.ndarray:
        edges = self.edges
        total = float(edges[-1])
        tol = 1e-9 * max(1.0, total)
        if np.any(tau < -tol) or np.any(tau > total + tol):
            raise OutOfRangeError(
                f"proper time outside [0, {total}]: "
                f"min={tau.min()}, max={tau.max()}")
        idx = np.searchsorted(edges, tau, side="right") - 1
        return np.clip(idx, 0, len(self.segments) - 1)

    def evaluate_arrays(self, tau, mode: KinematicsMode):
        """Vectorized (xi, x, t) at the given proper times."""
        tau = np.atleast_1d(np.asarray(tau, dtype=float))
        idx = self._locate(tau)
        xi_e, x_e, t_e = self._edge_table(mode)
        a = self.accelerations[idx]
        dt = tau - self.edges[idx]
        xi0 = xi_e[idx]
        x0 = x_e[idx]
        t0 = t_e[idx]
        xi = xi0 + a * dt
        if mode is KinematicsMode.RELATIVISTIC:
            small = np.abs(a) < ZERO_ACCEL_THRESHOLD
            a_safe = np.where(small, 1.0, a)
            x = np.where(small,
                         x0 + dt * np.sinh(xi0),
                         x0 + (np.cosh(xi) - np.cosh(xi0)) / a_safe)
            t = np.where(small,
                         t0 + dt * np.cosh(xi0),
                         t0 + (np.sinh(xi) - np.sinh(xi0)) / a_safe)
            xi = np.where(small, xi0, xi)
        else:
            x = x0 + dt * xi0 + 0.5 * a * dt * dt
            t = tau
        return xi, x, t


def rapidity(profile: AccelerationProfile, tau: float) -> float:
    """Rapidity xi(tau): the running integral of the proper acceleration."""
    xi, _, _ = profile.evaluate_arrays(tau, KinematicsMode.RELATIVISTIC)
    return float(xi[0])


def evaluate(profile: AccelerationProfile, tau: float,
             mode: KinematicsMode) -> WorldlinePoint:
    """World-line point at proper time tau, exact per-segment closed form."""
    xi, x, t = profile.evaluate_arrays(tau, mode)
    return WorldlinePoint(tau=float(tau), t=float(t[0]), x=float(x[0]),
                          xi=float(xi[0]))


def check_inside_cavity(profile: AccelerationProfile, length: float,
                        mode: KinematicsMode, n_grid: int = 512) -> bool:
    """Warn (never clamp) when the trajectory leaves the cavity [0, L]."""
    taus = np.linspace(0.0, profile.total_duration, n_grid)
    _, x, _ = profile.evaluate_arrays(taus, mode)
    if x.min() < -1e-9 or x.max() > length + 1e-9:
        warnings.warn(
            f"world line leaves the cavity [0, {length:g}]: "
            f"x in [{x.min():.3g}, {x.max():.3g}]",
            stacklevel=2)
        return False
    return True

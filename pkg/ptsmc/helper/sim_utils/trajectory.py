"""Recorded trajectories and the runtime property checks evaluated on them."""

from dataclasses import dataclass, fields
from typing import Optional

import numpy as np

from ..control_utils.sliding import Regime
from ..ext_utils.exceptions import DomainError

ENVELOPE_TOL = 1e-2
OBSERVER_BOUND_FACTOR = 1.2


@dataclass(frozen=True)
class Trajectory:
    kind: str
    times: np.ndarray
    states: np.ndarray
    controls: np.ndarray
    sliding: np.ndarray
    regimes: np.ndarray
    envelope: np.ndarray
    errors: Optional[np.ndarray] = None
    d_hat: Optional[np.ndarray] = None
    disturbance: Optional[np.ndarray] = None
    k2: Optional[np.ndarray] = None
    max_norm_drift: float = 0.0

    def __post_init__(self):
        size = len(self.times)
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, np.ndarray):
                continue
            if len(value) != size:
                raise DomainError(f"Trajectory column {f.name} has {len(value)} rows, expected {size}")
            value.setflags(write=False)
        if size > 1 and np.any(np.diff(self.times) <= 0):
            raise DomainError("Trajectory times must be strictly increasing")

    def __len__(self):
        return len(self.times)

    @property
    def prescribed(self):
        return self.regimes == Regime.PRESCRIBED.value

    def index_at(self, t):
        """First recorded sample at or after t."""
        i = int(np.searchsorted(self.times, t - 1e-9))
        return min(i, len(self) - 1)

    def error_signal(self, component=None):
        if self.kind == "attitude":
            return np.abs(self.errors[:, :3]).max(axis=1)
        if component is not None:
            return np.abs(self.states[:, component])
        return np.abs(self.states).max(axis=1)

    def abs_controls(self):
        return np.abs(self.controls).max(axis=1)


@dataclass(frozen=True)
class CheckReport:
    max_violation: float
    passed: bool


def envelope_values(times, s0, spec):
    """sqrt(2 V0) ((t_f - t) / t_f)^eta on the prescribed phase, nan afterwards."""
    scale = float(np.linalg.norm(np.atleast_1d(s0)))
    times = np.asarray(times, dtype=float)
    env = np.full(times.shape, np.nan)
    mask = times < spec.t_switch
    env[mask] = scale * ((spec.t_f - times[mask]) / spec.t_f) ** spec.eta
    return env


def envelope_check(traj, spec, tol=ENVELOPE_TOL):
    if not len(traj):
        raise DomainError("Envelope check on an empty trajectory")
    mask = traj.prescribed & (traj.times < spec.t_switch)
    if not mask.any():
        raise DomainError("Trajectory does not cover the prescribed phase")
    scale = float(np.linalg.norm(traj.sliding[0]))
    s_abs = np.abs(traj.sliding[mask]).max(axis=1)
    violation = float((s_abs - traj.envelope[mask]).max())
    return CheckReport(violation, violation <= tol * scale)


def observer_bound_check(traj, factor=OBSERVER_BOUND_FACTOR):
    if traj.d_hat is None or traj.k2 is None:
        raise DomainError("Trajectory carries no observer estimate")
    if len(traj) < 2:
        raise DomainError("Observer bound needs at least two samples")
    err = np.abs(traj.d_hat[1:] - traj.disturbance[1:]).max(axis=1)
    violation = float((err - factor * traj.k2[1:]).max())
    return CheckReport(violation, violation <= 0.0)


def first_crossing(traj, tol, component=None):
    below = np.flatnonzero(traj.error_signal(component) < tol)
    return float(traj.times[below[0]]) if below.size else None


def settling_time(traj, tol, component=None):
    """First time after which the error signal stays below tol."""
    above = np.flatnonzero(traj.error_signal(component) >= tol)
    if not above.size:
        return float(traj.times[0])
    if above[-1] == len(traj) - 1:
        return None
    return float(traj.times[above[-1] + 1])


def reaching_margin(traj, spec, dist, plant):
    """s s' + eta s^2 / (t_f - t) on the prescribed samples of a second-order run.

    The sliding-mode reaching condition holds where this is <= 0.
    """
    if spec.n != 2 or traj.kind != "scalar":
        raise DomainError("Reaching margin is defined for scalar second-order runs")
    mask = traj.prescribed
    out = []
    for t, x, u, s in zip(
        traj.times[mask], traj.states[mask], traj.controls[mask, 0], traj.sliding[mask, 0]
    ):
        tau = spec.t_f - t
        x2_dot = plant.f(x) + plant.g(x) * u + dist(t)[0]
        s_dot = (spec.eta - 1) * x[1] + tau * x2_dot
        out.append(s * s_dot + spec.eta * s * s / tau)
    return np.array(out)

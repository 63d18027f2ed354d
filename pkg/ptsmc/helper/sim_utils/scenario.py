"""Fixed-step closed-loop simulation of the scalar chains and the spacecraft."""

from dataclasses import dataclass
from enum import Enum
from math import sin, sqrt

import numpy as np

from ... import LOGGER
from ..control_utils.control import (
    SECOND_ORDER_SURFACE,
    attitude_law,
    attitude_sliding,
    chain_law,
    scalar_sliding,
)
from ..control_utils.dynamics import (
    AttitudeState,
    Quaternion,
    cross,
    matvec,
    quaternion_rate,
    rows,
    tracking_errors,
)
from ..control_utils.observer import k2_schedule
from ..ext_utils.exceptions import DisturbanceBoundError, DomainError
from .integrator import rk4_step
from .trajectory import Trajectory, envelope_values


class DisturbanceKind(Enum):
    ZERO = "zero"
    SINUSOID = "sinusoid"


@dataclass(frozen=True)
class DisturbanceModel:
    kind: DisturbanceKind
    amplitude: tuple
    omega: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "amplitude", tuple(float(a) for a in self.amplitude))
        object.__setattr__(self, "_amp", np.array(self.amplitude))

    @classmethod
    def zero(cls, dim):
        return cls(DisturbanceKind.ZERO, (0.0,) * dim)

    @classmethod
    def sinusoid(cls, amplitude, omega):
        return cls(DisturbanceKind.SINUSOID, tuple(amplitude), omega)

    def __call__(self, t):
        if self.kind is DisturbanceKind.ZERO:
            return np.zeros_like(self._amp)
        return self._amp * np.sin(self.omega * t)

    def derivative(self, t):
        if self.kind is DisturbanceKind.ZERO:
            return np.zeros_like(self._amp)
        return self._amp * self.omega * np.cos(self.omega * t)

    def sampler(self, axis=None):
        """Plain-float form of __call__: t -> list of per-axis values, or t -> value
        of a single axis when axis is given."""
        amp, omega = self.amplitude, self.omega
        if self.kind is DisturbanceKind.ZERO:
            if axis is not None:
                return lambda t: 0.0
            return lambda t: [0.0] * len(amp)
        if axis is not None:
            a = amp[axis]
            return lambda t: a * sin(omega * t)

        def sample(t):
            s = sin(omega * t)
            return [a * s for a in amp]

        return sample

    def bound(self):
        """sup_t ||d(t)||_inf"""
        if self.kind is DisturbanceKind.ZERO:
            return 0.0
        return float(np.abs(self._amp).max())

    def rate_bound(self):
        """sup_t ||d'(t)||_inf"""
        return self.bound() * abs(self.omega)


@dataclass(frozen=True)
class SimConfig:
    dt: float
    t_end: float
    renorm_quaternion: bool = True
    record_stride: int = 1

    def validate(self, spec=None):
        if not self.dt > 0:
            raise DomainError(f"dt must be positive, got {self.dt}")
        if not self.t_end > 0:
            raise DomainError(f"t_end must be positive, got {self.t_end}")
        if self.record_stride < 1:
            raise DomainError(f"record_stride must be >= 1, got {self.record_stride}")
        if spec is not None and spec.delta > 0 and self.dt > spec.delta / 10 * (1 + 1e-9):
            raise DomainError(
                f"dt={self.dt} cannot resolve the switch margin delta={spec.delta} (need dt <= delta/10)"
            )

    @property
    def steps(self):
        return int(round(self.t_end / self.dt))

    def records(self, k):
        return k % self.record_stride == 0 or k == self.steps


def check_disturbance_bound(gains, dist):
    if gains.K < dist.bound():
        raise DisturbanceBoundError(
            f"Switching gain K={gains.K} is below the matched disturbance bound "
            f"max|d|={dist.bound()}; Assumption 1 (bounded matched disturbance) requires K >= max|d|"
        )


def run_scalar_scenario(order, spec, gains, plant, dist, sim, x0, surf=None):
    if spec.n != order:
        raise DomainError(f"Spec order n={spec.n} does not match plant order {order}")
    if surf is None:
        if order != 2:
            raise DomainError("A classical surface is required for order > 2")
        surf = SECOND_ORDER_SURFACE
    if surf.n != order or not surf.is_hurwitz():
        raise DomainError(f"Classical surface a={surf.a} is not a Hurwitz surface of order {order}")
    x = np.asarray(x0, dtype=float)
    if x.shape != (order,):
        raise DomainError(f"Initial state must have {order} entries, got {x.shape}")
    check_disturbance_bound(gains, dist)
    sim.validate(spec)

    law = chain_law(spec, surf, gains, plant)
    f_of, g_of = plant.f, plant.g
    d_of = dist.sampler(axis=0)

    def rate(t, x):
        dx = x[1:]
        dx.append(f_of(x) + g_of(x) * law(t, x) + d_of(t))
        return dx

    LOGGER.info(f"Scalar run: n={order}, eta={spec.eta}, t_f={spec.t_f}, delta={spec.delta}, dt={sim.dt}")
    x = x.tolist()
    times, states, controls, sliding, regimes = [], [], [], [], []
    for k in range(sim.steps + 1):
        t = k * sim.dt
        if sim.records(k):
            sv = scalar_sliding(x, t, spec, surf)
            times.append(t)
            states.append(x)
            controls.append([law(t, x)])
            sliding.append([sv.s])
            regimes.append(sv.regime.value)
        if k < sim.steps:
            x = rk4_step(rate, x, t, sim.dt)

    sliding = np.array(sliding, dtype=float)
    return Trajectory(
        kind="scalar",
        times=np.array(times),
        states=np.array(states),
        controls=np.array(controls, dtype=float),
        sliding=sliding,
        regimes=np.array(regimes),
        envelope=envelope_values(times, sliding[0], spec),
        disturbance=np.array([dist(t) for t in times]),
    )


def run_attitude_scenario(body, q0, w0, ref, dist, obs_cfg, spec, gains, sim, z0=None):
    check_disturbance_bound(gains, dist)
    sim.validate(spec)
    if len(dist.amplitude) != 3:
        raise DomainError("Spacecraft disturbance needs three axes")
    l1, l2, l3 = np.diag(obs_cfg.L).tolist()
    J = body.inertia_rows
    J_inv = body.inertia_inv_rows
    LJ_inv = rows(obs_cfg.L @ body.inertia_inv)
    law = attitude_law(ref, spec, gains, body)
    k2_of = k2_schedule(obs_cfg, body)
    d_of = dist.sampler()
    z0 = np.zeros(3) if z0 is None else np.asarray(z0, dtype=float)
    y = [*q0.v.tolist(), q0.s, *np.asarray(w0, dtype=float).tolist(), *z0.tolist()]

    def estimate(y):
        # d_hat = z + L w, L diagonal
        return [y[7] + l1 * y[4], y[8] + l2 * y[5], y[9] + l3 * y[6]]

    def rate(t, y):
        q, w = y[0:4], y[4:7]
        d_hat = estimate(y)
        u = law(t, q, w, d_hat, k2_of(t))
        d = d_of(t)
        gyro = cross(w, matvec(J, w))
        net = [u_i - g_i for u_i, g_i in zip(u, gyro)]
        w_dot = matvec(J_inv, [n_i + d_i for n_i, d_i in zip(net, d)])
        z_dot = matvec(LJ_inv, [n_i + e_i for n_i, e_i in zip(net, d_hat)])
        return [*quaternion_rate(q, w), *w_dot, -z_dot[0], -z_dot[1], -z_dot[2]]

    LOGGER.info(f"Attitude run: eta={spec.eta}, t_f={spec.t_f}, delta={spec.delta}, dt={sim.dt}")
    rec = {key: [] for key in ("t", "x", "e", "u", "s", "r", "dh", "d", "k2")}
    max_drift = 0.0
    for k in range(sim.steps + 1):
        t = k * sim.dt
        if sim.records(k):
            state = AttitudeState(Quaternion(y[0:3], y[3], check=False), y[4:7])
            d_hat = estimate(y)
            eps1, eps4, _ = tracking_errors(state, ref, t)
            sv = attitude_sliding(state, ref, t, spec)
            rec["t"].append(t)
            rec["x"].append(y[:7])
            rec["e"].append(np.append(eps1, eps4))
            rec["u"].append(law(t, y[0:4], y[4:7], d_hat, k2_of(t)))
            rec["s"].append(sv.s)
            rec["r"].append(sv.regime.value)
            rec["dh"].append(d_hat)
            rec["d"].append(dist(t))
            rec["k2"].append(k2_of(t))
        if k < sim.steps:
            y = rk4_step(rate, y, t, sim.dt)
            norm = sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3])
            max_drift = max(max_drift, abs(norm - 1.0))
            if sim.renorm_quaternion:
                y[0:4] = [v / norm for v in y[0:4]]

    sliding = np.array(rec["s"], dtype=float)
    return Trajectory(
        kind="attitude",
        times=np.array(rec["t"]),
        states=np.array(rec["x"]),
        controls=np.array(rec["u"]),
        sliding=sliding,
        regimes=np.array(rec["r"]),
        envelope=envelope_values(rec["t"], sliding[0], spec),
        errors=np.array(rec["e"]),
        d_hat=np.array(rec["dh"]),
        disturbance=np.array(rec["d"]),
        k2=np.array(rec["k2"]),
        max_norm_drift=max_drift,
    )

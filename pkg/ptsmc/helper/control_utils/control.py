"""Prescribed-time sliding-mode control laws.

Every law is two-phase: the time-varying sliding variable is used while
t < t_f - delta and a classical linear surface afterwards. With delta = 0 the
switch happens at t_f itself.

The scalar and attitude laws are compiled once per run into closures over
plain floats (chain_law, attitude_law); the public functions build the same
closures, so both paths evaluate identical arithmetic.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..ext_utils.exceptions import (
    AttitudeSingularityError,
    DomainError,
    SingularPlantError,
)
from .dynamics import cross, matvec, quaternion_rate, tracking_errors
from .sliding import (
    ClassicalSurface,
    Regime,
    SlidingValue,
    classical_sliding,
    pt_sliding,
)

G_MIN = 1e-9
COND_MAX = 1e12
Q4_MIN = 1e-3

SECOND_ORDER_SURFACE = ClassicalSurface((1.0,))


@dataclass(frozen=True)
class ControlGains:
    K: float
    K1: float
    phi: float = 0.0

    def __post_init__(self):
        if not self.K > 0:
            raise DomainError(f"Switching gain K must be positive, got {self.K}")
        if not self.K1 > 0:
            raise DomainError(f"Terminal gain K1 must be positive, got {self.K1}")
        if not self.phi >= 0:
            raise DomainError(f"Boundary layer phi must be >= 0, got {self.phi}")

    def switch(self, s):
        """sgn(s) with sgn(0) = 0, or the boundary-layer saturation when phi > 0."""
        if self.phi > 0:
            return np.clip(np.asarray(s) / self.phi, -1.0, 1.0)
        return np.sign(s)

    def scalar_switch(self):
        """switch() for a single float, as a closure."""
        phi = self.phi
        if phi > 0:
            return lambda s: min(1.0, max(-1.0, s / phi))
        return lambda s: (s > 0) - (s < 0)


@dataclass(frozen=True)
class ScalarPlant:
    """x_n' = f(x) + g(x) u + d for the chain x1' = x2, ..., x_{n-1}' = x_n."""

    f: Callable[[np.ndarray], float]
    g: Callable[[np.ndarray], float]

    @classmethod
    def chain_integrator(cls):
        return cls(f=lambda x: 0.0, g=lambda x: 1.0)


@dataclass(frozen=True)
class VectorPlant:
    """x1' = F(x1, x2), x2' = H(x1, x2) + G(x1, x2) u + d."""

    F: Callable
    H: Callable
    G: Callable
    dF_dx1: Callable
    dF_dx2: Callable

    @classmethod
    def double_integrator(cls, m):
        eye, zero = np.eye(m), np.zeros((m, m))
        return cls(
            F=lambda x1, x2: np.asarray(x2, dtype=float),
            H=lambda x1, x2: np.zeros(m),
            G=lambda x1, x2: eye,
            dF_dx1=lambda x1, x2: zero,
            dF_dx2=lambda x1, x2: eye,
        )


def scalar_sliding(x, t, spec, surf):
    if t < spec.t_switch:
        return pt_sliding(x, t, spec)
    return classical_sliding(x, surf)


def chain_law(spec, surf, gains, plant):
    """u = law(t, x) for an integrator chain, x being a sequence of floats.

    Shapes are not checked here; plant.f and plant.g receive x as given.
    """
    n = spec.n
    if surf.n != n:
        raise DomainError(f"Order mismatch: spec n={n}, surface n={surf.n}")
    t_f, t_switch = spec.t_f, spec.t_switch
    c = spec.coeffs
    dc = tuple(float(v) for v in spec.derivative_coeffs)
    lead = dc[n - 1]
    reach = spec.eta + n - 2
    a = surf.a
    K, K1 = gains.K, gains.K1
    switch = gains.scalar_switch()
    f_of, g_of = plant.f, plant.g
    s_order = tuple(range(n - 2, -1, -1))
    num_order = tuple(range(n - 3, -1, -1))

    def law(t, x):
        g = g_of(x)
        if abs(g) < G_MIN:
            raise SingularPlantError(f"|g(x)|={abs(g):.3g} below {G_MIN}", t=t)
        f = f_of(x)
        if t < t_switch:
            tau = t_f - t
            s = c[n - 1] * x[n - 1]
            for i in s_order:
                s = s * tau + c[i] * x[i]
            num = dc[n - 2] * x[n - 1]
            for i in num_order:
                num = num * tau + dc[i] * x[i + 1]
            v = -num / (lead * tau ** (n - 1)) - f - K * switch(s) - reach * s / tau**n
        else:
            s = x[n - 1]
            tail = 0.0
            for i, a_i in enumerate(a):
                s = s + a_i * x[i]
                tail += a_i * x[i + 1]
            v = -f - K * switch(s) - K1 * s - tail
        return v / g

    return law


def ptsmc_second_order(x, t, spec, gains, plant):
    if spec.n != 2:
        raise DomainError(f"Second-order law needs n=2, got n={spec.n}")
    return ptsmc_high_order(x, t, spec, SECOND_ORDER_SURFACE, gains, plant)


def ptsmc_high_order(x, t, spec, surf, gains, plant):
    n = spec.n
    x = np.asarray(x, dtype=float)
    if x.shape != (n,) or surf.n != n:
        raise DomainError(
            f"Order mismatch: spec n={n}, state {x.shape}, surface n={surf.n}"
        )
    return chain_law(spec, surf, gains, plant)(t, x.tolist())


def _vector_law(t, spec, gains, s, f_val, drift, dfdx2, h, g):
    """Two-phase law for x1' = F, x2' = H + G u + d.

    drift is dF/dt minus the dF/dx2 x2' contribution, i.e. dF/dx1 F for a
    time-invariant F. The switching gain is scaled by the induced 2-norm of
    dF/dx2.
    """
    M = dfdx2 @ g
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[-1] == 0 or sv[0] / sv[-1] > COND_MAX:
        raise SingularPlantError("(dF/dx2) G is ill conditioned", t=t)
    gain_norm = np.linalg.norm(dfdx2, 2)
    rhs = dfdx2 @ h + gains.K * gain_norm * gains.switch(s) + drift
    if t < spec.t_switch:
        tau = spec.t_f - t
        rhs = rhs + (spec.eta - 1) / tau * f_val + spec.eta * s / tau**2
    else:
        rhs = rhs + gains.K1 * s + f_val
    return -np.linalg.solve(M, rhs)


def vector_sliding(x1, x1_dot, t, spec):
    if t < spec.t_switch:
        return pt_sliding(np.vstack([x1, x1_dot]), t, spec)
    return SlidingValue(np.asarray(x1) + np.asarray(x1_dot), Regime.TERMINAL)


def ptsmc_vector_second_order(x1, x2, t, spec, gains, plant):
    if spec.n != 2:
        raise DomainError(f"Vector law needs n=2, got n={spec.n}")
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    f_val = plant.F(x1, x2)
    s = vector_sliding(x1, f_val, t, spec).s
    drift = plant.dF_dx1(x1, x2) @ f_val
    return _vector_law(
        t,
        spec,
        gains,
        s,
        f_val,
        drift,
        plant.dF_dx2(x1, x2),
        plant.H(x1, x2),
        plant.G(x1, x2),
    )


def attitude_sliding(state, ref, t, spec):
    eps1, _, eps1_dot = tracking_errors(state, ref, t)
    return vector_sliding(eps1, eps1_dot, t, spec)


def _floats(a):
    return np.asarray(a, dtype=float).tolist()


def attitude_law(ref, spec, gains, body):
    """torque = law(t, q, w, d_hat, K2) on plain floats, q as (q1, q2, q3, q4).

    This is the vector law with x1 = eps1, F = T(q) w / 2 - q1f',
    dF/dx2 = T(q) / 2, H = -J^-1 w^x J w and G = J^-1. With M = T(q) J^-1 / 2
    the H term of -M^-1 rhs reduces to w^x J w, and T(q) = q4 I + [v x] is
    inverted as (q4^2 I + v v^T - q4 [v x]) / (q4 |q|^2). The switching gain
    K2 ||M||_2 and the conditioning guard share one SVD of M.
    """
    if spec.n != 2:
        raise DomainError(f"Attitude law needs n=2, got n={spec.n}")
    t_f, t_switch, eta = spec.t_f, spec.t_switch, spec.eta
    c0, c1 = spec.coeffs
    K1 = gains.K1
    switch = gains.scalar_switch()
    J = body.inertia_rows
    half_J_inv = 0.5 * body.inertia_inv
    q1f, q1f_dot, q1f_ddot = ref.q1f, ref.q1f_dot, ref.q1f_ddot

    def law(t, q, w, d_hat, K2):
        v1, v2, v3, q4 = q
        if abs(q4) < Q4_MIN:
            raise AttitudeSingularityError(f"|q4|={abs(q4):.3g} below {Q4_MIN}", t=t)
        sv = np.linalg.svd(
            np.array(((q4, -v3, v2), (v3, q4, -v1), (-v2, v1, q4))) @ half_J_inv,
            compute_uv=False,
        )
        if sv[2] == 0 or sv[0] / sv[2] > COND_MAX:
            raise SingularPlantError("T(q) J^-1 / 2 is ill conditioned", t=t)
        gain = K2 * float(sv[0])

        r1, r2, r3 = _floats(q1f(t))
        p1, p2, p3 = _floats(q1f_dot(t))
        a1, a2, a3 = _floats(q1f_ddot(t))
        q_dot = quaternion_rate(q, w)
        # T(q') w / 2
        b1, b2, b3, _ = quaternion_rate(q_dot, w)
        e = (v1 - r1, v2 - r2, v3 - r3)
        e_dot = (q_dot[0] - p1, q_dot[1] - p2, q_dot[2] - p3)
        drift = (b1 - a1, b2 - a2, b3 - a3)

        if t < t_switch:
            tau = t_f - t
            k_f = (eta - 1) / tau
            k_s = eta / tau**2
            rest = []
            for e_i, ed_i, dr_i in zip(e, e_dot, drift):
                s_i = c1 * ed_i * tau + c0 * e_i
                rest.append(gain * switch(s_i) + dr_i + k_f * ed_i + k_s * s_i)
        else:
            rest = []
            for e_i, ed_i, dr_i in zip(e, e_dot, drift):
                s_i = e_i + ed_i
                rest.append(gain * switch(s_i) + dr_i + K1 * s_i + ed_i)

        v = (v1, v2, v3)
        vr = v1 * rest[0] + v2 * rest[1] + v3 * rest[2]
        vx = cross(v, rest)
        scale = 1.0 / (q4 * (v1 * v1 + v2 * v2 + v3 * v3 + q4 * q4))
        y = [(q4 * q4 * r_i + v_i * vr - q4 * x_i) * scale for r_i, v_i, x_i in zip(rest, v, vx)]
        gyro = cross(w, matvec(J, w))
        Jy = matvec(J, y)
        return (
            gyro[0] - 2.0 * Jy[0] - d_hat[0],
            gyro[1] - 2.0 * Jy[1] - d_hat[1],
            gyro[2] - 2.0 * Jy[2] - d_hat[2],
        )

    return law


def attitude_ptsmc(state, ref, d_hat, K2, t, spec, gains, body):
    """Observer-based attitude torque.

    The estimate d_hat is cancelled and K2 bounds the remaining estimation
    error.
    """
    law = attitude_law(ref, spec, gains, body)
    q = (*state.q.v.tolist(), state.q.s)
    return np.array(law(t, q, state.w.tolist(), _floats(d_hat), K2))

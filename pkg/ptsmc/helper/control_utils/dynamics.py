"""Quaternion algebra and rigid-body attitude dynamics.

Quaternions are kept as a (vector part, scalar part) pair, scalar last.
Rate functions never renormalise; that is left to the integrator so the
norm drift stays measurable.
"""

from dataclasses import InitVar, dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from ..ext_utils.exceptions import DomainError

UNIT_TOL = 1e-9


@dataclass(frozen=True)
class Quaternion:
    v: np.ndarray
    s: float
    check: InitVar[bool] = True

    def __post_init__(self, check):
        object.__setattr__(self, "v", np.asarray(self.v, dtype=float))
        object.__setattr__(self, "s", float(self.s))
        if self.v.shape != (3,):
            raise DomainError(f"Quaternion vector part must be a 3-vector, got {self.v.shape}")
        if check and abs(self.norm() - 1.0) > UNIT_TOL:
            raise DomainError(f"Quaternion is not unit norm: |q|={self.norm():.12g}")

    @classmethod
    def identity(cls):
        return cls(np.zeros(3), 1.0)

    @classmethod
    def from_array(cls, q, check=True):
        q = np.asarray(q, dtype=float)
        return cls(q[:3], q[3], check=check)

    def as_array(self):
        return np.append(self.v, self.s)

    def norm(self):
        return float(np.sqrt(self.v @ self.v + self.s * self.s))

    def normalized(self):
        n = self.norm()
        return Quaternion(self.v / n, self.s / n)


@dataclass(frozen=True)
class RigidBody:
    inertia: np.ndarray
    inertia_inv: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        J = np.asarray(self.inertia, dtype=float)
        if J.shape != (3, 3):
            raise DomainError(f"Inertia must be 3x3, got {J.shape}")
        if not np.allclose(J, J.T, rtol=0.0, atol=1e-12):
            raise DomainError("Inertia must be symmetric")
        if np.linalg.eigvalsh(J).min() <= 0.0:
            raise DomainError("Inertia must be positive definite")
        object.__setattr__(self, "inertia", J)
        object.__setattr__(self, "inertia_inv", np.linalg.inv(J))

    @classmethod
    def diagonal(cls, j1, j2, j3):
        return cls(np.diag([j1, j2, j3]))

    @cached_property
    def inertia_rows(self):
        return rows(self.inertia)

    @cached_property
    def inertia_inv_rows(self):
        return rows(self.inertia_inv)


@dataclass(frozen=True)
class AttitudeState:
    q: Quaternion
    w: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "w", np.asarray(self.w, dtype=float))


@dataclass(frozen=True)
class AttitudeReference:
    q1f: Callable[[float], np.ndarray]
    q1f_dot: Callable[[float], np.ndarray]
    q1f_ddot: Callable[[float], np.ndarray]
    q4f: Callable[[float], float]

    @classmethod
    def constant(cls, q=None):
        q = q or Quaternion.identity()
        v = q.v.copy()
        zero = np.zeros(3)
        return cls(
            q1f=lambda t: v,
            q1f_dot=lambda t: zero,
            q1f_ddot=lambda t: zero,
            q4f=lambda t: q.s,
        )

    @classmethod
    def spin(cls, axis, rate):
        """Constant-rate rotation about a fixed body axis starting at the identity."""
        axis = np.asarray(axis, dtype=float)
        axis = axis / np.linalg.norm(axis)
        half = 0.5 * rate
        return cls(
            q1f=lambda t: axis * np.sin(half * t),
            q1f_dot=lambda t: axis * half * np.cos(half * t),
            q1f_ddot=lambda t: -axis * half * half * np.sin(half * t),
            q4f=lambda t: float(np.cos(half * t)),
        )

    def quaternion(self, t):
        return Quaternion(self.q1f(t), self.q4f(t))

    def is_unit(self, t, tol=UNIT_TOL):
        v = self.q1f(t)
        return abs(v @ v + self.q4f(t) ** 2 - 1.0) <= tol


def skew(v):
    return np.array(
        [
            [0.0, -v[2], v[1]],
            [v[2], 0.0, -v[0]],
            [-v[1], v[0], 0.0],
        ]
    )


def t_matrix(q):
    q1, q2, q3 = q.v
    q4 = q.s
    return np.array(
        [
            [q4, -q3, q2],
            [q3, q4, -q1],
            [-q2, q1, q4],
        ]
    )


def kinematics_rate(q, w):
    *v_dot, s_dot = quaternion_rate((*q.v.tolist(), q.s), np.asarray(w, dtype=float).tolist())
    return np.array(v_dot), s_dot


def quaternion_rate(q, w):
    """q' = (T(q) w / 2, -v.w / 2) on plain floats, q given as (q1, q2, q3, q4)."""
    v1, v2, v3, q4 = q
    w1, w2, w3 = w
    return (
        0.5 * (q4 * w1 + v2 * w3 - v3 * w2),
        0.5 * (q4 * w2 + v3 * w1 - v1 * w3),
        0.5 * (q4 * w3 + v1 * w2 - v2 * w1),
        -0.5 * (v1 * w1 + v2 * w2 + v3 * w3),
    )


def rows(matrix):
    """3x3 matrix as a tuple of float row tuples, for the float helpers below."""
    return tuple(tuple(float(v) for v in row) for row in np.asarray(matrix, dtype=float))


def matvec(A, x):
    (a, b, c), (d, e, f), (g, h, i) = A
    x1, x2, x3 = x
    return (a * x1 + b * x2 + c * x3, d * x1 + e * x2 + f * x3, g * x1 + h * x2 + i * x3)


def cross(a, b):
    a1, a2, a3 = a
    b1, b2, b3 = b
    return (a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1)


def dynamics_rate(body, w, torque, d):
    w = np.asarray(w, dtype=float)
    return body.inertia_inv @ (-gyroscopic(body, w) + torque + d)


def gyroscopic(body, w):
    """w^x J w"""
    return skew(w) @ (body.inertia @ w)


def tracking_errors(state, ref, t):
    q, w = state.q, state.w
    eps1 = q.v - ref.q1f(t)
    eps4 = q.s - ref.q4f(t)
    eps1_dot = 0.5 * (t_matrix(q) @ w) - ref.q1f_dot(t)
    return eps1, eps4, eps1_dot

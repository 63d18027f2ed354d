"""Prescribed-time and classical sliding variables.

The prescribed-time variable of order n is

    s = (t_f - t)^(eta+n-1) * d^(n-1)/dt^(n-1) [ x1 / (t_f - t)^eta ]
      = sum_i c_i (t_f - t)^i x1^(i)

whose coefficients follow from the Leibniz rule:
c_i = C(n-1, i) * eta (eta+1) ... (eta+n-2-i), so c_{n-1} = 1.
"""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np
from scipy.special import comb, poch

from ..ext_utils.exceptions import DomainError, WrongRegimeError


class Regime(Enum):
    PRESCRIBED = 0
    TERMINAL = 1


@dataclass(frozen=True)
class PtSlidingSpec:
    n: int
    eta: float
    t_f: float
    delta: float
    coeffs: tuple

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"Sliding order must be >= 2, got n={self.n}")
        if not self.eta > self.n:
            raise DomainError(f"eta must exceed the order n={self.n}, got eta={self.eta}")
        if not self.t_f > 0:
            raise DomainError(f"t_f must be positive, got {self.t_f}")
        if not 0 <= self.delta < self.t_f:
            raise DomainError(f"delta must satisfy 0 <= delta < t_f, got {self.delta}")
        if len(self.coeffs) != self.n:
            raise DomainError(f"Expected {self.n} coefficients, got {len(self.coeffs)}")
        if self.coeffs[-1] != 1:
            raise DomainError("Leading coefficient c_{n-1} must be 1")
        if min(self.coeffs) <= 0:
            raise DomainError("Expansion coefficients must be positive")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @classmethod
    def build(cls, n, eta, t_f, delta=0.0):
        return cls(n, eta, t_f, delta, tuple(pt_coefficients(n, eta)))

    @property
    def t_switch(self):
        return self.t_f - self.delta

    @cached_property
    def derivative_coeffs(self):
        return pt_derivative_coefficients(self)

    def regime(self, t):
        return Regime.PRESCRIBED if t < self.t_switch else Regime.TERMINAL


@dataclass(frozen=True)
class ClassicalSurface:
    a: tuple

    def __post_init__(self):
        if len(self.a) < 1:
            raise DomainError("Classical surface needs at least one coefficient")
        object.__setattr__(self, "a", tuple(float(c) for c in self.a))

    @property
    def n(self):
        return len(self.a) + 1

    def is_hurwitz(self):
        return is_hurwitz(self.a)


@dataclass(frozen=True)
class SlidingValue:
    s: object
    regime: Regime


def pt_coefficients(n, eta):
    if n < 2 or not eta > n:
        raise DomainError(f"Need n >= 2 and eta > n, got n={n}, eta={eta}")
    m = n - 1
    return np.array([comb(m, i, exact=True) * poch(eta, m - i) for i in range(n)])


def pt_derivative_coefficients(spec):
    c = spec.coeffs
    n = spec.n
    head = [c[i] - c[i + 1] * (1 + i) for i in range(n - 1)]
    return np.array(head + [c[n - 1]])


def pt_sliding(x, t, spec):
    """x holds x1, x1', ..., x1^(n-1) along its first axis (scalar or vector components)."""
    if t >= spec.t_switch:
        raise WrongRegimeError(
            f"Prescribed sliding variable undefined at t={t} >= t_f - delta={spec.t_switch}"
        )
    x = np.asarray(x, dtype=float)
    tau = spec.t_f - t
    c = spec.coeffs
    s = c[-1] * x[spec.n - 1]
    for i in range(spec.n - 2, -1, -1):
        s = s * tau + c[i] * x[i]
    return SlidingValue(s, Regime.PRESCRIBED)


def classical_sliding(x, surf):
    x = np.asarray(x, dtype=float)
    s = x[surf.n - 1]
    for i, a_i in enumerate(surf.a):
        s = s + a_i * x[i]
    return SlidingValue(s, Regime.TERMINAL)


def companion_matrix(a):
    """State matrix of x1..x_{n-1} restricted to the surface s = 0."""
    m = len(a)
    A = np.zeros((m, m))
    A[:-1, 1:] = np.eye(m - 1)
    A[-1, :] = -np.asarray(a, dtype=float)
    return A


def is_hurwitz(a):
    """Routh-Hurwitz test of lambda^m + a_m lambda^(m-1) + ... + a_1."""
    poly = [1.0] + [float(c) for c in reversed(a)]
    if not all(np.isfinite(poly)):
        return False
    degree = len(poly) - 1
    if degree == 0:
        return True
    rows = [poly[0::2], poly[1::2]]
    width = len(rows[0])
    rows = [r + [0.0] * (width - len(r)) for r in rows]
    for _ in range(degree - 1):
        upper, lower = rows[-2], rows[-1]
        if lower[0] <= 0.0:
            return False
        nxt = [
            (lower[0] * upper[j + 1] - upper[0] * lower[j + 1]) / lower[0]
            for j in range(width - 1)
        ] + [0.0]
        rows.append(nxt)
    return all(r[0] > 0.0 for r in rows)

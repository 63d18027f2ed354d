"""Nonlinear disturbance observer for the rigid-body dynamics.

    z'    = -L J^-1 (-w^x J w + T + d_hat)
    d_hat = z + L w

with a constant positive diagonal gain L. The estimation error e = d_hat - d
obeys e' = -L J^-1 e - d', so per axis it is bounded by
c / l_m + exp(-l_m t) (e0 - c / l_m), l_m being the smallest diagonal entry
of L J^-1.
"""

from dataclasses import dataclass
from math import exp

import numpy as np

from ..ext_utils.exceptions import DomainError
from .dynamics import gyroscopic


@dataclass(frozen=True)
class ObserverConfig:
    L: np.ndarray
    c: float
    e0_bound: float

    def __post_init__(self):
        L = np.asarray(self.L, dtype=float)
        if L.ndim == 1:
            L = np.diag(L)
        if L.shape != (3, 3) or np.count_nonzero(L - np.diag(np.diag(L))):
            raise DomainError("Observer gain L must be a 3x3 diagonal matrix")
        if np.diag(L).min() <= 0:
            raise DomainError("Observer gain L must have strictly positive entries")
        if self.c < 0 or self.e0_bound < 0:
            raise DomainError("Observer bounds c and e0_bound must be non-negative")
        object.__setattr__(self, "L", L)


@dataclass(frozen=True)
class ObserverState:
    z: np.ndarray
    d_hat: np.ndarray

    @classmethod
    def from_z(cls, z, cfg, w):
        z = np.asarray(z, dtype=float)
        return cls(z, z + cfg.L @ np.asarray(w, dtype=float))


def observer_rate(obs, cfg, body, w, torque):
    J_inv = body.inertia_inv
    return -cfg.L @ (J_inv @ (-gyroscopic(body, w) + torque + obs.d_hat))


def l_min(cfg, body):
    return float(np.diag(cfg.L @ body.inertia_inv).min())


def k2_schedule(cfg, body):
    """t -> K2(t) as a plain-float closure."""
    l_m = l_min(cfg, body)
    steady = cfg.c / l_m
    c1 = cfg.e0_bound - steady
    if c1 < 0:
        return lambda t: steady
    return lambda t: steady + exp(-l_m * t) * c1


def k2_bound(cfg, body, t):
    return k2_schedule(cfg, body)(t)

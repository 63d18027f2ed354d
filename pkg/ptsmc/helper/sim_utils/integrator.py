from math import isfinite

import numpy as np

from ..ext_utils.exceptions import DomainError, NumericalBlowupError


def _checked(k, t, stage):
    if not np.all(np.isfinite(k)):
        raise NumericalBlowupError(t, f"RK4 stage {stage} returned {k}")
    return k


def _checked_floats(k, t, stage):
    # a sum is non-finite as soon as one entry is
    if not isfinite(sum(k)):
        raise NumericalBlowupError(t, f"RK4 stage {stage} returned {k}")
    return k


def rk4_step(rate, x, t, dt):
    """Classical fourth-order Runge-Kutta step of x' = rate(t, x).

    x is a numpy array, or a list of floats for which rate must return a
    list of floats too. The list form keeps the small closed-loop states of
    a simulation in plain Python.
    """
    if not dt > 0:
        raise DomainError(f"dt must be positive, got {dt}")
    half = 0.5 * dt
    if isinstance(x, list):
        k1 = _checked_floats(rate(t, x), t, 1)
        k2 = _checked_floats(rate(t + half, [a + half * b for a, b in zip(x, k1)]), t + half, 2)
        k3 = _checked_floats(rate(t + half, [a + half * b for a, b in zip(x, k2)]), t + half, 3)
        k4 = _checked_floats(rate(t + dt, [a + dt * b for a, b in zip(x, k3)]), t + dt, 4)
        sixth = dt / 6.0
        return [
            a + sixth * (b1 + 2.0 * (b2 + b3) + b4)
            for a, b1, b2, b3, b4 in zip(x, k1, k2, k3, k4)
        ]
    k1 = _checked(rate(t, x), t, 1)
    k2 = _checked(rate(t + half, x + half * k1), t + half, 2)
    k3 = _checked(rate(t + half, x + half * k2), t + half, 3)
    k4 = _checked(rate(t + dt, x + dt * k3), t + dt, 4)
    return x + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)

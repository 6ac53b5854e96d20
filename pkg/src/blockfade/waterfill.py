"""Water-filling power allocation and the per-state link functions.

The allocation assigns power (level - noise_var/gain^2)+ to each fading
state; the common level is chosen so that the average spent power equals
the budget. The level is found by bisection on that average, which is a
continuous, piecewise-linear, non-decreasing function of the level.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, InvalidParameterError
from .fading import ChannelSpec

__all__ = [
    "PowerAllocation",
    "link_c",
    "link_l",
    "link_v",
    "solve_waterfill",
    "capacity",
]

_MAX_BISECT = 200
_RESIDUAL_TOL = 1e-12


def link_c(x: float, noise_var: float) -> float:
    """Half the log of one plus the SNR: 0.5*log(1 + x/noise_var), in nats."""
    _check_link_args(x, noise_var)
    return 0.5 * math.log1p(x / noise_var)


def link_l(x: float, noise_var: float) -> float:
    """Received-power fraction x/(noise_var + x)."""
    _check_link_args(x, noise_var)
    return x / (noise_var + x)


def link_v(x: float, noise_var: float) -> float:
    """Per-use dispersion 0.5*(1 - (1 - link_l)^2)."""
    one_minus_l = 1.0 - link_l(x, noise_var)
    return 0.5 * (1.0 - one_minus_l * one_minus_l)


def _check_link_args(x: float, noise_var: float) -> None:
    if x < 0.0 or not math.isfinite(x):
        raise DomainError(f"link functions need x >= 0, got {x!r}")
    if not (noise_var > 0.0):
        raise DomainError(f"noise variance must be positive, got {noise_var!r}")


@dataclass(frozen=True)
class PowerAllocation:
    """Water level, the per-state transmit powers it induces, and the budget.

    powers[i] equals max(0, water_level - noise_var/gain_i^2) for the
    channel the allocation was solved against; the probability-weighted
    power sum equals the budget within 1e-9*max(1, budget).
    """

    water_level: float
    powers: tuple[float, ...]
    budget: float

    def gain_power(self, gains) -> np.ndarray:
        """Effective received powers gain_i^2 * powers[i] per state."""
        g = np.asarray(gains, dtype=float)
        return g * g * np.asarray(self.powers, dtype=float)


def solve_waterfill(spec: ChannelSpec, budget: float) -> PowerAllocation:
    """Find the water level whose average allocated power meets the budget.

    Bisection on [noise_var/gain_max^2, noise_var/gain_min^2 + budget]:
    the average spent power is 0 at the lower end and at least the budget
    at the upper end. Stops once the budget residual drops to
    1e-12*max(1, budget); raises ConvergenceError after 200 iterations.
    """
    budget = float(budget)
    if not (budget > 0.0) or not math.isfinite(budget):
        raise InvalidParameterError(f"power budget must be positive and finite, got {budget!r}")

    gains = np.asarray(spec.fading.gains, dtype=float)
    probs = np.asarray(spec.fading.probs, dtype=float)
    floor = spec.noise_var / (gains * gains)  # per-state inverse channel quality

    def spent(level: float) -> float:
        return float(probs @ np.maximum(0.0, level - floor))

    lo = float(floor.min())
    hi = float(floor.max()) + budget
    tol = _RESIDUAL_TOL * max(1.0, budget)

    level = hi
    for _ in range(_MAX_BISECT):
        level = 0.5 * (lo + hi)
        residual = spent(level) - budget
        if abs(residual) <= tol:
            break
        if residual < 0.0:
            lo = level
        else:
            hi = level
    else:
        raise ConvergenceError(
            f"water level bisection did not reach tolerance {tol:g} in {_MAX_BISECT} iterations")

    powers = np.maximum(0.0, level - floor)
    return PowerAllocation(water_level=level, powers=tuple(float(p) for p in powers), budget=budget)


def capacity(spec: ChannelSpec, alloc: PowerAllocation) -> float:
    """Average rate in nats per channel use under the given allocation."""
    probs = np.asarray(spec.fading.probs, dtype=float)
    g2 = alloc.gain_power(spec.fading.gains)
    c_vals = 0.5 * np.log1p(g2 / spec.noise_var)
    return float(probs @ c_vals)

"""Dispersion statistics and closed-form finite-blocklength rate bounds.

Everything here is an exact finite sum over the fading states; no
sampling is involved. All rate quantities are in nats.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidParameterError
from .fading import ChannelSpec
from .specfun import std_normal_inv_cdf
from .waterfill import PowerAllocation, capacity, solve_waterfill

__all__ = [
    "DispersionStats",
    "BoundPoint",
    "dispersion_v_bf",
    "dispersion_v_bf_prime",
    "nocsit_stats",
    "dispersion_stats",
    "bound_point",
]


def _mean_and_var(values: np.ndarray, probs: np.ndarray) -> tuple[float, float]:
    # Two-pass centered form; exact finite sums over the states.
    mean = float(probs @ values)
    centered = values - mean
    return mean, float(probs @ (centered * centered))


def _link_terms(spec: ChannelSpec, g2: np.ndarray):
    s2 = spec.noise_var
    c_vals = 0.5 * np.log1p(g2 / s2)
    l_vals = g2 / (s2 + g2)
    one_minus_l = 1.0 - l_vals
    v_vals = 0.5 * (1.0 - one_minus_l * one_minus_l)
    return c_vals, l_vals, v_vals


def dispersion_v_bf(spec: ChannelSpec, alloc: PowerAllocation) -> float:
    """Dispersion of the water-filling link over the fading blocks.

    Mean per-use dispersion plus n_c times the variance of the per-use
    rate plus half the variance of the received-power fraction.
    """
    probs = np.asarray(spec.fading.probs, dtype=float)
    g2 = alloc.gain_power(spec.fading.gains)
    c_vals, l_vals, v_vals = _link_terms(spec, g2)
    mean_v = float(probs @ v_vals)
    _, var_c = _mean_and_var(c_vals, probs)
    _, var_l = _mean_and_var(l_vals, probs)
    return mean_v + spec.n_c * var_c + 0.5 * var_l


def dispersion_v_bf_prime(spec: ChannelSpec, alloc: PowerAllocation) -> float:
    """Dispersion constant for the converse-side bounds.

    Mean per-use dispersion plus the variance of
    n_c*C(G) + budget/(2*level) - L(G)/2; the constant middle term does
    not move the variance but is kept as part of the defining expression.
    """
    probs = np.asarray(spec.fading.probs, dtype=float)
    g2 = alloc.gain_power(spec.fading.gains)
    c_vals, l_vals, v_vals = _link_terms(spec, g2)
    mean_v = float(probs @ v_vals)
    composite = (spec.n_c * c_vals
                 + alloc.budget / (2.0 * alloc.water_level)
                 - 0.5 * l_vals)
    _, var_comp = _mean_and_var(composite, probs)
    return mean_v + var_comp


def nocsit_stats(spec: ChannelSpec, budget: float) -> tuple[float, float]:
    """Capacity and dispersion when the transmitter sends constant power.

    Same expressions as the water-filling case with the effective
    received power replaced by gain^2 * budget in every state.
    """
    if not (budget > 0.0) or not math.isfinite(budget):
        raise InvalidParameterError(f"power budget must be positive and finite, got {budget!r}")
    gains = np.asarray(spec.fading.gains, dtype=float)
    probs = np.asarray(spec.fading.probs, dtype=float)
    g2 = gains * gains * budget
    c_vals, l_vals, v_vals = _link_terms(spec, g2)
    cap, var_c = _mean_and_var(c_vals, probs)
    mean_v = float(probs @ v_vals)
    _, var_l = _mean_and_var(l_vals, probs)
    return cap, mean_v + spec.n_c * var_c + 0.5 * var_l


@dataclass(frozen=True)
class DispersionStats:
    """Capacity, dispersions and water level for one channel and budget."""

    capacity: float
    v_bf: float
    v_bf_prime: float
    water_level: float
    nocsit_capacity: float
    nocsit_v: float

    def __post_init__(self):
        for name in ("capacity", "v_bf", "v_bf_prime", "water_level", "nocsit_v"):
            value = getattr(self, name)
            if not (value > 0.0) or not math.isfinite(value):
                raise InvalidParameterError(f"{name} must be positive and finite, got {value!r}")
        if self.nocsit_capacity > self.capacity + 1e-12:
            raise InvalidParameterError(
                "constant-power capacity cannot exceed the water-filling capacity "
                f"({self.nocsit_capacity!r} > {self.capacity!r})")


def dispersion_stats(spec: ChannelSpec, budget: float) -> DispersionStats:
    """Solve the allocation and collect every bound ingredient at once."""
    alloc = solve_waterfill(spec, budget)
    nocsit_cap, nocsit_v = nocsit_stats(spec, budget)
    return DispersionStats(
        capacity=capacity(spec, alloc),
        v_bf=dispersion_v_bf(spec, alloc),
        v_bf_prime=dispersion_v_bf_prime(spec, alloc),
        water_level=alloc.water_level,
        nocsit_capacity=nocsit_cap,
        nocsit_v=nocsit_v,
    )


@dataclass(frozen=True)
class BoundPoint:
    """The four rate bounds plus the constant-power baseline at one (n, eps)."""

    n: int
    blocks: int
    epsilon: float
    beta: float
    log_m_lb_st: float
    log_m_lb_lt: float
    log_m_ub_st: float
    log_m_ub_lt: float
    rate_lb_st: float
    rate_lb_lt: float
    rate_ub_st: float
    rate_ub_lt: float
    rate_nocsit: float


def bound_point(stats: DispersionStats, n: int, n_c: int, num_states: int,
                epsilon: float, beta: float = 0.01) -> BoundPoint:
    """Evaluate the normal-approximation bounds at codeword length n.

    n must be blocks*n_c for an integer number of blocks >= 1; epsilon
    must lie strictly in (0, 1/2). The residual terms of order n^beta
    and smaller are excluded; log-codebook sizes may be negative at
    small n and are reported as computed.
    """
    if not isinstance(n, int) or not isinstance(n_c, int) or n_c < 1:
        raise InvalidParameterError(f"n and n_c must be integers with n_c >= 1, got {n!r}, {n_c!r}")
    if n < n_c or n % n_c != 0:
        raise InvalidParameterError(
            f"codeword length {n} is not a positive multiple of the block length {n_c}")
    if num_states < 1:
        raise InvalidParameterError(f"num_states must be >= 1, got {num_states!r}")
    if not (0.0 < epsilon < 0.5):
        raise DomainError(f"error probability must lie strictly in (0, 1/2), got {epsilon!r}")
    if not (0.0 < beta < 1.0):
        raise InvalidParameterError(f"beta must lie strictly in (0, 1), got {beta!r}")

    blocks = n // n_c
    quantile = std_normal_inv_cdf(epsilon)
    log_n = math.log(n)
    backoff = float(n) ** ((1.0 - beta) / 2.0)

    lb_lt = (n * stats.capacity + math.sqrt(n * stats.v_bf) * quantile
             + 0.5 * log_n - backoff)
    lb_st = lb_lt - math.sqrt(n / 2.0)
    ub_st = (n * stats.capacity + math.sqrt(n * stats.v_bf_prime) * quantile
             + 0.5 * num_states * log_n)
    ub_lt = ub_st + math.sqrt(n) / (2.0 * stats.water_level)
    nocsit_log_m = (n * stats.nocsit_capacity + math.sqrt(n * stats.nocsit_v) * quantile
                    + 0.5 * log_n - backoff)

    return BoundPoint(
        n=n,
        blocks=blocks,
        epsilon=epsilon,
        beta=beta,
        log_m_lb_st=lb_st,
        log_m_lb_lt=lb_lt,
        log_m_ub_st=ub_st,
        log_m_ub_lt=ub_lt,
        rate_lb_st=lb_st / n,
        rate_lb_lt=lb_lt / n,
        rate_ub_st=ub_st / n,
        rate_ub_lt=ub_lt / n,
        rate_nocsit=nocsit_log_m / n,
    )

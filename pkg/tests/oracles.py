"""Independent oracles the tests check the library against.

Everything here deliberately avoids the library's code paths: the
quantile oracle bisects a high-precision series cdf (mpmath), the
water-level oracle enumerates active sets in closed form instead of
bisecting, and moment accumulation uses fsum over reversed state order
with the uncentered variance formula.
"""

import math

from mpmath import mp

mp.dps = 40


def mp_norm_cdf(x: float) -> float:
    """Standard normal cdf via mpmath's arbitrary-precision series."""
    return float(mp.ncdf(x))


def bisect_quantile(p: float, lo: float = -12.0, hi: float = 12.0) -> float:
    """Quantile by plain bisection on the mpmath cdf."""
    target = mp.mpf(p)
    a, b = mp.mpf(lo), mp.mpf(hi)
    for _ in range(120):
        mid = (a + b) / 2
        if mp.ncdf(mid) < target:
            a = mid
        else:
            b = mid
    return float((a + b) / 2)


def fsum_mean_var(values, probs) -> tuple[float, float]:
    """Uncentered mean/variance accumulated with fsum in reversed order."""
    pairs = list(zip(values, probs))[::-1]
    mean = math.fsum(v * q for v, q in pairs)
    second = math.fsum(v * v * q for v, q in pairs)
    return mean, second - mean * mean


def closed_form_water_level(gains, probs, noise_var, budget) -> float:
    """Water level by explicit active-set enumeration (no bisection).

    States are already sorted by increasing gain, so candidate active
    sets are suffixes; the level for a suffix follows from the linear
    budget equation and is accepted when consistent with the suffix.
    """
    floors = [noise_var / (g * g) for g in gains]  # decreasing in state order
    k = len(gains)
    for start in range(k):
        active_q = math.fsum(probs[start:])
        level = (budget + math.fsum(q * f for q, f in zip(probs[start:], floors[start:]))) / active_q
        inside = all(level > floors[i] for i in range(start, k))
        outside = all(level <= floors[i] for i in range(start))
        if inside and outside:
            return level
    raise AssertionError("no consistent active set found")


def oracle_link_c(x, noise_var):
    return 0.5 * math.log(1.0 + x / noise_var)


def oracle_link_l(x, noise_var):
    return 1.0 - noise_var / (noise_var + x)


def oracle_link_v(x, noise_var):
    l = oracle_link_l(x, noise_var)
    return 0.5 * l * (2.0 - l)


def oracle_channel_quantities(gains, probs, noise_var, n_c, budget) -> dict:
    """All bound ingredients from the closed-form level and fsum moments."""
    level = closed_form_water_level(gains, probs, noise_var, budget)
    powers = [max(0.0, level - noise_var / (g * g)) for g in gains]
    g2 = [g * g * p for g, p in zip(gains, powers)]
    c_vals = [oracle_link_c(x, noise_var) for x in g2]
    l_vals = [oracle_link_l(x, noise_var) for x in g2]
    v_vals = [oracle_link_v(x, noise_var) for x in g2]
    cap, var_c = fsum_mean_var(c_vals, probs)
    mean_v, _ = fsum_mean_var(v_vals, probs)
    _, var_l = fsum_mean_var(l_vals, probs)
    composite = [n_c * c + budget / (2.0 * level) - 0.5 * l for c, l in zip(c_vals, l_vals)]
    _, var_comp = fsum_mean_var(composite, probs)
    g2_const = [g * g * budget for g in gains]
    cap_n, var_cn = fsum_mean_var([oracle_link_c(x, noise_var) for x in g2_const], probs)
    mean_vn, _ = fsum_mean_var([oracle_link_v(x, noise_var) for x in g2_const], probs)
    _, var_ln = fsum_mean_var([oracle_link_l(x, noise_var) for x in g2_const], probs)
    return {
        "level": level,
        "powers": powers,
        "capacity": cap,
        "v_bf": mean_v + n_c * var_c + 0.5 * var_l,
        "v_bf_prime": mean_v + var_comp,
        "var_c": var_c,
        "mean_v": mean_v,
        "var_l": var_l,
        "nocsit_capacity": cap_n,
        "nocsit_v": mean_vn + n_c * var_cn + 0.5 * var_ln,
    }


def oracle_dispersions_for_alloc(gains, probs, noise_var, n_c, powers, level, budget) -> dict:
    """Dispersions for a given allocation, fsum/uncentered accumulation."""
    g2 = [g * g * p for g, p in zip(gains, powers)]
    c_vals = [oracle_link_c(x, noise_var) for x in g2]
    l_vals = [oracle_link_l(x, noise_var) for x in g2]
    v_vals = [oracle_link_v(x, noise_var) for x in g2]
    _, var_c = fsum_mean_var(c_vals, probs)
    mean_v, _ = fsum_mean_var(v_vals, probs)
    _, var_l = fsum_mean_var(l_vals, probs)
    composite = [n_c * c + budget / (2.0 * level) - 0.5 * l for c, l in zip(c_vals, l_vals)]
    _, var_comp = fsum_mean_var(composite, probs)
    return {
        "v_bf": mean_v + n_c * var_c + 0.5 * var_l,
        "v_bf_prime": mean_v + var_comp,
    }


# Hand-solved two-state benchmark: gains {1, 2}, probs {1/2, 1/2},
# noise 1, budget 1. Both states active, so the level solves
# level - (1 + 1/4)/2 = 1.
TWO_STATE = {
    "gains": (1.0, 2.0),
    "probs": (0.5, 0.5),
    "noise_var": 1.0,
    "budget": 1.0,
    "level": 1.625,
    "powers": (0.625, 1.375),
    "capacity": 0.25 * math.log(1.625) + 0.25 * math.log(6.5),
}

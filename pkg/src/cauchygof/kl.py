"""Kullback-Leibler test statistics.

The divergence between the data density f and the fitted Cauchy density f0
decomposes into -H(f) - E log f0;  plugging a nonparametric entropy estimate
and the empirical mean of log f0(x; mu_hat, sigma_hat) into the exponential
gives the statistic exp(-H_n - mean log f0).  It tends to 1 under the null
and exceeds 1 in the limit under any fixed alternative, so large values
reject.  One statistic per entropy estimator.
"""
from __future__ import annotations

import math

import numpy as np

from . import entropy as ent
from .config import DEFAULT_CONFIG, TestConfig
from .errors import DegenerateSampleError
from .model import CauchyParams, _as_sorted_values, _estimate_rows

__all__ = [
    "DEFAULT_WINDOWS",
    "default_window",
    "log_likelihood_term",
    "kl_statistic",
]

#: simulated-criterion window sizes (argmin of the 5% critical value over the
#: admissible range, 50,000 replications) for the four tabulated sample sizes
DEFAULT_WINDOWS = {
    "vasicek":     {10: 2, 20: 4, 30: 8, 50: 20},
    "vanes":       {10: 9, 20: 19, 30: 29, 50: 49},
    "ebrahimi":    {10: 5, 20: 10, 30: 15, 50: 25},
    "correa":      {10: 2, 20: 4, 30: 11, 50: 23},
    "yousefzadeh": {10: 5, 20: 10, 30: 15, 50: 25},
    "alizadeh":    {10: 5, 20: 10, 30: 15, 50: 25},
}

_TABULATED_N = (10, 20, 30, 50)


def default_window(entropy_id: str, n: int) -> int | None:
    """Default window size for a KL statistic at sample size n.

    Tabulated sizes are returned directly.  Other n fall back to the nearest
    tabulated size's window scaled by n (ties to the smaller size), clamped
    to the admissible range.  No optimality is claimed away from the
    tabulated sizes; use the window search for a principled choice.
    """
    if entropy_id == "bowman":
        return None
    table = DEFAULT_WINDOWS[entropy_id]
    if n in table:
        return table[n]
    base = min(_TABULATED_N, key=lambda t: (abs(t - n), t))
    m = round(table[base] * n / base)
    return int(min(max(m, 1), ent.max_window(entropy_id, n)))


def _loglik_rows(xs: np.ndarray, mu, sigma) -> np.ndarray:
    """Mean log Cauchy density along the last axis, parameters per row."""
    mu = np.asarray(mu, dtype=np.float64)
    sigma = np.asarray(sigma, dtype=np.float64)
    z = (xs - mu[..., None]) / sigma[..., None]
    return -np.log(math.pi * sigma) - np.mean(np.log1p(z * z), axis=-1)


def _entropy_rows(entropy_id: str, xs: np.ndarray, m: int | None,
                  config: TestConfig, kde: np.ndarray | None = None):
    """Dispatch to the vectorized entropy core; returns (H, widened_rows)."""
    if entropy_id == "vasicek":
        return ent._vasicek(xs, m), 0
    if entropy_id == "bowman":
        return ent._bowman(xs) if kde is None else -np.mean(np.log(kde), axis=-1), 0
    if entropy_id == "vanes":
        return ent._vanes(xs, m), 0
    if entropy_id == "ebrahimi":
        return ent._ebrahimi(xs, m, config.ebrahimi_k,
                             config.quantile_convention)
    if entropy_id == "correa":
        return ent._correa(xs, m), 0
    if entropy_id == "yousefzadeh":
        return ent._yousefzadeh(xs, m), 0
    if entropy_id == "alizadeh":
        return ent._alizadeh(xs, m, config.alizadeh_reading, kde=kde), 0
    raise ValueError(f"unknown entropy estimator {entropy_id!r}")


def log_likelihood_term(sample, params: CauchyParams) -> float:
    """Mean log fitted Cauchy density over the sample; always finite."""
    xs = _as_sorted_values(sample)
    return float(_loglik_rows(xs, params.mu, params.sigma))


def kl_statistic(estimator_id: str, sample, m: int | None = None,
                 config: TestConfig = DEFAULT_CONFIG) -> float:
    """KL test statistic exp(-H_n - mean log f0) for one entropy estimator.

    Parameters
    ----------
    estimator_id : str
        One of :data:`cauchygof.entropy.ESTIMATORS`; a ``kl_`` prefix is
        accepted.
    m : int, optional
        Window size.  Defaults to :func:`default_window`; must be omitted for
        the Bowman estimator (no window).
    """
    eid = estimator_id.removeprefix("kl_")
    if eid not in ent.ESTIMATORS:
        raise ValueError(f"unknown entropy estimator {estimator_id!r}")
    xs = _as_sorted_values(sample)
    n = xs.size
    if n < 4:
        raise ValueError("test statistics need at least 4 observations")
    mu, sigma = _estimate_rows(xs, config.quantile_convention)
    if sigma <= 0.0:
        raise DegenerateSampleError(
            "half-interquartile range is zero; all central values identical")
    if eid == "bowman":
        if m is not None:
            raise ValueError("the Bowman estimator takes no window size")
        h = ent.entropy_bowman(xs)
    else:
        if m is None:
            m = default_window(eid, n)
        single = {
            "vasicek": lambda: ent.entropy_vasicek(xs, m),
            "vanes": lambda: ent.entropy_van_es(xs, m),
            "ebrahimi": lambda: ent.entropy_ebrahimi(
                xs, m, config.ebrahimi_k, config.quantile_convention),
            "correa": lambda: ent.entropy_correa(xs, m),
            "yousefzadeh": lambda: ent.entropy_yousefzadeh_arghami(xs, m),
            "alizadeh": lambda: ent.entropy_alizadeh(
                xs, m, config.alizadeh_reading),
        }
        h = single[eid]()
    ll = float(_loglik_rows(xs, mu, sigma))
    return math.exp(-h - ll)

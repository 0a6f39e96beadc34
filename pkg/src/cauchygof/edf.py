"""Distance and likelihood-ratio test statistics for the Cauchy null.

Kolmogorov-Smirnov, Anderson-Darling and Cramer-von Mises compare the fitted
CDF with the empirical one; the Gurtler-Henze statistic is a weighted L2
distance between the empirical characteristic function of standardized data
and that of the standard Cauchy law; the three Zhang statistics are
likelihood-ratio refinements of the EDF idea.  All seven are affine
invariant (parameters are re-estimated from the data) and reject for large
values.

Cores take probability or standardized-value arrays along the last axis so
Monte Carlo batches evaluate in one call; the public functions wrap a single
sample.
"""
from __future__ import annotations

import numpy as np

from .config import DEFAULT_CONFIG, TestConfig
from .errors import DegenerateSampleError
from .model import _as_sorted_values, _estimate_rows, cauchy_cdf, estimate_params

__all__ = [
    "ks_statistic",
    "anderson_darling",
    "cramer_von_mises",
    "gurtler_henze",
    "zhang_zk",
    "zhang_za",
    "zhang_zc",
]


def _fitted_u(xs: np.ndarray, convention: str, eps: float) -> np.ndarray:
    """Fitted-CDF values of the order statistics, clamped to [eps, 1-eps].

    The Cauchy CDF never reaches 0 or 1 analytically but underflows once
    |x - mu| / sigma exceeds ~1e12; the clamp keeps the log-based statistics
    finite without measurably moving any of them.
    """
    mu, sigma = _estimate_rows(xs, convention)
    z = (xs - mu[..., None]) / sigma[..., None]
    u = 0.5 + np.arctan(z) / np.pi
    return np.clip(u, eps, 1.0 - eps)


def _ks_core(u: np.ndarray) -> np.ndarray:
    n = u.shape[-1]
    i = np.arange(1, n + 1, dtype=np.float64)
    return np.maximum(i / n - u, u - (i - 1.0) / n).max(axis=-1)


def _ad_core(u: np.ndarray) -> np.ndarray:
    n = u.shape[-1]
    i = np.arange(1, n + 1, dtype=np.float64)
    t = (i - 0.5) * np.log(u) + (n - i + 0.5) * np.log1p(-u)
    return -2.0 / n * t.sum(axis=-1) - n


def _cvm_core(u: np.ndarray) -> np.ndarray:
    n = u.shape[-1]
    i = np.arange(1, n + 1, dtype=np.float64)
    return ((u - (i - 0.5) / n) ** 2).sum(axis=-1) + 1.0 / (12.0 * n)


def _zk_core(u: np.ndarray) -> np.ndarray:
    n = u.shape[-1]
    i = np.arange(1, n + 1, dtype=np.float64)
    t = ((i - 0.5) * np.log((i - 0.5) / (n * u))
         + (n - i + 0.5) * np.log((n - i + 0.5) / (n * (1.0 - u))))
    return t.max(axis=-1)


def _za_core(u: np.ndarray) -> np.ndarray:
    n = u.shape[-1]
    i = np.arange(1, n + 1, dtype=np.float64)
    t = np.log(u) / (n - i + 0.5) + np.log1p(-u) / (i - 0.5)
    return -t.sum(axis=-1)


def _zc_core(u: np.ndarray) -> np.ndarray:
    n = u.shape[-1]
    i = np.arange(1, n + 1, dtype=np.float64)
    t = np.log((1.0 / u - 1.0) / ((n - 0.5) / (i - 0.75) - 1.0))
    return (t * t).sum(axis=-1)


def _gh_core(y: np.ndarray, lam: float) -> np.ndarray:
    """Closed form of the weighted characteristic-function distance.

    Double sum over all ordered pairs including j = k; O(n^2) memory in the
    last axis, callers chunk the leading axis when batching.
    """
    n = y.shape[-1]
    d = y[..., :, None] - y[..., None, :]
    s1 = (lam / (lam * lam + d * d)).sum(axis=(-2, -1))
    s2 = ((1.0 + lam) / ((1.0 + lam) ** 2 + y * y)).sum(axis=-1)
    return 2.0 / n * s1 - 4.0 * s2 + 2.0 * n / (2.0 + lam)


def _prepare(sample, config: TestConfig):
    xs = _as_sorted_values(sample)
    if xs.size < 4:
        raise ValueError("test statistics need at least 4 observations")
    estimate_params(xs, config.quantile_convention)  # raises if degenerate
    return xs


def _u_single(sample, config: TestConfig) -> np.ndarray:
    xs = _prepare(sample, config)
    return _fitted_u(xs, config.quantile_convention, config.clamp_epsilon)


def ks_statistic(sample, config: TestConfig = DEFAULT_CONFIG) -> float:
    """Kolmogorov-Smirnov distance between fitted and empirical CDF."""
    return float(_ks_core(_u_single(sample, config)))


def anderson_darling(sample, config: TestConfig = DEFAULT_CONFIG) -> float:
    """Anderson-Darling statistic under the fitted Cauchy CDF."""
    return float(_ad_core(_u_single(sample, config)))


def cramer_von_mises(sample, config: TestConfig = DEFAULT_CONFIG) -> float:
    """Cramer-von Mises statistic under the fitted Cauchy CDF."""
    return float(_cvm_core(_u_single(sample, config)))


def gurtler_henze(sample, config: TestConfig = DEFAULT_CONFIG) -> float:
    """Characteristic-function distance of standardized data from C(0, 1)."""
    xs = _prepare(sample, config)
    mu, sigma = _estimate_rows(xs, config.quantile_convention)
    y = (xs - mu) / sigma
    return float(_gh_core(y, config.gh_lambda))


def zhang_zk(sample, config: TestConfig = DEFAULT_CONFIG) -> float:
    """Zhang's supremum-type likelihood-ratio statistic."""
    return float(_zk_core(_u_single(sample, config)))


def zhang_za(sample, config: TestConfig = DEFAULT_CONFIG) -> float:
    """Zhang's sum-type likelihood-ratio statistic."""
    return float(_za_core(_u_single(sample, config)))


def zhang_zc(sample, config: TestConfig = DEFAULT_CONFIG) -> float:
    """Zhang's squared-log-odds statistic."""
    return float(_zc_core(_u_single(sample, config)))

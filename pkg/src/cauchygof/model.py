"""The hypothesized Cauchy family and robust parameter estimation.

Density, distribution and quantile functions of C(mu, sigma), plus the
median / half-interquartile-range estimators used to fit the composite null
hypothesis, and standardization of data under a fitted parameter pair.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import QUANTILE_CONVENTIONS
from .errors import DegenerateSampleError

__all__ = [
    "CauchyParams",
    "Sample",
    "cauchy_pdf",
    "cauchy_cdf",
    "cauchy_quantile",
    "sample_quantile",
    "estimate_params",
    "standardize",
]


@dataclass(frozen=True)
class CauchyParams:
    """Location ``mu`` and scale ``sigma`` of a Cauchy law; sigma > 0."""

    mu: float
    sigma: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.sigma)):
            raise ValueError("Cauchy parameters must be finite")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True, eq=False)
class Sample:
    """An ordered batch of finite observations.

    ``values`` holds the order statistics (sorted ascending).  Every statistic
    in this package is a function of the order statistics, so the original
    input order is not retained.  Build instances with :meth:`from_data`.
    """

    values: np.ndarray

    def __post_init__(self):
        v = self.values
        if v.ndim != 1 or v.size < 2:
            raise ValueError("a sample needs at least two observations")
        if not np.all(np.isfinite(v)):
            raise ValueError("sample values must be finite")
        if np.any(np.diff(v) < 0):
            raise ValueError("Sample(values=...) expects sorted input; "
                             "use Sample.from_data for raw data")

    @classmethod
    def from_data(cls, data) -> "Sample":
        """Sort and validate raw observations."""
        v = np.sort(np.asarray(data, dtype=np.float64).ravel())
        v.flags.writeable = False
        return cls(values=v)

    @property
    def n(self) -> int:
        return self.values.size


def _as_sorted_values(sample) -> np.ndarray:
    """Accept a :class:`Sample` or raw array-like, return sorted float64."""
    if isinstance(sample, Sample):
        return sample.values
    return Sample.from_data(sample).values


def cauchy_pdf(x, params: CauchyParams):
    """Density of C(mu, sigma): 1 / (pi sigma [1 + ((x-mu)/sigma)^2])."""
    z = (np.asarray(x, dtype=np.float64) - params.mu) / params.sigma
    out = 1.0 / (math.pi * params.sigma * (1.0 + z * z))
    return float(out) if np.ndim(x) == 0 else out


def cauchy_cdf(x, params: CauchyParams):
    """Distribution function of C(mu, sigma): 1/2 + arctan((x-mu)/sigma)/pi."""
    z = (np.asarray(x, dtype=np.float64) - params.mu) / params.sigma
    out = 0.5 + np.arctan(z) / math.pi
    return float(out) if np.ndim(x) == 0 else out


def cauchy_quantile(q, params: CauchyParams):
    """Inverse CDF: mu + sigma * tan(pi (q - 1/2)) for q strictly in (0, 1)."""
    qa = np.asarray(q, dtype=np.float64)
    if np.any(qa <= 0.0) or np.any(qa >= 1.0):
        raise ValueError("quantile level must lie strictly inside (0, 1)")
    out = params.mu + params.sigma * np.tan(math.pi * (qa - 0.5))
    return float(out) if np.ndim(q) == 0 else out


def _quantile_sorted(xs: np.ndarray, q: float, convention: str = "linear"):
    """Empirical q-quantile along the last axis of sorted data.

    ``linear`` interpolates at rank h = (n-1)q + 1, ``weibull`` at
    h = (n+1)q clipped into [1, n], ``nearest-rank`` returns the
    ceil(nq)-th order statistic.
    """
    n = xs.shape[-1]
    if convention == "nearest-rank":
        k = min(max(int(math.ceil(n * q)), 1), n)
        return xs[..., k - 1]
    if convention == "linear":
        h = (n - 1) * q
    elif convention == "weibull":
        h = (n + 1) * q - 1.0
    else:
        raise ValueError(f"unknown quantile convention {convention!r}; "
                         f"expected one of {QUANTILE_CONVENTIONS}")
    h = min(max(h, 0.0), n - 1.0)
    lo = int(math.floor(h))
    g = h - lo
    if lo + 1 > n - 1:
        return xs[..., n - 1]
    return xs[..., lo] + g * (xs[..., lo + 1] - xs[..., lo])


def _median_sorted(xs: np.ndarray):
    """Sample median along the last axis: mean of the two middle order
    statistics for even n, the middle one for odd n."""
    n = xs.shape[-1]
    if n % 2 == 0:
        return 0.5 * (xs[..., n // 2 - 1] + xs[..., n // 2])
    return xs[..., (n - 1) // 2]


def _estimate_rows(xs: np.ndarray, convention: str = "linear"):
    """(mu, sigma) per row of sorted data; sigma may be zero (caller checks)."""
    mu = _median_sorted(xs)
    sigma = 0.5 * (_quantile_sorted(xs, 0.75, convention)
                   - _quantile_sorted(xs, 0.25, convention))
    return mu, sigma


def sample_quantile(sample, q: float, convention: str = "linear") -> float:
    """Empirical q-th quantile of a sample under the given convention."""
    if not 0.0 < q < 1.0:
        raise ValueError("quantile level must lie strictly inside (0, 1)")
    xs = _as_sorted_values(sample)
    return float(_quantile_sorted(xs, q, convention))


def estimate_params(sample, convention: str = "linear") -> CauchyParams:
    """Robust Cauchy fit: median location, half-interquartile-range scale.

    Moment and maximum-likelihood estimation are unattractive for the Cauchy
    law (no moments, awkward likelihood), so location is the sample median
    and scale is (q75 - q25) / 2 under the configured quantile convention.

    Raises
    ------
    DegenerateSampleError
        If the half-interquartile range is zero; every test statistic divides
        by the scale, so the fit is declined rather than returning infinities.
    """
    xs = _as_sorted_values(sample)
    if xs.size < 4:
        raise ValueError("parameter estimation needs at least 4 observations")
    mu, sigma = _estimate_rows(xs, convention)
    if sigma <= 0.0:
        raise DegenerateSampleError(
            "half-interquartile range is zero; all central values identical")
    return CauchyParams(mu=float(mu), sigma=float(sigma))


def standardize(sample, params: CauchyParams) -> Sample:
    """Return the sample transformed to (x - mu) / sigma, order preserved."""
    xs = _as_sorted_values(sample)
    v = (xs - params.mu) / params.sigma
    v.flags.writeable = False
    return Sample(values=v)

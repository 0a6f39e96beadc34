"""Monte Carlo machinery: critical values, window search, power, p-values.

The null distributions of all fourteen statistics are intractable, so
critical values are the empirical (1 - alpha) quantiles of the statistic
over simulated C(0, 1) samples, re-estimating (mu, sigma) per sample exactly
as on real data.  Affine invariance of every statistic makes C(0, 1) the
only null that needs simulating.

Determinism contract: replication r draws from a private stream keyed
(master_seed, r), statistics are evaluated row-independently, and reductions
run in replication order, so results are bit-identical for any worker count
or chunking.  Replications that fail to evaluate (tied data after rounding,
degenerate scale; probability ~0 under continuous sampling) are regenerated
from substreams reps, reps+1, ... in slot order and counted in metadata.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import edf, entropy as ent, kl
from .alternatives import CAUCHY01, AlternativeSpec, SeedSpec, _draw
from .config import DEFAULT_CONFIG, TestConfig
from .errors import CauchyGofError, TableLookupError
from .model import _estimate_rows, _quantile_sorted
from .registry import TestInfo, get
from .results import CriticalValueTable, PowerReport, WindowSearchResult

__all__ = [
    "simulate_null_statistics",
    "critical_value",
    "build_critical_value_table",
    "optimal_window",
    "power",
    "power_study",
    "power_gap",
    "p_value",
]

_EDF_CORES = {
    "ks": edf._ks_core,
    "ad": edf._ad_core,
    "cvm": edf._cvm_core,
    "zk": edf._zk_core,
    "za": edf._za_core,
    "zc": edf._zc_core,
}

#: target elements for O(n^2) intermediates, bounds per-chunk memory
_HEAVY_BUDGET = 2.5e7
_LIGHT_CHUNK = 1 << 16
_GEN_CHUNK = 1 << 12


@dataclass
class SimulationInfo:
    """Bookkeeping for one simulated statistic batch."""

    regenerated: int = 0
    support_widenings: int = 0


def _run_chunks(count: int, chunk: int, workers: int, fn) -> None:
    spans = [(lo, min(lo + chunk, count)) for lo in range(0, count, chunk)]
    if workers <= 1 or len(spans) == 1:
        for lo, hi in spans:
            fn(lo, hi)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for fut in [pool.submit(fn, lo, hi) for lo, hi in spans]:
            fut.result()


def _generate_matrix(spec: AlternativeSpec, n: int, seed: SeedSpec,
                     r0: int, count: int, workers: int = 1) -> np.ndarray:
    """Rows of sorted samples; row i comes from substream r0 + i."""
    out = np.empty((count, n), dtype=np.float64)

    def fill(lo, hi):
        for i in range(lo, hi):
            out[i] = _draw(spec, n, seed.rng(r0 + i))

    _run_chunks(count, _GEN_CHUNK, workers, fill)
    out.sort(axis=1)
    return out


def _is_heavy(test: TestInfo) -> bool:
    return test.test_id == "gh" or test.entropy_id in ("bowman", "alizadeh",
                                                       "correa")


def _eval_slice(test: TestInfo, xs: np.ndarray, m: int | None,
                config: TestConfig, kde: np.ndarray | None):
    """Statistic per row of sorted samples; nan marks failed rows."""
    mu, sigma = _estimate_rows(xs, config.quantile_convention)
    ok = sigma > 0
    sigma = np.where(ok, sigma, 1.0)
    widened = 0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if test.kind == "edf":
            if test.test_id == "gh":
                y = (xs - mu[:, None]) / sigma[:, None]
                stats = edf._gh_core(y, config.gh_lambda)
            else:
                z = (xs - mu[:, None]) / sigma[:, None]
                u = np.clip(0.5 + np.arctan(z) / np.pi,
                            config.clamp_epsilon, 1.0 - config.clamp_epsilon)
                stats = _EDF_CORES[test.test_id](u)
        else:
            h, widened = kl._entropy_rows(test.entropy_id, xs, m, config,
                                          kde=kde)
            ll = kl._loglik_rows(xs, mu, sigma)
            stats = np.exp(-h - ll)
    return np.where(ok, stats, np.nan), widened


def _eval_rows(test: TestInfo, xs: np.ndarray, m: int | None,
               config: TestConfig, workers: int = 1,
               kde: np.ndarray | None = None):
    """Chunked, optionally threaded evaluation over a (reps, n) matrix."""
    count, n = xs.shape
    if _is_heavy(test):
        chunk = max(32, int(_HEAVY_BUDGET / (n * n)))
    else:
        chunk = _LIGHT_CHUNK
    out = np.empty(count, dtype=np.float64)
    widened = [0] * (count // chunk + 1)

    def run(lo, hi):
        sl_kde = None if kde is None else kde[lo:hi]
        out[lo:hi], w = _eval_slice(test, xs[lo:hi], m, config, sl_kde)
        widened[lo // chunk] = w

    _run_chunks(count, chunk, workers, run)
    return out, int(sum(widened))


def _kde_matrix(xs: np.ndarray, workers: int = 1) -> np.ndarray:
    """Kernel density at the sample points, chunked over rows."""
    count, n = xs.shape
    chunk = max(32, int(_HEAVY_BUDGET / (n * n)))
    out = np.empty_like(xs)

    def run(lo, hi):
        out[lo:hi] = ent._kde_at_points(xs[lo:hi], ent._bandwidth(xs[lo:hi]))

    _run_chunks(count, chunk, workers, run)
    return out


def _resolve_window(test: TestInfo, n: int, m: int | None) -> int | None:
    if not test.window_based:
        if m is not None:
            raise ValueError(f"test {test.test_id!r} takes no window size")
        return None
    if m is None:
        m = kl.default_window(test.entropy_id, n)
    ent.check_window(test.entropy_id, n, m)
    return m


def _stats_with_regeneration(test: TestInfo, matrix: np.ndarray,
                             spec: AlternativeSpec, seed: SeedSpec,
                             m: int | None, config: TestConfig,
                             workers: int,
                             kde: np.ndarray | None = None):
    """Evaluate all rows, replacing failed ones from fresh substreams."""
    reps, n = matrix.shape
    stats, widened = _eval_rows(test, matrix, m, config, workers, kde=kde)
    info = SimulationInfo(support_widenings=widened)
    next_r = reps
    budget = max(100, reps // 20)
    while True:
        bad = np.flatnonzero(~np.isfinite(stats))
        if bad.size == 0:
            return stats, info
        if info.regenerated + bad.size > budget:
            raise CauchyGofError(
                f"statistic {test.test_id!r} failed on more than "
                f"{budget} replications; the configuration is likely "
                "pathological (e.g. the literal difference reading)")
        fresh = _generate_matrix(spec, n, seed, next_r, bad.size)
        new_stats, w = _eval_rows(test, fresh, m, config)
        stats[bad] = new_stats
        info.regenerated += bad.size
        info.support_widenings += w
        next_r += bad.size


def simulate_null_statistics(test_id: str, n: int, reps: int, seed: SeedSpec,
                             m: int | None = None,
                             config: TestConfig = DEFAULT_CONFIG,
                             workers: int = 1):
    """Simulate the null distribution of one statistic.

    Returns (statistics array of length reps, SimulationInfo).  Replication
    r is computed on the sample of substream (seed, r); failed replications
    are regenerated from substreams past reps.
    """
    test = get(test_id)
    if n < 4:
        raise ValueError("sample size must be at least 4")
    m = _resolve_window(test, n, m)
    matrix = _generate_matrix(CAUCHY01, n, seed, 0, reps, workers)
    return _stats_with_regeneration(test, matrix, CAUCHY01, seed, m, config,
                                    workers)


def _quantile_se(sorted_vals: np.ndarray, q: float) -> float:
    """Order-statistic standard error of the empirical q-quantile."""
    r = sorted_vals.size
    center = q * r
    half = math.sqrt(r * q * (1.0 - q))
    lo = int(min(max(math.floor(center - half), 0), r - 1))
    hi = int(min(max(math.ceil(center + half), 0), r - 1))
    return 0.5 * float(sorted_vals[hi] - sorted_vals[lo])


def critical_value(test_id: str, n: int, alpha: float, reps: int,
                   seed: SeedSpec, m: int | None = None,
                   config: TestConfig = DEFAULT_CONFIG,
                   workers: int = 1) -> float:
    """Empirical (1 - alpha) quantile of the simulated null distribution.

    The quantile uses the same convention as the scale estimator so no
    second interpolation rule sneaks into the pipeline.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie strictly inside (0, 1)")
    if reps < 1000:
        raise ValueError("critical values need at least 1000 replications")
    stats, _ = simulate_null_statistics(test_id, n, reps, seed, m, config,
                                        workers)
    stats.sort()
    return float(_quantile_sorted(stats, 1.0 - alpha,
                                  config.quantile_convention))


def build_critical_value_table(test_ids, ns, alphas, reps: int,
                               seed: SeedSpec,
                               config: TestConfig = DEFAULT_CONFIG,
                               workers: int = 1,
                               windows: dict[str, int] | None = None
                               ) -> CriticalValueTable:
    """Critical values over a (test x n x alpha) grid.

    All tests at one sample size share the same simulated samples (common
    random numbers, as in the reference protocol).  ``windows`` overrides
    the default window size per test id.
    """
    if reps < 1000:
        raise ValueError("critical values need at least 1000 replications")
    table = CriticalValueTable(reps=reps, master_seed=seed.master_seed,
                               config=config)
    windows = windows or {}
    for n in ns:
        matrix = _generate_matrix(CAUCHY01, n, seed, 0, reps, workers)
        for test_id in test_ids:
            test = get(test_id)
            m = _resolve_window(test, n, windows.get(test_id))
            stats, info = _stats_with_regeneration(
                test, matrix, CAUCHY01, seed, m, config, workers)
            stats.sort()
            for alpha in alphas:
                if not 0.0 < alpha < 1.0:
                    raise ValueError("alpha must lie strictly inside (0, 1)")
                table.add(test_id, n, alpha, m,
                          float(_quantile_sorted(stats, 1.0 - alpha,
                                                 config.quantile_convention)))
            table.regenerated += info.regenerated
            table.support_widenings += info.support_widenings
    return table


def optimal_window(test_id: str, n: int, alpha: float, reps: int,
                   seed: SeedSpec, config: TestConfig = DEFAULT_CONFIG,
                   workers: int = 1) -> WindowSearchResult:
    """Critical-value curve over the full admissible window range.

    The whole curve is computed on one simulated replication set (common
    random numbers), so differences between adjacent window sizes reflect
    the estimator rather than resampling noise.  The chosen window attains
    the curve minimum, ties broken to the smallest m.
    """
    test = get(test_id)
    if not test.window_based:
        raise ValueError(f"test {test_id!r} has no window size to search")
    if reps < 1000:
        raise ValueError("critical values need at least 1000 replications")
    matrix = _generate_matrix(CAUCHY01, n, seed, 0, reps, workers)
    kde = _kde_matrix(matrix, workers) if test.entropy_id == "alizadeh" \
        else None
    result = WindowSearchResult(test_id=test_id, n=n, alpha=alpha, reps=reps,
                                master_seed=seed.master_seed, config=config)
    best_stats = None
    for m in range(1, test.max_window(n) + 1):
        stats, _ = _stats_with_regeneration(test, matrix, CAUCHY01, seed, m,
                                            config, workers, kde=kde)
        stats.sort()
        cv = float(_quantile_sorted(stats, 1.0 - alpha,
                                    config.quantile_convention))
        result.curve[m] = cv
        if result.chosen_m == 0 or cv < result.curve[result.chosen_m]:
            result.chosen_m = m
            best_stats = stats
    result.se_at_min = _quantile_se(best_stats, 1.0 - alpha)
    return result


def _power_counts(test_ids, alt: AlternativeSpec, n: int, alphas, reps: int,
                  seed: SeedSpec, table: CriticalValueTable,
                  config: TestConfig, workers: int):
    """Rejection counts per (test, alpha) on one alternative sample set."""
    matrix = _generate_matrix(alt, n, seed, 0, reps, workers)
    out = {}
    for test_id in test_ids:
        test = get(test_id)
        cv_m = {alpha: table.lookup(test_id, n, alpha) for alpha in alphas}
        ms = {m for _, m in cv_m.values()}
        if len(ms) != 1:
            raise TableLookupError(
                f"table holds inconsistent window sizes for {test_id} at "
                f"n={n}")
        m = ms.pop()
        stats, _ = _stats_with_regeneration(test, matrix, alt, seed, m,
                                            config, workers)
        for alpha, (cv, _) in cv_m.items():
            out[(test_id, alpha)] = int(np.count_nonzero(stats > cv))
    return out


def power(test_id: str, alt: AlternativeSpec, n: int, alpha: float,
          reps: int, seed: SeedSpec, table: CriticalValueTable,
          config: TestConfig = DEFAULT_CONFIG, workers: int = 1) -> float:
    """Fraction of alternative samples whose statistic exceeds the critical
    value stored in ``table`` (which must cover (test, n, alpha) and match
    the statistic configuration)."""
    if table.config != config:
        raise TableLookupError(
            "critical-value table was built under different statistic "
            "conventions than requested")
    counts = _power_counts([test_id], alt, n, [alpha], reps, seed, table,
                           config, workers)
    return counts[(test_id, alpha)] / reps


def power_study(test_ids, alternatives, ns, alphas, reps: int,
                seed: SeedSpec, table: CriticalValueTable,
                config: TestConfig = DEFAULT_CONFIG,
                workers: int = 1) -> PowerReport:
    """Rejection-rate grid over tests x alternatives x n x alpha.

    All tests see the same samples per (alternative, n); sampling streams
    are keyed by the power seed, independent of the table's seed.
    """
    if table.config != config:
        raise TableLookupError(
            "critical-value table was built under different statistic "
            "conventions than requested")
    report = PowerReport(reps=reps, master_seed=seed.master_seed,
                         config=config, table_fingerprint=table.fingerprint)
    for n in ns:
        for alt in alternatives:
            counts = _power_counts(test_ids, alt, n, alphas, reps, seed,
                                   table, config, workers)
            for (test_id, alpha), c in counts.items():
                report.add(test_id, alt.label, n, alpha, c)
    return report


def power_gap(report_kl: PowerReport, report_other: PowerReport) -> dict:
    """Best KL-test power minus best non-KL power per (alternative, n, alpha).

    The two reports must cover identical grids; each cell takes the maximum
    rate over the KL tests in the first report and subtracts the maximum
    over the EDF-style tests in the second.
    """
    if report_kl.grid() != report_other.grid():
        raise TableLookupError(
            "power reports cover different (alternative, n, alpha) grids")
    out = {}
    for alt, n, alpha in sorted(report_kl.grid()):
        kl_rates = [report_kl.rate(t, alt, n, alpha)
                    for (t, a, nn, al) in report_kl.entries
                    if a == alt and nn == n and al == alpha
                    and get(t).kind == "kl"]
        other_rates = [report_other.rate(t, alt, n, alpha)
                       for (t, a, nn, al) in report_other.entries
                       if a == alt and nn == n and al == alpha
                       and get(t).kind == "edf"]
        if not kl_rates or not other_rates:
            raise TableLookupError(
                f"cell ({alt}, n={n}, alpha={alpha}) lacks tests on one side")
        out[(alt, n, alpha)] = max(kl_rates) - max(other_rates)
    return out


def p_value(test_id: str, observed: float, n: int, reps: int, seed: SeedSpec,
            m: int | None = None, config: TestConfig = DEFAULT_CONFIG,
            workers: int = 1) -> float:
    """Monte Carlo p-value (1 + #{null >= observed}) / (reps + 1)."""
    if not math.isfinite(observed):
        raise ValueError("observed statistic must be finite")
    stats, _ = simulate_null_statistics(test_id, n, reps, seed, m, config,
                                        workers)
    return (1 + int(np.count_nonzero(stats >= observed))) / (reps + 1)

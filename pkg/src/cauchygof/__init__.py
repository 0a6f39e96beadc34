"""Goodness-of-fit testing for the Cauchy distribution.

Fourteen test statistics for the composite null "the data are Cauchy with
unknown location and scale": seven distance / likelihood-ratio tests
(Kolmogorov-Smirnov, Anderson-Darling, Cramer-von Mises, a characteristic-
function distance and Zhang's three statistics) and seven Kullback-Leibler
statistics, one per nonparametric entropy estimator.  Critical values,
optimal window sizes, power curves and p-values all come from the Monte
Carlo engine, which is deterministic per (master seed, replication index).
"""

from .alternatives import (CAUCHY01, STUDIED_ALTERNATIVES, AlternativeSpec,
                           SeedSpec, sample_from)
from .config import DEFAULT_CONFIG, TestConfig
from .datasets import dax_returns, reference_table
from .edf import (anderson_darling, cramer_von_mises, gurtler_henze,
                  ks_statistic, zhang_za, zhang_zc, zhang_zk)
from .entropy import (ESTIMATORS, entropy_alizadeh, entropy_bowman,
                      entropy_correa, entropy_ebrahimi,
                      entropy_van_es, entropy_vasicek,
                      entropy_yousefzadeh_arghami)
from .errors import (CauchyGofError, DegenerateSampleError,
                     EstimatorDomainError, SupportExtensionWarning,
                     TableLookupError, TiedDataError)
from .kl import default_window, kl_statistic, log_likelihood_term
from .model import (CauchyParams, Sample, cauchy_cdf, cauchy_pdf,
                    cauchy_quantile, estimate_params, sample_quantile,
                    standardize)
from .montecarlo import (build_critical_value_table, critical_value,
                         optimal_window, p_value, power, power_gap,
                         power_study, simulate_null_statistics)
from .registry import (ALL_IDS, EDF_IDS, KL_IDS, compute_statistic, get,
                       parse_test_selection)
from .results import CriticalValueTable, PowerReport, WindowSearchResult

__version__ = "0.1.0"

__all__ = [
    "ALL_IDS", "EDF_IDS", "KL_IDS", "ESTIMATORS",
    "CAUCHY01", "STUDIED_ALTERNATIVES",
    "AlternativeSpec", "SeedSpec", "sample_from",
    "TestConfig", "DEFAULT_CONFIG",
    "CauchyParams", "Sample",
    "cauchy_pdf", "cauchy_cdf", "cauchy_quantile",
    "sample_quantile", "estimate_params", "standardize",
    "entropy_vasicek", "entropy_bowman", "entropy_van_es",
    "entropy_ebrahimi", "entropy_correa", "entropy_yousefzadeh_arghami",
    "entropy_alizadeh",
    "ks_statistic", "anderson_darling", "cramer_von_mises", "gurtler_henze",
    "zhang_zk", "zhang_za", "zhang_zc",
    "kl_statistic", "log_likelihood_term", "default_window",
    "compute_statistic", "get", "parse_test_selection",
    "simulate_null_statistics", "critical_value",
    "build_critical_value_table", "optimal_window",
    "power", "power_study", "power_gap", "p_value",
    "CriticalValueTable", "PowerReport", "WindowSearchResult",
    "dax_returns", "reference_table",
    "CauchyGofError", "DegenerateSampleError", "TiedDataError",
    "EstimatorDomainError", "TableLookupError", "SupportExtensionWarning",
    "__version__",
]

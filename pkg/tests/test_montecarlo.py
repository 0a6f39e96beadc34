"""Monte Carlo engine: determinism, regeneration, calibration, p-values,
power bookkeeping."""
import numpy as np
import pytest

from cauchygof import (CAUCHY01, AlternativeSpec, CauchyGofError, SeedSpec,
                       TableLookupError, TestConfig)
from cauchygof.montecarlo import (_generate_matrix, _quantile_se,
                                  _stats_with_regeneration,
                                  build_critical_value_table, critical_value,
                                  optimal_window, p_value, power, power_gap,
                                  power_study, simulate_null_statistics)
from cauchygof.registry import get
from cauchygof.results import PowerReport

from conftest import WORKERS

SEED = SeedSpec(314159)
CFG = TestConfig()


class TestDeterminism:
    def test_worker_count_invariance(self):
        a, _ = simulate_null_statistics("kl_ebrahimi", 20, 2000, SEED,
                                        workers=1)
        b, _ = simulate_null_statistics("kl_ebrahimi", 20, 2000, SEED,
                                        workers=3)
        assert np.array_equal(a, b)

    def test_heavy_statistic_worker_invariance(self):
        a, _ = simulate_null_statistics("gh", 30, 1500, SEED, workers=1)
        b, _ = simulate_null_statistics("gh", 30, 1500, SEED, workers=4)
        assert np.array_equal(a, b)

    def test_table_bytes_identical(self, tmp_path):
        paths = []
        for w in (1, 3):
            t = build_critical_value_table(("ks", "kl_vasicek"), (10, 20),
                                           (0.05,), 2000, SEED, workers=w)
            p = tmp_path / f"t{w}.tsv"
            t.save(p)
            paths.append(p.read_bytes())
        assert paths[0] == paths[1]

    def test_seed_matters(self):
        a = critical_value("ks", 15, 0.05, 2000, SeedSpec(1))
        b = critical_value("ks", 15, 0.05, 2000, SeedSpec(2))
        assert a != b


class TestRegeneration:
    def test_degenerate_rows_are_replaced(self):
        test = get("kl_vasicek")
        matrix = _generate_matrix(CAUCHY01, 12, SEED, 0, 300)
        matrix[7] = 4.0   # constant row: zero scale, must be regenerated
        matrix[55] = 4.0
        stats, info = _stats_with_regeneration(test, matrix, CAUCHY01, SEED,
                                               3, CFG, 1)
        assert info.regenerated == 2
        assert np.all(np.isfinite(stats))
        # replacements come from substreams past the batch, in slot order
        from cauchygof import sample_from
        repl = np.sort(sample_from(CAUCHY01, 12, SEED, 300).values)
        from cauchygof import kl_statistic
        assert stats[7] == kl_statistic("vasicek", repl, 3)

    def test_budget_guards_pathological_configs(self):
        test = get("kl_vasicek")
        matrix = _generate_matrix(CAUCHY01, 12, SEED, 0, 200)
        matrix[:150] = 1.0
        with pytest.raises(CauchyGofError):
            _stats_with_regeneration(test, matrix, CAUCHY01, SEED, 3, CFG, 1)


class TestCriticalValues:
    def test_validations(self):
        with pytest.raises(ValueError):
            critical_value("ks", 20, 0.05, 500, SEED)
        with pytest.raises(ValueError):
            critical_value("ks", 20, 1.5, 2000, SEED)
        with pytest.raises(ValueError):
            critical_value("nope", 20, 0.05, 2000, SEED)

    def test_median_alpha_sanity(self):
        # at alpha = 0.5 the value is the null median; an independent seed
        # moves it by less than 3 quantile standard errors
        reps = 4000
        a, _ = simulate_null_statistics("cvm", 20, reps, SeedSpec(5))
        b, _ = simulate_null_statistics("cvm", 20, reps, SeedSpec(6))
        a.sort()
        b.sort()
        se = _quantile_se(a, 0.5)
        assert abs(np.median(a) - np.median(b)) < 3 * se + 1e-12

    def test_doubling_reps_moves_less_than_3se(self):
        a, _ = simulate_null_statistics("ks", 20, 2000, SeedSpec(5))
        b, _ = simulate_null_statistics("ks", 20, 4000, SeedSpec(5))
        a.sort()
        b.sort()
        from cauchygof.model import _quantile_sorted
        cva = _quantile_sorted(a, 0.95)
        cvb = _quantile_sorted(b, 0.95)
        assert abs(cva - cvb) < 3 * _quantile_se(a, 0.95)

    def test_all_statistics_positive_null_values(self):
        table = build_critical_value_table(
            ("ks", "ad", "cvm", "gh", "zk", "za", "zc", "kl_vasicek"),
            (12,), (0.01, 0.05, 0.10), 1000, SEED, workers=WORKERS)
        assert all(v > 0 for v in table.entries.values())

    def test_alpha_monotonicity(self):
        table = build_critical_value_table(("ad",), (15,),
                                           (0.01, 0.05, 0.2), 2000, SEED)
        c1, _ = table.lookup("ad", 15, 0.01)
        c5, _ = table.lookup("ad", 15, 0.05)
        c20, _ = table.lookup("ad", 15, 0.2)
        assert c1 > c5 > c20


class TestOptimalWindow:
    def test_curve_and_argmin_invariants(self):
        res = optimal_window("kl_vasicek", 12, 0.05, 1500, SEED,
                             workers=WORKERS)
        assert set(res.curve) == set(range(1, 7))
        assert res.chosen_m == min(
            (m for m in res.curve
             if res.curve[m] == min(res.curve.values())))
        assert res.se_at_min > 0

    def test_vanes_extended_range(self):
        res = optimal_window("kl_vanes", 10, 0.05, 1200, SEED)
        assert set(res.curve) == set(range(1, 10))

    def test_common_random_numbers_match_critical_value(self):
        res = optimal_window("kl_vasicek", 12, 0.05, 1500, SEED)
        for m in (1, 3, 6):
            cv = critical_value("kl_vasicek", 12, 0.05, 1500, SEED, m=m)
            assert cv == res.curve[m]

    def test_rejects_windowless_tests(self):
        with pytest.raises(ValueError):
            optimal_window("ks", 12, 0.05, 1500, SEED)
        with pytest.raises(ValueError):
            optimal_window("kl_bowman", 12, 0.05, 1500, SEED)


class TestPower:
    @pytest.fixture(scope="class")
    def small_table(self):
        return build_critical_value_table(("ks", "za", "kl_vasicek"), (15,),
                                          (0.05,), 4000, SeedSpec(100),
                                          workers=WORKERS)

    def test_size_equals_level_under_null(self, small_table):
        # the "alternative" is the null family itself, independent seed
        rate = power("ks", CAUCHY01, 15, 0.05, 4000, SeedSpec(200),
                     small_table, workers=WORKERS)
        se = np.sqrt(0.05 * 0.95 / 4000)
        assert rate == pytest.approx(0.05, abs=4 * se)

    def test_power_increases_with_separation(self, small_table):
        p_norm = power("kl_vasicek", AlternativeSpec("normal", (0.0, 1.0)),
                       15, 0.05, 2000, SeedSpec(201), small_table)
        p_t5 = power("kl_vasicek", AlternativeSpec("t", (5.0,)),
                     15, 0.05, 2000, SeedSpec(201), small_table)
        assert p_norm > p_t5 > 0.05

    def test_missing_entry_raises(self, small_table):
        with pytest.raises(TableLookupError):
            power("ks", CAUCHY01, 99, 0.05, 1000, SEED, small_table)

    def test_config_mismatch_raises(self, small_table):
        with pytest.raises(TableLookupError):
            power("ks", CAUCHY01, 15, 0.05, 1000, SEED, small_table,
                  config=TestConfig(ebrahimi_k=3.0))


class TestPowerGapBookkeeping:
    # published n=20 rates, used as fixed inputs to the gap computation
    RATES_OTHER = {"ks": 0.042, "ad": 0.028, "cvm": 0.039, "gh": 0.035,
                   "zk": 0.030, "za": 0.094, "zc": 0.061}
    RATES_KL = {"kl_vasicek": 0.354, "kl_bowman": 0.441, "kl_vanes": 0.416,
                "kl_ebrahimi": 0.453, "kl_correa": 0.365,
                "kl_yousefzadeh": 0.410, "kl_alizadeh": 0.301}

    def _report(self, rates):
        rep = PowerReport(reps=1000, master_seed=0, config=CFG)
        for tid, r in rates.items():
            rep.add(tid, "t(3)", 20, 0.05, int(round(r * 1000)))
        return rep

    def test_reproduces_published_gap(self):
        gaps = power_gap(self._report(self.RATES_KL),
                         self._report(self.RATES_OTHER))
        assert gaps[("t(3)", 20, 0.05)] == pytest.approx(0.359, abs=1e-9)

    def test_identical_reports_give_zero(self):
        both = {**self.RATES_KL, **self.RATES_OTHER}
        gaps = power_gap(self._report(both), self._report(both))
        assert gaps[("t(3)", 20, 0.05)] == pytest.approx(0.0, abs=1e-12)

    def test_grid_mismatch_raises(self):
        a = self._report(self.RATES_KL)
        b = self._report(self.RATES_OTHER)
        b.add("ks", "t(5)", 20, 0.05, 10)
        with pytest.raises(TableLookupError):
            power_gap(a, b)


class TestPValue:
    def test_low_observed_gives_one(self):
        assert p_value("ks", 1e-9, 12, 1000, SEED) == \
            pytest.approx(1.0, abs=2e-3)

    def test_high_observed_gives_floor(self):
        assert p_value("ks", 10.0, 12, 1000, SEED) == \
            pytest.approx(1 / 1001, rel=1e-12)

    def test_monotone_in_observed(self):
        ps = [p_value("cvm", o, 12, 1000, SEED)
              for o in (0.02, 0.08, 0.2, 0.5)]
        assert all(a >= b for a, b in zip(ps, ps[1:]))

    def test_quantile_consistency(self):
        # the p-value at the simulated critical value is close to alpha
        cv = critical_value("ks", 20, 0.05, 4000, SeedSpec(50))
        pv = p_value("ks", cv, 20, 4000, SeedSpec(50))
        assert pv == pytest.approx(0.05, abs=0.003)

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            p_value("ks", float("nan"), 12, 1000, SEED)


class TestPowerStudySeeding:
    def test_streams_independent_of_table_seed(self):
        table = build_critical_value_table(("ks",), (12,), (0.05,), 2000,
                                           SeedSpec(1))
        r1 = power_study(("ks",), (CAUCHY01,), (12,), (0.05,), 2000,
                         SeedSpec(2), table)
        r2 = power_study(("ks",), (CAUCHY01,), (12,), (0.05,), 2000,
                         SeedSpec(2), table)
        assert r1.entries == r2.entries
        assert r1.table_fingerprint == table.fingerprint

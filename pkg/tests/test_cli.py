"""Command-line surface: input parsing, report pipeline, caching, formats."""
import os

import numpy as np
import pytest

from cauchygof import CauchyGofError, SeedSpec, build_critical_value_table
from cauchygof.cli import (RunConfig, cmd_demo_dax, cmd_test, main,
                           parse_numbers)

pytestmark = pytest.mark.usefixtures("in_tmp_dir")


@pytest.fixture()
def in_tmp_dir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def _write_values(path, values, header=None, sep="\n"):
    lines = ([header] if header else []) + [str(v) for v in values]
    path.write_text(sep.join(lines) + "\n")


class TestParseNumbers:
    def test_plain_numbers_and_comments(self, tmp_path):
        p = tmp_path / "d.txt"
        p.write_text("# header comment\n1.5\n2.5  # inline\n\n3.5\n-4.5\n")
        assert list(parse_numbers(p)) == [1.5, 2.5, 3.5, -4.5]

    def test_csv_header_autodetected(self, tmp_path):
        p = tmp_path / "d.csv"
        _write_values(p, [0.1, 0.2, 0.3, 0.4], header="returns")
        assert list(parse_numbers(p)) == [0.1, 0.2, 0.3, 0.4]

    def test_csv_single_column_with_trailing_commas(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text('"ret",\n"0.1",\n0.2,\n0.3,\n0.4,\n')
        assert list(parse_numbers(p)) == [0.1, 0.2, 0.3, 0.4]

    def test_garbage_midfile_rejected(self, tmp_path):
        p = tmp_path / "d.txt"
        p.write_text("1.0\n2.0\noops\n3.0\n4.0\n")
        with pytest.raises(CauchyGofError):
            parse_numbers(p)

    def test_too_few_values_rejected(self, tmp_path):
        p = tmp_path / "d.txt"
        _write_values(p, [1.0, 2.0, 3.0])
        with pytest.raises(CauchyGofError):
            parse_numbers(p)


class TestRunConfig:
    def test_round_trip_lossless(self):
        cfg = RunConfig(input="x.txt", tests="ks,za", alpha=0.01, reps=1234,
                        seed=9, workers=3, m_overrides={"kl_vasicek": 7},
                        quantile_convention="weibull",
                        alizadeh_reading="difference", ebrahimi_k=3.5,
                        table="t.tsv", output="o.tsv", format="structured",
                        p_values=True, ns=(10, 30), alternatives="t(3)",
                        qq_output="q.tsv")
        assert RunConfig.from_dict(cfg.to_dict()) == cfg

    def test_defaults(self):
        cfg = RunConfig()
        assert cfg.alpha == 0.05 and cfg.reps == 50_000 and cfg.seed == 0
        assert cfg.tests == "all" and cfg.format == "human"


class TestCmdTest:
    @pytest.fixture()
    def data_file(self, tmp_path, rng):
        p = tmp_path / "returns.txt"
        _write_values(p, np.round(rng.standard_cauchy(25), 6))
        return p

    def test_report_and_cache_reuse(self, data_file, capsys):
        cfg = RunConfig(input=str(data_file), tests="ks,kl_vasicek",
                        reps=1500, seed=3)
        rep1 = cmd_test(cfg)
        out1 = capsys.readouterr().out
        assert "fresh simulation" in out1
        rep2 = cmd_test(cfg)
        out2 = capsys.readouterr().out
        assert "cache" in out2
        assert [r.critical_value for r in rep1.results] == \
            [r.critical_value for r in rep2.results]
        assert all(r.decision in ("reject", "fail-to-reject")
                   for r in rep1.results)

    def test_stale_cache_not_reused_after_seed_change(self, data_file,
                                                      capsys):
        cmd_test(RunConfig(input=str(data_file), tests="ks", reps=1500,
                           seed=3))
        capsys.readouterr()
        cmd_test(RunConfig(input=str(data_file), tests="ks", reps=1500,
                           seed=4))
        assert "fresh simulation" in capsys.readouterr().out

    def test_explicit_table_convention_mismatch_rejected(self, data_file,
                                                         tmp_path):
        table = build_critical_value_table(("ks",), (25,), (0.05,), 1500,
                                           SeedSpec(3))
        tp = tmp_path / "t.tsv"
        table.save(tp)
        cfg = RunConfig(input=str(data_file), tests="ks", table=str(tp),
                        quantile_convention="weibull")
        with pytest.raises(CauchyGofError):
            cmd_test(cfg)

    def test_window_override_vs_table_mismatch(self, data_file, tmp_path):
        table = build_critical_value_table(("kl_vasicek",), (25,), (0.05,),
                                           1500, SeedSpec(3))
        tp = tmp_path / "t.tsv"
        table.save(tp)
        cfg = RunConfig(input=str(data_file), tests="kl_vasicek",
                        table=str(tp), m_overrides={"kl_vasicek": 11})
        with pytest.raises(CauchyGofError):
            cmd_test(cfg)

    def test_structured_format_fields(self, data_file, capsys):
        cfg = RunConfig(input=str(data_file), tests="ks", reps=1500, seed=3,
                        format="structured")
        cmd_test(cfg)
        out = capsys.readouterr().out
        lines = [ln for ln in out.splitlines() if ln.startswith("record=")]
        assert lines[0].startswith("record=sample ")
        fields = dict(kv.split("=", 1) for kv in lines[1].split())
        assert fields["record"] == "result" and fields["test"] == "ks"
        float(fields["statistic"])
        float(fields["critical_value"])
        assert fields["decision"] in ("reject", "fail-to-reject")


class TestMainExitCodes:
    def test_too_small_input(self, tmp_path, capsys):
        p = tmp_path / "small.txt"
        _write_values(p, [1.0, 2.0, 3.0])
        rc = main(["test", "--input", str(p), "--reps", "1500"])
        assert rc != 0
        assert "error:" in capsys.readouterr().err

    def test_missing_file(self, capsys):
        rc = main(["test", "--input", "nope.txt", "--reps", "1500"])
        assert rc != 0

    def test_bad_test_id(self, tmp_path, capsys):
        p = tmp_path / "d.txt"
        _write_values(p, [0.1, 0.2, 0.3, 0.4, 0.5])
        rc = main(["test", "--input", str(p), "--tests", "bogus",
                   "--reps", "1500"])
        assert rc != 0

    def test_tables_roundtrip_via_main(self, tmp_path):
        out = tmp_path / "t.tsv"
        rc = main(["tables", "--n", "10", "--tests", "ks,cvm",
                   "--reps", "1500", "--seed", "4", "--output", str(out)])
        assert rc == 0
        from cauchygof.results import CriticalValueTable
        table = CriticalValueTable.load(out)
        assert len(table.entries) == 2

    def test_window_search_via_main(self, tmp_path):
        out = tmp_path / "w.tsv"
        rc = main(["window-search", "--n", "10", "--tests", "kl_vasicek",
                   "--reps", "1500", "--seed", "4", "--output", str(out)])
        assert rc == 0
        from cauchygof.results import load_window_search
        res = load_window_search(out)
        assert res[0].curve and res[0].chosen_m in res[0].curve

    def test_power_via_main(self, tmp_path):
        out = tmp_path / "p.tsv"
        rc = main(["power", "--n", "10", "--tests", "ks,kl_vasicek",
                   "--alternatives", "normal(0,1)", "--reps", "1500",
                   "--seed", "4", "--output", str(out)])
        assert rc == 0
        from cauchygof.results import PowerReport
        rep = PowerReport.load(out)
        assert len(rep.entries) == 2
        text = out.read_text()
        assert "# gap" in text  # both groups selected


class TestDemoDax:
    def test_demo_runs_and_emits_qq(self, tmp_path, capsys):
        qq = tmp_path / "qq.tsv"
        report = cmd_demo_dax(RunConfig(qq_output=str(qq)))
        out = capsys.readouterr().out
        assert "fail-to-reject" in out
        assert len(report.results) == 14
        assert all(r.decision == "fail-to-reject" for r in report.results)
        rows = [ln.split("\t") for ln in qq.read_text().splitlines()
                if not ln.startswith("#")]
        assert len(rows) == 30
        fitted = [float(a) for a, _ in rows]
        empirical = [float(b) for _, b in rows]
        assert all(a <= b for a, b in zip(fitted, fitted[1:]))
        assert all(a <= b for a, b in zip(empirical, empirical[1:]))

    def test_demo_header_estimates(self, tmp_path, capsys):
        report = cmd_demo_dax(RunConfig(qq_output=str(tmp_path / "q.tsv")))
        capsys.readouterr()
        assert report.mu_hat == pytest.approx(0.0009629174, abs=5e-8)
        assert report.sigma_hat == pytest.approx(0.003635871, abs=5e-8)

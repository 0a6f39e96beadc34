"""Command-line interface.

Five subcommands: ``test`` runs selected statistics on a data file and
reports decisions against simulated critical values; ``tables`` builds a
critical-value table over a sample-size grid; ``power`` estimates rejection
rates against alternative families; ``window-search`` traces critical values
over all admissible window sizes; ``demo-dax`` analyzes the bundled DAX
return series and emits Cauchy Q-Q data for external plotting.

Input files are plain text, one number per line, ``#`` comments allowed; a
single-column CSV with a header row is auto-detected.  Critical values are
resolved from an explicit ``--table``, from a cache file next to the input
(keyed by a fingerprint of replications, seed and conventions; a stale
fingerprint is rejected, never silently reused), or by fresh simulation.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, datasets, montecarlo, registry
from .alternatives import STUDIED_ALTERNATIVES, AlternativeSpec, SeedSpec
from .config import (ALIZADEH_READINGS, QUANTILE_CONVENTIONS, TestConfig)
from .errors import CauchyGofError, TableLookupError
from .kl import default_window
from .model import Sample, cauchy_quantile, estimate_params
from .results import (CriticalValueTable, PowerReport, WindowSearchResult,
                      save_window_search, simulation_fingerprint)

__all__ = ["main", "RunConfig", "cmd_test", "cmd_tables", "cmd_power",
           "cmd_window_search", "cmd_demo_dax"]


@dataclass
class RunConfig:
    """Everything a run needs; every field carries its default."""

    input: str | None = None
    tests: str = "all"
    alpha: float = 0.05
    reps: int = 50_000
    seed: int = 0
    workers: int = 1
    m_overrides: dict[str, int] = field(default_factory=dict)
    quantile_convention: str = "linear"
    alizadeh_reading: str = "average"
    ebrahimi_k: float = 5.0
    table: str | None = None
    output: str | None = None
    format: str = "human"
    p_values: bool = False
    ns: tuple[int, ...] = (10, 20, 30, 50)
    alternatives: str = "studied"
    qq_output: str = "dax_qq.tsv"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["m_overrides"] = dict(self.m_overrides)
        d["ns"] = list(self.ns)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        d["m_overrides"] = {k: int(v) for k, v in d.get("m_overrides",
                                                        {}).items()}
        d["ns"] = tuple(int(n) for n in d.get("ns", (10, 20, 30, 50)))
        return cls(**d)

    def test_config(self) -> TestConfig:
        return TestConfig(quantile_convention=self.quantile_convention,
                          alizadeh_reading=self.alizadeh_reading,
                          ebrahimi_k=self.ebrahimi_k)


@dataclass
class TestResult:
    test_id: str
    label: str
    m: int | None
    statistic: float
    critical_value: float | None
    p_value: float | None

    @property
    def decision(self) -> str | None:
        if self.critical_value is None:
            return None
        return "reject" if self.statistic > self.critical_value \
            else "fail-to-reject"


@dataclass
class TestReport:
    n: int
    mu_hat: float
    sigma_hat: float
    alpha: float
    convention: str
    cv_source: str
    results: list[TestResult] = field(default_factory=list)

    def render_human(self) -> str:
        lines = [
            "Cauchy goodness-of-fit report",
            f"  n = {self.n}, fitted location = {self.mu_hat!r}, "
            f"fitted scale = {self.sigma_hat!r}",
            f"  alpha = {self.alpha:g}, quantile convention = "
            f"{self.convention}, critical values: {self.cv_source}",
            "",
            f"  {'test':26s} {'m':>4s} {'statistic':>12s} "
            f"{'critical':>10s} {'decision':16s} {'p-value':>8s}",
        ]
        for r in self.results:
            mtxt = "-" if r.m is None else str(r.m)
            cvtxt = "-" if r.critical_value is None \
                else f"{r.critical_value:10.4f}"
            ptxt = "-" if r.p_value is None else f"{r.p_value:8.4f}"
            lines.append(f"  {r.label:26s} {mtxt:>4s} {r.statistic:12.6f} "
                         f"{cvtxt:>10s} {r.decision or '-':16s} {ptxt:>8s}")
        return "\n".join(lines)

    def render_structured(self) -> str:
        lines = [f"record=sample n={self.n} mu_hat={self.mu_hat!r} "
                 f"sigma_hat={self.sigma_hat!r} alpha={self.alpha!r} "
                 f"convention={self.convention}"]
        for r in self.results:
            lines.append(
                f"record=result test={r.test_id} "
                f"m={'-' if r.m is None else r.m} "
                f"statistic={r.statistic!r} "
                f"critical_value="
                f"{'-' if r.critical_value is None else repr(r.critical_value)} "
                f"decision={r.decision or '-'} "
                f"p_value={'-' if r.p_value is None else repr(r.p_value)}")
        return "\n".join(lines)

    def render(self, fmt: str) -> str:
        return self.render_human() if fmt == "human" \
            else self.render_structured()


def parse_numbers(path) -> np.ndarray:
    """Read one number per line; '#' starts a comment; a leading CSV header
    row is skipped; a single-column CSV (optionally with trailing commas)
    is accepted."""
    values: list[float] = []
    first_data_line = True
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        token = line.split(",")[0].strip().strip('"')
        try:
            values.append(float(token))
        except ValueError:
            if first_data_line:
                first_data_line = False  # header row
                continue
            raise CauchyGofError(
                f"cannot parse {token!r} in {path} as a number") from None
        first_data_line = False
    if len(values) < 4:
        raise CauchyGofError(
            f"input {path} holds {len(values)} usable values; at least 4 "
            "are needed")
    return np.asarray(values)


def _resolve_windows(cfg: RunConfig, test_ids, n: int) -> dict[str, int | None]:
    out: dict[str, int | None] = {}
    for tid in test_ids:
        info = registry.get(tid)
        if not info.window_based:
            if tid in cfg.m_overrides:
                raise CauchyGofError(f"test {tid!r} takes no window size")
            out[tid] = None
        else:
            out[tid] = cfg.m_overrides.get(
                tid, default_window(info.entropy_id, n))
    return out


def _cache_path(input_path: str, n: int, alpha: float, fp: str) -> Path:
    p = Path(input_path)
    return p.parent / f".{p.stem}-n{n}-a{alpha:g}-{fp}.cvtable.tsv"


def _resolve_table(cfg: RunConfig, test_ids, n: int,
                   windows: dict[str, int | None]) -> tuple[
                       CriticalValueTable, str]:
    """Explicit table, fingerprint-matched cache, or fresh simulation."""
    config = cfg.test_config()
    if cfg.table is not None:
        table = CriticalValueTable.load(cfg.table)
        if table.config != config:
            raise TableLookupError(
                f"table {cfg.table} was built under different statistic "
                "conventions than requested; rebuild it or adjust options")
        return table, f"table {cfg.table} (reps={table.reps}, " \
                      f"seed={table.master_seed})"
    fp = simulation_fingerprint(cfg.reps, cfg.seed, config)
    cache = _cache_path(cfg.input, n, cfg.alpha, fp) if cfg.input else None
    if cache is not None and cache.exists():
        table = CriticalValueTable.load(cache)
        table.require_compatible(cfg.reps, cfg.seed, config)
        return table, f"cache {cache}"
    table = montecarlo.build_critical_value_table(
        test_ids, (n,), (cfg.alpha,), cfg.reps, SeedSpec(cfg.seed),
        config, cfg.workers, windows={t: m for t, m in windows.items()
                                      if m is not None})
    src = f"fresh simulation (reps={cfg.reps}, seed={cfg.seed})"
    if cache is not None:
        table.save(cache)
        src += f", cached at {cache}"
    return table, src


def _build_report(cfg: RunConfig, sample: Sample) -> TestReport:
    config = cfg.test_config()
    test_ids = registry.parse_test_selection(cfg.tests)
    n = sample.n
    windows = _resolve_windows(cfg, test_ids, n)
    table, src = _resolve_table(cfg, test_ids, n, windows)
    params = estimate_params(sample, cfg.quantile_convention)
    report = TestReport(n=n, mu_hat=params.mu, sigma_hat=params.sigma,
                        alpha=cfg.alpha, convention=cfg.quantile_convention,
                        cv_source=src)
    for tid in test_ids:
        cv, table_m = table.lookup(tid, n, cfg.alpha)
        m = windows[tid]
        if m != table_m:
            raise TableLookupError(
                f"table holds window size {table_m} for {tid} but the run "
                f"requests {m}; rebuild the table or drop the override")
        stat = registry.compute_statistic(tid, sample, m, config)
        pv = None
        if cfg.p_values:
            pv = montecarlo.p_value(tid, stat, n, cfg.reps, SeedSpec(cfg.seed),
                                    m, config, cfg.workers)
        report.results.append(TestResult(
            test_id=tid, label=registry.get(tid).label, m=m, statistic=stat,
            critical_value=cv, p_value=pv))
    return report


def cmd_test(cfg: RunConfig) -> TestReport:
    """Run selected statistics on a data file and report decisions."""
    if cfg.input is None:
        raise CauchyGofError("--input is required")
    sample = Sample.from_data(parse_numbers(cfg.input))
    if sample.n < 4:
        raise CauchyGofError("at least 4 observations are required")
    report = _build_report(cfg, sample)
    print(report.render(cfg.format))
    return report


def cmd_tables(cfg: RunConfig) -> CriticalValueTable:
    """Build and save a critical-value table over the configured n grid."""
    if cfg.output is None:
        raise CauchyGofError("--output is required")
    test_ids = registry.parse_test_selection(cfg.tests)
    windows = {}
    for n in cfg.ns:
        for tid, m in _resolve_windows(cfg, test_ids, n).items():
            if m is not None and tid in cfg.m_overrides:
                windows[tid] = m
    table = montecarlo.build_critical_value_table(
        test_ids, cfg.ns, (cfg.alpha,), cfg.reps, SeedSpec(cfg.seed),
        cfg.test_config(), cfg.workers, windows=windows)
    table.save(cfg.output)
    flag = " [low precision]" if table.low_precision else ""
    print(f"wrote {len(table.entries)} critical values to {cfg.output}"
          f"{flag} (reps={table.reps}, seed={table.master_seed}, "
          f"regenerated={table.regenerated})")
    return table


def _split_outside_parens(text: str) -> list[str]:
    out, cur, depth = [], [], 0
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [t for t in (s.strip() for s in out) if t]


def _parse_alternatives(spec: str) -> tuple[AlternativeSpec, ...]:
    if spec.strip().lower() == "studied":
        return STUDIED_ALTERNATIVES
    return tuple(AlternativeSpec.parse(tok)
                 for tok in _split_outside_parens(spec))


def cmd_power(cfg: RunConfig) -> PowerReport:
    """Estimate rejection rates; optionally derive the best-KL-minus-
    best-other gap summary when both test groups are selected."""
    if cfg.output is None:
        raise CauchyGofError("--output is required")
    config = cfg.test_config()
    test_ids = registry.parse_test_selection(cfg.tests)
    alts = _parse_alternatives(cfg.alternatives)
    if cfg.table is not None:
        table = CriticalValueTable.load(cfg.table)
        if table.config != config:
            raise TableLookupError(
                f"table {cfg.table} was built under different statistic "
                "conventions than requested")
    else:
        # the critical-value simulation gets its own seed so power draws
        # are independent of the null draws
        table = montecarlo.build_critical_value_table(
            test_ids, cfg.ns, (cfg.alpha,), cfg.reps, SeedSpec(cfg.seed + 1),
            config, cfg.workers)
    report = montecarlo.power_study(test_ids, alts, cfg.ns, (cfg.alpha,),
                                    cfg.reps, SeedSpec(cfg.seed), table,
                                    config, cfg.workers)
    report.save(cfg.output)
    print(f"wrote {len(report.entries)} rejection rates to {cfg.output}")
    kl_ids = [t for t in test_ids if registry.get(t).kind == "kl"]
    edf_ids = [t for t in test_ids if registry.get(t).kind == "edf"]
    if kl_ids and edf_ids:
        gaps = montecarlo.power_gap(report, report)
        print("power gap (best KL test minus best other test):")
        for (alt, n, alpha), g in gaps.items():
            print(f"  {alt:15s} n={n:<4d} alpha={alpha:g}  {g:+.3f}")
        with open(cfg.output, "a") as fh:
            for (alt, n, alpha), g in gaps.items():
                fh.write(f"# gap\t{alt}\t{n}\t{alpha!r}\t{g!r}\n")
    return report


def cmd_window_search(cfg: RunConfig) -> list[WindowSearchResult]:
    """Trace the critical-value curve over every admissible window size."""
    if cfg.output is None:
        raise CauchyGofError("--output is required")
    selection = registry.parse_test_selection(cfg.tests)
    test_ids = [t for t in selection if registry.get(t).window_based]
    if not test_ids:
        raise CauchyGofError("no window-based tests selected")
    results = []
    for n in cfg.ns:
        for tid in test_ids:
            res = montecarlo.optimal_window(tid, n, cfg.alpha, cfg.reps,
                                            SeedSpec(cfg.seed),
                                            cfg.test_config(), cfg.workers)
            results.append(res)
            print(f"{tid:15s} n={n:<4d} chosen m={res.chosen_m:<4d} "
                  f"critical value {res.curve[res.chosen_m]!r} "
                  f"(quantile se {res.se_at_min:.2g})")
    save_window_search(results, cfg.output)
    print(f"wrote curves to {cfg.output}")
    return results


def cmd_demo_dax(cfg: RunConfig | None = None) -> TestReport:
    """Analyze the bundled DAX returns against the packaged reference table
    and emit (fitted quantile, empirical quantile) pairs for plotting."""
    cfg = cfg or RunConfig()
    sample = datasets.dax_returns()
    if cfg.table is None:
        config = cfg.test_config()
        table = datasets.reference_table()
        if table.config != config:
            raise TableLookupError(
                "the packaged reference table does not cover the requested "
                "conventions; pass --table with a matching table")
        test_ids = registry.parse_test_selection(cfg.tests)
        windows = _resolve_windows(cfg, test_ids, sample.n)
        params = estimate_params(sample, cfg.quantile_convention)
        report = TestReport(
            n=sample.n, mu_hat=params.mu, sigma_hat=params.sigma,
            alpha=cfg.alpha, convention=cfg.quantile_convention,
            cv_source=f"packaged reference table (reps={table.reps}, "
                      f"seed={table.master_seed})")
        for tid in test_ids:
            cv, table_m = table.lookup(tid, sample.n, cfg.alpha)
            m = windows[tid]
            if m != table_m:
                raise TableLookupError(
                    f"packaged table holds m={table_m} for {tid}, run "
                    f"requests {m}")
            stat = registry.compute_statistic(tid, sample, m, config)
            report.results.append(TestResult(
                test_id=tid, label=registry.get(tid).label, m=m,
                statistic=stat, critical_value=cv, p_value=None))
    else:
        cfg = RunConfig(**{**cfg.to_dict(), "input": None})
        report = _build_report(cfg, sample)
    print(report.render(cfg.format))

    params = estimate_params(sample, cfg.quantile_convention)
    pos = (np.arange(1, sample.n + 1) - 0.5) / sample.n
    fitted = cauchy_quantile(pos, params)
    lines = ["# Cauchy Q-Q data for the bundled DAX returns",
             "# columns: fitted_quantile\tempirical_quantile"]
    lines += [f"{float(f)!r}\t{float(e)!r}"
              for f, e in zip(fitted, sample.values)]
    Path(cfg.qq_output).write_text("\n".join(lines) + "\n")
    print(f"wrote Q-Q data to {cfg.qq_output}")
    return report


def _parse_m_overrides(text: str) -> dict[str, int]:
    out: dict[str, int] = {}
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if ":" not in tok:
            raise argparse.ArgumentTypeError(
                f"window override {tok!r} is not of the form test:m")
        tid, m = tok.split(":", 1)
        out[tid.strip()] = int(m)
    return out


def _parse_ns(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.split(",") if tok.strip())


def _add_common(p: argparse.ArgumentParser, *, reps_default: int) -> None:
    p.add_argument("--tests", default="all",
                   help="comma list of test ids, or all / edf / kl")
    p.add_argument("--alpha", type=float, default=0.05,
                   help="significance level (default 0.05)")
    p.add_argument("--reps", type=int, default=reps_default,
                   help=f"Monte Carlo replications (default {reps_default})")
    p.add_argument("--seed", type=int, default=0,
                   help="master seed; replication r draws stream (seed, r)")
    p.add_argument("--workers", type=int, default=1,
                   help="worker threads; results are identical for any count")
    p.add_argument("--m", type=_parse_m_overrides, default={},
                   dest="m_overrides", metavar="TEST:M[,TEST:M...]",
                   help="window-size overrides, e.g. kl_vasicek:8")
    p.add_argument("--quantile-convention", choices=QUANTILE_CONVENTIONS,
                   default="linear", help="sample-quantile rule")
    p.add_argument("--alizadeh-reading", choices=ALIZADEH_READINGS,
                   default="average",
                   help="endpoint-density combination rule")
    p.add_argument("--ebrahimi-k", type=float, default=5.0,
                   help="support-extension multiplier in [3, 5]")
    p.add_argument("--format", choices=("human", "structured"),
                   default="human", help="report format")


def _make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cauchygof",
        description="Goodness-of-fit tests for the Cauchy distribution")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="run tests on a data file")
    _add_common(p, reps_default=50_000)
    p.add_argument("--input", required=True, help="data file, one value "
                   "per line (single-column CSV accepted)")
    p.add_argument("--table", help="critical-value table file")
    p.add_argument("--p-values", action="store_true", dest="p_values",
                   help="attach Monte Carlo p-values")

    p = sub.add_parser("tables", help="build a critical-value table")
    _add_common(p, reps_default=50_000)
    p.add_argument("--n", type=_parse_ns, default=(10, 20, 30, 50),
                   dest="ns", help="comma list of sample sizes")
    p.add_argument("--output", required=True, help="output table path")

    p = sub.add_parser("power", help="estimate rejection rates")
    _add_common(p, reps_default=10_000)
    p.add_argument("--n", type=_parse_ns, default=(20,), dest="ns",
                   help="comma list of sample sizes (default 20)")
    p.add_argument("--alternatives", default="studied",
                   help="comma list of family specs like t(3),normal(0,1); "
                        "default: the ten studied members")
    p.add_argument("--table", help="critical-value table file (default: "
                   "simulate with seed+1)")
    p.add_argument("--output", required=True, help="output report path")

    p = sub.add_parser("window-search",
                       help="critical-value curves over window sizes")
    _add_common(p, reps_default=50_000)
    p.add_argument("--n", type=_parse_ns, default=(10,), dest="ns",
                   help="comma list of sample sizes (default 10)")
    p.add_argument("--output", required=True, help="output curves path")

    p = sub.add_parser("demo-dax",
                       help="analyze the bundled DAX return series")
    _add_common(p, reps_default=50_000)
    p.add_argument("--table", help="critical-value table (default: packaged "
                   "50,000-replication reference table)")
    p.add_argument("--qq-output", default="dax_qq.tsv", dest="qq_output",
                   help="where to write Q-Q pairs (default dax_qq.tsv)")

    return ap


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = RunConfig.__dataclass_fields__
    kwargs = {k: v for k, v in vars(args).items() if k in fields}
    return RunConfig(**kwargs)


def main(argv=None) -> int:
    args = _make_parser().parse_args(argv)
    cfg = _config_from_args(args)
    commands = {
        "test": cmd_test,
        "tables": cmd_tables,
        "power": cmd_power,
        "window-search": cmd_window_search,
        "demo-dax": cmd_demo_dax,
    }
    try:
        commands[args.command](cfg)
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CauchyGofError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Result containers and their self-describing text formats.

Three artifacts persist to disk: critical-value tables, power reports and
window-search curves.  Files are plain TSV with a ``key: value`` metadata
header; every simulation input needed to recompute the file (replications,
master seed, conventions) is recorded, and writing is deterministic so a
rerun with the same configuration produces identical bytes.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path

from .config import TestConfig
from .errors import TableLookupError

__all__ = ["CriticalValueTable", "PowerReport", "WindowSearchResult",
           "save_window_search", "load_window_search"]

#: below this replication count the 0.95 quantile carries percent-level
#: standard error and the table is flagged low precision
_LOW_PRECISION_REPS = 10_000


def _fmt(x: float) -> str:
    return repr(float(x))


def _config_items(reps: int, master_seed: int, config: TestConfig):
    return [
        ("reps", str(int(reps))),
        ("master_seed", str(int(master_seed))),
        ("quantile_convention", config.quantile_convention),
        ("clamp_epsilon", _fmt(config.clamp_epsilon)),
        ("gh_lambda", _fmt(config.gh_lambda)),
        ("ebrahimi_k", _fmt(config.ebrahimi_k)),
        ("alizadeh_reading", config.alizadeh_reading),
    ]


def simulation_fingerprint(reps: int, master_seed: int,
                           config: TestConfig) -> str:
    """Short stable digest of everything that determines simulated values."""
    blob = ";".join(f"{k}={v}" for k, v in _config_items(reps, master_seed,
                                                         config))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def _parse_header(lines: list[str], expected_format: str):
    meta: dict[str, str] = {}
    body_at = None
    for i, line in enumerate(lines):
        if line.startswith("#") or not line.strip():
            continue
        if line.startswith("columns:"):
            body_at = i + 1
            break
        key, _, val = line.partition(":")
        meta[key.strip()] = val.strip()
    if body_at is None:
        raise TableLookupError("malformed file: no 'columns:' line")
    if meta.get("format") != expected_format:
        raise TableLookupError(
            f"expected a {expected_format} file, got "
            f"{meta.get('format', 'unknown')!r}")
    config = TestConfig(
        quantile_convention=meta["quantile_convention"],
        clamp_epsilon=float(meta["clamp_epsilon"]),
        gh_lambda=float(meta["gh_lambda"]),
        ebrahimi_k=float(meta["ebrahimi_k"]),
        alizadeh_reading=meta["alizadeh_reading"],
    )
    return meta, config, body_at


@dataclass
class CriticalValueTable:
    """Simulated (1 - alpha) quantiles of the null distributions.

    Entries are keyed (test_id, n, alpha, m); ``m`` is None for tests
    without a window size.  Metadata fully determines recomputation.
    """

    reps: int
    master_seed: int
    config: TestConfig
    entries: dict[tuple[str, int, float, int | None], float] = field(
        default_factory=dict)
    regenerated: int = 0
    support_widenings: int = 0

    @property
    def low_precision(self) -> bool:
        return self.reps < _LOW_PRECISION_REPS

    @property
    def fingerprint(self) -> str:
        return simulation_fingerprint(self.reps, self.master_seed, self.config)

    def add(self, test_id: str, n: int, alpha: float, m: int | None,
            value: float) -> None:
        self.entries[(test_id, int(n), float(alpha), m)] = float(value)

    def lookup(self, test_id: str, n: int, alpha: float):
        """Return (critical value, m) for a test; unique match required."""
        hits = [(key[3], val) for key, val in self.entries.items()
                if key[0] == test_id and key[1] == int(n)
                and math.isclose(key[2], alpha)]
        if not hits:
            raise TableLookupError(
                f"no critical value for test={test_id} n={n} alpha={alpha}; "
                "rebuild the table with this grid")
        if len(hits) > 1:
            raise TableLookupError(
                f"ambiguous critical value for test={test_id} n={n} "
                f"alpha={alpha}: {len(hits)} window sizes present")
        m, value = hits[0]
        return value, m

    def require_compatible(self, reps: int, master_seed: int,
                           config: TestConfig) -> None:
        """Reject stale tables instead of silently reusing them."""
        want = simulation_fingerprint(reps, master_seed, config)
        if self.fingerprint != want:
            raise TableLookupError(
                "critical-value table was generated under a different "
                f"configuration (table fingerprint {self.fingerprint}, "
                f"requested {want}); rebuild it or pass matching options")

    def save(self, path) -> None:
        lines = ["# cauchygof critical-value table", "format: cvtable/1"]
        lines += [f"{k}: {v}" for k, v in
                  _config_items(self.reps, self.master_seed, self.config)]
        lines.append(f"low_precision: {'yes' if self.low_precision else 'no'}")
        lines.append(f"regenerated: {self.regenerated}")
        lines.append(f"support_widenings: {self.support_widenings}")
        lines.append("columns: test\tn\talpha\tm\tcritical_value")
        for key in sorted(self.entries,
                          key=lambda k: (k[0], k[1], k[2], k[3] or 0)):
            test_id, n, alpha, m = key
            mtxt = "-" if m is None else str(m)
            lines.append(f"{test_id}\t{n}\t{_fmt(alpha)}\t{mtxt}\t"
                         f"{_fmt(self.entries[key])}")
        Path(path).write_text("\n".join(lines) + "\n")

    @classmethod
    def load(cls, path) -> "CriticalValueTable":
        lines = Path(path).read_text().splitlines()
        meta, config, body_at = _parse_header(lines, "cvtable/1")
        table = cls(reps=int(meta["reps"]),
                    master_seed=int(meta["master_seed"]),
                    config=config,
                    regenerated=int(meta.get("regenerated", 0)),
                    support_widenings=int(meta.get("support_widenings", 0)))
        for line in lines[body_at:]:
            if not line.strip() or line.startswith("#"):
                continue
            test_id, n, alpha, mtxt, value = line.split("\t")
            m = None if mtxt == "-" else int(mtxt)
            table.add(test_id, int(n), float(alpha), m, float(value))
        return table


@dataclass
class PowerReport:
    """Estimated rejection rates per (test, alternative, n, alpha).

    Rejection counts are stored exactly; rate = count / reps and
    se = sqrt(rate (1 - rate) / reps) are derived.  ``table_fingerprint``
    records which critical-value table drove the decisions.
    """

    reps: int
    master_seed: int
    config: TestConfig
    table_fingerprint: str = ""
    entries: dict[tuple[str, str, int, float], int] = field(
        default_factory=dict)

    def add(self, test_id: str, alternative: str, n: int, alpha: float,
            rejections: int) -> None:
        self.entries[(test_id, alternative, int(n), float(alpha))] = \
            int(rejections)

    def rate(self, test_id: str, alternative: str, n: int,
             alpha: float) -> float:
        return self.entries[(test_id, alternative, int(n), float(alpha))] \
            / self.reps

    def se(self, test_id: str, alternative: str, n: int,
           alpha: float) -> float:
        p = self.rate(test_id, alternative, n, alpha)
        return math.sqrt(p * (1.0 - p) / self.reps)

    def grid(self) -> set[tuple[str, int, float]]:
        """(alternative, n, alpha) combinations present in the report."""
        return {(alt, n, alpha) for _, alt, n, alpha in self.entries}

    def save(self, path) -> None:
        lines = ["# cauchygof power report", "format: power/1"]
        lines += [f"{k}: {v}" for k, v in
                  _config_items(self.reps, self.master_seed, self.config)]
        lines.append(f"table_fingerprint: {self.table_fingerprint}")
        lines.append("columns: test\talternative\tn\talpha\trejections"
                     "\trate\tse")
        for key in sorted(self.entries):
            test_id, alt, n, alpha = key
            count = self.entries[key]
            lines.append(
                f"{test_id}\t{alt}\t{n}\t{_fmt(alpha)}\t{count}\t"
                f"{_fmt(count / self.reps)}\t"
                f"{_fmt(self.se(test_id, alt, n, alpha))}")
        Path(path).write_text("\n".join(lines) + "\n")

    @classmethod
    def load(cls, path) -> "PowerReport":
        lines = Path(path).read_text().splitlines()
        meta, config, body_at = _parse_header(lines, "power/1")
        report = cls(reps=int(meta["reps"]),
                     master_seed=int(meta["master_seed"]),
                     config=config,
                     table_fingerprint=meta.get("table_fingerprint", ""))
        for line in lines[body_at:]:
            if not line.strip() or line.startswith("#"):
                continue
            test_id, alt, n, alpha, count, _rate, _se = line.split("\t")
            report.add(test_id, alt, int(n), float(alpha), int(count))
        return report


@dataclass
class WindowSearchResult:
    """Critical-value curve over the admissible window range of one test.

    ``chosen_m`` attains the curve minimum, ties broken to the smallest m;
    ``se_at_min`` is the order-statistic standard error of the minimum's
    empirical quantile, the yardstick for flat-minimum comparisons.
    """

    test_id: str
    n: int
    alpha: float
    reps: int
    master_seed: int
    config: TestConfig
    curve: dict[int, float] = field(default_factory=dict)
    chosen_m: int = 0
    se_at_min: float = 0.0


def save_window_search(results: list[WindowSearchResult], path) -> None:
    if not results:
        raise ValueError("nothing to save")
    first = results[0]
    lines = ["# cauchygof window-size search", "format: windowsearch/1"]
    lines += [f"{k}: {v}" for k, v in
              _config_items(first.reps, first.master_seed, first.config)]
    lines.append("columns: test\tn\talpha\tm\tcritical_value\tchosen")
    for res in results:
        for m in sorted(res.curve):
            star = "*" if m == res.chosen_m else "-"
            lines.append(f"{res.test_id}\t{res.n}\t{_fmt(res.alpha)}\t{m}\t"
                         f"{_fmt(res.curve[m])}\t{star}")
        lines.append(f"# se_at_min {res.test_id} n={res.n}: "
                     f"{_fmt(res.se_at_min)}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_window_search(path) -> list[WindowSearchResult]:
    lines = Path(path).read_text().splitlines()
    meta, config, body_at = _parse_header(lines, "windowsearch/1")
    out: dict[tuple[str, int, float], WindowSearchResult] = {}
    for line in lines[body_at:]:
        if not line.strip() or line.startswith("#"):
            continue
        test_id, n, alpha, m, value, star = line.split("\t")
        key = (test_id, int(n), float(alpha))
        res = out.setdefault(key, WindowSearchResult(
            test_id=test_id, n=int(n), alpha=float(alpha),
            reps=int(meta["reps"]), master_seed=int(meta["master_seed"]),
            config=config))
        res.curve[int(m)] = float(value)
        if star == "*":
            res.chosen_m = int(m)
    return list(out.values())

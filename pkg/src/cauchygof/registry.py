"""Catalog of the fourteen test statistics.

Seven EDF-style tests and seven KL tests, addressable by short id.  The
Monte Carlo engine, the command line and the reports all key on these ids.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import edf, entropy as ent, kl
from .config import DEFAULT_CONFIG, TestConfig

__all__ = ["TestInfo", "TESTS", "ALL_IDS", "EDF_IDS", "KL_IDS",
           "get", "parse_test_selection", "compute_statistic"]


@dataclass(frozen=True)
class TestInfo:
    test_id: str
    label: str
    kind: str                      # "edf" or "kl"
    entropy_id: str | None = None  # set for KL tests

    @property
    def window_based(self) -> bool:
        return self.entropy_id is not None and self.entropy_id != "bowman"

    def max_window(self, n: int) -> int:
        if not self.window_based:
            raise ValueError(f"test {self.test_id!r} takes no window size")
        return ent.max_window(self.entropy_id, n)


_DEFS = [
    TestInfo("ks", "Kolmogorov-Smirnov", "edf"),
    TestInfo("ad", "Anderson-Darling", "edf"),
    TestInfo("cvm", "Cramer-von Mises", "edf"),
    TestInfo("gh", "Gurtler-Henze (ECF)", "edf"),
    TestInfo("zk", "Zhang ZK", "edf"),
    TestInfo("za", "Zhang ZA", "edf"),
    TestInfo("zc", "Zhang ZC", "edf"),
    TestInfo("kl_vasicek", "KL / Vasicek", "kl", "vasicek"),
    TestInfo("kl_bowman", "KL / Bowman", "kl", "bowman"),
    TestInfo("kl_vanes", "KL / Van Es", "kl", "vanes"),
    TestInfo("kl_ebrahimi", "KL / Ebrahimi", "kl", "ebrahimi"),
    TestInfo("kl_correa", "KL / Correa", "kl", "correa"),
    TestInfo("kl_yousefzadeh", "KL / Yousefzadeh-Arghami", "kl", "yousefzadeh"),
    TestInfo("kl_alizadeh", "KL / Alizadeh Noughabi", "kl", "alizadeh"),
]

TESTS: dict[str, TestInfo] = {t.test_id: t for t in _DEFS}
ALL_IDS: tuple[str, ...] = tuple(t.test_id for t in _DEFS)
EDF_IDS: tuple[str, ...] = tuple(t.test_id for t in _DEFS if t.kind == "edf")
KL_IDS: tuple[str, ...] = tuple(t.test_id for t in _DEFS if t.kind == "kl")


def get(test_id: str) -> TestInfo:
    try:
        return TESTS[test_id]
    except KeyError:
        raise ValueError(
            f"unknown test id {test_id!r}; known ids: {', '.join(ALL_IDS)}"
        ) from None


def parse_test_selection(spec: str) -> tuple[str, ...]:
    """Expand a comma-separated id list; ``all``, ``edf`` and ``kl`` are
    group shorthands.  Order follows the catalog, duplicates collapse."""
    wanted: list[str] = []
    for tok in spec.split(","):
        tok = tok.strip().lower()
        if not tok:
            continue
        if tok == "all":
            wanted.extend(ALL_IDS)
        elif tok == "edf":
            wanted.extend(EDF_IDS)
        elif tok == "kl":
            wanted.extend(KL_IDS)
        else:
            wanted.append(get(tok).test_id)
    seen = [tid for tid in ALL_IDS if tid in wanted]
    if not seen:
        raise ValueError(f"no tests selected by {spec!r}")
    return tuple(seen)


_EDF_FUNCS = {
    "ks": edf.ks_statistic,
    "ad": edf.anderson_darling,
    "cvm": edf.cramer_von_mises,
    "gh": edf.gurtler_henze,
    "zk": edf.zhang_zk,
    "za": edf.zhang_za,
    "zc": edf.zhang_zc,
}


def compute_statistic(test_id: str, sample, m: int | None = None,
                      config: TestConfig = DEFAULT_CONFIG) -> float:
    """Evaluate any of the fourteen statistics on one sample.

    ``m`` applies to window-based KL tests only (defaults per
    :func:`cauchygof.kl.default_window`).
    """
    info = get(test_id)
    if info.kind == "edf":
        if m is not None:
            raise ValueError(f"test {test_id!r} takes no window size")
        return _EDF_FUNCS[test_id](sample, config)
    return kl.kl_statistic(info.entropy_id, sample, m, config)

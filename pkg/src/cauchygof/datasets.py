"""Bundled datasets and packaged reference tables."""
from __future__ import annotations

from importlib import resources

import numpy as np

from .model import Sample
from .results import CriticalValueTable

__all__ = ["dax_returns", "reference_table"]

#: packaged critical-value table: n in {10, 20, 30, 50}, alpha = 0.05,
#: 50,000 replications under the default configuration
_REFERENCE_TABLE = "critical_values_50000.tsv"


def _data(name: str):
    return resources.files("cauchygof.data").joinpath(name)


def dax_returns() -> Sample:
    """The bundled 30-observation DAX daily return series."""
    lines = _data("dax_returns.txt").read_text().splitlines()
    vals = [float(s) for s in (ln.split("#")[0].strip() for ln in lines) if s]
    return Sample.from_data(np.asarray(vals))


def reference_table() -> CriticalValueTable:
    """Packaged 50,000-replication critical-value table (alpha = 0.05)."""
    with resources.as_file(_data(_REFERENCE_TABLE)) as path:
        return CriticalValueTable.load(path)

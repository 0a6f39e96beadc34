"""Random variate generation for the null and the alternative families.

Ten families: the Cauchy null plus Student t, normal, logistic, Laplace,
Gumbel, beta, gamma, a normal/Cauchy mixture and the Tukey h transform of a
standard normal.  Sampling is reproducible by contract: replication ``r``
under master seed ``s`` draws from its own generator keyed (s, r), so a
sample is bit-identical no matter how many workers run or in what order
replications execute.  Families with a closed-form inverse CDF (Cauchy,
logistic, Laplace, Gumbel, Beta(2,1)) are drawn by inversion; the rest use
the generator's standard methods, which are deterministic within the
replication's private stream.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Sample

__all__ = ["AlternativeSpec", "SeedSpec", "sample_from", "CAUCHY01",
           "STUDIED_ALTERNATIVES", "FAMILIES"]

#: family name -> (parameter names, validator)
FAMILIES = {
    "cauchy":   (("mu", "sigma"), lambda p: p[1] > 0),
    "t":        (("df",), lambda p: p[0] > 0),
    "normal":   (("mu", "var"), lambda p: p[1] > 0),
    "logistic": (("mu", "sigma"), lambda p: p[1] > 0),
    "laplace":  (("mu", "sigma"), lambda p: p[1] > 0),
    "gumbel":   (("mu", "sigma"), lambda p: p[1] > 0),
    "beta":     (("alpha", "beta"), lambda p: p[0] > 0 and p[1] > 0),
    "gamma":    (("shape", "scale"), lambda p: p[0] > 0 and p[1] > 0),
    "nc":       (("p",), lambda p: 0.0 <= p[0] <= 1.0),
    "tukey":    (("h",), lambda p: p[0] >= 0),
}


@dataclass(frozen=True)
class AlternativeSpec:
    """A sampling family plus its parameters.

    ``normal`` takes (mean, variance); ``logistic``, ``laplace`` and
    ``gumbel`` take (location, scale); ``gamma`` takes (shape, scale);
    ``nc`` takes the normal weight p of an N(0,1) / C(0,1) mixture;
    ``tukey`` takes h and draws the Tukey h variable Z exp(h Z^2 / 2)
    with Z standard normal (symmetric, Pareto-like tails of index 1/h).
    """

    family: str
    params: tuple[float, ...]

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; known: "
                             f"{', '.join(sorted(FAMILIES))}")
        names, valid = FAMILIES[self.family]
        params = tuple(float(p) for p in self.params)
        object.__setattr__(self, "params", params)
        if len(params) != len(names):
            raise ValueError(f"family {self.family!r} takes parameters "
                             f"{names}, got {params}")
        if not all(math.isfinite(p) for p in params):
            raise ValueError("family parameters must be finite")
        if not valid(params):
            raise ValueError(f"invalid parameters {params} for family "
                             f"{self.family!r}")

    @property
    def label(self) -> str:
        args = ",".join(f"{p:g}" for p in self.params)
        return f"{self.family}({args})"

    @classmethod
    def parse(cls, text: str) -> "AlternativeSpec":
        """Parse ``family(p1,p2)`` labels; ``t3`` style is accepted for t."""
        s = text.strip().lower()
        if s.startswith("t") and s[1:].replace(".", "", 1).isdigit():
            return cls("t", (float(s[1:]),))
        if "(" not in s or not s.endswith(")"):
            raise ValueError(f"cannot parse family spec {text!r}; expected "
                             "e.g. normal(0,1) or t(3)")
        name, args = s[:-1].split("(", 1)
        params = tuple(float(a) for a in args.split(",")) if args.strip() else ()
        return cls(name.strip(), params)


CAUCHY01 = AlternativeSpec("cauchy", (0.0, 1.0))

#: the ten members studied in the power tables
STUDIED_ALTERNATIVES = (
    AlternativeSpec("t", (3.0,)),
    AlternativeSpec("t", (5.0,)),
    AlternativeSpec("normal", (0.0, 1.0)),
    AlternativeSpec("logistic", (0.0, 1.0)),
    AlternativeSpec("laplace", (0.0, 1.0)),
    AlternativeSpec("gumbel", (0.0, 1.0)),
    AlternativeSpec("beta", (2.0, 1.0)),
    AlternativeSpec("gamma", (2.0, 1.0)),
    AlternativeSpec("nc", (0.3,)),
    AlternativeSpec("tukey", (1.0,)),
)


@dataclass(frozen=True)
class SeedSpec:
    """Master seed for a simulation; replication r gets stream (seed, r)."""

    master_seed: int

    def __post_init__(self):
        if not 0 <= int(self.master_seed) < 2 ** 64:
            raise ValueError("master_seed must fit an unsigned 64-bit int")

    def rng(self, r: int) -> np.random.Generator:
        return np.random.default_rng(
            np.random.SeedSequence(entropy=(int(self.master_seed), int(r))))


def _draw(spec: AlternativeSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    fam, p = spec.family, spec.params
    if fam == "cauchy":
        u = rng.random(n)
        return p[0] + p[1] * np.tan(math.pi * (u - 0.5))
    if fam == "t":
        return rng.standard_t(p[0], n)
    if fam == "normal":
        return p[0] + math.sqrt(p[1]) * rng.standard_normal(n)
    if fam == "logistic":
        u = rng.random(n)
        return p[0] + p[1] * np.log(u / (1.0 - u))
    if fam == "laplace":
        u = rng.random(n)
        return p[0] - p[1] * np.sign(u - 0.5) * np.log1p(-2.0 * np.abs(u - 0.5))
    if fam == "gumbel":
        u = rng.random(n)
        return p[0] - p[1] * np.log(-np.log(u))
    if fam == "beta":
        if p == (2.0, 1.0):
            return np.sqrt(rng.random(n))  # closed-form inverse CDF
        return rng.beta(p[0], p[1], n)
    if fam == "gamma":
        return rng.gamma(p[0], p[1], n)
    if fam == "nc":
        # always consume three blocks of n draws so the stream layout does
        # not depend on the mixture outcome
        pick = rng.random(n) < p[0]
        z = rng.standard_normal(n)
        c = np.tan(math.pi * (rng.random(n) - 0.5))
        return np.where(pick, z, c)
    if fam == "tukey":
        z = rng.standard_normal(n)
        return z * np.exp(p[0] * z * z / 2.0)
    raise AssertionError(f"unhandled family {fam!r}")


def sample_from(spec: AlternativeSpec, n: int, seed: SeedSpec, r: int) -> Sample:
    """Draw replication ``r`` of size ``n``; bit-identical for identical
    (master_seed, r, spec, n) regardless of execution order."""
    if n < 2:
        raise ValueError("sample size must be at least 2")
    return Sample.from_data(_draw(spec, n, seed.rng(r)))

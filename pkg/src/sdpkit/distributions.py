"""Discrete distributions over scalar outcomes.

Three flavours are provided:

* :class:`EmpiricalDiscrete` -- an explicit finite support with masses.
* :class:`PoissonDiscrete` -- Poisson demand with a given mean.
* :class:`TruncatedDistribution` -- a finite, renormalized support obtained
  by cutting a parent distribution at ``[quantile(1-q), quantile(q)]``.

All objects are immutable once built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ModelError

MASS_TOL = 1e-12


def _check_level(q: float) -> None:
    if not 0.0 < q < 1.0:
        raise ValueError(f"probability level must lie in (0, 1), got {q!r}")


def _scan_quantile(outcomes, masses, q: float) -> float:
    # smallest outcome whose cumulative mass reaches q
    cum = 0.0
    for k, p in zip(outcomes, masses):
        cum += p
        if cum >= q:
            return k
    return outcomes[-1]


class _FiniteSupport:
    """Shared pmf/cdf/quantile for distributions stored as (outcomes, masses)."""

    outcomes: tuple
    masses: tuple

    def pmf(self, k: float) -> float:
        try:
            return self.masses[self.outcomes.index(k)]
        except ValueError:
            return 0.0

    def cdf(self, k: float) -> float:
        return math.fsum(p for x, p in zip(self.outcomes, self.masses) if x <= k)

    def quantile(self, q: float) -> float:
        _check_level(q)
        return _scan_quantile(self.outcomes, self.masses, q)

    def mean(self) -> float:
        return math.fsum(x * p for x, p in zip(self.outcomes, self.masses))

    def support(self) -> list[tuple[float, float]]:
        return list(zip(self.outcomes, self.masses))

    def __len__(self) -> int:
        return len(self.outcomes)

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.choice(np.asarray(self.outcomes, dtype=float), size=size,
                          p=np.asarray(self.masses, dtype=float))


@dataclass(frozen=True)
class EmpiricalDiscrete(_FiniteSupport):
    """Finite support given as (outcome, mass) pairs, e.g. ``[(1, .5), (2, .5)]``."""

    outcomes: tuple
    masses: tuple

    def __init__(self, support: Sequence[tuple[float, float]]):
        pairs = [(float(k), float(p)) for k, p in support]
        if not pairs:
            raise ModelError("empty support")
        outcomes = tuple(k for k, _ in pairs)
        masses = tuple(p for _, p in pairs)
        if any(b <= a for a, b in zip(outcomes, outcomes[1:])):
            raise ModelError("outcomes must be strictly increasing")
        if any(not 0.0 < p <= 1.0 for p in masses):
            raise ModelError("every mass must lie in (0, 1]")
        if abs(math.fsum(masses) - 1.0) > MASS_TOL:
            raise ModelError(f"masses sum to {math.fsum(masses)!r}, not 1")
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "masses", masses)

    @classmethod
    def from_mapping(cls, pmf: dict) -> "EmpiricalDiscrete":
        return cls(sorted(pmf.items()))


@dataclass(frozen=True)
class PoissonDiscrete:
    mean_value: float

    def __post_init__(self):
        if not self.mean_value > 0:
            raise ModelError(f"Poisson mean must be positive, got {self.mean_value!r}")

    def pmf(self, k: float) -> float:
        if k < 0 or k != int(k):
            return 0.0
        lam = self.mean_value
        # log-space to avoid factorial overflow
        return math.exp(k * math.log(lam) - lam - math.lgamma(k + 1))

    def cdf(self, k: float) -> float:
        if k < 0:
            return 0.0
        return math.fsum(self.pmf(i) for i in range(int(math.floor(k)) + 1))

    def quantile(self, q: float) -> int:
        _check_level(q)
        k, cum = 0, 0.0
        while True:
            cum += self.pmf(k)
            if cum >= q:
                return k
            k += 1

    def mean(self) -> float:
        return self.mean_value

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.poisson(self.mean_value, size=size).astype(float)


@dataclass(frozen=True)
class TruncatedDistribution(_FiniteSupport):
    """A finite renormalized support cut from ``parent`` at quantile level ``source_quantile``.

    ``lower``/``upper`` are the parent quantiles at ``1 - q`` and ``q``.
    The parent is kept so that simulators can draw untruncated outcomes.
    """

    outcomes: tuple
    masses: tuple
    lower: float
    upper: float
    source_quantile: float
    parent: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.outcomes or len(self.outcomes) != len(self.masses):
            raise ModelError("truncated support is empty or malformed")
        if abs(math.fsum(self.masses) - 1.0) > MASS_TOL:
            raise ModelError("truncated masses do not sum to 1")

    def restrict(self, outcomes: Sequence[float]) -> "TruncatedDistribution":
        """Keep only ``outcomes`` (a subset of the support) and renormalize."""
        keep = sorted(set(float(k) for k in outcomes))
        raw = [self.pmf(k) for k in keep]
        if not keep or any(p == 0.0 for p in raw):
            raise ModelError("restriction must pick a nonempty subset of the support")
        return TruncatedDistribution(tuple(keep), _normalize(raw), self.lower,
                                     self.upper, self.source_quantile, self.parent)


def _normalize(raw: Sequence[float]) -> tuple:
    total = math.fsum(raw)
    masses = [p / total for p in raw]
    # push the rounding residue onto the largest mass so the sum is 1 to ~1ulp
    resid = 1.0 - math.fsum(masses)
    i = max(range(len(masses)), key=masses.__getitem__)
    masses[i] += resid
    return tuple(masses)


def pmf(d, k: float) -> float:
    return d.pmf(k)


def cdf(d, k: float) -> float:
    return d.cdf(k)


def quantile(d, q: float) -> float:
    return d.quantile(q)


def truncate(d, q: float) -> TruncatedDistribution:
    """Cut ``d`` to ``[quantile(1-q), quantile(q)]`` and renormalize the masses."""
    if not 0.5 < q < 1.0:
        raise ValueError(f"truncation quantile must lie in (0.5, 1), got {q!r}")
    lo = float(d.quantile(1.0 - q))
    hi = float(d.quantile(q))
    if isinstance(d, _FiniteSupport):
        ks = [k for k in d.outcomes if lo <= k <= hi]
    else:
        ks = [float(k) for k in range(int(lo), int(hi) + 1)]
    raw = [d.pmf(k) for k in ks]
    ks = [k for k, p in zip(ks, raw) if p > 0.0]
    raw = [p for p in raw if p > 0.0]
    if not ks:
        raise ModelError(f"truncation at q={q} leaves an empty support")
    return TruncatedDistribution(tuple(ks), _normalize(raw), lo, hi, q, d)


def point_mass(x: float) -> TruncatedDistribution:
    """Degenerate single-outcome distribution."""
    x = float(x)
    return TruncatedDistribution((x,), (1.0,), x, x, 0.999, EmpiricalDiscrete([(x, 1.0)]))

"""Per-stage scenario reduction: exhaustive enumeration or simple random sampling.

Simple random sampling draws ``stage_sample_size`` distinct outcomes without
replacement, with probability proportional to mass, and renormalizes the
selected masses. Sample sizes wane geometrically across stages::

    n_t = ceil(max_samples / reduction_factor ** (t - 1))

Random streams are numpy ``PCG64`` generators. The stream for stage ``t`` is
seeded with ``SeedSequence([seed, t])``, so each stage draw is independent of
the others and of evaluation order.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .distributions import TruncatedDistribution


class Scheme(enum.Enum):
    EXHAUSTIVE = "exhaustive"
    SIMPLE_RANDOM = "simple-random"


@dataclass(frozen=True)
class SamplingPlan:
    scheme: Scheme = Scheme.EXHAUSTIVE
    max_samples: int = 100
    reduction_factor: float = 1.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if self.max_samples < 1:
            raise ValueError(f"max_samples must be >= 1, got {self.max_samples}")
        if self.reduction_factor < 1:
            raise ValueError(f"reduction_factor must be >= 1, got {self.reduction_factor}")

    @classmethod
    def exhaustive(cls) -> "SamplingPlan":
        return cls(Scheme.EXHAUSTIVE)


EXHAUSTIVE = SamplingPlan.exhaustive()


def stage_sample_size(plan: SamplingPlan, stage: int) -> int:
    return max(1, math.ceil(plan.max_samples / plan.reduction_factor ** (stage - 1)))


def stage_rng(seed: int, stage: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed & (2**64 - 1), stage])))


def sample_support(plan: SamplingPlan, d: TruncatedDistribution, stage: int,
                   rng: np.random.Generator | None = None) -> TruncatedDistribution:
    if plan.scheme is Scheme.EXHAUSTIVE:
        return d
    n = stage_sample_size(plan, stage)
    if n >= len(d):
        return d
    if rng is None:
        rng = stage_rng(plan.seed, stage)
    picked = rng.choice(np.asarray(d.outcomes, dtype=float), size=n, replace=False,
                        p=np.asarray(d.masses, dtype=float))
    return d.restrict(picked.tolist())


def sampled_distributions(plan: SamplingPlan, model) -> list[TruncatedDistribution]:
    """Stage distributions of ``model`` after applying ``plan``, one per stage."""
    return [sample_support(plan, model.distribution(t), t)
            for t in range(1, model.horizon + 1)]

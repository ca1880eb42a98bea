"""Validation of solved policies: path simulation and (s, S) structure extraction."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import PolicyGap
from .model import ModelDefinition, State, StateGrid
from .recursion import PolicyTable

EXHAUSTIVE_PATH_LIMIT = 10**6


@dataclass
class SimulationResult:
    replications: int
    mean_cost: float
    standard_error: float
    confidence_interval_95: tuple[float, float]
    exhaustive: bool = False
    costs: np.ndarray | None = None

    def lines(self) -> list[str]:
        lo, hi = self.confidence_interval_95
        kind = "exhaustive paths" if self.exhaustive else "replications"
        return [
            "---Simulation---",
            f"{kind.capitalize()}: {self.replications}",
            f"Mean cost: {self.mean_cost:.6f}",
            f"Standard error: {self.standard_error:.6f}",
            f"95% confidence interval: [{lo:.6f}, {hi:.6f}]",
        ]


def _path_cost(m: ModelDefinition, pt: PolicyTable, s0: State, outcomes) -> float:
    s = s0
    total, disc = 0.0, 1.0
    for r in outcomes:
        a = pt.get(s)
        if a is None:
            raise PolicyGap(s)
        total += disc * m.immediate_value(s, a, r)
        disc *= m.discount
        s = m.apply_transition(s, a, r)
    return total


def path_count(m: ModelDefinition, first_stage: int = 1) -> int:
    return math.prod(len(m.distribution(t)) for t in range(first_stage, m.horizon + 1))


def simulate_policy(m: ModelDefinition, pt: PolicyTable, s0: State, replications: int = 10_000,
                    seed: int = 0, mode: str = "auto", untruncated: bool = False,
                    keep_costs: bool = False) -> SimulationResult:
    """Estimate the expected discounted cost of following ``pt`` from ``s0``.

    ``mode`` is ``"auto"``, ``"exhaustive"`` or ``"monte-carlo"``. In auto
    mode every demand path is enumerated (weighted by its probability) when
    there are at most ``EXHAUSTIVE_PATH_LIMIT`` of them; the result is then
    exact and its standard error is 0.

    Monte Carlo draws come from the truncated stage distributions unless
    ``untruncated`` is set, in which case the parent distributions are used
    and paths may leave the grid.
    """
    if replications < 1:
        raise ValueError("replications must be >= 1")
    if mode not in ("auto", "exhaustive", "monte-carlo"):
        raise ValueError(f"unknown simulation mode {mode!r}")
    s0 = State(int(s0.stage), float(s0.level))
    stages = range(s0.stage, m.horizon + 1)
    if mode == "exhaustive" or (mode == "auto" and not untruncated
                                and path_count(m, s0.stage) <= EXHAUSTIVE_PATH_LIMIT):
        return _enumerate_paths(m, pt, s0, keep_costs)

    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed & (2**64 - 1))))
    draws = []
    for t in stages:
        d = m.distribution(t)
        src = d.parent if untruncated and d.parent is not None else d
        draws.append(src.draw(rng, replications))
    paths = np.column_stack(draws).tolist()
    costs = np.array([_path_cost(m, pt, s0, path) for path in paths])
    mean = float(costs.mean())
    se = float(costs.std(ddof=1) / math.sqrt(replications)) if replications > 1 else 0.0
    half = 1.959963984540054 * se
    return SimulationResult(replications, mean, se, (mean - half, mean + half),
                            costs=costs if keep_costs else None)


def _enumerate_paths(m: ModelDefinition, pt: PolicyTable, s0: State, keep_costs: bool
                     ) -> SimulationResult:
    supports = [m.distribution(t).support() for t in range(s0.stage, m.horizon + 1)]
    costs, probs = [], []
    for path in itertools.product(*supports):
        costs.append(_path_cost(m, pt, s0, [r for r, _ in path]))
        probs.append(math.prod(p for _, p in path))
    mean = math.fsum(c * p for c, p in zip(costs, probs))
    return SimulationResult(len(costs), mean, 0.0, (mean, mean), exhaustive=True,
                            costs=np.array(costs) if keep_costs else None)


class SSThresholds(NamedTuple):
    """Reorder point ``s`` and order-up-to level ``S``.

    A policy that never orders is reported as ``(-inf, None)``.
    """

    reorder_point: float
    order_up_to: float | None


def extract_sS(pt: PolicyTable, stage: int, grid: StateGrid,
               lo: float | None = None, hi: float | None = None) -> SSThresholds | None:
    """Read (s, S) thresholds off the policy at ``stage`` over levels ``[lo, hi]``.

    Returns None when the policy is not of (s, S) form there: ordering
    levels must all lie below non-ordering ones and share one order-up-to
    level.
    """
    lo = grid.min_state if lo is None else lo
    hi = grid.max_state if hi is None else hi
    levels = [x for x in grid.levels() if lo <= x <= hi]
    acts = [pt[State(stage, x)] for x in levels]
    ordering = [x for x, a in zip(levels, acts) if a > 0]
    if not ordering:
        return SSThresholds(-math.inf, None)
    targets = {x + a for x, a in zip(levels, acts) if a > 0}
    if len(targets) != 1:
        return None
    reorder = max(ordering) + grid.step
    if any(a > 0 for x, a in zip(levels, acts) if x >= reorder) or \
            any(a == 0 for x, a in zip(levels, acts) if x < reorder):
        return None
    return SSThresholds(reorder, targets.pop())

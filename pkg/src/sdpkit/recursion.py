"""Forward (memoized) and backward (stage sweep) solvers for the functional equation

    f_t(s) = opt_a  sum_r p(r) * [ c_t(s, a, r) + alpha * f_{t+1}(s') ],   f_{n+1} = 0

Among exactly tied optimal actions the smallest one is kept, so results
are reproducible regardless of threading.

The forward engine is single-threaded: its memo table is a plain dict and
each state is expanded exactly once. The backward engine may split a stage
sweep over a thread pool; the stage ``t + 1`` table is read-only while
stage ``t`` is evaluated, and the results are assembled in grid order.
"""

from __future__ import annotations

import csv
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, NamedTuple

from .distributions import TruncatedDistribution
from .errors import NotSolved, OutOfGrid, SDPError
from .model import Action, Direction, ModelDefinition, State
from .sampling import EXHAUSTIVE, SamplingPlan, sampled_distributions


class _StageTable:
    def __init__(self, horizon: int):
        self.horizon = horizon
        self._entries: dict[State, float] = {}

    def __contains__(self, s) -> bool:
        return s in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[State]:
        return iter(sorted(self._entries))

    def __eq__(self, other) -> bool:
        return (type(self) is type(other) and self.horizon == other.horizon
                and self._entries == other._entries)

    def items(self):
        return sorted(self._entries.items())

    def stage(self, t: int) -> dict[float, float]:
        """``{level: entry}`` for stage ``t`` in increasing level order."""
        return {s.level: v for s, v in self.items() if s.stage == t}

    def __setitem__(self, s: State, v: float) -> None:
        self._entries[s] = v


class ValueTable(_StageTable):
    """Optimal values f_t(s); any state at stage n+1 has value 0."""

    def __getitem__(self, s: State) -> float:
        if s.stage == self.horizon + 1:
            return 0.0
        try:
            return self._entries[s]
        except KeyError:
            raise NotSolved(s) from None


class PolicyTable(_StageTable):
    """Optimal actions b_t(s) for stages 1..n."""

    def __getitem__(self, s: State) -> Action:
        try:
            return self._entries[s]
        except KeyError:
            raise NotSolved(s) from None

    def get(self, s: State, default=None):
        return self._entries.get(s, default)


@dataclass
class SolveReport:
    method: str
    initial_state: State | None
    expected_total_value: float | None
    initial_action: Action | None
    states_expanded: int
    wall_time: float

    def lines(self, timing: bool = True) -> list[str]:
        header = "---Forward recursion---" if self.method == "forward" else "---Backward recursion---"
        out = [header]
        if self.initial_state is not None:
            s = self.initial_state
            out.append(f"Expected total value (stage {s.stage}, level {s.level:g}): "
                       f"{self.expected_total_value:.6f}")
            out.append(f"Optimal initial action: {self.initial_action:.6f}")
        out.append(f"States expanded: {self.states_expanded}")
        if timing:
            out.append(f"Time elapsed: {self.wall_time:.3f} s")
        return out


class Solution(NamedTuple):
    values: ValueTable
    policy: PolicyTable
    report: SolveReport


def stage_value(m: ModelDefinition, s: State, a: Action, f_next: Callable[[State], float],
                distribution: TruncatedDistribution | None = None) -> float:
    """Expected immediate value plus discounted expected future value of ``a`` in ``s``."""
    d = distribution if distribution is not None else m.distribution(s.stage)
    imm = m.immediate_value
    total = 0.0
    if s.stage >= m.horizon:
        for r, p in zip(d.outcomes, d.masses):
            total += p * imm(s, a, r)
        return total
    alpha = m.discount
    for r, p in zip(d.outcomes, d.masses):
        total += p * (imm(s, a, r) + alpha * f_next(m.apply_transition(s, a, r)))
    return total


def _best(direction: Direction, actions: list[Action], vals: list[float]) -> tuple[float, Action]:
    best = min(vals) if direction is Direction.MIN else max(vals)
    # actions are increasing, so the first exact match is the smallest optimal one
    return best, actions[vals.index(best)]


def optimal_action(pt: PolicyTable, s: State) -> Action:
    return pt[s]


def forward_recursion(m: ModelDefinition, plan: SamplingPlan = EXHAUSTIVE,
                      s0: State | None = None) -> Solution:
    """Solve from ``s0`` expanding only reachable states, each exactly once."""
    if s0 is None:
        raise ValueError("forward recursion needs an initial state")
    s0 = State(int(s0.stage), float(s0.level))
    if not 1 <= s0.stage <= m.horizon or not m.grid.contains(s0.level):
        raise SDPError(f"initial state {s0} is not a grid state at stages 1..{m.horizon}")
    started = time.perf_counter()
    dists = sampled_distributions(plan, m)
    values = ValueTable(m.horizon)
    policy = PolicyTable(m.horizon)
    memo = values._entries
    n = m.horizon

    def f(s: State) -> float:
        if s.stage > n:
            return 0.0
        v = memo.get(s)
        if v is not None:
            return v
        actions = m.feasible_actions(s)
        d = dists[s.stage - 1]
        vals = [stage_value(m, s, a, f, d) for a in actions]
        v, a = _best(m.direction, actions, vals)
        memo[s] = v
        policy[s] = a
        return v

    total = f(s0)
    report = SolveReport("forward", s0, total, policy[s0], len(values),
                         time.perf_counter() - started)
    return Solution(values, policy, report)


def _sweep(m: ModelDefinition, states: list[State], f_next, d) -> list[tuple[float, Action]]:
    out = []
    for s in states:
        actions = m.feasible_actions(s)
        vals = [stage_value(m, s, a, f_next, d) for a in actions]
        out.append(_best(m.direction, actions, vals))
    return out


def _chunks(xs: list, k: int) -> list[list]:
    size = -(-len(xs) // k)
    return [xs[i:i + size] for i in range(0, len(xs), size)]


def backward_recursion(m: ModelDefinition, plan: SamplingPlan = EXHAUSTIVE,
                       query: State | None = None, threads: int = 1) -> Solution:
    """Sweep stages n..1 over the full state grid.

    ``query`` only selects which state the report describes; the tables
    cover every grid state at every stage.
    """
    if threads < 1:
        raise ValueError("threads must be >= 1")
    started = time.perf_counter()
    dists = sampled_distributions(plan, m)
    values = ValueTable(m.horizon)
    policy = PolicyTable(m.horizon)
    grid = m.grid
    next_row: list[float] = []
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        for t in range(m.horizon, 0, -1):
            row = next_row

            def f_next(ns: State, row=row) -> float:
                i = grid.index_of(ns.level)
                if i is None:  # apply_transition already screens this
                    raise OutOfGrid(ns, 0.0, 0.0, ns.level)
                return row[i]

            states = m.grid_states(t)
            d = dists[t - 1]
            if pool is None:
                results = _sweep(m, states, f_next, d)
            else:
                parts = pool.map(lambda chunk: _sweep(m, chunk, f_next, d),
                                 _chunks(states, threads))
                results = [r for part in parts for r in part]
            next_row = []
            for s, (v, a) in zip(states, results):
                values[s] = v
                policy[s] = a
                next_row.append(v)
    finally:
        if pool is not None:
            pool.shutdown()

    v0 = a0 = None
    if query is not None:
        query = State(int(query.stage), float(query.level))
        v0, a0 = values[query], policy[query]
    report = SolveReport("backward", query, v0, a0, len(values), time.perf_counter() - started)
    return Solution(values, policy, report)


def optimality_gaps(m: ModelDefinition, sol: Solution, plan: SamplingPlan = EXHAUSTIVE
                    ) -> Iterator[tuple[State, Action, Action, float]]:
    """Yield ``(state, stored action, rival action, gap)`` for every solved state.

    ``gap`` is how much better the best rival is than the stored action
    (positive means the stored action is beaten). Future values are read
    from the solution's own value table.
    """
    dists = sampled_distributions(plan, m)
    values, policy = sol.values, sol.policy
    sign = 1.0 if m.direction is Direction.MIN else -1.0
    for s, a_star in policy.items():
        d = dists[s.stage - 1]
        v_star = stage_value(m, s, a_star, values.__getitem__, d)
        rival, best = a_star, v_star
        for a in m.feasible_actions(s):
            v = stage_value(m, s, a, values.__getitem__, d)
            if sign * (best - v) > 0:
                rival, best = a, v
        yield s, a_star, rival, sign * (v_star - best)


def write_values_csv(values: ValueTable, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["stage", "level", "value"])
        for s, v in values.items():
            w.writerow([s.stage, repr(float(s.level)), repr(float(v))])


def write_policy_csv(policy: PolicyTable, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["stage", "level", "action"])
        for s, a in policy.items():
            w.writerow([s.stage, repr(float(s.level)), repr(float(a))])

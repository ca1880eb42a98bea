"""Declarative model layer.

A finite-horizon stochastic dynamic program is described by a
:class:`ModelDefinition`: a horizon, a bounded state grid, one demand
distribution per stage, and four plain callables:

``action_generator(state) -> iterable of actions``
    feasible actions in increasing order.
``transition(state, action, outcome) -> State``
    the state at the next stage.
``random_outcome(state, action, next_state) -> outcome``
    the inverse view of ``transition``.
``immediate_value(state, action, outcome) -> float``
    the one-period cost (or reward) for a realized outcome.

Callables must be pure; solvers may call them from several threads.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Sequence

from .distributions import TruncatedDistribution
from .errors import InfeasibleState, ModelError, OutOfGrid

Action = float
Outcome = float


class State(NamedTuple):
    """Stage index and scalar state coordinate (inventory level)."""

    stage: int
    level: float

    def __str__(self) -> str:
        return f"({self.stage}, {self.level:g})"


class Direction(enum.Enum):
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class StateGrid:
    step: float
    min_state: float
    max_state: float

    def __post_init__(self):
        if not self.step > 0:
            raise ModelError(f"grid step must be positive, got {self.step}")
        if not self.min_state < self.max_state:
            raise ModelError("grid needs min_state < max_state")
        span = (self.max_state - self.min_state) / self.step
        if abs(span - round(span)) > 1e-9:
            raise ModelError("grid span is not a multiple of the step")

    @property
    def size(self) -> int:
        return int(round((self.max_state - self.min_state) / self.step)) + 1

    def levels(self) -> list[float]:
        return [self.level_at(i) for i in range(self.size)]

    def level_at(self, i: int) -> float:
        return self.min_state + i * self.step

    def index_of(self, level: float) -> int | None:
        """Grid index of ``level``, or None if it is off-grid or out of bounds."""
        x = (level - self.min_state) / self.step
        i = round(x)
        if abs(x - i) > 1e-9 or i < 0 or i >= self.size:
            return None
        return i

    def contains(self, level: float) -> bool:
        return self.index_of(level) is not None

    def distance(self, level: float) -> float:
        """How far ``level`` lies outside ``[min_state, max_state]`` (0 inside)."""
        return max(self.min_state - level, level - self.max_state, 0.0)


@dataclass
class ModelDefinition:
    horizon: int
    grid: StateGrid
    stage_distributions: Sequence[TruncatedDistribution]
    action_generator: Callable[[State], Iterable[Action]]
    transition: Callable[[State, Action, Outcome], State]
    random_outcome: Callable[[State, Action, State], Outcome]
    immediate_value: Callable[[State, Action, Outcome], float]
    direction: Direction = Direction.MIN
    discount: float = 1.0
    name: str = ""
    params: object = field(default=None, repr=False)

    def __post_init__(self):
        if self.horizon < 1:
            raise ModelError(f"horizon must be at least 1, got {self.horizon}")
        if len(self.stage_distributions) != self.horizon:
            raise ModelError(
                f"expected {self.horizon} stage distributions, got {len(self.stage_distributions)}")
        if not 0.0 <= self.discount <= 1.0:
            raise ModelError(f"discount must lie in [0, 1], got {self.discount}")
        self.direction = Direction(self.direction)

    def distribution(self, stage: int) -> TruncatedDistribution:
        return self.stage_distributions[stage - 1]

    def grid_states(self, stage: int) -> list[State]:
        return [State(stage, x) for x in self.grid.levels()]

    def feasible_actions(self, s: State) -> list[Action]:
        actions = [float(a) for a in self.action_generator(s)]
        if not actions:
            raise InfeasibleState(s)
        return actions

    def apply_transition(self, s: State, a: Action, r: Outcome) -> State:
        nxt = self.transition(s, a, r)
        if not self.grid.contains(nxt.level):
            raise OutOfGrid(s, a, r, nxt.level)
        return nxt

    def evaluate_immediate(self, s: State, a: Action, r: Outcome) -> float:
        return self.immediate_value(s, a, r)

    def validate(self) -> int:
        """Check every grid state, feasible action and support outcome.

        Verifies that actions are nonempty, nonnegative, on the grid step and
        strictly increasing; that every transition lands on the grid at the
        next stage; and that ``random_outcome`` inverts ``transition``.
        Off-grid transitions are reported through the worst offender.
        Returns the number of (state, action, outcome) triples checked.
        """
        checked = 0
        worst = None
        step = self.grid.step
        for t in range(1, self.horizon + 1):
            support = self.distribution(t).support()
            for s in self.grid_states(t):
                actions = self.feasible_actions(s)
                for a, b in zip(actions, actions[1:]):
                    if not b > a:
                        raise ModelError(f"actions at {s} are not strictly increasing")
                for a in actions:
                    if a < 0 or abs(a / step - round(a / step)) > 1e-9:
                        raise ModelError(f"action {a:g} at {s} is negative or off the grid step")
                    for r, _ in support:
                        checked += 1
                        nxt = self.transition(s, a, r)
                        if nxt.stage != t + 1:
                            raise ModelError(f"transition from {s} does not advance the stage")
                        if not self.grid.contains(nxt.level):
                            gap = self.grid.distance(nxt.level)
                            if worst is None or gap > worst[0]:
                                worst = (gap, s, a, r, nxt.level)
                            continue
                        back = self.random_outcome(s, a, nxt)
                        if not math.isclose(back, r, rel_tol=0.0, abs_tol=1e-9):
                            raise ModelError(
                                f"random_outcome does not invert transition at {s}, "
                                f"action {a:g}, outcome {r:g} (got {back:g})")
        if worst is not None:
            _, s, a, r, level = worst
            raise OutOfGrid(s, a, r, level)
        return checked

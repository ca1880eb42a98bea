"""Bundled model instances: a 3-period toy inventory problem and Scarf's lot sizing problem."""

from __future__ import annotations

from dataclasses import dataclass

from .distributions import EmpiricalDiscrete, PoissonDiscrete, truncate
from .model import ModelDefinition, State, StateGrid


@dataclass(frozen=True)
class ToyInventoryParams:
    horizon: int = 3
    fixed_cost: float = 3.0
    unit_cost: float = 2.0
    holding_cost: float = 1.0
    salvage_value: float = 2.0
    capacity: int = 3
    max_order: int = 4
    demand_pmf: tuple = ((1.0, 0.5), (2.0, 0.5))
    initial_inventory: float = 1.0


@dataclass(frozen=True)
class ScarfParams:
    fixed_cost: float = 300.0
    unit_cost: float = 0.0
    holding_cost: float = 1.0
    penalty_cost: float = 10.0
    mean_demand: tuple = (10.0, 20.0, 15.0, 20.0, 15.0, 10.0)
    truncation_quantile: float = 0.999
    step: float = 1.0
    min_state: float = -50.0
    max_state: float = 150.0
    initial_inventory: float = 0.0
    discount: float = 1.0


def _inventory_transition(s: State, a: float, r: float) -> State:
    return State(s.stage + 1, s.level + a - r)


def _inventory_outcome(s: State, a: float, nxt: State) -> float:
    return s.level + a - nxt.level


def build_toy_inventory(p: ToyInventoryParams = ToyInventoryParams(), validate: bool = True
                        ) -> ModelDefinition:
    """Capacitated inventory problem with no backorders and end-of-horizon salvage.

    The order quantity is at least ``max_demand - inventory`` (no backorders)
    and small enough that end-of-period stock never exceeds ``capacity``
    under the smallest demand.
    """
    demand = EmpiricalDiscrete(p.demand_pmf)
    d = truncate(demand, 0.999)
    max_d, min_d = max(demand.outcomes), min(demand.outcomes)
    K, v, h, b, n = p.fixed_cost, p.unit_cost, p.holding_cost, p.salvage_value, p.horizon

    def actions(s: State) -> list[float]:
        min_q = max(max_d - s.level, 0.0)
        count = int(min(p.max_order, p.capacity + min_d - s.level - min_q)) + 1
        return [min_q + i for i in range(max(count, 0))]

    def cost(s: State, a: float, r: float) -> float:
        left = s.level + a - r
        c = K + v * a if a > 0 else 0.0
        c += h * left
        c -= (b if s.stage == n else 0.0) * left
        return c

    m = ModelDefinition(
        horizon=n,
        grid=StateGrid(1.0, 0.0, float(p.capacity)),
        stage_distributions=[d] * n,
        action_generator=actions,
        transition=_inventory_transition,
        random_outcome=_inventory_outcome,
        immediate_value=cost,
        name="toy-inventory",
        params=p,
    )
    if validate:
        m.validate()
    return m


def build_scarf(p: ScarfParams = ScarfParams(), validate: bool = True) -> ModelDefinition:
    """Scarf's lot sizing problem with Poisson demand and backorders.

    Actions are order-up-to moves onto grid levels ``y`` in ``[level, max_state]``.
    Order-up-to levels whose worst-case demand would push the next state
    below ``min_state`` are dropped, so every transition stays on the grid.
    """
    grid = StateGrid(p.step, p.min_state, p.max_state)
    dists = [truncate(PoissonDiscrete(mu), p.truncation_quantile) for mu in p.mean_demand]
    K, v, h, b = p.fixed_cost, p.unit_cost, p.holding_cost, p.penalty_cost
    top = [d.outcomes[-1] for d in dists]

    def actions(s: State) -> list[float]:
        floor = p.min_state + top[s.stage - 1]
        i0 = grid.index_of(s.level)
        if i0 is None:
            return []
        ys = (grid.level_at(i) for i in range(i0, grid.size))
        return [y - s.level for y in ys if y >= floor]

    def cost(s: State, a: float, r: float) -> float:
        end = s.level + a - r
        c = K + v * a if a > 0 else 0.0
        return c + h * max(end, 0.0) + b * max(-end, 0.0)

    m = ModelDefinition(
        horizon=len(p.mean_demand),
        grid=grid,
        stage_distributions=dists,
        action_generator=actions,
        transition=_inventory_transition,
        random_outcome=_inventory_outcome,
        immediate_value=cost,
        discount=p.discount,
        name="scarf",
        params=p,
    )
    if validate:
        m.validate()
    return m


MODELS = {
    "toy-inventory": (ToyInventoryParams, build_toy_inventory),
    "scarf": (ScarfParams, build_scarf),
}

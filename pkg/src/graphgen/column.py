"""Routes and master-problem columns.

Row convention shared by every module: rows ``0..n-1`` are the customer cover
rows and row ``n`` is the vehicle-count row. A dual vector is a length
``n + 1`` array laid out the same way.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instance import CvrpInstance


class RouteError(ValueError):
    pass


class ElementarityError(RouteError):
    pass


class CapacityError(RouteError):
    pass


@dataclass(frozen=True)
class Route:
    sequence: tuple[int, ...]
    cost: int
    total_demand: int

    def __len__(self):
        return len(self.sequence)


def make_route(sequence, instance: CvrpInstance) -> Route:
    seq = tuple(int(u) for u in sequence)
    n = instance.n
    for u in seq:
        if not 0 <= u < n:
            raise RouteError(f"unknown customer {u}")
    if len(set(seq)) != len(seq):
        raise ElementarityError(f"route {seq} visits a customer twice")
    demand = sum(instance.demands[u] for u in seq)
    if demand > instance.capacity:
        raise CapacityError(f"route demand {demand} exceeds capacity {instance.capacity}")
    if not seq:
        return Route((), 0, 0)
    D, depot = instance.distances, instance.depot_index
    stops = (depot,) + seq + (depot,)
    cost = sum(int(D[a, b]) for a, b in zip(stops, stops[1:]))
    return Route(seq, cost, demand)


def big_m(instance: CvrpInstance) -> int:
    return 2 * (instance.n + 1) * max(int(instance.distances.max()), 1)


@dataclass(frozen=True, eq=False)
class Column:
    route: Route
    coverage: dict
    cost: float
    is_artificial: bool = False

    @classmethod
    def from_route(cls, route: Route, instance: CvrpInstance) -> "Column":
        if not route.sequence:
            raise RouteError("the empty route is never a column")
        coverage = {u: 1.0 for u in route.sequence}
        coverage[instance.n] = -1.0
        return cls(route, coverage, float(route.cost))

    @classmethod
    def artificial(cls, customer: int, instance: CvrpInstance) -> "Column":
        return cls(Route((customer,), 0, 0), {customer: 1.0}, float(big_m(instance)), True)


def reduced_cost(route: Route, duals) -> float:
    """Column form ``c_l - pi . A_l``; the vehicle row contributes ``+pi_0``."""
    if not route.sequence:
        return 0.0
    duals = np.asarray(duals, dtype=float)
    return float(route.cost - duals[list(route.sequence)].sum() + duals[-1])


def artificials(instance: CvrpInstance) -> list[Column]:
    return [Column.artificial(u, instance) for u in range(instance.n)]

"""Expanded topological families and their path-cone graphs.

A family is a total order on the customers. Its graph has a vertex
``(u, d)`` for every customer ``u`` and every capacity ``d`` that may remain
after leaving ``u``; edges only run forward in the order, so every
source-to-sink path is an elementary, capacity-feasible route.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from graphlib import TopologicalSorter

import numpy as np

from .column import Route, make_route
from .instance import CvrpInstance

SOURCE, SINK = 0, 1


class FlowError(ValueError):
    pass


class PathError(ValueError):
    pass


@dataclass(frozen=True)
class Ordering:
    order: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.order) != list(range(len(self.order))):
            raise ValueError("ordering must be a permutation of the customers")

    @property
    def position(self) -> np.ndarray:
        """1-based position of every customer."""
        pos = np.empty(len(self.order), dtype=np.int64)
        pos[list(self.order)] = np.arange(1, len(self.order) + 1)
        return pos


def build_ordering(route: Route, instance: CvrpInstance, rng) -> Ordering:
    """Order the route's customers by visit, then slot the rest in near their closest stop.

    Remaining customers are taken in a random order. Each goes directly after
    the nearest route customer (ties: earliest visit), or to the very front
    when the depot is strictly nearer than every route customer.
    """
    if not route.sequence:
        raise ValueError("cannot build an ordering from the empty route")
    rng = np.random.default_rng(rng)
    D, depot = instance.distances, instance.depot_index
    anchors = list(route.sequence)
    order = list(anchors)
    on_route = set(anchors)
    rest = np.array([u for u in range(instance.n) if u not in on_route], dtype=np.int64)
    for u in rng.permutation(rest):
        u = int(u)
        d_route = D[u, anchors]
        k = int(np.argmin(d_route))  # first minimum = earliest visit
        if D[u, depot] < d_route[k]:
            order.insert(0, u)
        else:
            order.insert(order.index(anchors[k]) + 1, u)
    return Ordering(tuple(order))


def contains_route(ordering: Ordering, route: Route) -> bool:
    pos = ordering.position
    seq = route.sequence
    return all(pos[a] < pos[b] for a, b in zip(seq, seq[1:]))


@dataclass(frozen=True, eq=False)
class FamilyGraph:
    ordering: Ordering
    origin_route: Route | None
    n_customers: int
    capacity: int
    vertex_customer: np.ndarray   # -1 for source / sink
    vertex_capacity: np.ndarray   # -1 for source / sink
    tail: np.ndarray
    head: np.ndarray
    cost: np.ndarray
    h_row: np.ndarray             # the single MP row each edge contributes to
    h_val: np.ndarray             # +1 (cover) or -1 (vehicle)
    _out: tuple = field(default=None, repr=False)

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_customer)

    @property
    def n_edges(self) -> int:
        return len(self.tail)

    @property
    def internal_vertices(self) -> range:
        return range(2, self.n_vertices)

    def h(self, e: int) -> dict[int, float]:
        return {int(self.h_row[e]): float(self.h_val[e])}

    def out_edges(self, v: int) -> np.ndarray:
        indptr, edges = self._out
        return edges[indptr[v]:indptr[v + 1]]

    def flow_matrix(self):
        """Vertex-by-edge incidence (+1 out, -1 in) restricted to internal vertices."""
        import scipy.sparse as sp

        E = self.n_edges
        rows = np.concatenate([self.tail, self.head]) - 2
        cols = np.concatenate([np.arange(E), np.arange(E)])
        vals = np.concatenate([np.ones(E), -np.ones(E)])
        keep = rows >= 0
        return sp.csc_matrix((vals[keep], (rows[keep], cols[keep])),
                             shape=(self.n_vertices - 2, E))

    def topological_order(self) -> list[int]:
        ts = TopologicalSorter({int(v): set() for v in range(self.n_vertices)})
        for a, b in zip(self.tail, self.head):
            ts.add(int(b), int(a))
        return list(ts.static_order())

    def vertex_label(self, v: int) -> str:
        if v == SOURCE:
            return "v+"
        if v == SINK:
            return "v-"
        return f"({self.vertex_customer[v]},{self.vertex_capacity[v]})"

    def dump(self) -> str:
        lines = [f"order {list(self.ordering.order)}",
                 f"vertices {self.n_vertices} edges {self.n_edges}"]
        for e in range(self.n_edges):
            lines.append(f"{self.vertex_label(self.tail[e])} -> {self.vertex_label(self.head[e])}"
                         f" cost {self.cost[e]} h[{self.h_row[e]}]={self.h_val[e]:+d}")
        return "\n".join(lines)


def build_graph(ordering: Ordering, instance: CvrpInstance,
                origin_route: Route | None = None) -> FamilyGraph:
    n, Q, q = instance.n, instance.capacity, instance.demands
    D, depot = instance.distances, instance.depot_index
    vc, vd = [-1, -1], [-1, -1]
    vid = {}
    for u in range(n):
        for d in range(Q - q[u] + 1):
            vid[u, d] = len(vc)
            vc.append(u)
            vd.append(d)
    tail, head, cost, h_row, h_val = [], [], [], [], []

    def edge(a, b, c, row, val):
        tail.append(a)
        head.append(b)
        cost.append(c)
        h_row.append(row)
        h_val.append(val)

    for u in range(n):
        edge(SOURCE, vid[u, Q - q[u]], D[depot, u], u, 1)
    order = ordering.order
    for i, u in enumerate(order):
        for d in range(Q - q[u] + 1):
            a = vid[u, d]
            for v in order[i + 1:]:
                if d - q[v] >= 0:
                    edge(a, vid[v, d - q[v]], D[u, v], v, 1)
            edge(a, SINK, D[u, depot], n, -1)
    tail = np.asarray(tail, dtype=np.int64)
    n_vertices = len(vc)
    by_tail = np.argsort(tail, kind="stable")
    indptr = np.searchsorted(tail[by_tail], np.arange(n_vertices + 1))
    return FamilyGraph(ordering, origin_route, n, Q, np.asarray(vc), np.asarray(vd), tail,
                       np.asarray(head, dtype=np.int64), np.asarray(cost, dtype=np.int64),
                       np.asarray(h_row, dtype=np.int64), np.asarray(h_val, dtype=np.int64),
                       (indptr, by_tail))


def path_to_route(graph: FamilyGraph, path, instance: CvrpInstance) -> Route:
    """Route visited by a source-to-sink path given as a sequence of edge indices."""
    path = [int(e) for e in path]
    if not path:
        raise PathError("empty path")
    if graph.tail[path[0]] != SOURCE or graph.head[path[-1]] != SINK:
        raise PathError("path must run from the source to the sink")
    for e, f in zip(path, path[1:]):
        if graph.head[e] != graph.tail[f]:
            raise PathError(f"edges {e} and {f} are not consecutive")
    seq = [int(graph.vertex_customer[graph.head[e]]) for e in path[:-1]]
    return make_route(seq, instance)


def path_cost(graph: FamilyGraph, path) -> int:
    return int(graph.cost[list(path)].sum())


def path_coverage(graph: FamilyGraph, path) -> dict[int, float]:
    out: dict[int, float] = {}
    for e in path:
        r = int(graph.h_row[e])
        out[r] = out.get(r, 0.0) + float(graph.h_val[e])
    return {r: v for r, v in out.items() if v}


@dataclass
class PathFlow:
    graph: FamilyGraph
    weights: np.ndarray
    decomposition: list[tuple[tuple[int, ...], float]]

    def residual(self) -> np.ndarray:
        rebuilt = np.zeros(self.graph.n_edges)
        for path, alpha in self.decomposition:
            rebuilt[list(path)] += alpha
        return self.weights - rebuilt

    def routes(self, instance: CvrpInstance) -> list[tuple[Route, float]]:
        return [(path_to_route(self.graph, p, instance), a) for p, a in self.decomposition]


def flow_imbalance(graph: FamilyGraph, psi) -> float:
    psi = np.asarray(psi, dtype=float)
    net = np.zeros(graph.n_vertices)
    np.add.at(net, graph.tail, psi)
    np.add.at(net, graph.head, -psi)
    return float(np.abs(net[2:]).max(initial=0.0))


def decompose_flow(graph: FamilyGraph, psi, tol: float = 1e-9) -> PathFlow:
    """Split an edge flow into weighted source-to-sink paths.

    Repeatedly walks from the source along the heaviest remaining outgoing
    edge, removes the bottleneck amount, and stops when nothing above ``tol``
    leaves the source.
    """
    psi = np.asarray(psi, dtype=float)
    if psi.shape != (graph.n_edges,):
        raise FlowError(f"expected {graph.n_edges} edge weights, got {psi.shape}")
    if (psi < -tol).any():
        raise FlowError("edge weights must be nonnegative")
    imbalance = flow_imbalance(graph, psi)
    if imbalance > tol:
        raise FlowError(f"flow conservation violated by {imbalance:.3g}")
    res = np.where(psi > tol, psi, 0.0)
    paths = []
    for _ in range(graph.n_edges):
        path = []
        v = SOURCE
        while v != SINK:
            out = graph.out_edges(v)
            if not out.size:
                break
            e = int(out[np.argmax(res[out])])
            if res[e] <= tol:
                break
            path.append(e)
            v = int(graph.head[e])
        if v != SINK:
            break
        alpha = float(res[path].min())
        res[path] -= alpha
        res[path[int(np.argmin(res[path]))]] = 0.0
        res[res <= tol] = 0.0
        paths.append((tuple(path), alpha))
    return PathFlow(graph, psi, paths)

"""Restricted master problems as LPs.

Rows: one cover row per customer (``>= 1``), the vehicle row (``-sum >= -K``),
then one equality flow row per internal vertex of every family graph.
Variables are laid out in the order columns and families were added, so a
model that only grows yields LPs that extend each other and can be warm
started.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .column import Column
from .family import FamilyGraph
from .instance import CvrpInstance
from .lp import EQ, GEQ, LpProblem, LpSolution, LpStructureError


@dataclass
class _Block:
    kind: str       # "column" or "family"
    index: int      # position in columns / families
    start: int      # first variable
    size: int
    row_start: int  # first flow row (families only)


class RmpModel:
    def __init__(self, instance: CvrpInstance, columns=(), families=()):
        self.instance = instance
        self.columns: list[Column] = []
        self.families: list[FamilyGraph] = []
        self.blocks: list[_Block] = []
        self.n_vars = 0
        self.n_rows = instance.n + 1
        self._cost: list[np.ndarray] = []
        self._ri: list[np.ndarray] = []
        self._ci: list[np.ndarray] = []
        self._val: list[np.ndarray] = []
        for c in columns:
            self.add_column(c)
        for f in families:
            self.add_family(f)

    @property
    def vehicle_row(self) -> int:
        return self.instance.n

    def add_column(self, column: Column) -> int:
        rows = np.fromiter(column.coverage.keys(), dtype=np.int64)
        vals = np.fromiter(column.coverage.values(), dtype=float)
        if rows.size and (rows.min() < 0 or rows.max() > self.vehicle_row):
            raise LpStructureError(f"column {column.route.sequence} covers an unknown row")
        j = self.n_vars
        self.blocks.append(_Block("column", len(self.columns), j, 1, -1))
        self.columns.append(column)
        self._push(np.array([column.cost]), rows, np.full(rows.size, j), vals)
        return j

    def add_family(self, graph: FamilyGraph) -> slice:
        inst = self.instance
        if graph.n_customers != inst.n or graph.capacity != inst.capacity:
            raise LpStructureError("family graph built for a different instance")
        if graph.h_row.size and (graph.h_row.min() < 0 or graph.h_row.max() > self.vehicle_row):
            raise LpStructureError("family edge contributes to an unknown row")
        j, E = self.n_vars, graph.n_edges
        row0 = self.n_rows
        flow = graph.flow_matrix().tocoo()
        edges = np.arange(E)
        rows = np.concatenate([graph.h_row, flow.row + row0])
        cols = np.concatenate([edges, flow.col]) + j
        vals = np.concatenate([graph.h_val.astype(float), flow.data])
        self.blocks.append(_Block("family", len(self.families), j, E, row0))
        self.families.append(graph)
        self.n_rows += graph.n_vertices - 2
        self._push(graph.cost.astype(float), rows, cols, vals)
        return slice(j, j + E)

    def _push(self, cost, rows, cols, vals):
        self._cost.append(cost)
        self._ri.append(rows)
        self._ci.append(cols)
        self._val.append(vals)
        self.n_vars += cost.size

    def problem(self) -> LpProblem:
        n = self.instance.n
        cost = np.concatenate(self._cost) if self._cost else np.zeros(0)
        ri = np.concatenate(self._ri) if self._ri else np.zeros(0, np.int64)
        ci = np.concatenate(self._ci) if self._ci else np.zeros(0, np.int64)
        val = np.concatenate(self._val) if self._val else np.zeros(0)
        A = sp.csc_matrix((val, (ri, ci)), shape=(self.n_rows, self.n_vars))
        rhs = np.zeros(self.n_rows)
        rhs[:n] = 1.0
        rhs[n] = -float(self.instance.fleet_size)
        senses = (GEQ,) * (n + 1) + (EQ,) * (self.n_rows - n - 1)
        return LpProblem(cost, A, senses, rhs)

    def column_index(self, i: int) -> int:
        return next(b.start for b in self.blocks if b.kind == "column" and b.index == i)

    def theta(self, solution: LpSolution) -> np.ndarray:
        starts = [b.start for b in self.blocks if b.kind == "column"]
        return solution.primal[starts]

    def psi(self, solution: LpSolution) -> list[np.ndarray]:
        return [solution.primal[b.start:b.start + b.size]
                for b in self.blocks if b.kind == "family"]

    def flow_duals(self, solution: LpSolution) -> list[np.ndarray]:
        return [solution.duals[b.row_start:b.row_start + self.families[b.index].n_vertices - 2]
                for b in self.blocks if b.kind == "family"]


def build_cg_rmp(columns, instance: CvrpInstance) -> LpProblem:
    """``min sum c_l theta_l`` over the given columns with cover and vehicle rows."""
    return RmpModel(instance, columns).problem()


def build_gg_rmp(columns, families, instance: CvrpInstance) -> LpProblem:
    """Column variables first, then one edge-flow variable per edge of every family."""
    return RmpModel(instance, columns, families).problem()


def extract_duals(model: RmpModel, solution: LpSolution) -> np.ndarray:
    """Cover-row duals followed by the vehicle-row dual, as pricing expects."""
    if not solution.optimal:
        raise ValueError(f"cannot take duals of a {solution.status.value} solution")
    return np.maximum(solution.duals[:model.instance.n + 1], 0.0)

"""Independent reference computations used by the tests.

Nothing here goes through the package's simplex or its RMP builder: LPs are
solved by vertex enumeration or by HiGHS, and master problems are assembled
straight from enumerated routes.
"""

from __future__ import annotations

import itertools

import numpy as np
from scipy.optimize import linprog

from graphgen.column import make_route
from graphgen.instance import CvrpInstance


def random_bounded_lp(rng, max_vars=6, max_rows=6):
    """Random ``min c x, A x >= b, x >= 0`` that is feasible and bounded by construction.

    Feasibility: ``b = A x0 - s`` for some integer ``x0, s >= 0``. Boundedness:
    ``c = A^T y + r`` with ``y, r >= 0`` makes the dual feasible.
    """
    n = int(rng.integers(1, max_vars + 1))
    m = int(rng.integers(1, max_rows + 1))
    A = rng.integers(-5, 6, size=(m, n)).astype(float)
    x0 = rng.integers(0, 4, size=n)
    b = A @ x0 - rng.integers(0, 3, size=m)
    c = A.T @ rng.integers(0, 3, size=m) + rng.integers(0, 3, size=n)
    return c.astype(float), A, b.astype(float)


def vertex_enumeration(c, A, b, E=None, f=None):
    """Optimum of ``min c x, A x >= b, E x = f, x >= 0`` over all basic feasible points.

    Returns None when no basic point is feasible. Only valid for bounded LPs.
    """
    m, n = A.shape
    E = np.zeros((0, n)) if E is None else np.asarray(E, float)
    f = np.zeros(0) if f is None else np.asarray(f, float)
    G = np.vstack([A, np.eye(n)])
    h = np.concatenate([b, np.zeros(n)])
    best = None
    for active in itertools.combinations(range(m + n), n - len(f)):
        M = np.vstack([E, G[list(active)]])
        if abs(np.linalg.det(M)) < 1e-9:
            continue
        x = np.linalg.solve(M, np.concatenate([f, h[list(active)]]))
        if (G @ x >= h - 1e-7).all():
            val = float(c @ x)
            if best is None or val < best:
                best = val
    return best


def lp_oracle(c, A, b):
    """("Optimal", value), ("Unbounded", None) or ("Infeasible", None) by enumeration.

    The LP is unbounded iff the recession cone ``{r >= 0, A r >= 0}`` holds a
    ray with ``c r < 0``; normalising ``sum r = 1`` turns that into another
    small vertex enumeration.
    """
    n = A.shape[1]
    value = vertex_enumeration(c, A, b)
    if value is None:
        return "Infeasible", None
    ray = vertex_enumeration(c, A, np.zeros(A.shape[0]), np.ones((1, n)), np.ones(1))
    if ray is not None and ray < -1e-9:
        return "Unbounded", None
    return "Optimal", value


def random_small_lp(rng, max_vars=6, max_rows=6):
    """Integer ``A`` and ``c`` in [-5, 5], feasible by construction (``b = A x0 - s``)."""
    n = int(rng.integers(1, max_vars + 1))
    m = int(rng.integers(1, max_rows + 1))
    A = rng.integers(-5, 6, size=(m, n)).astype(float)
    c = rng.integers(-5, 6, size=n).astype(float)
    x0 = rng.integers(0, 3, size=n)
    b = A @ x0 - rng.integers(0, 3, size=m)
    return c, A, b.astype(float)


def enumerate_sequences(instance: CvrpInstance):
    n, Q, q = instance.n, instance.capacity, instance.demands
    out = []

    def grow(seq, load):
        for w in range(n):
            if w not in seq and load + q[w] <= Q:
                out.append(seq + (w,))
                grow(seq + (w,), load + q[w])

    grow((), 0)
    return out


def full_master_value(instance: CvrpInstance, sequences=None) -> float:
    """LP value of the master problem over every feasible route, solved by HiGHS."""
    sequences = enumerate_sequences(instance) if sequences is None else sequences
    n = instance.n
    routes = [make_route(s, instance) for s in sequences]
    A = np.zeros((n + 1, len(routes)))
    for j, r in enumerate(routes):
        A[list(r.sequence), j] = 1.0
        A[n, j] = -1.0
    b = np.ones(n + 1)
    b[n] = -instance.fleet_size
    res = linprog([r.cost for r in routes], A_ub=-A, b_ub=-b, bounds=(0, None),
                  method="highs")
    assert res.status == 0, res.message
    return float(res.fun)


def restricted_master_value(instance: CvrpInstance, columns) -> float:
    """HiGHS value of the CG-style RMP over explicit columns (artificials included)."""
    n = instance.n
    A = np.zeros((n + 1, len(columns)))
    for j, col in enumerate(columns):
        for row, v in col.coverage.items():
            A[row, j] = v
    b = np.ones(n + 1)
    b[n] = -instance.fleet_size
    res = linprog([c.cost for c in columns], A_ub=-A, b_ub=-b, bounds=(0, None),
                  method="highs")
    assert res.status == 0, res.message
    return float(res.fun)


def random_duals(rng, instance: CvrpInstance, scale=None):
    """Nonnegative duals large enough that some routes price out negative."""
    D = instance.distances
    scale = float(D.max() or 1) if scale is None else scale
    pi = rng.uniform(0, scale, size=instance.n + 1)
    pi[-1] = rng.uniform(0, scale / 2) if rng.random() < 0.5 else 0.0
    return pi


def random_instance(rng, n, capacity, fleet=3, grid=30, max_demand=1) -> CvrpInstance:
    pts = rng.integers(0, grid + 1, size=(n + 1, 2))
    demands = rng.integers(1, min(max_demand, capacity) + 1, size=n)
    return CvrpInstance([tuple(p) for p in pts[1:]], demands.tolist(), tuple(pts[0]),
                        fleet, capacity, grid)

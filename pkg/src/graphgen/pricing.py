"""Exact pricing: the minimum reduced-cost elementary, capacity-feasible route.

The labeling search grows routes one customer at a time. Every layer is a
batch of labels held in numpy arrays (last customer, visited bitmask,
remaining capacity, reduced cost, parent pointer). Two rules keep the
batches small and the answer exact:

* labels with the same last customer and visited set are merged, keeping
  the cheapest (ties go to the lexicographically smaller prefix);
* a label is dropped when its cost plus a lower bound on any completion
  exceeds the best closed route found so far. The bound relaxes
  elementarity and is computed by a small DP over (customer, capacity).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .column import Route, make_route, reduced_cost
from .instance import CvrpInstance

TIE_TOL = 1e-9
START, END = -1, -2
CHUNK = 20000
BEAM_WIDTH = 2000


@dataclass(frozen=True)
class EdgeReducedCosts:
    """Reduced edge costs over the pricing index set; depot is -1 (start) or -2 (end)."""

    matrix: np.ndarray  # (n+1, n+1), depot at index n
    demands: tuple[int, ...]
    capacity: int

    @classmethod
    def build(cls, instance: CvrpInstance, duals) -> "EdgeReducedCosts":
        n = instance.n
        pi = np.asarray(duals, dtype=float)
        if pi.shape != (n + 1,):
            raise ValueError(f"expected {n + 1} duals, got {pi.shape}")
        R = instance.distances.astype(float) - np.append(pi[:n], -pi[n])[None, :]
        np.fill_diagonal(R, np.inf)
        R.setflags(write=False)
        return cls(R, instance.demands, instance.capacity)

    def _node(self, u):
        n = len(self.demands)
        return n if u in (START, END) else u

    def cost(self, u: int, v: int) -> float:
        return float(self.matrix[self._node(u), self._node(v)])

    def is_valid(self, u: int, v: int, d: int) -> bool:
        q, Q = self.demands, self.capacity
        if u == START:
            return v >= 0 and d == Q
        if v == END:
            return u >= 0 and 0 <= d <= Q - q[u]
        return u >= 0 and v >= 0 and u != v and q[v] <= d <= Q - q[u]

    def triples(self):
        n, q, Q = len(self.demands), self.demands, self.capacity
        for v in range(n):
            yield (START, v, Q)
        for u in range(n):
            for d in range(0, Q - q[u] + 1):
                yield (u, END, d)
            for v in range(n):
                if v != u:
                    for d in range(q[v], Q - q[u] + 1):
                        yield (u, v, d)


def completion_bound(R: np.ndarray, demands, capacity: int) -> np.ndarray:
    """``g[u, r]``: lower bound on finishing a route from ``u`` with ``r`` capacity left.

    Relaxes elementarity except for immediate returns (u -> v -> u), which is
    handled by keeping the best and second-best completion with distinct
    first successors.
    """
    q = np.asarray(demands, dtype=np.int64)
    n = len(q)
    best = np.empty((n, capacity + 1))
    second = np.empty((n, capacity + 1))
    succ = np.empty((n, capacity + 1), dtype=np.int64)   # n stands for the depot
    to_end = R[:n, n]
    rows = np.arange(n)
    for r in range(capacity + 1):
        cand = np.full((n, n + 1), np.inf)
        cand[:, n] = to_end
        feas = np.flatnonzero(q <= r)
        if feas.size:
            rr = r - q[feas]
            # completion of v after arriving from u: avoid going straight back to u
            back = succ[feas, rr][None, :] == rows[:, None]
            tail = np.where(back, second[feas, rr][None, :], best[feas, rr][None, :])
            cand[:, feas] = R[:n][:, feas] + tail
        s1 = np.argmin(cand, axis=1)
        best[:, r] = cand[rows, s1]
        succ[:, r] = s1
        cand[rows, s1] = np.inf
        second[:, r] = cand.min(axis=1)
    return best


@dataclass
class _Layer:
    last: np.ndarray
    mask: np.ndarray
    cost: np.ndarray
    rem: np.ndarray
    parent: np.ndarray


def _sequence(layers, depth, idx):
    seq = []
    while depth >= 0:
        layer = layers[depth]
        seq.append(int(layer.last[idx]))
        idx = layer.parent[idx]
        depth -= 1
    return tuple(reversed(seq))


def _label(instance: CvrpInstance, duals, dominance=True, prune=True, k=1, beam=None,
           incumbent=None):
    """Closed routes that may rank among the ``k`` best, as (value, sequence) pairs.

    ``beam`` keeps only that many labels per layer (most promising by cost
    plus bound), which makes the search a heuristic. ``incumbent`` seeds the
    pool and the pruning threshold with a known (value, sequence).
    """
    n, Q = instance.n, instance.capacity
    if n > 62:
        raise ValueError("labeling pricer supports at most 62 customers")
    q = np.asarray(instance.demands, dtype=np.int64)
    R = EdgeReducedCosts.build(instance, duals).matrix
    g = completion_bound(R, q, Q) if prune else np.full((n, Q + 1), -np.inf)
    pool = [(0.0, ())]
    # pruning threshold: the kth best closed value so far (the empty route counts)
    thresh = 0.0
    if incumbent is not None and k == 1 and incumbent[0] < 0.0:
        pool.append(incumbent)
        thresh = incumbent[0]
    first = np.flatnonzero(q <= Q)
    layer = _Layer(first, np.left_shift(1, first).astype(np.int64), R[n, first].copy(),
                   Q - q[first], np.full(first.size, -1))
    keep = layer.cost + g[layer.last, layer.rem] <= thresh + TIE_TOL
    layer = _Layer(*(a[keep] for a in (layer.last, layer.mask, layer.cost, layer.rem, layer.parent)))
    layers = []
    W = np.arange(n)
    bits = np.left_shift(np.int64(1), W.astype(np.int64))
    while layer.last.size:
        depth = len(layers)
        layers.append(layer)
        close = layer.cost + R[layer.last, n]
        hits = np.flatnonzero(close <= thresh + TIE_TOL)
        if hits.size:
            if hits.size > 4 * k + 64:
                hits = hits[np.argsort(close[hits], kind="stable")[:4 * k + 64]]
            pool.extend((float(close[i]), _sequence(layers, depth, i)) for i in hits)
            pool.sort()
            if k == 1:
                thresh = pool[0][0]
            elif len(pool) >= k:
                thresh = pool[k - 1][0]
            pool = [p for p in pool if p[0] <= thresh + TIE_TOL or len(pool) <= k]
        parts = []
        for s in range(0, layer.last.size, CHUNK):
            last = layer.last[s:s + CHUNK]
            mask = layer.mask[s:s + CHUNK]
            rem = layer.rem[s:s + CHUNK]
            newcost = layer.cost[s:s + CHUNK, None] + R[last][:, :n]
            newrem = rem[:, None] - q[None, :]
            ok = ((mask[:, None] & bits[None, :]) == 0) & (newrem >= 0)
            if prune:
                lb = newcost + g[W[None, :], np.maximum(newrem, 0)]
                ok &= lb <= thresh + TIE_TOL
            li, w = np.nonzero(ok)
            parts.append((li + s, w, newcost[li, w], newrem[li, w]))
        li = np.concatenate([p[0] for p in parts])
        w = np.concatenate([p[1] for p in parts])
        cost = np.concatenate([p[2] for p in parts])
        rem = np.concatenate([p[3] for p in parts])
        mask = layer.mask[li] | bits[w]
        if dominance and li.size:
            pos = np.arange(li.size)
            order = np.lexsort((pos, cost, mask, w))
            head = np.ones(order.size, dtype=bool)
            head[1:] = (w[order][1:] != w[order][:-1]) | (mask[order][1:] != mask[order][:-1])
            keep = np.zeros(li.size, dtype=bool)
            keep[order[head]] = True
            li, w, cost, rem, mask = li[keep], w[keep], cost[keep], rem[keep], mask[keep]
        if beam is not None and li.size > beam:
            top = np.sort(np.argpartition(cost + g[w, rem], beam)[:beam])
            li, w, cost, rem, mask = li[top], w[top], cost[top], rem[top], mask[top]
        layer = _Layer(w, mask, cost, rem, li)
    return pool


def price(instance: CvrpInstance, duals, *, dominance: bool = True,
          prune: bool = True) -> tuple[Route, float]:
    """Minimum reduced-cost route, the empty route (value 0) included.

    Among routes within 1e-9 of the optimum the lexicographically smallest
    sequence is returned.
    """
    incumbent = None
    if prune:
        # a cheap beam pass supplies a strong threshold before the exact pass
        seed = _label(instance, duals, beam=BEAM_WIDTH)
        incumbent = min(seed)
    pool = _label(instance, duals, dominance=dominance, prune=prune, incumbent=incumbent)
    low = min(v for v, _ in pool)
    seq = min(s for v, s in pool if v <= low + TIE_TOL)
    route = make_route(seq, instance)
    return route, reduced_cost(route, duals)


def price_many(instance: CvrpInstance, duals, k: int) -> list[tuple[Route, float]]:
    """Up to ``k`` distinct negative reduced-cost routes, best first.

    The first entry is the exact minimum. The rest are the best closed
    routes among labels that survived merging, so they need not be the true
    2nd..kth best.
    """
    if k < 1:
        raise ValueError("k must be positive")
    best, best_val = price(instance, duals)
    if best_val >= -TIE_TOL:
        return []
    out = [(best, best_val)]
    for v, seq in _label(instance, duals, k=k):
        if len(out) == k:
            break
        if seq and seq != best.sequence and v < -TIE_TOL:
            r = make_route(seq, instance)
            out.append((r, reduced_cost(r, duals)))
    return out


def count_routes(instance: CvrpInstance) -> int:
    """Upper bound on the number of ordered elementary sequences within capacity."""
    n = instance.n
    if n == 0:
        return 1
    longest = min(n, instance.capacity // min(instance.demands))
    return 1 + sum(math.perm(n, k) for k in range(1, longest + 1))


def enumerate_routes(instance: CvrpInstance, limit: int = 2_000_000):
    """Yield every nonempty elementary, capacity-feasible customer sequence."""
    if count_routes(instance) > limit:
        raise ValueError(f"route enumeration bound {count_routes(instance)} exceeds limit {limit}")
    n, Q, q = instance.n, instance.capacity, instance.demands

    def extend(seq, load, used):
        for w in range(n):
            if w not in used and load + q[w] <= Q:
                nxt = seq + (w,)
                yield nxt
                yield from extend(nxt, load + q[w], used | {w})

    yield from extend((), 0, frozenset())


def brute_force_price(instance: CvrpInstance, duals,
                      limit: int = 2_000_000) -> tuple[Route, float]:
    """Exhaustive oracle for :func:`price`, evaluated in column form."""
    best_val, best_route = 0.0, make_route((), instance)
    for seq in enumerate_routes(instance, limit):
        r = make_route(seq, instance)
        v = reduced_cost(r, duals)
        if v < best_val - TIE_TOL or (abs(v - best_val) <= TIE_TOL and seq < best_route.sequence):
            best_val, best_route = v, r
    return best_route, reduced_cost(best_route, duals)

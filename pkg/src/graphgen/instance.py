"""CVRP instances: random generation on an integer grid, JSON storage."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class InstanceFormatError(ValueError):
    """Raised by :func:`load` and :func:`from_dict`; ``field`` names the offending entry."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


def dist(a, b) -> int:
    """Euclidean distance between two grid points, rounded up."""
    dx, dy = int(a[0]) - int(b[0]), int(a[1]) - int(b[1])
    sq = dx * dx + dy * dy
    r = math.isqrt(sq)
    return r if r * r == sq else r + 1


def distance_matrix(points) -> np.ndarray:
    pts = np.asarray(points, dtype=np.int64).reshape(-1, 2)
    k = len(pts)
    out = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        for j in range(i + 1, k):
            out[i, j] = out[j, i] = dist(pts[i], pts[j])
    return out


@dataclass(frozen=True, eq=False)
class CvrpInstance:
    """Customers are indexed ``0..n-1``; the depot is node ``n`` of :attr:`distances`."""

    customers: tuple[tuple[int, int], ...]
    demands: tuple[int, ...]
    depot: tuple[int, int]
    fleet_size: int
    capacity: int
    grid: int = 100
    distances: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        customers = tuple((int(x), int(y)) for x, y in self.customers)
        demands = tuple(int(d) for d in self.demands)
        object.__setattr__(self, "customers", customers)
        object.__setattr__(self, "demands", demands)
        object.__setattr__(self, "depot", (int(self.depot[0]), int(self.depot[1])))
        if len(demands) != len(customers):
            raise ValueError("one demand per customer required")
        if self.fleet_size < 1 or self.capacity < 1:
            raise ValueError("fleet_size and capacity must be positive")
        for u, d in enumerate(demands):
            if d < 1:
                raise ValueError(f"customer {u} has non-positive demand {d}")
            if d > self.capacity:
                raise ValueError(f"customer {u} demand {d} exceeds capacity {self.capacity}")
        computed = distance_matrix(list(customers) + [self.depot])
        if self.distances is not None and not np.array_equal(np.asarray(self.distances), computed):
            raise ValueError("distance matrix disagrees with coordinates")
        computed.setflags(write=False)
        object.__setattr__(self, "distances", computed)

    @property
    def n(self) -> int:
        return len(self.customers)

    @property
    def depot_index(self) -> int:
        return len(self.customers)

    def __eq__(self, other):
        if not isinstance(other, CvrpInstance):
            return NotImplemented
        return (self.customers == other.customers and self.demands == other.demands
                and self.depot == other.depot and self.fleet_size == other.fleet_size
                and self.capacity == other.capacity and self.grid == other.grid
                and np.array_equal(self.distances, other.distances))

    def __hash__(self):
        return hash((self.customers, self.demands, self.depot, self.fleet_size, self.capacity))

    def to_dict(self) -> dict:
        return {
            "grid": self.grid,
            "depot": list(self.depot),
            "customers": [[x, y, d] for (x, y), d in zip(self.customers, self.demands)],
            "fleet_size": self.fleet_size,
            "capacity": self.capacity,
            "distances": self.distances.tolist(),
        }


def generate(seed: int, n: int = 30, k: int = 5, d0: int = 7, grid: int = 100) -> CvrpInstance:
    """Unit-demand instance with depot and customers uniform on ``{0..grid}^2``."""
    if n < 1 or k < 1 or d0 < 1 or grid < 0:
        raise ValueError("need n >= 1, k >= 1, d0 >= 1, grid >= 0")
    rng = np.random.default_rng(seed)
    pts = rng.integers(0, grid + 1, size=(n + 1, 2))
    return CvrpInstance(customers=[tuple(p) for p in pts[1:]], demands=[1] * n,
                        depot=tuple(pts[0]), fleet_size=k, capacity=d0, grid=grid)


def _int(data, key, minimum=None):
    if key not in data:
        raise InstanceFormatError(key, "missing")
    v = data[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise InstanceFormatError(key, f"expected integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise InstanceFormatError(key, f"must be >= {minimum}")
    return v


def _point(v, key):
    if (not isinstance(v, (list, tuple)) or len(v) != 2
            or not all(isinstance(c, int) and not isinstance(c, bool) for c in v)):
        raise InstanceFormatError(key, f"expected [x, y] integers, got {v!r}")
    return tuple(v)


def from_dict(data: dict) -> CvrpInstance:
    if not isinstance(data, dict):
        raise InstanceFormatError("<root>", "expected an object")
    grid = _int(data, "grid", 0)
    if "depot" not in data:
        raise InstanceFormatError("depot", "missing")
    depot = _point(data["depot"], "depot")
    fleet = _int(data, "fleet_size", 1)
    cap = _int(data, "capacity", 1)
    if "customers" not in data or not isinstance(data["customers"], list):
        raise InstanceFormatError("customers", "missing or not a list")
    customers, demands = [], []
    for i, row in enumerate(data["customers"]):
        key = f"customers[{i}]"
        if not isinstance(row, (list, tuple)) or len(row) != 3:
            raise InstanceFormatError(key, f"expected [x, y, demand], got {row!r}")
        customers.append(_point(row[:2], key))
        d = row[2]
        if isinstance(d, bool) or not isinstance(d, int) or d < 1:
            raise InstanceFormatError(key, f"demand must be a positive integer, got {d!r}")
        if d > cap:
            raise InstanceFormatError(key, f"demand {d} exceeds capacity {cap}")
        demands.append(d)
    inst = CvrpInstance(customers, demands, depot, fleet, cap, grid)
    if "distances" in data:
        given = data["distances"]
        try:
            ok = np.array_equal(np.asarray(given, dtype=np.int64), inst.distances)
        except (TypeError, ValueError):
            ok = False
        if not ok:
            raise InstanceFormatError("distances", "does not match ceil-Euclidean distances")
    return inst


def save(instance: CvrpInstance, path) -> Path:
    path = Path(path)
    data = instance.to_dict()

    def rows(key):
        return "[\n" + ",\n".join("    " + json.dumps(r) for r in data[key]) + "\n  ]"

    body = ",\n".join([
        f'  "grid": {data["grid"]}',
        f'  "depot": {json.dumps(data["depot"])}',
        f'  "fleet_size": {data["fleet_size"]}',
        f'  "capacity": {data["capacity"]}',
        f'  "customers": {rows("customers")}',
        f'  "distances": {rows("distances")}',
    ])
    path.write_text("{\n" + body + "\n}\n", encoding="utf-8")
    return path


def load(path) -> CvrpInstance:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError("<root>", f"invalid JSON: {exc}") from exc
    return from_dict(data)

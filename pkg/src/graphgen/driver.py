"""Column generation and graph generation loops, traces and benchmarks."""

from __future__ import annotations

import csv
import logging
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import lp
from .column import Column, Route, artificials
from .family import FamilyGraph, Ordering, PathFlow, build_graph, build_ordering, decompose_flow
from .instance import CvrpInstance
from .master import RmpModel, extract_duals
from .pricing import price, price_many

log = logging.getLogger(__name__)

CG, GG = "CG", "GG"
CONVERGED, ITERATION_CAP = "Converged", "IterationCap"
AGREE_TOL = 1e-6
TRACE_FIELDS = ("iter", "rmp_obj", "min_red_cost", "rmp_seconds", "pricing_seconds",
                "n_cols", "n_families", "lp_rows", "lp_vars", "gap_plus_one")
SUMMARY_FIELDS = ("instance", "cg_iterations", "gg_iterations", "cg_seconds", "gg_seconds",
                  "cg_objective", "gg_objective")


class ObjectiveMismatch(RuntimeError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


@dataclass
class SolveParams:
    mode: str = CG
    tolerance: float = 1e-6
    max_iterations: int = 100_000
    seed: int = 0
    warm_start: bool = True
    columns_per_iteration: int = 1
    lp_method: str = "simplex"
    # diagnostics, off in normal runs
    check_warm: bool = False
    track_column_only: bool = False

    def __post_init__(self):
        self.mode = self.mode.upper()
        if self.mode not in (CG, GG):
            raise ValueError(f"mode must be CG or GG, got {self.mode!r}")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1 or self.columns_per_iteration < 1:
            raise ValueError("max_iterations and columns_per_iteration must be >= 1")


@dataclass
class IterationRecord:
    iteration: int
    rmp_objective: float
    min_reduced_cost: float
    rmp_seconds: float
    pricing_seconds: float
    n_columns: int
    n_families: int
    lp_rows: int
    lp_vars: int
    cold_objective: float | None = None
    column_only_objective: float | None = None


@dataclass
class SolveResult:
    mode: str
    status: str
    objective: float
    records: list[IterationRecord]
    columns: list[Column]
    theta: np.ndarray
    families: list[FamilyGraph] = field(default_factory=list)
    psi: list[np.ndarray] = field(default_factory=list)
    orderings: list[tuple[Route, Ordering]] = field(default_factory=list)
    model: RmpModel | None = field(default=None, repr=False)

    @property
    def iterations(self) -> int:
        return len(self.records)

    @property
    def seconds(self) -> float:
        return sum(r.rmp_seconds + r.pricing_seconds for r in self.records)

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED

    def gap_plus_one(self, reference: float | None = None) -> list[float]:
        ref = self.objective if reference is None else reference
        return [r.rmp_objective - ref + 1.0 for r in self.records]

    def flows(self, tol: float = 1e-9) -> list[PathFlow]:
        return [decompose_flow(g, np.where(p > tol, p, 0.0), tol=max(tol, 1e-9))
                for g, p in zip(self.families, self.psi)]

    def weighted_routes(self, tol: float = 1e-9) -> list[tuple[Route, float]]:
        """Routes with positive weight: generated columns, then decomposed family flows."""
        out = [(c.route, float(t)) for c, t in zip(self.columns, self.theta)
               if t > tol and not c.is_artificial]
        inst = self.model.instance
        for flow in self.flows(tol):
            out.extend((r, a) for r, a in flow.routes(inst) if a > tol)
        return out


def _lp_solve(problem, prior, params: SolveParams):
    if prior is None or not params.warm_start:
        return lp.solve(problem, params.lp_method)
    if problem.n_rows == prior.problem.n_rows:
        return lp.resolve_with_new_columns(problem, prior, params.lp_method)
    return lp.resolve_with_new_rows(problem, prior, params.lp_method)


def _solve(instance: CvrpInstance, params: SolveParams) -> SolveResult:
    gg = params.mode == GG
    model = RmpModel(instance, artificials(instance))
    shadow = RmpModel(instance, artificials(instance)) if params.track_column_only else None
    rng = np.random.default_rng(params.seed)
    known_orders: dict[tuple[int, ...], int] = {}
    known_routes = {c.route.sequence for c in model.columns if not c.is_artificial}
    orderings: list[tuple[Route, Ordering]] = []
    records: list[IterationRecord] = []
    prior = shadow_prior = None
    status = ITERATION_CAP
    for it in range(1, params.max_iterations + 1):
        problem = model.problem()
        t0 = time.perf_counter()
        sol = _lp_solve(problem, prior, params)
        t1 = time.perf_counter()
        if not sol.optimal:
            raise RuntimeError(f"RMP solve returned {sol.status.value} at iteration {it}")
        prior = sol
        cold = lp.solve(problem, params.lp_method).objective if params.check_warm else None
        column_only = None
        if shadow is not None:
            shadow_prior = _lp_solve(shadow.problem(), shadow_prior, params)
            column_only = shadow_prior.objective
        duals = extract_duals(model, sol)
        t2 = time.perf_counter()
        if params.columns_per_iteration == 1:
            found = [price(instance, duals)]
        else:
            found = price_many(instance, duals, params.columns_per_iteration) or [price(instance, duals)]
        t3 = time.perf_counter()
        min_rc = found[0][1]
        records.append(IterationRecord(it, sol.objective, min_rc, t1 - t0, t3 - t2,
                                       len(model.columns), len(model.families),
                                       problem.n_rows, problem.n_vars, cold, column_only))
        log.debug("%s it %d obj %.6f min rc %.6f", params.mode, it, sol.objective, min_rc)
        if min_rc >= -params.tolerance:
            status = CONVERGED
            break
        if it == params.max_iterations:
            break  # cap reached; the result describes the last solved RMP
        for route, value in found:
            if value >= -params.tolerance:
                continue
            if route.sequence in known_routes:
                raise RuntimeError(f"pricing returned existing column {route.sequence} "
                                   f"with reduced cost {value:g}")
            known_routes.add(route.sequence)
            col = Column.from_route(route, instance)
            model.add_column(col)
            if shadow is not None:
                shadow.add_column(col)
            if gg:
                ordering = build_ordering(route, instance, rng)
                orderings.append((route, ordering))
                if ordering.order not in known_orders:
                    known_orders[ordering.order] = len(model.families)
                    model.add_family(build_graph(ordering, instance, route))
    return SolveResult(params.mode, status, prior.objective, records, list(model.columns),
                       model.theta(prior), list(model.families), model.psi(prior),
                       orderings, model)


def solve_cg(instance: CvrpInstance, params: SolveParams | None = None) -> SolveResult:
    params = params or SolveParams(mode=CG)
    if params.mode != CG:
        raise ValueError("solve_cg needs mode CG")
    return _solve(instance, params)


def solve_gg(instance: CvrpInstance, params: SolveParams | None = None) -> SolveResult:
    params = params or SolveParams(mode=GG)
    if params.mode != GG:
        raise ValueError("solve_gg needs mode GG")
    return _solve(instance, params)


def solve(instance: CvrpInstance, params: SolveParams) -> SolveResult:
    return _solve(instance, params)


def write_trace(result: SolveResult, path, reference: float | None = None) -> Path:
    path = Path(path)
    gaps = result.gap_plus_one(reference)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TRACE_FIELDS)
        for r, gap in zip(result.records, gaps):
            w.writerow([r.iteration, repr(r.rmp_objective), repr(r.min_reduced_cost),
                        f"{r.rmp_seconds:.6f}", f"{r.pricing_seconds:.6f}", r.n_columns,
                        r.n_families, r.lp_rows, r.lp_vars, repr(gap)])
    return path


def read_trace(path) -> list[dict]:
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != TRACE_FIELDS:
            raise ValueError(f"{path}: unexpected trace header {reader.fieldnames}")
        rows = []
        for row in reader:
            rows.append({k: (int(v) if k in ("iter", "n_cols", "n_families", "lp_rows", "lp_vars")
                             else float(v)) for k, v in row.items()})
        return rows


@dataclass
class BenchmarkRow:
    instance: str
    cg_iterations: int
    gg_iterations: int
    cg_seconds: float
    gg_seconds: float
    cg_objective: float
    gg_objective: float
    cg_status: str = CONVERGED
    gg_status: str = CONVERGED

    @property
    def agree(self) -> bool:
        return abs(self.cg_objective - self.gg_objective) <= AGREE_TOL


@dataclass
class BenchmarkReport:
    rows: list[BenchmarkRow]

    def aggregate(self, how) -> dict[str, float]:
        return {k: how([getattr(r, k) for r in self.rows])
                for k in ("cg_iterations", "gg_iterations", "cg_seconds", "gg_seconds")}

    @property
    def mean(self):
        return self.aggregate(statistics.mean)

    @property
    def median(self):
        return self.aggregate(statistics.median)

    @property
    def mismatches(self) -> list[BenchmarkRow]:
        return [r for r in self.rows if not r.agree]

    def table(self) -> str:
        lines = [f"{'instance':>12} {'CG it':>7} {'GG it':>7} {'CG s':>9} {'GG s':>9} {'objective':>12}"]
        for r in self.rows:
            lines.append(f"{r.instance:>12} {r.cg_iterations:>7} {r.gg_iterations:>7} "
                         f"{r.cg_seconds:>9.2f} {r.gg_seconds:>9.2f} {r.cg_objective:>12.4f}")
        for name, agg in (("mean", self.mean), ("median", self.median)):
            lines.append(f"{name:>12} {agg['cg_iterations']:>7.1f} {agg['gg_iterations']:>7.1f} "
                         f"{agg['cg_seconds']:>9.2f} {agg['gg_seconds']:>9.2f}")
        return "\n".join(lines)


def write_summary(report: BenchmarkReport, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SUMMARY_FIELDS)
        for r in report.rows:
            w.writerow([r.instance, r.cg_iterations, r.gg_iterations, f"{r.cg_seconds:.4f}",
                        f"{r.gg_seconds:.4f}", repr(r.cg_objective), repr(r.gg_objective)])
        for name, agg in (("mean", report.mean), ("median", report.median)):
            w.writerow([name, agg["cg_iterations"], agg["gg_iterations"],
                        f"{agg['cg_seconds']:.4f}", f"{agg['gg_seconds']:.4f}", "", ""])
    return path


def read_summary(path) -> list[dict]:
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != SUMMARY_FIELDS:
            raise ValueError(f"{path}: unexpected summary header {reader.fieldnames}")
        return list(reader)


def _bench_one(name, instance, params_cg, params_gg, out_dir):
    cg = solve_cg(instance, params_cg)
    gg = solve_gg(instance, params_gg)
    if out_dir is not None:
        # both traces share the CG optimum as the reference value
        write_trace(cg, Path(out_dir) / f"{name}_cg.csv", cg.objective)
        write_trace(gg, Path(out_dir) / f"{name}_gg.csv", cg.objective)
    log.info("%s: CG %d it %.1fs, GG %d it %.1fs, obj %.4f / %.4f", name, cg.iterations,
             cg.seconds, gg.iterations, gg.seconds, cg.objective, gg.objective)
    return BenchmarkRow(name, cg.iterations, gg.iterations, cg.seconds, gg.seconds,
                        cg.objective, gg.objective, cg.status, gg.status)


def run_benchmark(instances, params_cg: SolveParams | None = None,
                  params_gg: SolveParams | None = None, out_dir=None,
                  workers: int = 1) -> BenchmarkReport:
    """Solve every ``(name, instance)`` pair with both algorithms.

    Writes ``<name>_cg.csv`` / ``<name>_gg.csv`` traces and ``summary.csv``
    when ``out_dir`` is given. Raises :class:`ObjectiveMismatch` after all
    instances finish if any pair of optima disagree.
    """
    params_cg = params_cg or SolveParams(mode=CG)
    params_gg = params_gg or SolveParams(mode=GG)
    if out_dir is not None:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
    instances = list(instances)
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            futures = [pool.submit(_bench_one, name, inst, params_cg, params_gg, out_dir)
                       for name, inst in instances]
            rows = [f.result() for f in futures]
    else:
        rows = [_bench_one(name, inst, params_cg, params_gg, out_dir) for name, inst in instances]
    report = BenchmarkReport(rows)
    if out_dir is not None:
        write_summary(report, Path(out_dir) / "summary.csv")
    if report.mismatches:
        bad = ", ".join(f"{r.instance} ({r.cg_objective!r} vs {r.gg_objective!r})"
                        for r in report.mismatches)
        raise ObjectiveMismatch(f"CG and GG optima disagree: {bad}", report)
    return report

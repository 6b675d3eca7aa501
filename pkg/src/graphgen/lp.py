"""Revised primal simplex for the restricted master problems.

Problems are ``min c.x  s.t.  A x (>= | =) b,  x >= 0`` with ``A`` stored
column-sparse. The engine converts to standard form by giving every GEQ row
a surplus column and every row an artificial column, then runs a two-phase
revised simplex with an LU factorization of the basis and product-form
updates between refactorizations.

Artificial columns never re-enter once they leave the basis, and in phase
two any artificial still basic is treated as a variable fixed at zero. This
"bounded" treatment is what allows warm starts when rows are appended: the
old basis plus one artificial per new row is a valid starting basis.

The master problems are heavily primal degenerate (every flow row has a
zero right-hand side). After a run of degenerate pivots the basic values
get small random positive shifts, which breaks the ties that cause
stalling. Once the shifted problem is optimal the true values are restored
and any small infeasibility is repaired with dual simplex pivots, which keep
the reduced costs optimal.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
from scipy.sparse.linalg import splu

log = logging.getLogger(__name__)

GEQ = "GEQ"
EQ = "EQ"

FEAS_TOL = 1e-9
OPT_TOL = 1e-9
PIVOT_TOL = 1e-9
GAP_TOL = 1e-7
BLAND_AFTER = 1000
PERTURB_AFTER = 50        # degenerate pivots before basic values get perturbed
PERTURB_SIZE = 1e-6
DEVEX = True              # reference-weight pricing instead of most negative reduced cost
DEVEX_RESET = 1e6
REFACTOR_EVERY = 64
DENSE_LU_MAX_ROWS = 300


class LpStructureError(ValueError):
    """Malformed problem, or a warm start against a problem whose rows changed."""


class LpIterationLimit(RuntimeError):
    pass


class Status(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True, eq=False)
class LpProblem:
    objective: np.ndarray
    matrix: sp.csc_matrix
    senses: tuple[str, ...]
    rhs: np.ndarray

    def __post_init__(self):
        objective = np.asarray(self.objective, dtype=float).ravel()
        rhs = np.asarray(self.rhs, dtype=float).ravel()
        matrix = sp.csc_matrix(self.matrix, dtype=float)
        senses = tuple(self.senses)
        m, n = matrix.shape
        if n != objective.size:
            raise LpStructureError(
                f"matrix has {n} columns but objective has {objective.size} entries")
        if m != rhs.size or m != len(senses):
            raise LpStructureError(
                f"row count mismatch: matrix {m}, rhs {rhs.size}, senses {len(senses)}")
        if not np.all(np.isfinite(objective)):
            raise LpStructureError("objective has non-finite coefficients")
        if not np.all(np.isfinite(rhs)) or not np.all(np.isfinite(matrix.data)):
            raise LpStructureError("constraint data has non-finite entries")
        bad = set(senses) - {GEQ, EQ}
        if bad:
            raise LpStructureError(f"unknown row sense(s): {sorted(bad)}")
        matrix.sum_duplicates()
        object.__setattr__(self, "objective", objective)
        object.__setattr__(self, "rhs", rhs)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "senses", senses)

    @classmethod
    def from_rows(cls, objective: Sequence[float],
                  rows: Sequence[tuple[Mapping[int, float], str, float]]) -> "LpProblem":
        """Build from ``(coefficients, sense, rhs)`` triples, coefficients keyed by variable."""
        n = len(objective)
        ri, ci, vals = [], [], []
        for i, (coeffs, _sense, _rhs) in enumerate(rows):
            for j, a in coeffs.items():
                if not (0 <= j < n):
                    raise LpStructureError(
                        f"row {i} references undeclared variable {j} (have {n})")
                ri.append(i)
                ci.append(j)
                vals.append(a)
        matrix = sp.csc_matrix((vals, (ri, ci)), shape=(len(rows), n))
        return cls(np.asarray(objective, dtype=float), matrix,
                   tuple(r[1] for r in rows), np.array([r[2] for r in rows], dtype=float))

    @property
    def n_rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_vars(self) -> int:
        return self.matrix.shape[1]

    def with_columns(self, costs, columns: sp.spmatrix) -> "LpProblem":
        """Same rows, extra variables appended on the right."""
        columns = sp.csc_matrix(columns, shape=(self.n_rows, np.size(costs)))
        return LpProblem(np.concatenate([self.objective, np.asarray(costs, dtype=float)]),
                         sp.hstack([self.matrix, columns], format="csc"),
                         self.senses, self.rhs)

    def dump(self) -> str:
        """Plain-text row listing, for bug reports."""
        lines = [f"vars {self.n_vars} rows {self.n_rows}",
                 "min " + " ".join(f"{c:+g}*x{j}" for j, c in enumerate(self.objective) if c)]
        rows = self.matrix.tocsr()
        for i in range(self.n_rows):
            lo, hi = rows.indptr[i], rows.indptr[i + 1]
            terms = " ".join(f"{a:+g}*x{j}" for j, a in zip(rows.indices[lo:hi], rows.data[lo:hi]))
            op = ">=" if self.senses[i] == GEQ else "=="
            lines.append(f"r{i}: {terms or '0'} {op} {self.rhs[i]:g}")
        return "\n".join(lines)


@dataclass(eq=False)
class LpSolution:
    status: Status
    primal: np.ndarray
    duals: np.ndarray
    objective: float
    iterations: int = 0
    # warm-start state: basis as (kind, index) pairs, see _StandardForm
    basis_kind: np.ndarray | None = field(default=None, repr=False)
    basis_index: np.ndarray | None = field(default=None, repr=False)
    problem: LpProblem | None = field(default=None, repr=False)

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL

    @property
    def dual_objective(self) -> float:
        return float(self.duals @ self.problem.rhs) if self.problem is not None else float("nan")


# basis entry kinds
_STRUCT, _SURPLUS, _ARTIF = 0, 1, 2


class _StandardForm:
    """Columns ``[structural (n) | surplus (m) | artificial (m)]``, rows sign-flipped so b >= 0."""

    def __init__(self, problem: LpProblem):
        m, n = problem.n_rows, problem.n_vars
        self.m, self.n = m, n
        self.sign = np.where(problem.rhs < 0, -1.0, 1.0)
        self.b = problem.rhs * self.sign
        is_geq = np.array([s == GEQ for s in problem.senses], dtype=bool)
        self.is_geq = is_geq
        flip = sp.diags(self.sign)
        surplus = sp.diags(-self.sign * is_geq)
        self.A = sp.hstack([flip @ problem.matrix, surplus, sp.identity(m)], format="csc")
        self.AT = self.A.T.tocsr()
        N = n + 2 * m
        self.N = N
        self.can_enter = np.zeros(N, dtype=bool)
        self.can_enter[:n] = True
        self.can_enter[n:n + m] = is_geq
        self.is_artificial = np.zeros(N, dtype=bool)
        self.is_artificial[n + m:] = True

    def encode(self, basis: np.ndarray):
        kind = np.where(basis < self.n, _STRUCT, np.where(basis < self.n + self.m, _SURPLUS, _ARTIF))
        index = np.where(kind == _STRUCT, basis,
                         np.where(kind == _SURPLUS, basis - self.n, basis - self.n - self.m))
        return kind.astype(np.int8), index.astype(np.int64)

    def decode(self, kind: np.ndarray, index: np.ndarray) -> np.ndarray:
        offset = np.select([kind == _STRUCT, kind == _SURPLUS], [0, self.n], self.n + self.m)
        return (index + offset).astype(np.int64)

    def column(self, j: int) -> np.ndarray:
        out = np.zeros(self.m)
        lo, hi = self.A.indptr[j], self.A.indptr[j + 1]
        out[self.A.indices[lo:hi]] = self.A.data[lo:hi]
        return out


class _Factor:
    """LU of the basis matrix with a product-form eta file on top."""

    def __init__(self, A: sp.csc_matrix, basis: np.ndarray):
        B = A[:, basis]
        m = B.shape[0]
        self.dense = m <= DENSE_LU_MAX_ROWS
        if self.dense:
            self.lu = la.lu_factor(B.toarray(), check_finite=False)
        else:
            try:
                self.lu = splu(B.tocsc(), permc_spec="COLAMD")
            except RuntimeError as exc:
                raise np.linalg.LinAlgError(str(exc)) from exc
        self.etas: list[tuple[int, np.ndarray]] = []

    def _solve(self, rhs, trans=False):
        if self.dense:
            return la.lu_solve(self.lu, rhs, trans=1 if trans else 0, check_finite=False)
        return self.lu.solve(rhs, trans="T" if trans else "N")

    def ftran(self, a: np.ndarray) -> np.ndarray:
        x = self._solve(a)
        for r, d in self.etas:
            xr = x[r] / d[r]
            x -= d * xr
            x[r] = xr
        return x

    def btran(self, c: np.ndarray) -> np.ndarray:
        z = c.astype(float, copy=True)
        for r, d in reversed(self.etas):
            z[r] = (z[r] - (z @ d - z[r] * d[r])) / d[r]
        return self._solve(z, trans=True)

    def update(self, r: int, d: np.ndarray):
        self.etas.append((r, d.copy()))


def _check_singular(factor: _Factor, m: int):
    if factor.dense:
        diag = np.abs(np.diag(factor.lu[0]))
        if m and diag.min() < 1e-12 * max(1.0, diag.max()):
            raise np.linalg.LinAlgError("singular basis")


class _CleanupFailed(RuntimeError):
    pass


def _dual_cleanup(sf: _StandardForm, cost, basis, fixed, in_basis, factor, x_B, can_enter,
                  counter, max_iter):
    """Dual simplex pivots until the basic values are feasible again."""
    A, AT = sf.A, sf.AT
    while True:
        low = x_B < -FEAS_TOL
        high = fixed[basis] & (x_B > FEAS_TOL)
        bad = np.where(low, -x_B, 0.0) + np.where(high, x_B, 0.0)
        if not bad.any():
            return basis, np.where(fixed[basis], 0.0, np.maximum(x_B, 0.0)), factor
        if counter[0] >= max_iter:
            raise LpIterationLimit(f"simplex exceeded {max_iter} iterations")
        if len(factor.etas) >= REFACTOR_EVERY:
            factor = _Factor(A, basis)
            x_B = factor.ftran(sf.b)
            continue
        r = int(np.argmax(bad))
        e = np.zeros(sf.m)
        e[r] = 1.0
        alpha = AT @ factor.btran(e)
        rc = cost - AT @ factor.btran(cost[basis])
        # x_B[r] moves by -alpha_j per unit of x_j
        sign = 1.0 if low[r] else -1.0
        cand = can_enter & ~in_basis & (sign * alpha < -PIVOT_TOL)
        if not cand.any():
            raise _CleanupFailed("no entering column in dual cleanup")
        idx = np.flatnonzero(cand)
        ratios = np.maximum(rc[idx], 0.0) / np.abs(alpha[idx])
        window = ratios <= ratios.min() + OPT_TOL
        q = int(idx[window][np.argmax(np.abs(alpha[idx][window]))])
        d = factor.ftran(sf.column(q))
        t = x_B[r] / d[r]
        x_B = x_B - t * d
        x_B[r] = t
        in_basis[basis[r]] = False
        in_basis[q] = True
        basis = basis.copy()
        basis[r] = q
        factor.update(r, d)
        counter[0] += 1


def _run(sf: _StandardForm, cost: np.ndarray, basis: np.ndarray, fixed: np.ndarray,
         max_iter: int, counter: list[int], perturb: bool = True):
    """Primal simplex from a feasible basis.

    ``fixed`` marks columns bounded to [0, 0]; they never enter and leave as
    soon as the entering direction touches their row. Returns the status
    ("optimal" or "unbounded") and the final basis and basic values.
    """
    A, AT, m = sf.A, sf.AT, sf.m
    can_enter = sf.can_enter & ~fixed
    in_basis = np.zeros(sf.N, dtype=bool)
    in_basis[basis] = True
    factor = _Factor(A, basis)
    _check_singular(factor, m)
    x_B = np.maximum(factor.ftran(sf.b), 0.0)
    degenerate_run = 0
    bland = False
    perturbed = False
    weights = np.ones(sf.N)
    rc = None   # updated from the pivot row between refactorizations

    def true_values():
        factor = _Factor(A, basis)
        x = factor.ftran(sf.b)
        if not perturbed:
            x = np.maximum(x, 0.0)
        return factor, x

    while True:
        if counter[0] >= max_iter:
            raise LpIterationLimit(f"simplex exceeded {max_iter} iterations")
        if len(factor.etas) >= REFACTOR_EVERY:
            if perturbed:
                # keep the shifted values; only the factorization is refreshed
                factor = _Factor(A, basis)
            else:
                factor, x_B = true_values()
            rc = None
        if rc is None:
            rc = cost - AT @ factor.btran(cost[basis])
        candidates = can_enter & ~in_basis & (rc < -OPT_TOL)
        if not candidates.any():
            # confirm against a fresh factorization and the unshifted values
            if factor.etas or perturbed:
                factor, x_B = true_values()
                if perturbed:
                    perturbed = False
                    basis, x_B, factor = _dual_cleanup(sf, cost, basis, fixed, in_basis,
                                                       factor, x_B, can_enter, counter,
                                                       max_iter)
                    factor = _Factor(A, basis)
                    x_B = np.where(fixed[basis], 0.0, np.maximum(factor.ftran(sf.b), 0.0))
                rc = cost - AT @ factor.btran(cost[basis])
                candidates = can_enter & ~in_basis & (rc < -OPT_TOL)
                if candidates.any():
                    continue
            return "optimal", basis, x_B, factor
        if bland:
            q = int(np.flatnonzero(candidates)[0])
        else:
            idx = np.flatnonzero(candidates)
            score = rc[idx] ** 2 / weights[idx] if DEVEX else -rc[idx]
            q = int(idx[np.argmax(score)])
        d = factor.ftran(sf.column(q))
        fixed_rows = fixed[basis]
        blocking = (d > PIVOT_TOL) | (fixed_rows & (np.abs(d) > PIVOT_TOL))
        if not blocking.any():
            if perturbed:
                # make sure the ray is not an artefact of the shifted values
                factor, x_B = true_values()
                perturbed = False
                basis, x_B, factor = _dual_cleanup(sf, cost, basis, fixed, in_basis, factor,
                                                   x_B, can_enter, counter, max_iter)
                factor = _Factor(A, basis)
                rc = None
                continue
            return "unbounded", basis, x_B, factor
        rows = np.flatnonzero(blocking)
        dr = d[rows]
        xr = np.where(fixed_rows[rows], 0.0, x_B[rows])
        if bland:
            ratios = xr / np.abs(dr)
            t = ratios.min()
            ties = rows[ratios <= t + 1e-12]
            r = int(ties[np.argmin(basis[ties])])
        else:
            # Harris two-pass: relax bounds, then pick the largest pivot inside the window
            ratios = xr / np.abs(dr)
            t_max = ((xr + FEAS_TOL) / np.abs(dr)).min()
            window = ratios <= t_max
            r = int(rows[window][np.argmax(np.abs(dr[window]))])
        t = 0.0 if fixed[basis[r]] else max(x_B[r] / d[r], 0.0)
        e = np.zeros(m)
        e[r] = 1.0
        ratio = (AT @ factor.btran(e)) / d[r]
        rc = rc - rc[q] * ratio
        if DEVEX and not bland:
            wq = weights[q]
            np.maximum(weights, ratio * ratio * wq, out=weights)
            weights[basis[r]] = max(wq / (d[r] * d[r]), 1.0)
            if weights.max() > DEVEX_RESET:
                weights[:] = 1.0
        x_B = x_B - t * d
        x_B[r] = t
        np.maximum(x_B, 0.0, out=x_B)
        in_basis[basis[r]] = False
        in_basis[q] = True
        basis = basis.copy()
        basis[r] = q
        factor.update(r, d)
        counter[0] += 1
        if counter[0] % 1000 == 0:
            log.debug("pivot %d obj %.9g degenerate run %d bland %s", counter[0],
                      float(cost[basis] @ x_B), degenerate_run, bland)
        if t <= FEAS_TOL and not fixed_rows[r]:
            degenerate_run += 1
            if perturb and not perturbed and degenerate_run >= PERTURB_AFTER:
                rng = np.random.default_rng(counter[0])
                shift = PERTURB_SIZE * (1.0 + x_B) * rng.uniform(0.5, 1.0, size=m)
                x_B = np.where(fixed[basis], 0.0, x_B + shift)
                perturbed = True
                degenerate_run = 0
                log.debug("pivot %d: shifted basic values", counter[0])
            elif degenerate_run >= BLAND_AFTER:
                bland = True
        elif t > FEAS_TOL:
            degenerate_run = 0
            bland = False


def _simplex(problem: LpProblem, start_kind=None, start_index=None,
             max_iter: int | None = None, perturb: bool = True) -> LpSolution:
    try:
        return _two_phase(problem, start_kind, start_index, max_iter, perturb)
    except _CleanupFailed:
        log.debug("dual cleanup failed; solving again without perturbation")
        return _two_phase(problem, start_kind, start_index, max_iter, False)


def _two_phase(problem, start_kind, start_index, max_iter, perturb) -> LpSolution:
    m, n = problem.n_rows, problem.n_vars
    if m == 0:
        if (problem.objective < -OPT_TOL).any():
            return LpSolution(Status.UNBOUNDED, np.zeros(n), np.zeros(0), float("-inf"),
                              problem=problem)
        return LpSolution(Status.OPTIMAL, np.zeros(n), np.zeros(0), 0.0, problem=problem,
                          basis_kind=np.zeros(0, np.int8), basis_index=np.zeros(0, np.int64))
    sf = _StandardForm(problem)
    if max_iter is None:
        max_iter = 50 * (sf.N + m) + 10000
    counter = [0]
    if start_kind is None:
        basis = np.arange(n + m, n + 2 * m)
        # GEQ rows with rhs <= 0 start on their surplus column
        surplus_ok = sf.is_geq & ((sf.sign < 0) | (sf.b == 0))
        basis[surplus_ok] = n + np.flatnonzero(surplus_ok)
    else:
        basis = sf.decode(start_kind, start_index)

    artificial_in_basis = sf.is_artificial[basis]
    factor = _Factor(sf.A, basis)
    x_B = factor.ftran(sf.b)
    if artificial_in_basis.any() and (x_B[artificial_in_basis] > FEAS_TOL).any():
        phase1_cost = sf.is_artificial.astype(float)
        _, basis, x_B, factor = _run(sf, phase1_cost, basis, np.zeros(sf.N, bool),
                                     max_iter, counter, perturb)
        infeasibility = float(x_B[sf.is_artificial[basis]].sum())
        if infeasibility > FEAS_TOL * max(1.0, float(np.abs(sf.b).max())):
            return LpSolution(Status.INFEASIBLE, np.full(n, np.nan), np.full(m, np.nan),
                              float("nan"), counter[0], problem=problem)
    cost = np.zeros(sf.N)
    cost[:n] = problem.objective
    status, basis, x_B, factor = _run(sf, cost, basis, sf.is_artificial.copy(),
                                      max_iter, counter, perturb)
    if status == "unbounded":
        return LpSolution(Status.UNBOUNDED, np.full(n, np.nan), np.full(m, np.nan),
                          float("-inf"), counter[0], problem=problem)
    x = np.zeros(sf.N)
    x[basis] = np.where(sf.is_artificial[basis], 0.0, x_B)
    y = factor.btran(cost[basis])
    primal = x[:n]
    duals = y * sf.sign
    duals[sf.is_geq] = np.maximum(duals[sf.is_geq], 0.0)
    kind, index = sf.encode(basis)
    return LpSolution(Status.OPTIMAL, primal, duals, float(problem.objective @ primal),
                      counter[0], basis_kind=kind, basis_index=index, problem=problem)


def _highs(problem: LpProblem) -> LpSolution:
    from scipy.optimize import linprog

    geq = np.array([s == GEQ for s in problem.senses], dtype=bool)
    A = problem.matrix.tocsr()
    kwargs = {}
    if geq.any():
        kwargs["A_ub"] = -A[geq]
        kwargs["b_ub"] = -problem.rhs[geq]
    if (~geq).any():
        kwargs["A_eq"] = A[~geq]
        kwargs["b_eq"] = problem.rhs[~geq]
    res = linprog(problem.objective, bounds=(0, None), method="highs", **kwargs)
    n, m = problem.n_vars, problem.n_rows
    if res.status == 2:
        return LpSolution(Status.INFEASIBLE, np.full(n, np.nan), np.full(m, np.nan),
                          float("nan"), problem=problem)
    if res.status == 3:
        return LpSolution(Status.UNBOUNDED, np.full(n, np.nan), np.full(m, np.nan),
                          float("-inf"), problem=problem)
    if res.status != 0:
        raise LpIterationLimit(f"HiGHS stopped: {res.message}")
    duals = np.zeros(m)
    if geq.any():
        duals[geq] = np.maximum(-res.ineqlin.marginals, 0.0)
    if (~geq).any():
        duals[~geq] = res.eqlin.marginals
    primal = np.maximum(res.x, 0.0)
    return LpSolution(Status.OPTIMAL, primal, duals, float(problem.objective @ primal),
                      int(res.nit), problem=problem)


def solve(problem: LpProblem, method: str = "simplex") -> LpSolution:
    """Solve from scratch. ``method`` is ``"simplex"`` (in-repo) or ``"highs"`` (scipy)."""
    if method == "highs":
        return _highs(problem)
    if method != "simplex":
        raise ValueError(f"unknown LP method {method!r}")
    return _simplex(problem)


def _check_prefix(problem: LpProblem, prior: LpSolution, allow_new_rows: bool):
    old = prior.problem
    if old is None:
        raise LpStructureError("prior solution carries no problem")
    m0, n0 = old.n_rows, old.n_vars
    if problem.n_vars < n0:
        raise LpStructureError("variables were removed since the prior solve")
    if problem.n_rows != m0 and not (allow_new_rows and problem.n_rows > m0):
        raise LpStructureError(f"row count changed from {m0} to {problem.n_rows}")
    if problem.senses[:m0] != old.senses or not np.array_equal(problem.rhs[:m0], old.rhs):
        raise LpStructureError("rows changed since the prior solve")
    if not np.array_equal(problem.objective[:n0], old.objective):
        raise LpStructureError("objective of existing variables changed")
    head = problem.matrix[:m0, :n0]
    if (head != old.matrix).nnz:
        raise LpStructureError("coefficients of existing variables changed")
    if allow_new_rows and problem.n_rows > m0 and problem.matrix[m0:, :n0].nnz:
        raise LpStructureError("appended rows touch existing variables")


def _warm(problem: LpProblem, prior: LpSolution, method: str) -> LpSolution:
    if method == "highs" or prior.basis_kind is None or not prior.optimal:
        return solve(problem, method)
    m0 = prior.problem.n_rows
    kind = np.concatenate([prior.basis_kind,
                           np.full(problem.n_rows - m0, _ARTIF, dtype=np.int8)])
    index = np.concatenate([prior.basis_index, np.arange(m0, problem.n_rows)])
    try:
        return _simplex(problem, kind, index)
    except np.linalg.LinAlgError:
        return _simplex(problem)


def resolve_with_new_columns(problem: LpProblem, prior: LpSolution,
                             method: str = "simplex") -> LpSolution:
    """Warm-started solve of ``problem``, which must extend ``prior``'s problem by variables only."""
    _check_prefix(problem, prior, allow_new_rows=False)
    if problem.n_vars == prior.problem.n_vars and prior.optimal:
        return prior
    return _warm(problem, prior, method)


def resolve_with_new_rows(problem: LpProblem, prior: LpSolution,
                          method: str = "simplex") -> LpSolution:
    """Warm start when variables and rows were appended, new rows touching only new variables."""
    _check_prefix(problem, prior, allow_new_rows=True)
    return _warm(problem, prior, method)


def check_solution(problem: LpProblem, sol: LpSolution) -> dict[str, float]:
    """Worst primal infeasibility, dual sign violation, reduced-cost violation and duality gap."""
    Ax = problem.matrix @ sol.primal
    geq = np.array([s == GEQ for s in problem.senses], dtype=bool)
    slack = Ax - problem.rhs
    primal_viol = max(float(np.max(-slack[geq], initial=0.0)),
                      float(np.max(np.abs(slack[~geq]), initial=0.0)), 0.0)
    primal_viol = max(primal_viol, float(np.max(-sol.primal, initial=0.0)))
    dual_sign = float(np.max(-sol.duals[geq], initial=0.0))
    rc = problem.objective - problem.matrix.T @ sol.duals
    rc_viol = float(np.max(-rc, initial=0.0))
    gap = abs(sol.objective - float(sol.duals @ problem.rhs))
    comp = float(np.max(np.abs(sol.duals * slack), initial=0.0))
    return {"primal": primal_viol, "dual_sign": dual_sign, "reduced_cost": rc_viol,
            "gap": gap, "complementarity": comp}

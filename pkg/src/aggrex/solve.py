"""Bounded-variable revised primal simplex for sparse LPs.

The problem ``min c'x, lo <= Ax <= hi, l <= x <= u`` is solved in the
computational form ``[A  -I] (x, r) = 0`` where the row activities ``r`` are
bounded logical columns.  The basis is kept as a sparse LU factorisation
(SuperLU through scipy) followed by a product-form eta file that is folded
back into a fresh factorisation every ``refactor_every`` pivots.

Phase 1 minimises the sum of bound violations of the basic variables with
the conservative ratio test (an infeasible variable blocks when it reaches
the bound it violates).  Pricing is Dantzig's rule; after ``stall_limit``
pivots without progress the solver switches to Bland's rule until the
objective moves again, which rules out cycling.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .lp import LpProblem

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration-limit"

# nonbasic/basic state codes
_BASIC, _AT_LB, _AT_UB, _FREE, _FIXED = 0, 1, 2, 3, 4


@dataclass(frozen=True)
class SolverOptions:
    feas_tol: float = 1e-6
    opt_tol: float = 1e-7
    pivot_tol: float = 1e-9
    max_iter: int | None = None
    refactor_every: int = 100
    stall_limit: int = 50
    crash: bool = True


@dataclass
class LpSolution:
    status: str
    objective: float
    x: np.ndarray
    iterations: int
    wall_time: float
    names: list[str] = field(default_factory=list, repr=False)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL

    def value(self, name: str) -> float:
        return float(self.x[self.names.index(name)])

    def values(self) -> dict[str, float]:
        return {nm: float(v) for nm, v in zip(self.names, self.x)}


class _Basis:
    """LU of the basis matrix plus an eta file of subsequent pivots."""

    def __init__(self, M: sp.csc_matrix, head: np.ndarray):
        self.m = M.shape[0]
        B = M[:, head].tocsc()
        if self.m:
            self.lu = splu(B, permc_spec="COLAMD")
        self.etas: list[tuple[int, np.ndarray, np.ndarray, float]] = []

    def ftran(self, a: np.ndarray) -> np.ndarray:
        v = self.lu.solve(a) if self.m else a.copy()
        for p, idx, vals, piv in self.etas:
            vp = v[p] / piv
            if vp != 0.0:
                v[idx] -= vals * vp
            v[p] = vp
        return v

    def btran(self, c: np.ndarray) -> np.ndarray:
        u = c.copy()
        for p, idx, vals, piv in reversed(self.etas):
            u[p] = (u[p] - vals @ u[idx]) / piv
        return self.lu.solve(u, trans="T") if self.m else u

    def push(self, p: int, alpha: np.ndarray) -> None:
        idx = np.flatnonzero(alpha)
        idx = idx[idx != p]
        self.etas.append((p, idx, alpha[idx].copy(), float(alpha[p])))


def _initial_state(lo, hi):
    state = np.full(lo.shape, _AT_LB, dtype=np.int8)
    x = np.where(np.isfinite(lo), lo, np.where(np.isfinite(hi), hi, 0.0))
    state[~np.isfinite(lo) & np.isfinite(hi)] = _AT_UB
    state[~np.isfinite(lo) & ~np.isfinite(hi)] = _FREE
    state[lo == hi] = _FIXED
    return x, state


def _crash(A: sp.csc_matrix, cost, x, state, head, pos, lo, hi, n, tol):
    """Swap violated logicals for column-singleton structurals that absorb the residual."""
    m = A.shape[0]
    counts = np.diff(A.indptr)
    singles = np.flatnonzero(counts == 1)
    if singles.size == 0:
        return
    rows_of = A.indices[A.indptr[singles]]
    coef_of = A.data[A.indptr[singles]]
    order = np.lexsort((singles, rows_of))
    singles, rows_of, coef_of = singles[order], rows_of[order], coef_of[order]
    starts = np.searchsorted(rows_of, np.arange(m + 1))
    for i in range(m):
        r = n + i
        xr = x[r]
        if lo[r] - tol <= xr <= hi[r] + tol:
            continue
        target = lo[r] if xr < lo[r] else hi[r]
        best = None
        for k in range(starts[i], starts[i + 1]):
            j = singles[k]
            if state[j] == _BASIC or state[j] == _FIXED:
                continue
            a = coef_of[k]
            if abs(a) < 1e-7:
                continue
            newx = x[j] + (target - xr) / a
            if newx < lo[j] - tol or newx > hi[j] + tol:
                continue
            delta_cost = cost[j] * (newx - x[j])
            if best is None or delta_cost < best[0]:
                best = (delta_cost, j, newx)
        if best is None:
            continue
        _, j, newx = best
        x[j] = newx
        state[j] = _BASIC
        head[i] = j
        pos[j] = i
        pos[r] = -1
        x[r] = target
        if lo[r] == hi[r]:
            state[r] = _FIXED
        else:
            state[r] = _AT_LB if target == lo[r] else _AT_UB


def solve_lp(problem: LpProblem, options: SolverOptions | None = None) -> LpSolution:
    """Solve `problem`; infeasibility and unboundedness are reported through `status`."""
    opts = options or SolverOptions()
    t0 = time.perf_counter()
    A = problem.matrix().tocsc()
    m, n = A.shape
    c = problem.cost
    row_lo, row_hi = problem.row_bounds()
    lo = np.concatenate([problem.lb, row_lo])
    hi = np.concatenate([problem.ub, row_hi])
    cost = np.concatenate([c, np.zeros(m)])
    M = sp.hstack([A, -sp.identity(m, format="csc")], format="csc")
    At = A.T.tocsr()
    total = n + m
    max_iter = opts.max_iter if opts.max_iter is not None else 20 * total + 1000
    ftol, otol, ptol = opts.feas_tol, opts.opt_tol, opts.pivot_tol

    x, state = _initial_state(lo, hi)
    head = np.arange(n, n + m)
    pos = np.full(total, -1, dtype=np.int64)
    pos[head] = np.arange(m)
    state[head] = _BASIC
    x[n:] = A @ x[:n]
    if opts.crash:
        _crash(A, cost, x, state, head, pos, lo, hi, n, ftol)

    basis = _Basis(M, head)

    def recompute_basics():
        nonbasic = state != _BASIC
        rhs = -(M[:, np.flatnonzero(nonbasic)] @ x[nonbasic])
        x[head] = basis.ftran(rhs) if m else rhs

    recompute_basics()

    def column(j):
        a = np.zeros(m)
        start, end = M.indptr[j], M.indptr[j + 1]
        a[M.indices[start:end]] = M.data[start:end]
        return a

    iterations = 0
    bland = False
    best_obj = np.inf
    since_progress = 0
    phase = 1
    status = ITERATION_LIMIT

    while iterations < max_iter:
        xb = x[head]
        lob, hib = lo[head], hi[head]
        below = xb < lob - ftol
        above = xb > hib + ftol
        if phase == 1:
            if not (below.any() or above.any()):
                phase = 2
                best_obj, since_progress, bland = np.inf, 0, False
            else:
                cb = above.astype(float) - below.astype(float)
                obj = float(np.sum(np.where(below, lob - xb, 0.0)) + np.sum(np.where(above, xb - hib, 0.0)))
        if phase == 2:
            cb = cost[head]
            obj = float(cost @ x)

        if obj < best_obj - 1e-12 * max(1.0, abs(best_obj) if np.isfinite(best_obj) else 1.0):
            best_obj, since_progress = obj, 0
            bland = False
        else:
            since_progress += 1
            if since_progress > opts.stall_limit:
                bland = True

        y = basis.btran(cb) if m else np.zeros(0)
        d = np.empty(total)
        if phase == 2:
            d[:n] = c - At @ y
        else:
            d[:n] = -(At @ y)
        d[n:] = y
        up = ((state == _AT_LB) | (state == _FREE)) & (d < -otol)
        down = ((state == _AT_UB) | (state == _FREE)) & (d > otol)
        eligible = up | down
        if not eligible.any():
            if phase == 1:
                status = INFEASIBLE
            else:
                status = OPTIMAL
            break
        if bland:
            q = int(np.argmax(eligible))
        else:
            q = int(np.argmax(np.where(eligible, np.abs(d), 0.0)))
        direction = 1.0 if up[q] else -1.0

        alpha = basis.ftran(column(q))
        rate = -direction * alpha  # d x_B / d t
        # ratio test
        t_best = hi[q] - lo[q] if np.isfinite(hi[q] - lo[q]) else np.inf
        leave = -1
        dec = rate < -ptol
        inc = rate > ptol
        lim = np.full(m, np.inf)
        if phase == 1:
            # feasible basics block at both bounds; infeasible ones at the violated bound only
            feas = ~(below | above)
            mask = dec & feas & np.isfinite(lob)
            lim[mask] = (xb[mask] - lob[mask]) / -rate[mask]
            mask = inc & feas & np.isfinite(hib)
            lim[mask] = (hib[mask] - xb[mask]) / rate[mask]
            mask = inc & below
            lim[mask] = (lob[mask] - xb[mask]) / rate[mask]
            mask = dec & above
            lim[mask] = (xb[mask] - hib[mask]) / -rate[mask]
        else:
            mask = dec & np.isfinite(lob)
            lim[mask] = (xb[mask] - lob[mask]) / -rate[mask]
            mask = inc & np.isfinite(hib)
            lim[mask] = (hib[mask] - xb[mask]) / rate[mask]
        np.maximum(lim, 0.0, out=lim)
        if m:
            t_row = lim.min()
            if t_row < t_best:
                ties = np.flatnonzero(lim <= t_row + 1e-12)
                if bland:
                    leave = int(ties[np.argmin(head[ties])])
                else:
                    leave = int(ties[np.argmax(np.abs(alpha[ties]))])
                t_best = lim[leave]
        if not np.isfinite(t_best):
            status = UNBOUNDED if phase == 2 else INFEASIBLE
            break

        iterations += 1
        x[q] += direction * t_best
        if t_best:
            x[head] += rate * t_best
        if leave < 0:
            state[q] = _AT_UB if direction > 0 else _AT_LB
            x[q] = hi[q] if direction > 0 else lo[q]
            continue

        out = int(head[leave])
        r_out = rate[leave]
        if lo[out] == hi[out]:
            x[out], state[out] = lo[out], _FIXED
        elif phase == 1 and below[leave]:
            x[out], state[out] = lo[out], _AT_LB
        elif phase == 1 and above[leave]:
            x[out], state[out] = hi[out], _AT_UB
        elif r_out < 0:
            x[out], state[out] = lo[out], _AT_LB
        else:
            x[out], state[out] = hi[out], _AT_UB
        pos[out] = -1
        head[leave] = q
        pos[q] = leave
        state[q] = _BASIC
        if len(basis.etas) + 1 >= opts.refactor_every:
            basis = _Basis(M, head)
            recompute_basics()
        else:
            basis.push(leave, alpha)

    if status in (OPTIMAL, ITERATION_LIMIT) and m:
        basis = _Basis(M, head)
        recompute_basics()
    xs = x[:n].copy()
    if status == OPTIMAL:
        # snap round-off just outside the column bounds
        xs = np.minimum(np.maximum(xs, problem.lb), problem.ub)
    objective = float(c @ xs) if status in (OPTIMAL, ITERATION_LIMIT) else float("nan")
    return LpSolution(status, objective, xs, iterations, time.perf_counter() - t0, list(problem.var_names))


def solve_with_highs(problem: LpProblem) -> LpSolution:
    """Solve `problem` with HiGHS through scipy, as an external cross-check."""
    from scipy.optimize import linprog

    t0 = time.perf_counter()
    A = problem.matrix().tocsr()
    senses, rhs = problem.senses, problem.rhs
    le, ge, eq = senses == "<=", senses == ">=", senses == "="
    A_ub = sp.vstack([A[le], -A[ge]]).tocsr() if (le.any() or ge.any()) else None
    b_ub = np.concatenate([rhs[le], -rhs[ge]]) if A_ub is not None else None
    A_eq, b_eq = (A[eq], rhs[eq]) if eq.any() else (None, None)
    lb = np.where(np.isinf(problem.lb), None, problem.lb)
    ub = np.where(np.isinf(problem.ub), None, problem.ub)
    res = linprog(problem.cost, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                  bounds=list(zip(lb, ub)), method="highs")
    status = {0: OPTIMAL, 1: ITERATION_LIMIT, 2: INFEASIBLE, 3: UNBOUNDED}.get(res.status, INFEASIBLE)
    x = np.asarray(res.x, dtype=float) if res.x is not None else np.full(problem.n_vars, np.nan)
    objective = float(res.fun) if status == OPTIMAL else float("nan")
    iterations = int(getattr(res, "nit", 0) or 0)
    return LpSolution(status, objective, x, iterations, time.perf_counter() - t0, list(problem.var_names))

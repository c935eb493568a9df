"""Sparse linear program container shared by the model builder and the solver."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

LE, GE, EQ = "<=", ">=", "="
_SENSES = (LE, GE, EQ)


class LpError(ValueError):
    pass


class LpProblem:
    """Minimisation LP with named, bounded columns and sparse rows.

    Columns are added one at a time (`add_var`) or in bulk (`add_vars`); rows
    likewise.  Nothing is frozen until `matrix()` is called, which returns a
    CSR matrix assembled from the accumulated triplets.
    """

    def __init__(self, name: str = "problem"):
        self.name = name
        self.var_names: list[str] = []
        self.var_index: dict[str, int] = {}
        self._lb: list[np.ndarray] = []
        self._ub: list[np.ndarray] = []
        self._cost: list[np.ndarray] = []
        self.row_names: list[str] = []
        self._senses: list[np.ndarray] = []
        self._rhs: list[np.ndarray] = []
        self._ti: list[np.ndarray] = []
        self._tj: list[np.ndarray] = []
        self._tv: list[np.ndarray] = []
        self._extra_cost: dict[int, float] = {}
        self.groups: dict = {}
        self._cache = None

    # -- columns -----------------------------------------------------------
    @property
    def n_vars(self) -> int:
        return len(self.var_names)

    @property
    def n_rows(self) -> int:
        return len(self.row_names)

    def add_var(self, name: str, lb: float = 0.0, ub: float = np.inf, cost: float = 0.0) -> int:
        return int(self.add_vars([name], lb, ub, cost)[0])

    def add_vars(self, names, lb=0.0, ub=np.inf, cost=0.0) -> np.ndarray:
        names = list(names)
        k = len(names)
        start = self.n_vars
        for offset, nm in enumerate(names):
            if nm in self.var_index:
                raise LpError(f"duplicate variable name {nm!r}")
            self.var_index[nm] = start + offset
        self.var_names.extend(names)
        lb = np.broadcast_to(np.asarray(lb, dtype=float), (k,)).copy()
        ub = np.broadcast_to(np.asarray(ub, dtype=float), (k,)).copy()
        if np.any(lb > ub):
            bad = names[int(np.argmax(lb > ub))]
            raise LpError(f"variable {bad!r} has lb > ub")
        self._lb.append(lb)
        self._ub.append(ub)
        self._cost.append(np.broadcast_to(np.asarray(cost, dtype=float), (k,)).copy())
        self._cache = None
        return np.arange(start, start + k)

    def add_cost(self, col: int, value: float) -> None:
        self._extra_cost[col] = self._extra_cost.get(col, 0.0) + float(value)
        self._cache = None

    def set_bounds(self, col: int, lb: float, ub: float) -> None:
        self._consolidate_columns()
        if lb > ub:
            raise LpError(f"variable {self.var_names[col]!r} has lb > ub")
        self._lb[0][col] = lb
        self._ub[0][col] = ub
        self._cache = None

    # -- rows --------------------------------------------------------------
    def add_constraint(self, coeffs: dict[int, float], sense: str, rhs: float, name: str) -> int:
        cols = np.fromiter(coeffs.keys(), dtype=np.int64, count=len(coeffs))
        vals = np.fromiter(coeffs.values(), dtype=float, count=len(coeffs))
        row = self.n_rows
        self.add_rows([name], np.zeros(len(cols), dtype=np.int64), cols, vals, sense, [rhs])
        return row

    def add_rows(self, names, local_rows, cols, vals, sense, rhs) -> np.ndarray:
        """Append rows given as triplets with row indices local to this batch."""
        names = list(names)
        k = len(names)
        if isinstance(sense, str):
            if sense not in _SENSES:
                raise LpError(f"unknown sense {sense!r}")
            senses = np.full(k, sense, dtype=object)
        else:
            senses = np.asarray(sense, dtype=object)
        start = self.n_rows
        local_rows = np.asarray(local_rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        if cols.size and (cols.min() < 0 or cols.max() >= self.n_vars):
            raise LpError("constraint references an undeclared variable")
        self.row_names.extend(names)
        self._senses.append(senses)
        self._rhs.append(np.broadcast_to(np.asarray(rhs, dtype=float), (k,)).copy())
        self._ti.append(local_rows + start)
        self._tj.append(cols)
        self._tv.append(np.asarray(vals, dtype=float))
        self._cache = None
        return np.arange(start, start + k)

    # -- frozen views ------------------------------------------------------
    def _consolidate_columns(self):
        if len(self._lb) != 1:
            cat = (lambda parts: np.concatenate(parts) if parts else np.zeros(0))
            self._lb, self._ub, self._cost = [cat(self._lb)], [cat(self._ub)], [cat(self._cost)]

    def _freeze(self):
        if self._cache is None:
            self._consolidate_columns()
            cost = self._cost[0].copy()
            for col, v in self._extra_cost.items():
                cost[col] += v
            m, n = self.n_rows, self.n_vars
            if self._ti:
                ti, tj, tv = (np.concatenate(p) for p in (self._ti, self._tj, self._tv))
            else:
                ti = tj = np.zeros(0, dtype=np.int64)
                tv = np.zeros(0)
            A = sp.csr_matrix((tv, (ti, tj)), shape=(m, n))
            A.sum_duplicates()
            senses = np.concatenate(self._senses) if self._senses else np.zeros(0, dtype=object)
            rhs = np.concatenate(self._rhs) if self._rhs else np.zeros(0)
            self._cache = (A, cost, senses, rhs)
        return self._cache

    def matrix(self) -> sp.csr_matrix:
        return self._freeze()[0]

    @property
    def cost(self) -> np.ndarray:
        return self._freeze()[1]

    @property
    def senses(self) -> np.ndarray:
        return self._freeze()[2]

    @property
    def rhs(self) -> np.ndarray:
        return self._freeze()[3]

    @property
    def lb(self) -> np.ndarray:
        self._consolidate_columns()
        return self._lb[0] if self._lb else np.zeros(0)

    @property
    def ub(self) -> np.ndarray:
        self._consolidate_columns()
        return self._ub[0] if self._ub else np.zeros(0)

    def row_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        senses, rhs = self.senses, self.rhs
        lo = np.where(senses == LE, -np.inf, rhs).astype(float)
        hi = np.where(senses == GE, np.inf, rhs).astype(float)
        return lo, hi

    def column(self, name: str) -> int:
        try:
            return self.var_index[name]
        except KeyError:
            raise LpError(f"unknown variable {name!r}") from None

    def check_feasible(self, x: np.ndarray, tol: float = 1e-6, bound_tol: float = 1e-9) -> list[str]:
        """Return a list of violated rows and bounds for point `x` (empty when feasible)."""
        problems = []
        lb, ub = self.lb, self.ub
        for j in np.flatnonzero((x < lb - bound_tol) | (x > ub + bound_tol)):
            problems.append(f"bound {self.var_names[j]}: {x[j]!r} not in [{lb[j]}, {ub[j]}]")
        ax = self.matrix() @ x
        lo, hi = self.row_bounds()
        for i in np.flatnonzero((ax < lo - tol) | (ax > hi + tol)):
            problems.append(f"row {self.row_names[i]}: {ax[i]!r} not in [{lo[i]}, {hi[i]}]")
        return problems

    def objective(self, x: np.ndarray) -> float:
        return float(self.cost @ x)


@dataclass(frozen=True)
class LpStats:
    n_vars: int
    n_rows: int
    nnz: int

    @classmethod
    def of(cls, problem: LpProblem) -> "LpStats":
        return cls(problem.n_vars, problem.n_rows, int(problem.matrix().nnz))

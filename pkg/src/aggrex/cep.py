"""LP-relaxed capacity expansion model built from an `Instance`.

Per hour and internal area there is one balance row

    production + import + discharge + unserved = demand + export + charge + surplus

with ``unserved`` and ``surplus`` priced at the area's slack penalty.  Units,
renewables, storages, lines and EV fleets add their hourly columns to these
rows; investment candidates add one capacity column each and couple it to the
hourly utilisation through the ``emit_*`` functions below.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .instance import (ElectricVehicleFleet, Instance, Interconnector, InvestmentCandidate,
                       ProductionUnit, RenewableUnit, Storage)
from .lp import EQ, LE, LpProblem
from .solve import LpSolution

__all__ = [
    "CepError", "InvestmentVector", "build_lp", "emit_storage_investment", "emit_line_investment",
    "emit_res_investment", "emit_production_investment", "emit_extraction_investment",
    "extract_investments", "hourly_var_count",
]


class CepError(ValueError):
    pass


@dataclass(frozen=True)
class InvestmentVector:
    """Invested capacity per candidate id, in candidate order."""

    ids: tuple[str, ...]
    values: tuple[float, ...]

    def __getitem__(self, cid: str) -> float:
        return self.values[self.ids.index(cid)]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.ids, self.values))

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)

    @classmethod
    def from_mapping(cls, values: Mapping[str, float]) -> "InvestmentVector":
        return cls(tuple(values), tuple(float(v) for v in values.values()))


def _hourly(problem: LpProblem, role: str, cid: str, H: int, lb=0.0, ub=np.inf, cost=0.0) -> np.ndarray:
    cols = problem.add_vars([f"{role}[{cid},{t}]" for t in range(H)], lb, ub, cost)
    problem.groups[f"{role}:{cid}"] = cols
    return cols


def _rows(problem: LpProblem, name: str, cid: str, blocks, sense, rhs) -> np.ndarray:
    """Add H rows ``sum_k coef_k[t] * cols_k[t] (sense) rhs[t]``; `blocks` is [(cols, coef), ...]."""
    H = len(blocks[0][0])
    ri, cj, vv = [], [], []
    for cols, coef in blocks:
        coef = np.broadcast_to(np.asarray(coef, dtype=float), (H,))
        if np.ndim(cols) == 0:
            cols = np.full(H, int(cols))
        keep = coef != 0.0
        ri.append(np.arange(H)[keep])
        cj.append(np.asarray(cols)[keep])
        vv.append(coef[keep])
    return problem.add_rows([f"{name}[{cid},{t}]" for t in range(H)], np.concatenate(ri),
                            np.concatenate(cj), np.concatenate(vv), sense,
                            np.broadcast_to(np.asarray(rhs, dtype=float), (H,)))


def _check(candidate: InvestmentCandidate, component, kind: str):
    if candidate.kind != kind or candidate.target != component.id:
        raise CepError(f"candidate {candidate.id} targets {candidate.kind} {candidate.target!r}, "
                       f"not {kind} {component.id!r}")


def _invest_var(problem: LpProblem, candidate: InvestmentCandidate, cost_scale: float) -> int:
    col = problem.add_var(f"invest[{candidate.id}]", candidate.lb, candidate.ub,
                          candidate.investment_cost * cost_scale)
    problem.groups.setdefault("invest", {})[candidate.id] = col
    return col


def emit_storage_investment(problem: LpProblem, storage: Storage, candidate: InvestmentCandidate,
                            cost_scale: float = 1.0) -> int:
    """Inventory level never exceeds existing plus invested energy capacity."""
    _check(candidate, storage, "storage")
    x = _invest_var(problem, candidate, cost_scale)
    level = problem.groups[f"level:{storage.id}"]
    _rows(problem, "stocap", storage.id, [(level, 1.0), (x, -1.0)], LE, storage.energy_capacity)
    return x


def emit_line_investment(problem: LpProblem, line: Interconnector, candidate: InvestmentCandidate,
                         cost_scale: float = 1.0) -> int:
    """Flow in each direction never exceeds (existing + invested) capacity times availability."""
    _check(candidate, line, "line")
    x = _invest_var(problem, candidate, cost_scale)
    H = len(problem.groups[f"flow:{line.id}"])
    avail = line.availability_series(H)
    for role, cap in (("flow", line.capacity_forward), ("back", line.capacity_backward)):
        cols = problem.groups[f"{role}:{line.id}"]
        _rows(problem, f"{role}cap", line.id, [(cols, 1.0), (x, -avail)], LE, cap * avail)
    return x


def emit_res_investment(problem: LpProblem, res: RenewableUnit, candidate: InvestmentCandidate,
                        cost_scale: float = 1.0) -> int:
    """Production bounded by (curtailable) or equal to (must-run) profile * capacity."""
    _check(candidate, res, "res")
    x = _invest_var(problem, candidate, cost_scale)
    cols = problem.groups[f"res:{res.id}"]
    sense = LE if res.curtailable else EQ
    _rows(problem, "rescap", res.id, [(cols, 1.0), (x, -res.profile)], sense, res.capacity * res.profile)
    return x


def emit_production_investment(problem: LpProblem, unit: ProductionUnit, candidate: InvestmentCandidate,
                               cost_scale: float = 1.0) -> int:
    """Primary output never exceeds (existing + invested) capacity times availability."""
    _check(candidate, unit, "production")
    if unit.kind == "extraction":
        return emit_extraction_investment(problem, unit, candidate, cost_scale)
    x = _invest_var(problem, candidate, cost_scale)
    cols = problem.groups[f"prod:{unit.id}"]
    avail = unit.availability_series(len(cols))
    _rows(problem, "prodcap", unit.id, [(cols, 1.0), (x, -avail)], LE, unit.capacity * avail)
    return x


def emit_extraction_investment(problem: LpProblem, unit: ProductionUnit, candidate: InvestmentCandidate | None,
                               cost_scale: float = 1.0) -> int | None:
    """Row ``primary + cv * secondary <= (existing + invested) * availability`` per hour.

    With `candidate` None the row is emitted against the existing capacity only.
    """
    if unit.kind != "extraction":
        raise CepError(f"unit {unit.id} is not an extraction unit")
    p = problem.groups[f"prod:{unit.id}"]
    q = problem.groups[f"sec:{unit.id}"]
    avail = unit.availability_series(len(p))
    blocks = [(p, 1.0), (q, unit.cv)]
    x = None
    if candidate is not None:
        _check(candidate, unit, "production")
        x = _invest_var(problem, candidate, cost_scale)
        blocks.append((x, -avail))
    _rows(problem, "pqcap", unit.id, blocks, LE, unit.capacity * avail)
    return x


class _Balance:
    def __init__(self, areas: list[str], H: int):
        self.pos = {a: i for i, a in enumerate(areas)}
        self.H = H
        self.rhs = np.zeros(len(areas) * H)
        self.ri: list[np.ndarray] = []
        self.cj: list[np.ndarray] = []
        self.vv: list[np.ndarray] = []

    def add(self, area: str, cols: np.ndarray, coef) -> None:
        coef = np.broadcast_to(np.asarray(coef, dtype=float), (self.H,))
        keep = coef != 0.0
        self.ri.append((self.pos[area] * self.H + np.arange(self.H))[keep])
        self.cj.append(cols[keep])
        self.vv.append(coef[keep])


def build_lp(instance: Instance) -> LpProblem:
    """Assemble the full LP; all variables are continuous."""
    H = instance.horizon
    pb = LpProblem(instance.name)
    pb.groups = {}
    internal = [a.id for a in instance.areas]
    external = {a.id: a for a in instance.external_areas}
    bal = _Balance(internal, H)
    cost_scale = H / instance.cost_period
    invested = {(c.kind, c.target): c for c in instance.investments}

    for a in internal:
        pen = instance.area_penalty(a)
        bal.add(a, _hourly(pb, "unserved", a, H, cost=pen), 1.0)
        bal.add(a, _hourly(pb, "surplus", a, H, cost=pen), -1.0)

    for d in instance.demands:
        k = bal.pos[d.area]
        bal.rhs[k * H:(k + 1) * H] += d.series

    for u in instance.units:
        fuel = u.fuel_series(H)
        avail = u.availability_series(H)
        cand = invested.get(("production", u.id))
        free_cap = cand is not None and cand.lb != cand.ub
        ub = np.inf if (free_cap or u.kind == "extraction") else (
            (u.capacity + (cand.lb if cand else 0.0)) * avail)
        p = _hourly(pb, "prod", u.id, H, 0.0, ub, u.variable_cost + fuel / u.efficiency)
        bal.add(u.output_area, p, 1.0)
        if u.input_area is not None:
            bal.add(u.input_area, p, -1.0 / u.efficiency)
        if u.kind == "backpressure":
            bal.add(u.secondary_output_area, p, u.cb)
        elif u.kind == "extraction":
            q = _hourly(pb, "sec", u.id, H, 0.0, np.inf, fuel * u.cv / u.efficiency)
            bal.add(u.secondary_output_area, q, 1.0)
            if u.input_area is not None:
                bal.add(u.input_area, q, -u.cv / u.efficiency)

    for r in instance.res_units:
        cand = invested.get(("res", r.id))
        if cand is not None and cand.lb != cand.ub:
            cols = _hourly(pb, "res", r.id, H)
        else:
            cap = (r.capacity + (cand.lb if cand else 0.0)) * r.profile
            cols = _hourly(pb, "res", r.id, H, 0.0 if r.curtailable else cap, cap)
        bal.add(r.area, cols, 1.0)

    for s in instance.storages:
        cand = invested.get(("storage", s.id))
        free_cap = cand is not None and cand.lb != cand.ub
        cap = np.inf if free_cap else s.energy_capacity + (cand.lb if cand else 0.0)
        level = _hourly(pb, "level", s.id, H, 0.0, cap)
        pb.set_bounds(int(level[-1]), s.initial_level, cap)
        ch = _hourly(pb, "charge", s.id, H, 0.0, s.charge_rate)
        dis = _hourly(pb, "discharge", s.id, H, 0.0, s.discharge_rate)
        keep = 1.0 - s.loss
        prev = np.concatenate([[level[0]], level[:-1]])
        prev_coef = np.full(H, -keep)
        prev_coef[0] = 0.0
        rhs = np.zeros(H)
        rhs[0] = keep * s.initial_level
        _rows(pb, "stodyn", s.id, [(level, 1.0), (prev, prev_coef), (ch, -1.0), (dis, 1.0)], EQ, rhs)
        bal.add(s.area, ch, -1.0)
        bal.add(s.area, dis, 1.0)

    for ln in instance.lines:
        cand = invested.get(("line", ln.id))
        avail = ln.availability_series(H)
        free_cap = cand is not None and cand.lb != cand.ub
        extra = cand.lb if cand else 0.0
        fwd_ub = np.inf if free_cap else (ln.capacity_forward + extra) * avail
        back_ub = np.inf if free_cap else (ln.capacity_backward + extra) * avail
        fwd_cost = np.zeros(H)
        back_cost = np.zeros(H)
        if ln.from_area in external:
            price = external[ln.from_area].price
            fwd_cost, back_cost = price, -price
        elif ln.to_area in external:
            price = external[ln.to_area].price
            fwd_cost, back_cost = -price, price
        f = _hourly(pb, "flow", ln.id, H, 0.0, fwd_ub, fwd_cost)
        g = _hourly(pb, "back", ln.id, H, 0.0, back_ub, back_cost)
        if ln.from_area not in external:
            bal.add(ln.from_area, f, -1.0)
            bal.add(ln.from_area, g, 1.0)
        if ln.to_area not in external:
            bal.add(ln.to_area, f, 1.0)
            bal.add(ln.to_area, g, -1.0)

    for ev in instance.evs:
        _emit_ev(pb, ev, H, bal)

    pb.add_rows([f"balance[{a},{t}]" for a in internal for t in range(H)], np.concatenate(bal.ri),
                np.concatenate(bal.cj), np.concatenate(bal.vv), EQ, bal.rhs)

    for u in instance.units:
        cand = invested.get(("production", u.id))
        pinned = cand is not None and cand.lb == cand.ub
        if u.kind == "extraction":
            if cand is None:
                emit_extraction_investment(pb, u, None)
            else:
                emit_extraction_investment(pb, u, cand, cost_scale)
        elif cand is not None:
            if pinned:
                _pinned_invest(pb, cand, cost_scale)
            else:
                emit_production_investment(pb, u, cand, cost_scale)
    for r in instance.res_units:
        cand = invested.get(("res", r.id))
        if cand is not None:
            if cand.lb == cand.ub:
                _pinned_invest(pb, cand, cost_scale)
            else:
                emit_res_investment(pb, r, cand, cost_scale)
    for s in instance.storages:
        cand = invested.get(("storage", s.id))
        if cand is not None:
            if cand.lb == cand.ub:
                _pinned_invest(pb, cand, cost_scale)
            else:
                emit_storage_investment(pb, s, cand, cost_scale)
    for ln in instance.lines:
        cand = invested.get(("line", ln.id))
        if cand is not None:
            if cand.lb == cand.ub:
                _pinned_invest(pb, cand, cost_scale)
            else:
                emit_line_investment(pb, ln, cand, cost_scale)
    return pb


def _pinned_invest(problem: LpProblem, candidate: InvestmentCandidate, cost_scale: float) -> int:
    # capacity already folded into the column bounds
    return _invest_var(problem, candidate, cost_scale)


def _emit_ev(problem: LpProblem, ev: ElectricVehicleFleet, H: int, bal: _Balance) -> None:
    c = _hourly(problem, "evcharge", ev.id, H, 0.0, ev.charge_rate)
    bal.add(ev.area, c, -1.0)
    # cumulative charge; every driving deadline puts a lower bound on it
    cum = _hourly(problem, "evcum", ev.id, H)
    prev = np.concatenate([[cum[0]], cum[:-1]])
    prev_coef = np.full(H, -1.0)
    prev_coef[0] = 0.0
    _rows(problem, "evdyn", ev.id, [(cum, 1.0), (prev, prev_coef), (c, -1.0)], EQ, 0.0)
    need = 0.0
    for deadline, energy in sorted(ev.driving_events):
        need += energy
        col = int(cum[deadline - 1])
        problem.set_bounds(col, max(need, problem.lb[col]), np.inf)


def hourly_var_count(problem: LpProblem) -> int:
    return problem.n_vars - len(problem.groups.get("invest", {}))


def extract_investments(problem: LpProblem, solution: LpSolution, ids=None, tol: float = 1e-6) -> InvestmentVector:
    """Read invested capacities from an optimal solution."""
    if not solution.optimal:
        raise CepError(f"solution status is {solution.status}, not optimal")
    cols = problem.groups.get("invest", {})
    wanted = list(cols) if ids is None else list(ids)
    values = []
    for cid in wanted:
        if cid not in cols:
            raise CepError(f"no investment variable for candidate {cid!r}")
        j = cols[cid]
        v = float(solution.x[j])
        lb, ub = problem.lb[j], problem.ub[j]
        if v < lb - tol or v > ub + tol:
            raise CepError(f"investment {cid}={v} violates bounds [{lb}, {ub}]")
        values.append(min(max(v, lb), ub))
    return InvestmentVector(tuple(wanted), tuple(values))

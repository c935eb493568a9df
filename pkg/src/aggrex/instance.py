"""Energy-system data model, instance files and the seeded synthetic generator.

Instance files are JSON documents with the top-level keys ``meta``, ``areas``,
``external_areas``, ``units``, ``res``, ``storages``, ``lines``, ``evs``,
``demands`` and ``investments``.  Any hourly series may be written inline as a
list of numbers or as the string ``"csv:<column>"``, in which case it is read
from the side-car CSV named by ``meta.timeseries_csv`` (one column per series,
one row per hour, header row of series ids).
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any

import numpy as np

ENERGY_TYPES = ("power", "heat", "gas", "other")
UNIT_KINDS = ("single-output", "backpressure", "extraction")
TARGET_KINDS = ("production", "res", "storage", "line")


class InstanceError(ValueError):
    pass


class InstanceParseError(InstanceError):
    pass


class InstanceValidationError(InstanceError):
    pass


def _series(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise InstanceParseError("timeseries must be one-dimensional")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Area:
    id: str
    energy_type: str = "power"


@dataclass(frozen=True, eq=False)
class ExternalArea:
    id: str
    price: np.ndarray
    energy_type: str = "power"


@dataclass(frozen=True, eq=False)
class ProductionUnit:
    id: str
    output_area: str
    kind: str = "single-output"
    capacity: float = 0.0
    efficiency: float = 1.0
    variable_cost: float = 0.0
    fuel_price: float | np.ndarray = 0.0
    input_area: str | None = None
    secondary_output_area: str | None = None
    availability: np.ndarray | None = None
    cb: float = 0.0
    cv: float = 0.0

    def fuel_series(self, horizon: int) -> np.ndarray:
        if isinstance(self.fuel_price, np.ndarray):
            return self.fuel_price
        return np.full(horizon, float(self.fuel_price))

    def availability_series(self, horizon: int) -> np.ndarray:
        return self.availability if self.availability is not None else np.ones(horizon)


@dataclass(frozen=True, eq=False)
class RenewableUnit:
    id: str
    area: str
    capacity: float
    profile: np.ndarray
    curtailable: bool = True


@dataclass(frozen=True, eq=False)
class Storage:
    id: str
    area: str
    energy_capacity: float
    charge_rate: float
    discharge_rate: float
    loss: float = 0.0
    initial_level: float = 0.0


@dataclass(frozen=True, eq=False)
class Interconnector:
    id: str
    from_area: str
    to_area: str
    capacity_forward: float
    capacity_backward: float
    availability: np.ndarray | None = None

    def availability_series(self, horizon: int) -> np.ndarray:
        return self.availability if self.availability is not None else np.ones(horizon)


@dataclass(frozen=True, eq=False)
class ElectricVehicleFleet:
    id: str
    area: str
    charge_rate: float
    driving_events: tuple[tuple[int, float], ...] = ()


@dataclass(frozen=True, eq=False)
class Demand:
    id: str
    area: str
    series: np.ndarray
    slack_penalty: float = 1e4


@dataclass(frozen=True, eq=False)
class InvestmentCandidate:
    id: str
    target: str
    kind: str
    investment_cost: float
    lb: float = 0.0
    ub: float = 0.0


@dataclass(frozen=True, eq=False)
class Instance:
    """A validated energy system over ``horizon`` hours.

    ``cost_period`` is the number of hours an investment cost pays for; the
    LP charges ``investment_cost * horizon / cost_period`` so that a reduced
    horizon sees a proportionally reduced investment bill.
    """

    name: str
    horizon: int = 8760
    day_length: int = 24
    areas: tuple[Area, ...] = ()
    external_areas: tuple[ExternalArea, ...] = ()
    units: tuple[ProductionUnit, ...] = ()
    res_units: tuple[RenewableUnit, ...] = ()
    storages: tuple[Storage, ...] = ()
    lines: tuple[Interconnector, ...] = ()
    evs: tuple[ElectricVehicleFleet, ...] = ()
    demands: tuple[Demand, ...] = ()
    investments: tuple[InvestmentCandidate, ...] = ()
    cost_period: int | None = None
    slack_penalty: float | None = None

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, list):
                object.__setattr__(self, f.name, tuple(v))
        if self.cost_period is None:
            object.__setattr__(self, "cost_period", self.horizon)
        validate(self)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return instance_to_dict(self) == instance_to_dict(other)

    __hash__ = None

    @property
    def n_days(self) -> int:
        return self.horizon // self.day_length

    def area_penalty(self, area_id: str) -> float:
        pens = [d.slack_penalty for d in self.demands if d.area == area_id]
        default = self.slack_penalty if self.slack_penalty is not None else max(
            [d.slack_penalty for d in self.demands], default=1e4)
        return max(pens, default=default)

    def component(self, kind: str, cid: str):
        pool = {"production": self.units, "res": self.res_units,
                "storage": self.storages, "line": self.lines}[kind]
        for comp in pool:
            if comp.id == cid:
                return comp
        raise KeyError(cid)


# -- validation ---------------------------------------------------------------

def _fail(msg: str):
    raise InstanceValidationError(msg)


def _check_series(owner: str, arr, horizon: int, lo=None, hi=None):
    if len(arr) != horizon:
        _fail(f"{owner}: series length {len(arr)} != horizon {horizon}")
    if not np.all(np.isfinite(arr)):
        _fail(f"{owner}: series contains non-finite values")
    if lo is not None and arr.min(initial=lo) < lo:
        _fail(f"{owner}: series value below {lo}")
    if hi is not None and arr.max(initial=hi) > hi:
        _fail(f"{owner}: series value above {hi}")


def validate(inst: Instance) -> None:
    H, L = inst.horizon, inst.day_length
    if L <= 0 or H <= 0 or H % L:
        _fail(f"horizon {H} must be a positive multiple of day_length {L}")
    if inst.cost_period <= 0:
        _fail("cost_period must be positive")
    if not inst.areas:
        _fail("instance has no areas")
    ids: set[str] = set()
    for comp in (*inst.areas, *inst.external_areas, *inst.units, *inst.res_units, *inst.storages,
                 *inst.lines, *inst.evs, *inst.demands, *inst.investments):
        if comp.id in ids:
            _fail(f"duplicate component id {comp.id!r}")
        ids.add(comp.id)
    internal = {a.id for a in inst.areas}
    external = {a.id for a in inst.external_areas}
    for a in (*inst.areas, *inst.external_areas):
        if a.energy_type not in ENERGY_TYPES:
            _fail(f"{a.id}: unknown energy type {a.energy_type!r}")
    for a in inst.external_areas:
        _check_series(a.id, a.price, H)

    def need_area(owner, aid):
        if aid not in internal:
            _fail(f"{owner}: unknown area {aid!r}")

    for u in inst.units:
        if u.kind not in UNIT_KINDS:
            _fail(f"{u.id}: unknown unit kind {u.kind!r}")
        need_area(u.id, u.output_area)
        if u.input_area is not None:
            need_area(u.id, u.input_area)
        if u.secondary_output_area is not None:
            need_area(u.id, u.secondary_output_area)
        if u.kind != "single-output" and u.secondary_output_area is None:
            _fail(f"{u.id}: {u.kind} unit needs a secondary_output_area")
        if not (0.0 < u.efficiency <= 1.0):
            _fail(f"{u.id}: efficiency {u.efficiency} not in (0, 1]")
        if u.capacity < 0 or u.cb < 0 or u.cv < 0:
            _fail(f"{u.id}: capacity, cb and cv must be nonnegative")
        if isinstance(u.fuel_price, np.ndarray):
            _check_series(u.id, u.fuel_price, H)
        if u.availability is not None:
            _check_series(u.id, u.availability, H, 0.0, 1.0)
    for r in inst.res_units:
        need_area(r.id, r.area)
        if r.capacity < 0:
            _fail(f"{r.id}: negative capacity")
        _check_series(r.id, r.profile, H, 0.0, 1.0)
    for s in inst.storages:
        need_area(s.id, s.area)
        if min(s.energy_capacity, s.charge_rate, s.discharge_rate) < 0:
            _fail(f"{s.id}: capacities and rates must be nonnegative")
        if not (0.0 <= s.loss < 1.0):
            _fail(f"{s.id}: loss {s.loss} not in [0, 1)")
        if not (0.0 <= s.initial_level <= s.energy_capacity):
            _fail(f"{s.id}: initial level outside [0, energy_capacity]")
    for ln in inst.lines:
        for end in (ln.from_area, ln.to_area):
            if end not in internal and end not in external:
                _fail(f"{ln.id}: unknown area {end!r}")
        if ln.from_area == ln.to_area:
            _fail(f"{ln.id}: endpoints must differ")
        if ln.from_area in external and ln.to_area in external:
            _fail(f"{ln.id}: at least one endpoint must be internal")
        if ln.capacity_forward < 0 or ln.capacity_backward < 0:
            _fail(f"{ln.id}: negative capacity")
        if ln.availability is not None:
            _check_series(ln.id, ln.availability, H, 0.0, 1.0)
    for ev in inst.evs:
        need_area(ev.id, ev.area)
        if ev.charge_rate < 0:
            _fail(f"{ev.id}: negative charge rate")
        needed = 0.0
        for deadline, energy in sorted(ev.driving_events):
            if not (1 <= deadline <= H):
                _fail(f"{ev.id}: deadline {deadline} outside horizon")
            if energy < 0:
                _fail(f"{ev.id}: negative driving energy")
            needed += energy
            if needed > ev.charge_rate * deadline + 1e-9:
                _fail(f"{ev.id}: driving energy cannot be charged by hour {deadline}")
    max_cost = 0.0
    for u in inst.units:
        fuel = u.fuel_series(H)
        max_cost = max(max_cost, u.variable_cost + (float(fuel.max()) if len(fuel) else 0.0) / u.efficiency)
    for d in inst.demands:
        need_area(d.id, d.area)
        _check_series(d.id, d.series, H)
        if d.slack_penalty <= max_cost:
            _fail(f"{d.id}: slack penalty {d.slack_penalty} must exceed every variable cost ({max_cost})")
    if inst.slack_penalty is not None and inst.slack_penalty <= max_cost:
        _fail(f"meta: slack penalty {inst.slack_penalty} must exceed every variable cost ({max_cost})")
    for c in inst.investments:
        if c.kind not in TARGET_KINDS:
            _fail(f"{c.id}: unknown target kind {c.kind!r}")
        try:
            inst.component(c.kind, c.target)
        except KeyError:
            _fail(f"{c.id}: target {c.kind} {c.target!r} does not exist")
        if not (0.0 <= c.lb <= c.ub) or not math.isfinite(c.ub):
            _fail(f"{c.id}: bounds must satisfy 0 <= lb <= ub < inf")
        if c.investment_cost < 0:
            _fail(f"{c.id}: negative investment cost")


# -- (de)serialisation ------------------------------------------------------------

_SECTIONS = {
    "areas": ("areas", Area),
    "external_areas": ("external_areas", ExternalArea),
    "units": ("units", ProductionUnit),
    "res": ("res_units", RenewableUnit),
    "storages": ("storages", Storage),
    "lines": ("lines", Interconnector),
    "evs": ("evs", ElectricVehicleFleet),
    "demands": ("demands", Demand),
    "investments": ("investments", InvestmentCandidate),
}
_SERIES_FIELDS = {"price", "profile", "series", "availability", "fuel_price"}


def _plain(v):
    if isinstance(v, np.ndarray):
        return [float(x) for x in v]
    if isinstance(v, tuple):
        return [_plain(x) for x in v]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def instance_to_dict(inst: Instance) -> dict[str, Any]:
    doc: dict[str, Any] = {"meta": {"name": inst.name, "horizon": inst.horizon,
                                     "day_length": inst.day_length, "cost_period": inst.cost_period}}
    if inst.slack_penalty is not None:
        doc["meta"]["slack_penalty"] = inst.slack_penalty
    for key, (attr, _cls) in _SECTIONS.items():
        doc[key] = [{f.name: _plain(getattr(c, f.name)) for f in fields(c)} for c in getattr(inst, attr)]
    return doc


def _build(cls, raw: dict, owner: str):
    names = {f.name for f in fields(cls)}
    unknown = set(raw) - names
    if unknown:
        raise InstanceParseError(f"{owner}: unknown keys {sorted(unknown)}")
    kwargs = {}
    for k, v in raw.items():
        if k in _SERIES_FIELDS and isinstance(v, list):
            v = _series(v)
        elif k == "driving_events":
            v = tuple((int(d), float(e)) for d, e in v)
        kwargs[k] = v
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise InstanceParseError(f"{owner}: {exc}") from None


def instance_from_dict(doc: dict[str, Any], csv_columns: dict[str, np.ndarray] | None = None) -> Instance:
    if not isinstance(doc, dict) or "meta" not in doc:
        raise InstanceParseError("instance document needs a 'meta' section")
    unknown = set(doc) - set(_SECTIONS) - {"meta"}
    if unknown:
        raise InstanceParseError(f"unknown top-level keys {sorted(unknown)}")
    meta = dict(doc["meta"])
    meta.pop("timeseries_csv", None)
    kwargs: dict[str, Any] = {
        "name": str(meta.pop("name", "instance")),
        "horizon": int(meta.pop("horizon", 8760)),
        "day_length": int(meta.pop("day_length", 24)),
        "cost_period": meta.pop("cost_period", None),
        "slack_penalty": meta.pop("slack_penalty", None),
    }
    if meta:
        raise InstanceParseError(f"meta: unknown keys {sorted(meta)}")
    for key, (attr, cls) in _SECTIONS.items():
        items = []
        for i, raw in enumerate(doc.get(key, [])):
            if not isinstance(raw, dict):
                raise InstanceParseError(f"{key}[{i}] must be an object")
            raw = dict(raw)
            owner = str(raw.get("id", f"{key}[{i}]"))
            for k, v in raw.items():
                if isinstance(v, str) and v.startswith("csv:") and k in _SERIES_FIELDS:
                    if csv_columns is None or v[4:] not in csv_columns:
                        raise InstanceParseError(f"{owner}: missing side-car column {v[4:]!r}")
                    raw[k] = csv_columns[v[4:]]
            items.append(_build(cls, raw, owner))
        kwargs[attr] = tuple(items)
    return Instance(**kwargs)


def read_series_csv(path: Path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InstanceParseError(f"{path}: empty CSV") from None
        cols: list[list[float]] = [[] for _ in header]
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise InstanceParseError(f"{path}:{lineno}: expected {len(header)} fields")
            try:
                for col, cell in zip(cols, row):
                    col.append(float(cell))
            except ValueError as exc:
                raise InstanceParseError(f"{path}:{lineno}: {exc}") from None
    return {h: _series(c) for h, c in zip(header, cols)}


def load_instance(path) -> Instance:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InstanceParseError(f"{path}: {exc}") from None
    columns = None
    side = doc.get("meta", {}).get("timeseries_csv") if isinstance(doc, dict) else None
    if side:
        columns = read_series_csv(path.parent / side)
    return instance_from_dict(doc, columns)


def dumps_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), indent=1)


def save_instance(inst: Instance, path, sidecar: bool = False) -> None:
    """Write `inst` to `path`; with `sidecar` the hourly series go to a CSV next to it."""
    path = Path(path)
    doc = instance_to_dict(inst)
    if sidecar:
        csv_path = path.with_suffix(".csv")
        columns: dict[str, list[float]] = {}
        for key in _SECTIONS:
            for item in doc[key]:
                for k, v in item.items():
                    if k in _SERIES_FIELDS and isinstance(v, list) and len(v) == inst.horizon:
                        col = f"{key}.{item['id']}.{k}"
                        columns[col] = v
                        item[k] = f"csv:{col}"
        doc["meta"]["timeseries_csv"] = csv_path.name
        with open(csv_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(list(columns))
            for row in zip(*columns.values()):
                w.writerow([repr(v) for v in row])
    path.write_text(json.dumps(doc, indent=1))


# -- synthetic generator --------------------------------------------------------

@dataclass(frozen=True)
class SyntheticSpec:
    """Size and shape knobs for `generate_synthetic`.

    ``mode`` picks the season in which the candidate investment pays off:
    ``"winter"`` adds a cheap heat boiler candidate in a heat area whose demand
    peaks in winter; ``"summer"`` adds an export line candidate from a power
    area with must-run solar production that is in surplus in summer.
    """

    n_days: int = 365
    day_length: int = 24
    n_power_areas: int = 1
    n_heat_areas: int = 1
    n_external: int = 1
    mode: str = "winter"
    noise: float = 0.05
    storages: bool = True
    evs: bool = True
    chp: bool = True
    investment_cost: float | None = None
    slack_penalty: float = 3000.0
    name: str = "synthetic"

    @classmethod
    def from_dict(cls, raw: dict) -> "SyntheticSpec":
        unknown = set(raw) - {f.name for f in fields(cls)}
        if unknown:
            raise InstanceParseError(f"synthetic spec: unknown keys {sorted(unknown)}")
        return cls(**raw)


def _seasonal(n_days, L, phase_day, amplitude):
    """Annual cosine with its maximum on `phase_day`, repeated per hour."""
    days = np.repeat(np.arange(n_days), L) + np.tile(np.arange(L), n_days) / L
    return 1.0 + amplitude * np.cos(2 * np.pi * (days - phase_day) / 365.0)


def _daily(n_days, L, peak_hour, amplitude):
    hours = np.tile(np.arange(L), n_days) * (24.0 / L)
    return 1.0 + amplitude * np.cos(2 * np.pi * (hours - peak_hour) / 24.0)


def _ar_noise(rng, n, scale, rho=0.9):
    eps = rng.normal(0.0, scale, n)
    out = np.empty(n)
    acc = 0.0
    for i in range(n):
        acc = rho * acc + eps[i]
        out[i] = acc
    return out * math.sqrt(1 - rho * rho)


def generate_synthetic(spec: SyntheticSpec, seed: int) -> Instance:
    """Build a deterministic instance with seasonal demand, RES, prices and one targeted candidate."""
    if spec.n_days <= 0 or spec.day_length <= 0:
        _fail("synthetic spec: n_days and day_length must be positive")
    if spec.n_power_areas < 0 or spec.n_heat_areas < 0 or spec.n_external < 0:
        _fail("synthetic spec: counts must be nonnegative")
    if spec.n_power_areas + spec.n_heat_areas == 0:
        _fail("synthetic spec: at least one area is required")
    if spec.mode not in ("winter", "summer"):
        _fail(f"synthetic spec: unknown mode {spec.mode!r}")
    if spec.mode == "winter" and spec.n_heat_areas == 0:
        _fail("synthetic spec: winter mode needs a heat area")
    if spec.mode == "summer" and (spec.n_power_areas == 0 or spec.n_external == 0):
        _fail("synthetic spec: summer mode needs a power area and an external area")

    rng = np.random.default_rng(seed)
    D, L = spec.n_days, spec.day_length
    H = D * L
    rnd = lambda arr: np.round(arr, 4)  # noqa: E731  keeps files compact and exact

    areas, externals, units, res, storages, lines, evs, demands, cands = ([] for _ in range(9))
    power = [f"P{i}" for i in range(spec.n_power_areas)]
    heat = [f"H{i}" for i in range(spec.n_heat_areas)]
    areas += [Area(a, "power") for a in power] + [Area(a, "heat") for a in heat]
    pen = spec.slack_penalty

    for i in range(spec.n_external):
        base = 45.0 + 5.0 * rng.random()
        price = base * _seasonal(D, L, 20, 0.2) * _daily(D, L, 18, 0.25) + _ar_noise(rng, H, 6.0)
        externals.append(ExternalArea(f"X{i}", _series(rnd(np.maximum(price, 1.0))), "power"))

    for k, a in enumerate(power):
        scale = 100.0 * (1 + 0.3 * rng.random())
        load = scale * _seasonal(D, L, 15, 0.2) * _daily(D, L, 18, 0.2) * (1 + _ar_noise(rng, H, spec.noise))
        demands.append(Demand(f"dem_{a}", a, _series(rnd(np.maximum(load, 0.0))), pen))
        wind = np.clip(0.35 * _seasonal(D, L, 10, 0.4) + _ar_noise(rng, H, 0.25, 0.97), 0.0, 1.0)
        res.append(RenewableUnit(f"wind_{a}", a, round(0.6 * scale, 2), _series(rnd(wind)), True))
        sun = np.maximum(0.0, -np.cos(2 * np.pi * np.tile(np.arange(L), D) / L))
        solar = np.clip(sun * 0.8 * _seasonal(D, L, 182, 0.6) * (1 + _ar_noise(rng, H, 0.2)), 0.0, 1.0)
        must_run = spec.mode == "summer" and k == 0
        res.append(RenewableUnit(f"solar_{a}", a, round((1.2 if must_run else 0.3) * scale, 2),
                                 _series(rnd(solar)), not must_run))
        avail = np.ones(H)
        start = int(rng.integers(150, 220)) * L
        avail[start:start + 21 * L] = 0.5
        units.append(ProductionUnit(f"coal_{a}", a, "single-output", round(0.7 * scale, 2), 0.4, 4.0,
                                    round(10.0 + 2 * rng.random(), 2), availability=_series(avail)))
        gas_price = _series(rnd(25.0 * _seasonal(D, L, 15, 0.3) + _ar_noise(rng, H, 1.0, 0.99)))
        units.append(ProductionUnit(f"peak_{a}", a, "single-output", round(0.6 * scale, 2), 0.35, 6.0,
                                    gas_price))
        if spec.storages:
            storages.append(Storage(f"bat_{a}", a, round(0.3 * scale, 2), round(0.1 * scale, 2),
                                    round(0.1 * scale, 2), 0.001, 0.0))
        if spec.evs:
            events = tuple((d * L + min(7, L), round(0.1 * scale, 2)) for d in range(D))
            evs.append(ElectricVehicleFleet(f"ev_{a}", a, round(0.05 * scale, 2), events))
        if externals:
            x = externals[k % len(externals)]
            lines.append(Interconnector(f"ic_{a}_{x.id}", a, x.id, round(0.3 * scale, 2),
                                        round(0.3 * scale, 2)))
    for a, b in zip(power, power[1:]):
        lines.append(Interconnector(f"ic_{a}_{b}", a, b, 40.0, 40.0))

    for k, h in enumerate(heat):
        scale = 60.0 * (1 + 0.3 * rng.random())
        load = scale * (0.35 + 0.65 * np.clip(_seasonal(D, L, 15, 1.0) / 2, 0, None)) \
            * _daily(D, L, 7, 0.1) * (1 + _ar_noise(rng, H, spec.noise))
        demands.append(Demand(f"dem_{h}", h, _series(rnd(np.maximum(load, 0.0))), pen))
        fuel = _series(rnd(30.0 * _seasonal(D, L, 15, 0.1) + _ar_noise(rng, H, 1.0, 0.99)))
        units.append(ProductionUnit(f"oil_{h}", h, "single-output", round(1.3 * scale, 2), 0.9, 5.0, fuel))
        if spec.chp and power:
            p = power[k % len(power)]
            units.append(ProductionUnit(f"chp_{h}", p, "extraction", round(0.05 * scale, 2), 0.9, 3.0,
                                        fuel, secondary_output_area=h, cv=0.15))
        if spec.mode == "winter" and k == 0:
            units.append(ProductionUnit(f"boiler_{h}", h, "single-output", 0.0, 1.0, 2.0, 8.0))
            cost = spec.investment_cost if spec.investment_cost is not None else 25.0 * 0.4 * H
            cands.append(InvestmentCandidate(f"inv_boiler_{h}", f"boiler_{h}", "production",
                                             round(cost, 2), 0.0, round(2.5 * scale, 2)))

    if spec.mode == "summer":
        p, x = power[0], externals[0]
        lines.append(Interconnector(f"exp_{p}_{x.id}", p, x.id, 0.0, 0.0))
        cost = spec.investment_cost if spec.investment_cost is not None else 20.0 * 0.25 * H
        cands.append(InvestmentCandidate(f"inv_exp_{p}", f"exp_{p}_{x.id}", "line", round(cost, 2), 0.0, 150.0))

    return Instance(spec.name, H, L, tuple(areas), tuple(externals), tuple(units), tuple(res),
                    tuple(storages), tuple(lines), tuple(evs), tuple(demands), tuple(cands),
                    slack_penalty=pen)


def with_investments(inst: Instance, investments) -> Instance:
    return replace(inst, investments=tuple(investments))

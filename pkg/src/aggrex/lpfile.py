"""CPLEX LP text format: writer and a reader for the subset the writer emits."""
from __future__ import annotations

import re

import numpy as np

from .lp import EQ, GE, LE, LpError, LpProblem

_BAD = re.compile(r"[^A-Za-z0-9_.]")
_WRAP = 78


def _num(v: float) -> str:
    v = float(v)
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def _sanitize(names) -> list[str]:
    """Map arbitrary names onto unique LP identifiers, deterministically."""
    out, seen = [], set()
    for raw in names:
        base = _BAD.sub("_", raw) or "_"
        if base[0].isdigit() or base[0] in ".eE":
            base = "_" + base
        name, k = base, 1
        while name in seen:
            name = f"{base}_{k}"
            k += 1
        seen.add(name)
        out.append(name)
    return out


def _wrap(head: str, parts: list[str]) -> list[str]:
    lines, cur = [], head
    for p in parts:
        if len(cur) + 1 + len(p) > _WRAP and cur.strip():
            lines.append(cur)
            cur = "   " + p
        else:
            cur = f"{cur} {p}" if cur else p
    lines.append(cur)
    return lines


def _terms(cols, vals, names) -> list[str]:
    parts = []
    for j, v in zip(cols, vals):
        if v == 0:
            continue
        sign = "-" if v < 0 else "+"
        mag = abs(v)
        parts.append(f"{sign} {names[j]}" if mag == 1 else f"{sign} {_num(mag)} {names[j]}")
    return parts


def export_lp(problem: LpProblem) -> str:
    vnames = _sanitize(problem.var_names)
    rnames = _sanitize(problem.row_names)
    A = problem.matrix().tocsr()
    cost = problem.cost
    lines = [f"\\ {problem.name}", "Minimize"]
    nz = np.flatnonzero(cost)
    obj = _terms(nz, cost[nz], vnames)
    lines += _wrap(" obj:", obj if obj else ["0"])
    lines.append("Subject To")
    sym = {LE: "<=", GE: ">=", EQ: "="}
    for i, (sense, rhs) in enumerate(zip(problem.senses, problem.rhs)):
        lo, hi = A.indptr[i], A.indptr[i + 1]
        parts = _terms(A.indices[lo:hi], A.data[lo:hi], vnames) or ["0", vnames[0]]
        parts += [sym[sense], _num(rhs)]
        lines += _wrap(f" {rnames[i]}:", parts)
    lines.append("Bounds")
    for name, lb, ub in zip(vnames, problem.lb, problem.ub):
        if lb == -np.inf and ub == np.inf:
            lines.append(f" {name} free")
        elif lb == ub:
            lines.append(f" {name} = {_num(lb)}")
        elif lb == 0 and ub == np.inf:
            continue
        elif ub == np.inf:
            lines.append(f" {name} >= {_num(lb)}")
        else:
            low = "-inf" if lb == -np.inf else _num(lb)
            lines.append(f" {low} <= {name} <= {_num(ub)}")
    lines.append("End")
    return "\n".join(lines) + "\n"


_SECTIONS = {"minimize": "obj", "minimum": "obj", "min": "obj",
             "subject to": "rows", "such that": "rows", "st": "rows", "s.t.": "rows",
             "bounds": "bounds", "end": "end"}


def _parse_float(tok: str) -> float:
    t = tok.lower()
    if t in ("inf", "+inf", "infinity", "+infinity"):
        return np.inf
    if t in ("-inf", "-infinity"):
        return -np.inf
    return float(tok)


def _is_num(tok: str) -> bool:
    try:
        _parse_float(tok)
        return True
    except ValueError:
        return False


def _linear(tokens: list[str]) -> list[tuple[str, float]]:
    """Parse ``[+|-] [coef] var ...`` into (name, coefficient) pairs."""
    out, sign, coef = [], 1.0, None
    for tok in tokens:
        if tok in "+-":
            sign = -1.0 if tok == "-" else 1.0
        elif _is_num(tok):
            coef = _parse_float(tok)
        else:
            out.append((tok, sign * (1.0 if coef is None else coef)))
            sign, coef = 1.0, None
    return out


def read_lp(text: str) -> LpProblem:
    """Read LP text in the layout produced by :func:`export_lp`."""
    section, buf = None, {"obj": [], "rows": [], "bounds": []}
    name = "problem"
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0].strip()
        if raw.startswith("\\ ") and name == "problem" and section is None:
            name = raw[2:].strip() or name
        if not line:
            continue
        key = line.lower()
        if key in _SECTIONS:
            section = _SECTIONS[key]
            if section == "end":
                break
            continue
        if section is None:
            raise LpError(f"text before first section: {line!r}")
        if section == "bounds":
            buf["bounds"].append(line)
        else:
            buf[section].append(line)

    pb = LpProblem(name)
    index: dict[str, int] = {}

    def col(v):
        if v not in index:
            index[v] = pb.add_var(v)
        return index[v]

    obj_tokens = " ".join(buf["obj"]).split()
    if obj_tokens and obj_tokens[0].endswith(":"):
        obj_tokens = obj_tokens[1:]
    obj = _linear(obj_tokens)

    # constraints: split on labels, each ends with sense + rhs
    tokens = " ".join(buf["rows"]).replace("<=", " <= ").replace(">=", " >= ").split()
    rows, cur, label = [], [], None
    for tok in tokens:
        if tok.endswith(":") and not cur:
            label = tok[:-1]
            continue
        cur.append(tok)
        if len(cur) >= 2 and cur[-2] in ("<=", ">=", "=", "=<", "=>", "<", ">"):
            rows.append((label or f"r{len(rows)}", cur))
            cur, label = [], None
    if cur:
        raise LpError("unterminated constraint in LP text")
    sense_map = {"<=": LE, "=<": LE, "<": LE, ">=": GE, "=>": GE, ">": GE, "=": EQ}
    for label, toks in rows:
        terms = _linear(toks[:-2])
        coeffs: dict[int, float] = {}
        for v, c in terms:
            j = col(v)
            coeffs[j] = coeffs.get(j, 0.0) + c
        pb.add_constraint(coeffs, sense_map[toks[-2]], _parse_float(toks[-1]), label)
    for v, c in obj:
        pb.add_cost(col(v), c)

    for line in buf["bounds"]:
        t = line.replace("<=", " <= ").replace(">=", " >= ").split()
        if len(t) == 2 and t[1].lower() == "free":
            pb.set_bounds(col(t[0]), -np.inf, np.inf)
        elif len(t) == 5 and t[1] == t[3] == "<=":
            pb.set_bounds(col(t[2]), _parse_float(t[0]), _parse_float(t[4]))
        elif len(t) == 3 and t[1] in ("=", "<=", ">="):
            j = col(t[0])
            v = _parse_float(t[2])
            lb, ub = pb.lb[j], pb.ub[j]
            if t[1] == "=":
                pb.set_bounds(j, v, v)
            elif t[1] == "<=":
                pb.set_bounds(j, lb, v)
            else:
                pb.set_bounds(j, v, ub)
        else:
            raise LpError(f"cannot parse bound {line!r}")
    return pb

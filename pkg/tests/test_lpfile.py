from pathlib import Path

import numpy as np
import pytest

from aggrex.cep import build_lp
from aggrex.instance import SyntheticSpec, generate_synthetic
from aggrex.lp import EQ, GE, LE, LpError, LpProblem
from aggrex.lpfile import export_lp, read_lp
from aggrex.solve import solve_lp, solve_with_highs
from conftest import one_area
from lp_cases import random_lp

GOLDEN = Path(__file__).parent / "golden"


def tiny():
    pb = LpProblem("tiny")
    x = pb.add_var("x[a,0]", 0.0, 3.0, -1.0)
    y = pb.add_var("y:b", 0.0, 3.0, -1.5)
    z = pb.add_var("2z", -np.inf, np.inf, 0.0)
    w = pb.add_var("w", 1.0, np.inf, 0.25)
    v = pb.add_var("v", 2.0, 2.0, 1.0)
    pb.add_constraint({x: 1.0, y: 1.0}, LE, 4.0, "cap[a]")
    pb.add_constraint({x: 1.0, z: -1.0}, EQ, 0.0, "link")
    pb.add_constraint({y: 2.0, w: -0.1}, GE, -1e-3, "cap[a]")
    pb.add_constraint({v: 1.0}, LE, 5.0, "pin")
    return pb


def test_tiny_golden():
    assert export_lp(tiny()) == (GOLDEN / "tiny.lp").read_text()


def test_empty_objective_exports_zero():
    pb = LpProblem("e")
    x = pb.add_var("x")
    pb.add_constraint({x: 1.0}, GE, 1.0, "c")
    text = export_lp(pb)
    assert " obj: 0\n" in text
    assert solve_lp(read_lp(text)).objective == 0.0


def test_names_are_sanitized_and_unique():
    text = export_lp(tiny())
    assert "x_a_0_" in text and "y_b" in text and "_2z" in text
    assert " cap_a_:" in text and " cap_a__1:" in text


def test_round_trip_objective_random():
    rng = np.random.default_rng(3)
    for _ in range(60):
        pb, *_ = random_lp(rng)
        a = solve_lp(pb)
        b = solve_lp(read_lp(export_lp(pb)))
        assert a.status == b.status
        if a.optimal:
            assert b.objective == pytest.approx(a.objective, rel=1e-12, abs=1e-12)


def test_export_then_external_solve_of_toy():
    from aggrex.instance import ProductionUnit
    pb = build_lp(one_area(units=(ProductionUnit("g", "P", capacity=20.0, variable_cost=1.0),)))
    ext = solve_with_highs(read_lp(export_lp(pb)))
    assert ext.objective == pytest.approx(solve_lp(pb).objective, abs=1e-6)
    assert ext.objective == pytest.approx(240.0, abs=1e-6)


def test_export_is_deterministic_and_wrapped():
    pb = build_lp(generate_synthetic(SyntheticSpec(n_days=2), 0))
    a, b = export_lp(pb), export_lp(pb)
    assert a == b
    assert max(len(line) for line in a.splitlines()) <= 120


def test_read_rejects_garbage():
    with pytest.raises(LpError):
        read_lp("x + y <= 3\n")
    with pytest.raises(LpError):
        read_lp("Minimize\n obj: x\nSubject To\n c: x + y <=\nEnd\n")

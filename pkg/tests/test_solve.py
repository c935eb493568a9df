import numpy as np
import pytest

from aggrex.lp import EQ, GE, LE, LpError, LpProblem
from aggrex.solve import (INFEASIBLE, ITERATION_LIMIT, OPTIMAL, UNBOUNDED, SolverOptions, solve_lp,
                          solve_with_highs)
from lp_cases import random_lp
from oracles import lp_vertex_oracle


def test_single_bound():
    pb = LpProblem()
    x = pb.add_var("x", cost=1.0)
    pb.add_constraint({x: 1.0}, GE, 3.0, "c")
    sol = solve_lp(pb)
    assert sol.status == OPTIMAL and sol.objective == 3.0
    assert sol.value("x") == 3.0


def test_two_variable_vertex():
    pb = LpProblem()
    x = pb.add_var("x", 0, 3, -1.0)
    y = pb.add_var("y", 0, 3, -1.0)
    pb.add_constraint({x: 1, y: 1}, LE, 4, "sum")
    sol = solve_lp(pb)
    assert sol.objective == pytest.approx(-4.0)
    assert sol.x.sum() == pytest.approx(4.0)
    assert sol.values().keys() == {"x", "y"}


def test_infeasible():
    pb = LpProblem()
    x = pb.add_var("x", -np.inf, np.inf)
    pb.add_constraint({x: 1}, LE, 1, "a")
    pb.add_constraint({x: 1}, GE, 2, "b")
    assert solve_lp(pb).status == INFEASIBLE


def test_unbounded():
    pb = LpProblem()
    x = pb.add_var("x", 0, np.inf, -1.0)
    y = pb.add_var("y", 0, np.inf)
    pb.add_constraint({x: 1, y: -1}, LE, 1, "a")
    assert solve_lp(pb).status == UNBOUNDED


def test_iteration_limit():
    rng = np.random.default_rng(0)
    pb = LpProblem()
    cols = pb.add_vars([f"x{j}" for j in range(20)], 0, 10, -rng.random(20))
    for i in range(10):
        pb.add_rows([f"r{i}"], np.zeros(20, dtype=int), cols, rng.random(20), LE, [5.0])
    sol = solve_lp(pb, SolverOptions(max_iter=1))
    assert sol.status == ITERATION_LIMIT


def test_empty_problem():
    sol = solve_lp(LpProblem())
    assert sol.status == OPTIMAL and sol.objective == 0.0


def test_problem_validation():
    pb = LpProblem()
    pb.add_var("x")
    with pytest.raises(LpError):
        pb.add_var("x")
    with pytest.raises(LpError):
        pb.add_var("y", 2.0, 1.0)
    with pytest.raises(LpError):
        pb.add_constraint({5: 1.0}, LE, 1.0, "bad")
    with pytest.raises(LpError):
        pb.add_constraint({0: 1.0}, "<>", 1.0, "bad")


def test_random_lps_match_vertex_enumeration():
    rng = np.random.default_rng(1234)
    for _ in range(150):
        pb, c, A, b, n = random_lp(rng)
        ref = lp_vertex_oracle(c, A, b, n)
        sol = solve_lp(pb)
        if ref is None:
            assert sol.status == INFEASIBLE
        else:
            assert sol.status == OPTIMAL
            assert sol.objective == pytest.approx(ref[0], rel=1e-7, abs=1e-7)
            assert pb.check_feasible(sol.x) == []


def test_deterministic_and_scale_invariant():
    rng = np.random.default_rng(9)
    for _ in range(30):
        pb, *_ = random_lp(rng)
        a, b = solve_lp(pb), solve_lp(pb)
        assert a.status == b.status
        assert a.x.tobytes() == b.x.tobytes()
        if a.status != OPTIMAL:
            continue
        scaled = LpProblem("scaled")
        scaled.add_vars(pb.var_names, pb.lb, pb.ub, 4.0 * pb.cost)
        A = pb.matrix().tocoo()
        scaled.add_rows(pb.row_names, A.row, A.col, A.data, pb.senses, pb.rhs)
        s = solve_lp(scaled)
        assert np.array_equal(s.x, a.x)
        assert s.objective == pytest.approx(4.0 * a.objective, rel=1e-12, abs=1e-12)


def test_highs_adapter_agrees():
    rng = np.random.default_rng(77)
    for _ in range(40):
        pb, *_ = random_lp(rng)
        a, h = solve_lp(pb), solve_with_highs(pb)
        assert a.status == h.status
        if a.status == OPTIMAL:
            assert a.objective == pytest.approx(h.objective, rel=1e-7, abs=1e-7)


def test_degenerate_transportation_problem():
    # many ties in a classic degenerate layout; Bland fallback must still finish
    pb = LpProblem()
    n = 6
    cols = {(i, j): pb.add_var(f"x{i}{j}", cost=float((i * j) % 3)) for i in range(n) for j in range(n)}
    for i in range(n):
        pb.add_constraint({cols[i, j]: 1.0 for j in range(n)}, EQ, 1.0, f"s{i}")
        pb.add_constraint({cols[j, i]: 1.0 for j in range(n)}, EQ, 1.0, f"d{i}")
    sol = solve_lp(pb, SolverOptions(stall_limit=2))
    assert sol.status == OPTIMAL
    assert sol.objective == pytest.approx(solve_with_highs(pb).objective, abs=1e-9)

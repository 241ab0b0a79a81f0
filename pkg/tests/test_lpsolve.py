import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import parallel
from lp_oracle import bfs_optimum, random_lp
from secnet.formulations import build_algo1
from secnet.lpsolve import (
    IterationLimitError,
    LinearProgram,
    Tolerances,
    check_feasibility,
    solve,
)


def lp_from_arrays(c, A, b, Aeq=None, beq=None):
    lp = LinearProgram("random")
    names = [f"x{i}" for i in range(len(c))]
    lp.add_variables(names)
    lp.set_objective(dict(zip(names, c)))
    for row, rhs in zip(A, b):
        lp.add_constraint(dict(zip(names, row)), "<=", rhs)
    for row, rhs in zip(Aeq if Aeq is not None else [], beq if beq is not None else []):
        lp.add_constraint(dict(zip(names, row)), "==", rhs)
    return lp


def test_box():
    lp = lp_from_arrays([1, 1], [[1, 0], [0, 1]], [1, 1])
    sol = solve(lp)
    assert sol.status == "optimal" and sol.objective == pytest.approx(2)


def test_infeasible():
    lp = lp_from_arrays([1], [[1]], [-1])
    assert solve(lp).status == "infeasible"


def test_unbounded():
    lp = LinearProgram()
    lp.add_variable("x")
    lp.set_objective({"x": 1})
    assert solve(lp).status == "unbounded"


def test_ge_rows_and_equalities():
    lp = LinearProgram()
    lp.add_variables(["x", "y"])
    lp.set_objective({"x": -1, "y": -1})
    lp.add_constraint({"x": 1, "y": 2}, ">=", 4)
    lp.add_constraint({"x": 1, "y": -1}, "==", 1)
    sol = solve(lp)
    # x = y + 1 and x + 2y >= 4 give y >= 1, so the optimum is x = 2, y = 1
    assert sol.objective == pytest.approx(-3)
    assert check_feasibility(lp, sol.values) <= 1e-9


def test_redundant_equalities_dropped():
    lp = LinearProgram()
    lp.add_variables(["x", "y"])
    lp.set_objective({"x": 1})
    lp.add_constraint({"x": 1, "y": 1}, "==", 1)
    lp.add_constraint({"x": 2, "y": 2}, "==", 2)
    assert solve(lp).objective == pytest.approx(1)


def test_degenerate_cycling_instance_terminates():
    # Beale's example cycles under the plain largest-coefficient rule
    lp = LinearProgram()
    lp.add_variables(["x1", "x2", "x3", "x4"])
    lp.set_objective({"x1": 0.75, "x2": -150, "x3": 0.02, "x4": -6})
    lp.add_constraint({"x1": 0.25, "x2": -60, "x3": -0.04, "x4": 9}, "<=", 0)
    lp.add_constraint({"x1": 0.5, "x2": -90, "x3": -0.02, "x4": 3}, "<=", 0)
    lp.add_constraint({"x3": 1}, "<=", 1)
    lp.add_constraint({"x3": 1}, "<=", 1)  # redundant duplicate
    sol = solve(lp)
    assert sol.status == "optimal" and sol.objective == pytest.approx(0.05)


def test_iteration_limit_is_distinct():
    lp = lp_from_arrays([1, 1, 1], [[1, 0, 0], [0, 1, 0], [0, 0, 1]], [1, 1, 1])
    with pytest.raises(IterationLimitError):
        solve(lp, Tolerances(max_iterations=1))


def test_check_feasibility_examples():
    lp = LinearProgram()
    lp.add_variables(["x1", "x2"])
    lp.add_constraint({"x1": 1, "x2": 1}, "==", 1)
    assert check_feasibility(lp, {"x1": 0, "x2": 0}) == pytest.approx(1)
    with pytest.raises(KeyError):
        check_feasibility(lp, {"x1": 0, "x2": 0, "zz": 1})
    with pytest.raises(KeyError):
        check_feasibility(lp, {"x1": 0})


def test_hand_built_algo1_parallel_solution_is_feasible():
    lp = build_algo1(parallel((0, 0), (0, 0)))
    values = dict.fromkeys(lp.variables, 0.0)
    values[("m", "e1")] = 1.0
    values[("k", "e2")] = 1.0
    values[("s", "e2")] = 1.0
    assert check_feasibility(lp, values) == 0.0


def test_undeclared_variable_rejected():
    lp = LinearProgram()
    lp.add_variable("x")
    with pytest.raises(KeyError):
        lp.add_constraint({"y": 1}, "<=", 1)
    with pytest.raises(ValueError):
        lp.add_constraint({"x": 1}, "<=", float("inf"))
    with pytest.raises(ValueError):
        lp.add_variable("x")


def test_dump_lists_rows():
    lp = lp_from_arrays([1, 2], [[1, 1]], [3])
    text = lp.dump()
    assert text.startswith("# random\nmax +1 x0 +2 x1\ns.t.\n")
    assert "<= 3" in text


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_matches_vertex_enumeration(seed):
    c, A, b, Aeq, beq = random_lp(np.random.default_rng(seed))
    want = bfs_optimum(c, A, b, Aeq, beq)
    sol = solve(lp_from_arrays(c, A, b, Aeq, beq))
    if want is None:
        assert sol.status == "infeasible"
    else:
        assert sol.status == "optimal"
        assert sol.objective == pytest.approx(want, abs=1e-7)
        assert min(sol.values.values()) >= -1e-7
        assert check_feasibility(lp_from_arrays(c, A, b, Aeq, beq), sol.values) <= 1e-7
        assert sol.objective == pytest.approx(sum(ci * sol.values[f"x{i}"] for i, ci in enumerate(c)), abs=1e-7)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.floats(0.1, 50))
def test_objective_scaling(seed, lam):
    c, A, b, Aeq, beq = random_lp(np.random.default_rng(seed))
    base = solve(lp_from_arrays(c, A, b, Aeq, beq))
    scaled = solve(lp_from_arrays(np.asarray(c) * lam, A, b, Aeq, beq))
    assert scaled.status == base.status
    if base.status == "optimal":
        assert scaled.objective == pytest.approx(lam * base.objective, rel=1e-9, abs=1e-9)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_deterministic(seed):
    args = random_lp(np.random.default_rng(seed))
    a, b = solve(lp_from_arrays(*args)), solve(lp_from_arrays(*args))
    assert a.status == b.status and a.iterations == b.iterations
    assert a.values == b.values
    assert a.objective == b.objective or (np.isnan(a.objective) and np.isnan(b.objective))

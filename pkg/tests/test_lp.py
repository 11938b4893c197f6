import numpy as np
import pytest
from scipy.optimize import linprog

from bcss.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, solve_lp
from bcss.solver import canonicalize, solve_lp_relaxation
from bcss.model import build_model

from fixtures import FIXTURES


def scipy_reference(A, senses, b, c, lo, hi):
    A = np.atleast_2d(np.asarray(A, float))
    m = A.shape[0]
    le = [k for k in range(m) if senses[k] == "<="]
    ge = [k for k in range(m) if senses[k] == ">="]
    eq = [k for k in range(m) if senses[k] == "="]
    res = linprog(
        -np.asarray(c, float),
        A_ub=np.vstack([A[le], -A[ge]]) if le or ge else None,
        b_ub=np.concatenate([np.asarray(b)[le], -np.asarray(b)[ge]]) if le or ge else None,
        A_eq=A[eq] if eq else None,
        b_eq=np.asarray(b)[eq] if eq else None,
        bounds=list(zip(lo, hi)),
        method="highs",
    )
    return res


def test_textbook_maximization():
    r = solve_lp([[1, 1]], ["<="], [3], [1, 2], [0, 0], [2, 2])
    assert r.status == OPTIMAL
    assert r.objective == pytest.approx(5.0)
    assert r.x == pytest.approx([1.0, 2.0])


def test_equality_row():
    r = solve_lp([[1, 1]], ["="], [2], [1, -1], [0, 0], [3, 3])
    assert r.status == OPTIMAL
    assert r.objective == pytest.approx(2.0)


def test_infeasible_reports_rows():
    r = solve_lp([[1, 1]], [">="], [5], [1, 1], [0, 0], [1, 1])
    assert r.status == INFEASIBLE
    assert r.infeasible_rows == [0]


def test_unbounded_names_column():
    r = solve_lp([[1, 0]], [">="], [0], [1, 0], [0, 0], [np.inf, 1])
    assert r.status == UNBOUNDED
    assert r.ray_var is not None


def test_no_rows_boxed_objective():
    r = solve_lp(np.zeros((0, 3)), [], [], [2, -1, 0], [0, -1, 0], [4, 5, 6])
    assert r.status == OPTIMAL
    assert r.objective == pytest.approx(2 * 4 + 1)


@pytest.mark.parametrize("seed", range(5))
def test_random_instances_match_scipy(seed):
    rng = np.random.default_rng(seed)
    for _ in range(40):
        m, n = rng.integers(1, 10), rng.integers(1, 12)
        A = rng.integers(-3, 4, (m, n)).astype(float)
        lo = rng.integers(-3, 1, n).astype(float)
        hi = lo + rng.integers(0, 6, n)
        sl = rng.integers(0, 3, m)
        senses = ["<=" if v == 0 else (">=" if v == 1 else "=") for v in sl]
        x0 = rng.uniform(lo, hi)
        b = A @ x0 + np.where(sl == 0, rng.uniform(0, 2, m), np.where(sl == 1, -rng.uniform(0, 2, m), 0))
        c = rng.integers(-5, 6, n).astype(float)
        mine = solve_lp(A, senses, b, c, lo, hi)
        ref = scipy_reference(A, senses, b, c, lo, hi)
        assert (mine.status == OPTIMAL) == ref.success
        if ref.success:
            assert mine.objective == pytest.approx(-ref.fun, rel=1e-7, abs=1e-7)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_relaxations_match_scipy_engine(name):
    model = build_model(FIXTURES[name]())
    canon = canonicalize(model)
    mine = solve_lp_relaxation(canon, engine="simplex")
    ref = solve_lp_relaxation(canon, engine="scipy")
    assert mine.status == ref.status
    if mine.status == "optimal":
        assert mine.objective == pytest.approx(ref.objective, rel=1e-7, abs=1e-6)


def test_relaxation_bounds_integer_optimum():
    from fixtures import EXPECTED_OPTIMA, one_truck_basic

    canon = canonicalize(build_model(one_truck_basic()))
    res = solve_lp_relaxation(canon, engine="simplex")
    assert res.objective >= EXPECTED_OPTIMA["one_truck_basic"] - 1e-9


def test_infeasible_model_names_rows():
    from fixtures import infeasible_deadline

    canon = canonicalize(build_model(infeasible_deadline()))
    res = solve_lp_relaxation(canon, engine="scipy")
    assert res.status == "infeasible"
    assert res.infeasible_rows  # elastic relaxation pins the unsatisfiable rows
    res2 = solve_lp_relaxation(canon, engine="simplex")
    assert res2.status == "infeasible"
    assert res2.infeasible_rows

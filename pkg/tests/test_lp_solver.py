import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_lp
from fclda.lp_solver import LinearProgram, LpSolverError, Status, brute_force_solve, solve


def box_only():
    return LinearProgram([1, 1], np.zeros((0, 2)), [], [0, 0], [1, 1])


def one_row():
    return LinearProgram([2, 1], [[1, 1]], [1], [0, 0], [1, 1])


@pytest.mark.parametrize("solver", [solve, brute_force_solve])
def test_box_only(solver):
    s = solver(box_only())
    assert s.status is Status.OPTIMAL
    np.testing.assert_allclose(s.point, [1, 1])
    assert s.objective_value == pytest.approx(2)


@pytest.mark.parametrize("solver", [solve, brute_force_solve])
def test_single_active_constraint(solver):
    s = solver(one_row())
    np.testing.assert_allclose(s.point, [1, 0], atol=1e-12)
    assert s.objective_value == pytest.approx(2)


@pytest.mark.parametrize("solver", [solve, brute_force_solve])
def test_infeasible(solver):
    lp = LinearProgram([1], [[1], [-1]], [0, -1], [0], [1])
    assert solver(lp).status is Status.INFEASIBLE


def test_klee_minty_like_cycle_prone():
    # classic degenerate instance; Bland's rule must terminate
    c = np.array([100.0, 10.0, 1.0])
    A = np.array([[1, 0, 0], [20, 1, 0], [200, 20, 1]], dtype=float)
    b = np.array([1, 100, 10000], dtype=float)
    s = solve(LinearProgram(c, A, b, np.zeros(3), np.full(3, 1e5)))
    np.testing.assert_allclose(s.point, [0, 0, 10000], atol=1e-7)


def test_degenerate_textbook():
    c = np.array([2.0, 1.0])
    A = np.array([[3, 1], [1, -1], [0, 1]], dtype=float)
    s = solve(LinearProgram(c, A, [6, 2, 3], [0, 0], [10, 10]))
    np.testing.assert_allclose(s.point, [1, 3], atol=1e-9)


def test_invalid_dimensions():
    with pytest.raises(ValueError):
        LinearProgram([1, 1], [[1, 1, 1]], [1], [0, 0], [1, 1])
    with pytest.raises(ValueError):
        LinearProgram([1], [[1]], [1], [2], [1])
    with pytest.raises(ValueError):
        LinearProgram([np.inf], [[1]], [1], [0], [1])


def test_brute_force_limit():
    d = 7
    lp = LinearProgram(np.ones(d), np.zeros((0, d)), [], np.zeros(d), np.ones(d))
    with pytest.raises(ValueError):
        brute_force_solve(lp)


def test_pivot_budget_is_a_distinct_error(monkeypatch):
    import fclda.lp_solver as mod

    original = mod._Tableau.run

    def starved(self, cost, budget):
        return original(self, cost, 0)

    monkeypatch.setattr(mod._Tableau, "run", starved)
    with pytest.raises(LpSolverError):
        solve(one_row())


def test_debug_tableau_dump(tmp_path):
    out = tmp_path / "tab.csv"
    solve(one_row(), debug_tableau=str(out))
    lines = out.read_text().splitlines()
    assert lines[0].startswith("basis,") and len(lines) > 1


def test_random_agreement_with_vertex_enumeration():
    rng = np.random.default_rng(20240601)
    for _ in range(200):
        lp = random_lp(rng)
        s, o = solve(lp), brute_force_solve(lp)
        assert s.status == o.status
        if s.optimal:
            assert abs(s.objective_value - o.objective_value) <= 1e-6 * (1 + abs(o.objective_value))
            assert lp.is_feasible(s.point)


def test_duplicated_rows_agree():
    rng = np.random.default_rng(11)
    for _ in range(60):
        lp = random_lp(rng, degenerate=True)
        s, o = solve(lp), brute_force_solve(lp)
        assert s.status == o.status
        if s.optimal:
            assert s.objective_value == pytest.approx(o.objective_value, rel=1e-6, abs=1e-6)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_no_sampled_feasible_point_beats_optimum(seed):
    rng = np.random.default_rng(seed)
    lp = random_lp(rng)
    s = solve(lp)
    pts = rng.uniform(lp.lower, lp.upper, size=(500, lp.n_vars))
    feas = pts[np.all(pts @ lp.A.T <= lp.b, axis=1)] if lp.n_rows else pts
    if s.optimal:
        assert np.all(feas @ lp.objective <= s.objective_value + 1e-6)
    else:
        assert feas.size == 0


def test_deterministic():
    rng = np.random.default_rng(5)
    lp = random_lp(rng)
    a, b = solve(lp), solve(lp)
    assert a.status == b.status
    if a.optimal:
        assert a.point.tobytes() == b.point.tobytes()

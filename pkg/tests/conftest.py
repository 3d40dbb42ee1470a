import numpy as np
import pytest

import fclda.fuzzy_lp as fuzzy_lp
from fclda.dataset import augment_reflect, load_iris, select_binary
from fclda.lp_solver import LinearProgram

# every (z_lower, z_upper) pair computed anywhere in the session
BRACKETS: list[tuple[float, float]] = []
ACCEPTANCE_LINES: dict[int, str] = {}

_original_bracket = fuzzy_lp.solve_crisp_bracket


def _recording_bracket(p):
    br = _original_bracket(p)
    BRACKETS.append((br.z_lower, br.z_upper))
    return br


fuzzy_lp.solve_crisp_bracket = _recording_bracket


def bracket_violations():
    return [(z0, z1) for z0, z1 in BRACKETS if z0 > z1 + 1e-9 * (1 + abs(z1))]


def pytest_collection_modifyitems(items):
    # acceptance runs last so the bracket check sees every problem of the session
    items.sort(key=lambda item: item.path.name == "test_acceptance.py")


def pytest_terminal_summary(terminalreporter):
    tr = terminalreporter
    if ACCEPTANCE_LINES:
        tr.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            tr.write_line(ACCEPTANCE_LINES[k])
    if BRACKETS:
        bad = bracket_violations()
        status = "PASS" if not bad else "FAIL"
        tr.write_line(f"[{status}] bracket z0 <= z1 over the whole session: {len(BRACKETS)} problems, {len(bad)} violations")


def pytest_sessionfinish(session, exitstatus):
    if BRACKETS and bracket_violations() and exitstatus == 0:
        session.exitstatus = 1


@pytest.fixture(scope="session")
def iris_pair():
    return select_binary(load_iris(), "versicolor", "virginica", ["sepal_width", "petal_width"])


@pytest.fixture(scope="session")
def iris_reflected(iris_pair):
    return augment_reflect(iris_pair)


def random_lp(rng, max_d=4, max_m=8, degenerate=False):
    d = int(rng.integers(1, max_d + 1))
    m = int(rng.integers(0, max_m + 1))
    A = rng.uniform(-5, 5, (m, d))
    b = rng.uniform(-5, 5, m)
    if degenerate and m >= 2:
        A[1] = A[0]
        b[1] = b[0]
    c = rng.uniform(-5, 5, d)
    lo = rng.uniform(-5, 0, d)
    hi = rng.uniform(0, 5, d)
    return LinearProgram(c, A, b, lo, hi)


def random_fuzzy_problem(rng, d=None, m=None, theta_scale=1.0, zero_tol=False):
    d = int(rng.integers(1, 4)) if d is None else d
    m = int(rng.integers(1, 6)) if m is None else m
    A = rng.uniform(-3, 3, (m, d))
    # resources chosen so that u = 0 is always feasible
    b = rng.uniform(0, 2, m)
    t = np.zeros(m) if zero_tol else theta_scale * rng.uniform(0, 2, m)
    c = rng.uniform(-3, 3, d)
    return fuzzy_lp.FuzzyLpProblem(c, A, b, t, box=float(rng.uniform(0.5, 3)))

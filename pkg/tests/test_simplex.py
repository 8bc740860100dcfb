import numpy as np
import pytest
from scipy.optimize import linprog

from nsshare.simplex import solve


def test_simple_bounded_minimum():
    # min -x - y  s.t.  x + y <= 1
    result = solve(np.array([-1.0, -1.0]), a_ub=np.array([[1.0, 1.0]]), b_ub=np.array([1.0]))
    assert result.status == "optimal"
    assert result.objective == pytest.approx(-1.0, abs=1e-10)
    assert result.x.sum() == pytest.approx(1.0, abs=1e-10)


def test_equality_system():
    # x + y = 1, x - y = 0 -> x = y = 1/2
    result = solve(
        np.array([0.0, 0.0]),
        a_eq=np.array([[1.0, 1.0], [1.0, -1.0]]),
        b_eq=np.array([1.0, 0.0]),
    )
    assert result.status == "optimal"
    assert np.allclose(result.x, [0.5, 0.5], atol=1e-10)


def test_infeasible_detected():
    # x >= 0 with x = -1
    result = solve(np.array([0.0]), a_eq=np.array([[1.0]]), b_eq=np.array([-1.0]))
    assert result.status == "infeasible"
    assert result.infeasibility == pytest.approx(1.0, abs=1e-9)


def test_infeasible_pair():
    # x + y = 1 and x + y = 2 cannot both hold
    result = solve(
        np.array([0.0, 0.0]),
        a_eq=np.array([[1.0, 1.0], [1.0, 1.0]]),
        b_eq=np.array([1.0, 2.0]),
    )
    assert result.status == "infeasible"
    assert result.infeasibility > 0.5


def test_unbounded_detected():
    # min -x with only a vacuous constraint
    result = solve(np.array([-1.0]), a_ub=np.array([[-1.0]]), b_ub=np.array([0.0]))
    assert result.status == "unbounded"


def test_negative_rhs_inequality():
    # -x <= -2  (x >= 2), minimize x -> 2
    result = solve(np.array([1.0]), a_ub=np.array([[-1.0]]), b_ub=np.array([-2.0]))
    assert result.status == "optimal"
    assert result.objective == pytest.approx(2.0, abs=1e-9)


def test_degenerate_vertex():
    # textbook degenerate corner; must terminate and find the optimum
    c = np.array([-0.75, 150.0, -0.02, 6.0])
    a_ub = np.array([
        [0.25, -60.0, -0.04, 9.0],
        [0.5, -90.0, -0.02, 3.0],
        [0.0, 0.0, 1.0, 0.0],
    ])
    b_ub = np.array([0.0, 0.0, 1.0])
    result = solve(c, a_ub=a_ub, b_ub=b_ub)
    reference = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=(0, None), method="highs")
    assert result.status == "optimal"
    assert result.objective == pytest.approx(reference.fun, abs=1e-8)


def test_redundant_equality_rows():
    # duplicated row must not break the phase-1 cleanup
    result = solve(
        np.array([1.0, 2.0]),
        a_eq=np.array([[1.0, 1.0], [1.0, 1.0], [2.0, 2.0]]),
        b_eq=np.array([1.0, 1.0, 2.0]),
    )
    assert result.status == "optimal"
    assert result.objective == pytest.approx(1.0, abs=1e-9)
    assert np.allclose(result.x, [1.0, 0.0], atol=1e-9)


def test_random_instances_match_scipy(rng):
    matched = 0
    for trial in range(60):
        n = int(rng.integers(2, 8))
        m_ub = int(rng.integers(0, 5))
        m_eq = int(rng.integers(0, 3))
        if m_ub + m_eq == 0:
            m_ub = 1
        c = rng.normal(size=n)
        a_ub = rng.normal(size=(m_ub, n)) if m_ub else None
        b_ub = rng.normal(size=m_ub) if m_ub else None
        a_eq = rng.normal(size=(m_eq, n)) if m_eq else None
        b_eq = rng.normal(size=m_eq) if m_eq else None
        ours = solve(c, a_eq=a_eq, b_eq=b_eq, a_ub=a_ub, b_ub=b_ub)
        reference = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq,
                            bounds=(0, None), method="highs")
        if reference.status == 0:
            assert ours.status == "optimal", trial
            assert ours.objective == pytest.approx(reference.fun, abs=1e-7), trial
            matched += 1
        elif reference.status == 2:
            assert ours.status == "infeasible", trial
        elif reference.status == 3:
            assert ours.status == "unbounded", trial
    assert matched > 10  # the sample must contain plenty of solvable instances


def test_convex_hull_membership():
    # the point (0.3, 0.2) lies in the simplex spanned by unit vectors and 0
    vertices = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    a_eq = np.vstack([vertices.T, np.ones(3)])
    result = solve(np.zeros(3), a_eq=a_eq, b_eq=np.array([0.3, 0.2, 1.0]))
    assert result.status == "optimal"
    recon = vertices.T @ result.x
    assert np.allclose(recon, [0.3, 0.2], atol=1e-10)
    # outside point
    result = solve(np.zeros(3), a_eq=a_eq, b_eq=np.array([0.8, 0.8, 1.0]))
    assert result.status == "infeasible"


def test_solution_is_feasible(rng):
    for _ in range(20):
        n = 6
        a_eq = rng.normal(size=(3, n))
        x_feasible = rng.random(n)
        b_eq = a_eq @ x_feasible
        c = rng.normal(size=n)
        result = solve(c, a_eq=a_eq, b_eq=b_eq)
        if result.status == "optimal":
            assert np.max(np.abs(a_eq @ result.x - b_eq)) < 1e-8
            assert result.x.min() > -1e-10


def test_requires_constraints():
    with pytest.raises(ValueError):
        solve(np.array([1.0]))

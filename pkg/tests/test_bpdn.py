"""Tests for the l1-minimization solver and its orthonormal-matrix oracle."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from l1sample.bpdn import (
    BpdnProblem,
    bpdn_orthonormal_oracle,
    soft_threshold_complex,
    solve_bpdn,
)


def random_orthonormal_instance(rng, N=8, m=12, complex_data=True, obj_tol=1e-7):
    """A feasible instance with orthonormal columns and a radius strictly
    between the least-squares residual and ``norm(y)``."""
    if complex_data:
        G = rng.normal(size=(m, N)) + 1j * rng.normal(size=(m, N))
        y = rng.normal(size=m) + 1j * rng.normal(size=m)
    else:
        G = rng.normal(size=(m, N))
        y = rng.normal(size=m)
    Q, _ = np.linalg.qr(G)
    u = Q.conj().T @ y
    r0_sq = float(np.linalg.norm(y) ** 2 - np.linalg.norm(u) ** 2)
    t = rng.uniform(0.05, 0.95)
    rho = np.sqrt(r0_sq + t * (np.linalg.norm(y) ** 2 - r0_sq))
    return BpdnProblem(Q, y, eta=rho / np.sqrt(m), obj_tol=obj_tol, step_ratio=0.0625)


# ---------------------------------------------------------------------------
# problem validation and bookkeeping


def test_problem_validation():
    A = np.eye(2)
    y = np.array([1.0, 0.0])
    with pytest.raises(ValueError):
        BpdnProblem(np.ones(3), np.ones(3), 0.1)
    with pytest.raises(ValueError):
        BpdnProblem(A, np.ones(3), 0.1)
    with pytest.raises(ValueError):
        BpdnProblem(A, y, -0.1)
    with pytest.raises(ValueError):
        BpdnProblem(A, y, 0.1, max_iters=0)
    with pytest.raises(ValueError):
        BpdnProblem(A, y, 0.1, obj_tol=0.0)
    with pytest.raises(ValueError):
        BpdnProblem(A, y, 0.1, feas_tol=-1e-8)
    with pytest.raises(ValueError):
        BpdnProblem(A, y, 0.1, step_ratio=0.0)
    with pytest.raises(ValueError):
        BpdnProblem(A, y, 0.1, step_ratio=np.inf)


def test_radius_and_default_feasibility_tolerance():
    A = np.eye(4)
    y = np.array([3.0, 0.0, 0.0, 0.0])
    prob = BpdnProblem(A, y, eta=0.5)
    assert prob.radius == 0.5 * 2.0
    assert prob.effective_feas_tol == 1e-8 * (1.0 + 3.0)
    tight = BpdnProblem(A, y, eta=0.5, feas_tol=1e-3)
    assert tight.effective_feas_tol == 1e-3


# ---------------------------------------------------------------------------
# soft threshold


def test_soft_threshold_basics():
    v = np.array([3.0, -2.0, 0.5])
    out = soft_threshold_complex(v, 1.0)
    assert np.allclose(out, [2.0, -1.0, 0.0])
    assert out.dtype == v.dtype
    w = np.array([3.0 + 4.0j, 0.1j])
    out = soft_threshold_complex(w, 2.5)
    # modulus shrinks by t, phase is preserved
    assert abs(abs(out[0]) - 2.5) < 1e-14
    assert abs(out[0] / w[0] - 0.5) < 1e-14
    assert out[1] == 0.0
    with pytest.raises(ValueError):
        soft_threshold_complex(v, -0.5)


@settings(max_examples=100, deadline=None)
@given(
    re=st.floats(-50, 50),
    im=st.floats(-50, 50),
    t=st.floats(0, 100),
)
def test_soft_threshold_shrinkage_property(re, im, t):
    v = np.array([complex(re, im)])
    out = soft_threshold_complex(v, t)[0]
    assert abs(abs(out) - max(abs(v[0]) - t, 0.0)) < 1e-12 * (1.0 + abs(v[0]))
    if abs(out) > 1e-150:
        # the argument of the output matches the input; angles sidestep
        # underflow in complex division near the subnormal range
        assert abs(np.angle(out) - np.angle(v[0])) < 1e-12


# ---------------------------------------------------------------------------
# solver behavior on closed-form instances


def test_identity_anchor_instance():
    A = np.eye(2)
    y = np.array([3.0, 0.0])
    prob = BpdnProblem(A, y, eta=1.0 / np.sqrt(2.0))
    assert abs(prob.radius - 1.0) < 1e-15
    sol = solve_bpdn(prob)
    assert sol.certified
    assert np.abs(sol.z - np.array([2.0, 0.0])).max() <= 1e-8
    assert abs(sol.residual_norm - 1.0) <= 1e-7
    assert abs(sol.objective - 2.0) <= 1e-7


def test_zero_solution_fast_path():
    A = np.eye(3)
    y = np.array([0.1, 0.2, 0.0])
    prob = BpdnProblem(A, y, eta=1.0)  # radius sqrt(3) > norm(y)
    sol = solve_bpdn(prob)
    assert sol.iterations == 0
    assert sol.certified
    assert np.all(sol.z == 0)
    assert abs(sol.residual_norm - np.linalg.norm(y)) < 1e-15
    assert sol.objective == 0.0
    assert sol.gap == 0.0


def test_reported_residual_and_objective_are_consistent():
    rng = np.random.default_rng(3)
    prob = random_orthonormal_instance(rng)
    sol = solve_bpdn(prob)
    assert sol.certified
    recomputed = np.linalg.norm(prob.A @ sol.z - prob.y)
    assert abs(sol.residual_norm - recomputed) < 1e-10 * (1.0 + recomputed)
    assert abs(sol.objective - np.abs(sol.z).sum()) < 1e-10 * (1.0 + sol.objective)
    # feasibility within the certified tolerance
    assert sol.residual_norm <= prob.radius + prob.effective_feas_tol


def test_real_input_gives_real_iterates():
    rng = np.random.default_rng(5)
    prob = random_orthonormal_instance(rng, complex_data=False)
    sol = solve_bpdn(prob)
    assert not np.iscomplexobj(sol.z)


def test_uncertified_when_iteration_budget_is_tiny():
    rng = np.random.default_rng(9)
    prob = random_orthonormal_instance(rng)
    starved = BpdnProblem(prob.A, prob.y, prob.eta, max_iters=2)
    sol = solve_bpdn(starved)
    assert not sol.certified
    assert sol.iterations == 2


# ---------------------------------------------------------------------------
# oracle


def test_oracle_identity_anchor_exact():
    A = np.eye(2)
    y = np.array([3.0, 0.0])
    sol = bpdn_orthonormal_oracle(BpdnProblem(A, y, eta=1.0 / np.sqrt(2.0)))
    assert sol.z.tolist() == [2.0, 0.0]
    assert sol.certified
    assert sol.iterations == 0
    assert sol.gap == 0.0
    assert abs(sol.residual_norm - 1.0) < 1e-12


def test_oracle_rejects_non_orthogonal_columns():
    A = np.array([[1.0, 0.9], [0.0, 0.4359]])
    with pytest.raises(ValueError):
        bpdn_orthonormal_oracle(BpdnProblem(A, np.ones(2), 0.1))
    with pytest.raises(ValueError):
        bpdn_orthonormal_oracle(BpdnProblem(np.zeros((2, 2)), np.ones(2), 0.1))


def test_oracle_rejects_infeasible_radius():
    # single orthonormal column; y is orthogonal to its range, so the
    # least-squares residual is norm(y) = 5 and no smaller radius is feasible
    A = np.array([[1.0], [0.0], [0.0]])
    y = np.array([0.0, 5.0, 0.0])
    prob = BpdnProblem(A, y, eta=1.0 / np.sqrt(3.0))
    with pytest.raises(ValueError):
        bpdn_orthonormal_oracle(prob)


def test_oracle_zero_radius_gives_least_squares_on_full_rank_square():
    A = np.eye(3)
    y = np.array([1.0, -2.0, 0.5])
    sol = bpdn_orthonormal_oracle(BpdnProblem(A, y, eta=0.0))
    assert np.abs(sol.z - y).max() < 1e-14


@pytest.mark.parametrize("complex_data", [True, False])
def test_solver_matches_oracle(complex_data):
    rng = np.random.default_rng(42 if complex_data else 43)
    for _ in range(5):
        prob = random_orthonormal_instance(
            rng, N=10, m=16, complex_data=complex_data, obj_tol=1e-9
        )
        fast = solve_bpdn(prob)
        exact = bpdn_orthonormal_oracle(prob)
        assert fast.certified
        denom = max(1.0, float(np.linalg.norm(exact.z)))
        assert np.linalg.norm(fast.z - exact.z) / denom <= 1e-6


# ---------------------------------------------------------------------------
# scaling and step-skew invariances


def test_solution_scales_linearly_with_data():
    rng = np.random.default_rng(17)
    prob = random_orthonormal_instance(rng)
    base = solve_bpdn(prob)
    for c in (1e-4, 1e4):
        scaled = BpdnProblem(
            prob.A, c * prob.y, c * prob.eta, step_ratio=prob.step_ratio
        )
        sol = solve_bpdn(scaled)
        assert sol.certified
        assert np.allclose(sol.z, c * base.z, rtol=1e-9, atol=1e-12 * c)
        assert sol.iterations == base.iterations


def test_step_ratio_variants_reach_the_same_solution():
    rng = np.random.default_rng(23)
    G = rng.normal(size=(16, 10)) + 1j * rng.normal(size=(16, 10))
    Q, _ = np.linalg.qr(G)
    y = rng.normal(size=16) + 1j * rng.normal(size=16)
    u = Q.conj().T @ y
    r0_sq = float(np.linalg.norm(y) ** 2 - np.linalg.norm(u) ** 2)
    rho = np.sqrt(r0_sq + 0.4 * (np.linalg.norm(y) ** 2 - r0_sq))
    exact = None
    for ratio in (1.0, 0.25, 0.0625):
        prob = BpdnProblem(Q, y, eta=rho / 4.0, step_ratio=ratio)
        if exact is None:
            exact = bpdn_orthonormal_oracle(prob)
        sol = solve_bpdn(prob)
        assert sol.certified
        denom = max(1.0, float(np.linalg.norm(exact.z)))
        assert np.linalg.norm(sol.z - exact.z) / denom <= 1e-6

"""Basis-pursuit denoising: min ||z||_1 subject to ||A z - y||_2 <= eta*sqrt(m).

The general solver is a primal-dual first-order method with a duality-gap
certificate; matrices with orthonormal columns (up to one common scale)
additionally get a closed-form solution used as an oracle in tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(eq=False)
class BpdnProblem:
    """Problem data.  ``feas_tol`` defaults to 1e-8 * (1 + ||y||_2).

    ``step_ratio`` skews the primal/dual step sizes (primal step is
    multiplied by it, dual step divided by it); their product, which is what
    the convergence condition constrains, is unchanged.  Values below one
    favour the dual variable, which speeds up runs whose stopping time is
    dominated by the feasibility certificate.
    """

    A: np.ndarray
    y: np.ndarray
    eta: float
    feas_tol: Optional[float] = None
    obj_tol: float = 1e-7
    max_iters: int = 50_000
    step_ratio: float = 1.0

    def __post_init__(self) -> None:
        A = np.asarray(self.A)
        y = np.asarray(self.y).reshape(-1)
        if A.ndim != 2:
            raise ValueError("A must be a 2-d matrix")
        if y.shape[0] != A.shape[0]:
            raise ValueError("y length must match the number of rows of A")
        if not self.eta >= 0:
            raise ValueError("eta must be >= 0")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not self.obj_tol > 0:
            raise ValueError("obj_tol must be positive")
        if self.feas_tol is not None and not self.feas_tol > 0:
            raise ValueError("feas_tol must be positive")
        if not (np.isfinite(self.step_ratio) and self.step_ratio > 0):
            raise ValueError("step_ratio must be a positive finite number")
        if np.iscomplexobj(A) or np.iscomplexobj(y):
            A = A.astype(np.complex128, copy=False)
            y = y.astype(np.complex128, copy=False)
        else:
            A = A.astype(np.float64, copy=False)
            y = y.astype(np.float64, copy=False)
        self.A = A
        self.y = y

    @property
    def radius(self) -> float:
        """The residual bound eta * sqrt(m)."""
        return float(self.eta) * float(np.sqrt(self.A.shape[0]))

    @property
    def effective_feas_tol(self) -> float:
        if self.feas_tol is not None:
            return self.feas_tol
        return 1e-8 * (1.0 + float(np.linalg.norm(self.y)))


@dataclass(frozen=True)
class BpdnSolution:
    z: np.ndarray
    residual_norm: float
    objective: float
    iterations: int
    certified: bool
    gap: float


def soft_threshold_complex(v: np.ndarray, t: float) -> np.ndarray:
    """Entrywise v * max(1 - t/|v|, 0); shrinks moduli by t, keeps phases.

    Real input stays real.
    """
    if t < 0:
        raise ValueError("threshold must be >= 0")
    v = np.asarray(v)
    a = np.abs(v)
    # the mask keeps the division exact on the selected branch and the
    # clamp stops 1 - t/a from rounding to a tiny negative (phase flip)
    scale = np.where(a > t, np.maximum(1.0 - t / np.where(a > t, a, 1.0), 0.0), 0.0)
    return v * scale


def _operator_norm(A: np.ndarray, iters: int = 60) -> float:
    """Power-method estimate of the spectral norm, deterministic start."""
    rng = np.random.default_rng(12345)
    v = rng.standard_normal(A.shape[1])
    if np.iscomplexobj(A):
        v = v + 1j * rng.standard_normal(A.shape[1])
    nv = np.linalg.norm(v)
    if nv == 0:
        return 0.0
    v = v / nv
    AH = A.conj().T
    for _ in range(iters):
        w = AH @ (A @ v)
        nw = np.linalg.norm(w)
        if nw == 0:
            return 0.0
        v = w / nw
    return float(np.linalg.norm(A @ v))


def _dual_objective(w: np.ndarray, AH_w: np.ndarray, y: np.ndarray, rho: float) -> float:
    """Lagrange dual value of the rescaled vector w / max(1, |A^H w|_inf)."""
    scale = max(1.0, float(np.abs(AH_w).max())) if AH_w.size else 1.0
    return (-float(np.real(np.vdot(w, y))) - rho * float(np.linalg.norm(w))) / scale


def solve_bpdn(problem: BpdnProblem) -> BpdnSolution:
    """Primal-dual solve with a duality-gap stopping certificate.

    The problem is positively homogeneous in ``(y, radius)``, so it is first
    rescaled to unit ``||y||_2``; this keeps the fixed soft-threshold step
    meaningful for data of any magnitude, and the stall and gap tests then
    act at unit data scale.  Feasibility keeps its original-unit meaning
    exactly (the tolerance is rescaled along with the data).

    Iterates the over-relaxed primal-dual scheme (soft threshold as primal
    prox, projection-style shrink as dual prox) and certifies the returned
    point when it is feasible within ``feas_tol`` and either the duality gap
    is below ``obj_tol * max(1, objective)`` or the iteration has reached a
    numerically stationary point.  Runs that exhaust ``max_iters`` without a
    certificate return ``certified=False`` rather than raising.
    """
    A, y, rho = problem.A, problem.y, problem.radius
    m, N = A.shape
    obj_tol = problem.obj_tol

    y_norm = float(np.linalg.norm(y))
    if y_norm <= rho:
        # z = 0 is feasible and no objective can beat ||0||_1
        return BpdnSolution(
            z=np.zeros(N, dtype=A.dtype),
            residual_norm=y_norm,
            objective=0.0,
            iterations=0,
            certified=True,
            gap=0.0,
        )

    scale = y_norm
    y = y / scale
    rho = rho / scale
    feas_tol = problem.effective_feas_tol / scale

    L = _operator_norm(A)
    if L == 0.0:
        raise ValueError("A is numerically zero and y lies outside the radius")
    step = 0.95 / (1.05 * L)
    tau = step * problem.step_ratio
    sigma = step / problem.step_ratio

    AH = np.ascontiguousarray(A.conj().T)
    z = np.zeros(N, dtype=A.dtype)
    zbar = z.copy()
    w = np.zeros(m, dtype=A.dtype)
    z_prev_check = z.copy()
    w_prev_check = w.copy()
    gap = np.inf

    for it in range(1, problem.max_iters + 1):
        v = w + sigma * (A @ zbar) - sigma * y
        nv = float(np.linalg.norm(v))
        shrink = max(0.0, 1.0 - sigma * rho / nv) if nv > 0 else 0.0
        w = v * shrink
        AH_w = AH @ w
        z_new = soft_threshold_complex(z - tau * AH_w, tau)
        zbar = 2.0 * z_new - z
        z = z_new

        if it % 25 == 0 or it == problem.max_iters:
            residual = float(np.linalg.norm(A @ z - y))
            feasible = residual <= rho + feas_tol
            objective = float(np.abs(z).sum())
            gap = objective - _dual_objective(w, AH_w, y, rho)
            if feasible and gap <= obj_tol * max(1.0, objective):
                return BpdnSolution(z * scale, residual * scale,
                                    objective * scale, it, True, gap * scale)
            stalled = (
                float(np.abs(z - z_prev_check).max(initial=0.0))
                <= 1e-13 * max(1.0, float(np.abs(z).max(initial=0.0)))
                and float(np.abs(w - w_prev_check).max(initial=0.0))
                <= 1e-13 * max(1.0, float(np.abs(w).max(initial=0.0)))
            )
            if feasible and stalled:
                return BpdnSolution(z * scale, residual * scale,
                                    objective * scale, it, True, gap * scale)
            z_prev_check = z.copy()
            w_prev_check = w.copy()

    residual = float(np.linalg.norm(A @ z - y))
    objective = float(np.abs(z).sum())
    return BpdnSolution(z * scale, residual * scale, objective * scale,
                        problem.max_iters, False, float(gap) * scale)


# ---------------------------------------------------------------------------
# closed form for orthonormal-column matrices


def bpdn_orthonormal_oracle(problem: BpdnProblem, gram_tol: float = 1e-10) -> BpdnSolution:
    """Exact solution when A^H A = c I for some scalar c > 0.

    In that case the constraint becomes a ball around the rescaled
    least-squares point u = A^H y / c and the minimizer is a soft threshold
    of u; the threshold solves a piecewise-quadratic scalar equation on the
    sorted moduli of u.
    """
    A, y, rho = problem.A, problem.y, problem.radius
    m, N = A.shape
    G = A.conj().T @ A
    c = float(np.real(np.trace(G))) / N
    if c <= 0:
        raise ValueError("A has numerically zero columns")
    if np.abs(G - c * np.eye(N)).max() > gram_tol * max(1.0, c):
        raise ValueError("columns are not orthogonal with a common scale")

    y_norm2 = float(np.real(np.vdot(y, y)))
    if np.sqrt(y_norm2) <= rho:
        return BpdnSolution(np.zeros(N, dtype=A.dtype), float(np.sqrt(y_norm2)),
                            0.0, 0, True, 0.0)

    u = (A.conj().T @ y) / c
    r0_sq = max(y_norm2 - c * float(np.real(np.vdot(u, u))), 0.0)
    if rho**2 < r0_sq - problem.effective_feas_tol**2:
        raise ValueError("the radius is below the least-squares residual; infeasible")
    R_sq = max(rho**2 - r0_sq, 0.0) / c

    a = np.sort(np.abs(u))
    prefix = np.concatenate(([0.0], np.cumsum(a**2)))
    if prefix[-1] <= R_sq:
        z = np.zeros(N, dtype=A.dtype)
    else:
        # phi(lam) = sum_i min(|u_i|, lam)^2 is piecewise quadratic and
        # increasing; find the segment where it crosses R_sq
        phi_at_a = prefix[:-1] + (N - np.arange(N)) * a**2
        j = int(np.searchsorted(phi_at_a, R_sq, side="left"))
        lam = float(np.sqrt(max(R_sq - prefix[j], 0.0) / (N - j)))
        z = soft_threshold_complex(u, lam)
    residual = float(np.linalg.norm(A @ z - y))
    return BpdnSolution(z, residual, float(np.abs(z).sum()), 0, True, 0.0)

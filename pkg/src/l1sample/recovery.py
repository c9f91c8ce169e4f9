"""End-to-end recovery of a function from point samples.

A recovery run is described by a config naming the measurement system, one
of four sampling regimes, the target sparsity n, and the frequency/degree
cut-off M.  The regimes are:

* ``fourier3``: random points from the uniform measure on the torus.
* ``fourier_grid``: random points from the aligned lattice; needs fewer
  samples by one logarithm.
* ``chebyshev``: Chebyshev polynomials sampled from the arcsine measure.
* ``legendre``: Legendre polynomials sampled from the arcsine measure after
  preconditioning; samples of the raw function are multiplied by the weight
  w(x) = sqrt(pi) (1 - x^2)^(1/4) and the recovered coefficients refer to
  the orthonormal Legendre family itself.

The sample budget and the noise level of the l1 program follow closed
formulas in (n, M) with adjustable leading constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bpdn import BpdnProblem, BpdnSolution, solve_bpdn
from .classes import (
    CoefficientExpansion,
    FunctionClass,
    analytic_best_term_bound,
    analytic_tail_bound,
)
from .systems import (
    CHEBYSHEV,
    DEGREES,
    FOURIER,
    LEGENDRE_PRECONDITIONED,
    LEGENDRE_RAW,
    SEARCH_BOX,
    IndexSet,
    SamplePlan,
    System,
    _point_array,
    basis_matrix,
    draw_points,
    legendre_raw_system,
    make_index_set,
    uniform_bound,
)
from .vallee_poussin import chebyshev_lift

FOURIER3 = "fourier3"
FOURIER_GRID = "fourier_grid"
CHEBYSHEV_REGIME = "chebyshev"
LEGENDRE_REGIME = "legendre"

_THEOREMS = (FOURIER3, FOURIER_GRID, CHEBYSHEV_REGIME, LEGENDRE_REGIME)

_REGIME_SYSTEM = {
    FOURIER3: FOURIER,
    FOURIER_GRID: FOURIER,
    CHEBYSHEV_REGIME: CHEBYSHEV,
    LEGENDRE_REGIME: LEGENDRE_PRECONDITIONED,
}

# weight multipliers in the automatic noise rule, one per regime
_ETA_TAU = {
    FOURIER3: float(np.e),
    FOURIER_GRID: float(np.e),
    CHEBYSHEV_REGIME: 2.0,
    LEGENDRE_REGIME: 1.0,
}


def _guarded_log(x: float) -> float:
    return float(np.log(max(x, 2.0)))


@dataclass(frozen=True)
class RecoveryConfig:
    system: System
    theorem: str
    n: int
    M: int
    klass: Optional[FunctionClass] = None
    c_sample: float = 1.0
    c_eta: float = 1.0
    eta_override: Optional[float] = None
    plan: Optional[SamplePlan] = None
    feas_tol: Optional[float] = None
    obj_tol: float = 1e-7
    max_iters: int = 50_000
    step_ratio: float = 1.0

    def __post_init__(self) -> None:
        if self.theorem not in _THEOREMS:
            raise ValueError(f"unknown sampling regime: {self.theorem!r}")
        if self.system.kind != _REGIME_SYSTEM[self.theorem]:
            raise ValueError(
                f"regime {self.theorem!r} requires a "
                f"{_REGIME_SYSTEM[self.theorem]} system"
            )
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.M < 1:
            raise ValueError("M must be >= 1")
        if self.c_sample <= 0 or self.c_eta <= 0:
            raise ValueError("leading constants must be positive")
        if self.eta_override is not None and self.eta_override < 0:
            raise ValueError("eta must be >= 0")


def search_set(config: RecoveryConfig) -> IndexSet:
    """The candidate index set the l1 program optimizes over."""
    if config.theorem in (FOURIER3, FOURIER_GRID):
        return make_index_set(SEARCH_BOX, d=config.system.dim, M=config.M)
    if config.theorem == CHEBYSHEV_REGIME:
        return make_index_set(DEGREES, M=3 * config.M)
    return make_index_set(DEGREES, M=config.M)


def sample_count(config: RecoveryConfig) -> int:
    """Number of random samples the regime prescribes for (n, M).

    All logarithms are natural and floored at ln 2 so small arguments never
    zero out the budget.
    """
    n, M, c = config.n, config.M, config.c_sample
    g = _guarded_log
    if config.theorem in (FOURIER3, FOURIER_GRID):
        d = config.system.dim
        log_n_power = 2 if config.theorem == FOURIER_GRID else 3
        base = d * np.log(d + 1.0) * n * g(n) ** log_n_power * g(M)
    elif config.theorem == CHEBYSHEV_REGIME:
        base = 2.0 * n * g(n) ** 3 * g(M)
    else:
        base = 16.0 * np.pi * n * g(n) ** 3 * g(M + 1)
    return int(np.ceil(c * base))


def choose_eta(config: RecoveryConfig) -> float:
    """Noise level of the l1 program.

    Uses the override when given; otherwise combines the class's analytic
    best n-term bound and coefficient tail outside the cut-off,
    regime-weighted, times ``c_eta``.
    """
    if config.eta_override is not None:
        return float(config.eta_override)
    if config.klass is None:
        raise ValueError("automatic eta needs a function class")
    tau = _ETA_TAU[config.theorem]
    sigma_bar = analytic_best_term_bound(config.klass, config.n)
    tail_bar = analytic_tail_bound(config.klass, config.M)
    return float(config.c_eta * (tau * sigma_bar + (1.0 + tau) * tail_bar))


def build_matrix(config: RecoveryConfig, points) -> np.ndarray:
    """Measurement matrix over the search set; rows are sample points."""
    uniform_bound(config.system)  # raises for unbounded families
    pts = np.asarray(points)
    if pts.size == 0:
        raise ValueError("need at least one sample point")
    return basis_matrix(config.system, search_set(config), points)


def sample_points(config: RecoveryConfig, m: Optional[int] = None) -> np.ndarray:
    """Draw the regime's sample points; requires a plan on the config."""
    if config.plan is None:
        raise ValueError("config has no sampling plan")
    count = sample_count(config) if m is None else m
    return draw_points(config.system, count, config.plan)


@dataclass(frozen=True)
class RecoveryResult:
    expansion: CoefficientExpansion
    eta: float
    samples_used: int
    solution: BpdnSolution
    theorem: str
    l2_err: Optional[float] = None

    @property
    def certified(self) -> bool:
        return self.solution.certified

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "eta": self.eta,
            "samples_used": self.samples_used,
            "certified": self.solution.certified,
            "objective": self.solution.objective,
            "residual_norm": self.solution.residual_norm,
            "iterations": self.solution.iterations,
            "duality_gap": self.solution.gap,
            "l2_error": self.l2_err,
            "expansion": self.expansion.to_json(),
        }


def _legendre_weight(points: np.ndarray) -> np.ndarray:
    return np.sqrt(np.pi) * (1.0 - points**2) ** 0.25


def recover(
    f_samples,
    config: RecoveryConfig,
    points,
    f_true: Optional[CoefficientExpansion] = None,
) -> RecoveryResult:
    """Solve the l1 program for one set of samples.

    ``f_samples`` are values of the target function at ``points``.  For the
    Legendre regime these are values of the raw function; the preconditioning
    weight is applied internally and the returned expansion is over the
    orthonormal Legendre family.  When the true expansion is passed, the
    result carries the l2 coefficient error.
    """
    y = np.asarray(f_samples).reshape(-1)
    pts = _point_array(config.system, points)
    m = pts.shape[0]
    if y.shape[0] != m:
        raise ValueError("sample count does not match the number of points")

    if config.theorem == LEGENDRE_REGIME:
        y = y * _legendre_weight(pts)
        out_system = legendre_raw_system()
    else:
        out_system = config.system

    if not np.iscomplexobj(y) or (config.system.kind != FOURIER and
                                  np.abs(y.imag).max(initial=0.0) == 0.0):
        y = y.real.astype(np.float64)

    A = build_matrix(config, pts)
    eta = choose_eta(config)
    problem = BpdnProblem(
        A, y, eta,
        feas_tol=config.feas_tol,
        obj_tol=config.obj_tol,
        max_iters=config.max_iters,
        step_ratio=config.step_ratio,
    )
    solution = solve_bpdn(problem)

    keys = search_set(config).as_tuples()
    coeffs = {
        key: complex(value)
        for key, value in zip(keys, solution.z)
        if value != 0
    }
    expansion = CoefficientExpansion(out_system, coeffs)

    err = None
    if f_true is not None:
        err = l2_error(expansion, f_true)
    return RecoveryResult(expansion, eta, m, solution, config.theorem, err)


# ---------------------------------------------------------------------------
# coefficient-space error


_LEGENDRE_KINDS = frozenset({LEGENDRE_PRECONDITIONED, LEGENDRE_RAW})


def _as_comparable(f: CoefficientExpansion, g: CoefficientExpansion):
    if f.system == g.system:
        return f, g
    kinds = {f.system.kind, g.system.kind}
    if kinds <= _LEGENDRE_KINDS:
        # b_n = w L_n maps coefficients one-to-one and preserves l2 norms
        return f, g
    if kinds == {CHEBYSHEV, FOURIER}:
        fa = chebyshev_lift(f) if f.system.kind == CHEBYSHEV else f
        ga = chebyshev_lift(g) if g.system.kind == CHEBYSHEV else g
        if fa.system != ga.system:
            raise ValueError("cannot compare expansions over these systems")
        return fa, ga
    raise ValueError("cannot compare expansions over these systems")


def l2_error(f: CoefficientExpansion, g: CoefficientExpansion) -> float:
    """l2 distance of two coefficient expansions over compatible systems.

    Equal systems compare directly; the two Legendre families share
    coefficients; a Chebyshev expansion is compared against a univariate
    Fourier one through the cosine-to-exponential rewrite.  Anything else
    raises.
    """
    fa, ga = _as_comparable(f, g)
    keys = set(fa.coefficients) | set(ga.coefficients)
    total = 0.0
    for key in keys:
        diff = fa.coefficients.get(key, 0j) - ga.coefficients.get(key, 0j)
        total += abs(diff) ** 2
    return float(np.sqrt(total))


def legendre_truncation(f: CoefficientExpansion, M: int) -> CoefficientExpansion:
    """Keep only the coefficients of degree <= M of a Legendre expansion."""
    if f.system.kind not in _LEGENDRE_KINDS:
        raise ValueError("truncation is defined for Legendre expansions")
    if M < 0:
        raise ValueError("M must be >= 0")
    kept = {k: v for k, v in f.coefficients.items() if k <= M}
    return CoefficientExpansion(f.system, kept)

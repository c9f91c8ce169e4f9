"""Experiment driver: rate sweeps, slope fits, success-probability tables.

A rate sweep runs, for each target sparsity n, a batch of recoveries of
fresh random unit-ball functions from fresh random points, with the cut-off
M and the sample budget m tied to n by closed-form rules.  The decay of the
median error against n is summarized by a least-squares slope in log-log
coordinates and compared with predicted exponent pairs (power of n, power
of log n).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence, TextIO, Tuple, Union

import numpy as np

from .classes import (
    POLY_WIENER,
    SOBOLEV_MIXED,
    WIENER_ISO,
    WIENER_MIXED,
    FunctionClass,
    evaluate_function,
    random_unit_function,
)
from .recovery import (
    CHEBYSHEV_REGIME,
    FOURIER3,
    FOURIER_GRID,
    LEGENDRE_REGIME,
    RecoveryConfig,
    recover,
    sample_count,
    search_set,
)
from .systems import (
    BOX,
    FOURIER,
    IndexSet,
    SamplePlan,
    System,
    basis_matrix,
    chebyshev_system,
    draw_points,
    fourier_system,
    legendre_preconditioned_system,
    make_index_set,
)
from .bpdn import BpdnProblem, solve_bpdn

PHASE_SUCCESS_THRESHOLD = 1e-4


def default_theorem(klass: FunctionClass) -> str:
    """The sampling regime a class is analyzed under."""
    if klass.kind == POLY_WIENER:
        return CHEBYSHEV_REGIME if klass.alpha == -0.5 else LEGENDRE_REGIME
    return FOURIER3


def regime_system(theorem: str, klass: FunctionClass) -> System:
    if theorem in (FOURIER3, FOURIER_GRID):
        return fourier_system(klass.d)
    if theorem == CHEBYSHEV_REGIME:
        return chebyshev_system()
    return legendre_preconditioned_system()


def m_rule_exponent(klass: FunctionClass) -> float:
    """Exponent e of the cut-off rule M = floor(n^e).

    Chosen so the truncation tail decays no slower than the best n-term
    error of the class.
    """
    r = klass.r
    if klass.kind == WIENER_MIXED:
        return (r + 0.5) / r
    if klass.kind == SOBOLEV_MIXED:
        return r / (r - 0.5)
    if klass.kind == WIENER_ISO:
        return 1.0 / klass.d + 1.0 / (klass.p * r) - 1.0 / (2.0 * r)
    if klass.alpha == -0.5:
        return 1.0 + 1.0 / (klass.p * r) - 1.0 / (2.0 * r)
    return 1.0 + 1.0 / (klass.p * r) - 1.0 / r


def box_parameter(klass: FunctionClass, n: int) -> int:
    """Cut-off M for sparsity n; floored at 3 so search sets never collapse.

    The tiny additive guard keeps exact powers (e.g. 16^1.5 = 64) from
    flooring one short.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    e = m_rule_exponent(klass)
    return max(3, int(np.floor(float(n) ** e + 1e-9)))


# ---------------------------------------------------------------------------
# predicted exponents


def predicted_rate(klass: FunctionClass, index: str = "n") -> Tuple[float, float]:
    """Predicted error exponent pair (power, log-power) for the class.

    ``index="n"`` gives the decay in the sparsity n; ``index="m"`` rewrites
    it in the sample count through the m = n log^3 n oversampling rule.
    """
    if index not in ("n", "m"):
        raise ValueError("index must be 'n' or 'm'")
    r, d = klass.r, klass.d
    if klass.kind == WIENER_MIXED:
        pair = (-(r + 0.5), (d - 1) * r + 0.5)
    elif klass.kind == SOBOLEV_MIXED:
        pair = (-r, (d - 1) * r + 0.5)
    elif klass.kind == WIENER_ISO:
        pair = (-(r / d + 1.0 / klass.p - 0.5), 0.0)
    elif klass.alpha == -0.5:
        pair = (-(r + 1.0 / klass.p - 0.5), 0.0)
    else:
        pair = (-(r + 1.0 / klass.p - 1.0), 0.0)
    if index == "n":
        return pair
    transfer = rate_transfer(1.0, 3.0, -pair[0], pair[1])
    return (transfer.m_rate, transfer.m_log_power)


@dataclass(frozen=True)
class RateTransferResult:
    m_rate: float
    m_log_power: float
    constant: float


def rate_transfer(c1: float, alpha: float, r: float, beta: float) -> RateTransferResult:
    """Re-index a bound a_n <= C n^(-r) log(n)^beta along m <= c1 n log(n)^alpha.

    For non-increasing a_m this gives a_m <= C' m^(-r) log(m)^(beta + alpha r)
    with C' = C * (4 c1 2^alpha)^r; the multiplier is reported separately.
    """
    if c1 < 1:
        raise ValueError("c1 must be >= 1")
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if r <= 0:
        raise ValueError("r must be positive")
    if beta < 0:
        raise ValueError("beta must be >= 0")
    constant = float((4.0 * c1 * 2.0**alpha) ** r)
    return RateTransferResult(-r, beta + alpha * r, constant)


def fit_slope(
    n_values: Sequence[float],
    errors: Sequence[float],
    drop_first: Optional[bool] = None,
) -> Optional[float]:
    """Least-squares slope of log(error) against log(n).

    Non-finite and non-positive errors are skipped.  With four or more
    usable points the smallest n is dropped by default (it sits deepest in
    the preasymptotic range).  Returns None when fewer than two points
    remain.
    """
    ns, es = [], []
    for n, e in zip(n_values, errors):
        if np.isfinite(e) and e > 0:
            ns.append(float(n))
            es.append(float(e))
    if drop_first is None:
        drop_first = len(ns) >= 4
    if drop_first and len(ns) > 1:
        ns, es = ns[1:], es[1:]
    if len(ns) < 2:
        return None
    slope = np.polyfit(np.log(ns), np.log(es), 1)[0]
    return float(slope)


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class RateRow:
    n: int
    m: int
    median_error: float
    q25: float
    q75: float
    success_fraction: float

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "median_error": _float_or_none(self.median_error),
            "q25": _float_or_none(self.q25),
            "q75": _float_or_none(self.q75),
            "success_fraction": self.success_fraction,
        }

    @staticmethod
    def from_json(obj: dict) -> "RateRow":
        return RateRow(
            n=int(obj["n"]),
            m=int(obj["m"]),
            median_error=_none_or_float(obj["median_error"]),
            q25=_none_or_float(obj["q25"]),
            q75=_none_or_float(obj["q75"]),
            success_fraction=float(obj["success_fraction"]),
        )


def _float_or_none(x: float) -> Optional[float]:
    return None if not np.isfinite(x) else float(x)


def _none_or_float(x) -> float:
    return float("nan") if x is None else float(x)


@dataclass(frozen=True)
class RateReport:
    rows: Tuple[RateRow, ...]
    fitted_slope: Optional[float] = None
    predicted_n: Optional[Tuple[float, float]] = None
    predicted_m: Optional[Tuple[float, float]] = None
    uncertified_trials: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "rows": [row.to_json() for row in self.rows],
            "fitted_slope": self.fitted_slope,
            "predicted_n": list(self.predicted_n) if self.predicted_n else None,
            "predicted_m": list(self.predicted_m) if self.predicted_m else None,
            "uncertified_trials": self.uncertified_trials,
        }

    @staticmethod
    def from_json(obj: dict) -> "RateReport":
        slope = obj.get("fitted_slope")
        pn = obj.get("predicted_n")
        pm = obj.get("predicted_m")
        unc = obj.get("uncertified_trials")
        return RateReport(
            rows=tuple(RateRow.from_json(r) for r in obj["rows"]),
            fitted_slope=None if slope is None else float(slope),
            predicted_n=None if pn is None else (float(pn[0]), float(pn[1])),
            predicted_m=None if pm is None else (float(pm[0]), float(pm[1])),
            uncertified_trials=None if unc is None else int(unc),
        )


# ---------------------------------------------------------------------------
# experiments


@dataclass(frozen=True)
class ExperimentConfig:
    klass: FunctionClass
    n_values: Tuple[int, ...]
    trials_per_n: int = 10
    theorem: Optional[str] = None
    c_sample: float = 1.0
    c_eta: float = 1.0
    eta_override: Optional[float] = None
    seed_base: int = 0
    sparsity: str = "n"
    feas_tol: Optional[float] = None
    obj_tol: float = 1e-7
    max_iters: int = 50_000
    step_ratio: float = 1.0

    def __post_init__(self) -> None:
        ns = tuple(int(n) for n in self.n_values)
        object.__setattr__(self, "n_values", ns)
        if not ns:
            raise ValueError("n_values must be non-empty")
        if any(n < 1 for n in ns):
            raise ValueError("n values must be >= 1")
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("n values must be strictly increasing")
        if self.trials_per_n < 1:
            raise ValueError("trials_per_n must be >= 1")
        if self.sparsity not in ("n", "head", "full"):
            raise ValueError("sparsity mode must be 'n', 'head', or 'full'")


def _trial_seeds(seed_base: int, i_n: int, t: int) -> Tuple[int, int]:
    s = np.random.SeedSequence((seed_base, i_n, t)).generate_state(2)
    return int(s[0]), int(s[1])


def run_rate_experiment(config: ExperimentConfig) -> RateReport:
    """Sweep n, recover random unit-ball functions, and fit the error decay.

    Per n: the cut-off follows the class's rule, the sample count the
    regime's formula.  Each trial draws a fresh function and fresh points
    from seeds derived from (seed_base, n index, trial index), so reports
    are reproducible bit for bit.  Quantiles are taken over certified
    solves only; ``success_fraction`` is the certified fraction.
    """
    klass = config.klass
    theorem = config.theorem or default_theorem(klass)
    system = regime_system(theorem, klass)
    rows = []
    uncertified = 0
    for i_n, n in enumerate(config.n_values):
        M = box_parameter(klass, n)
        rc = RecoveryConfig(
            system=system,
            theorem=theorem,
            n=n,
            M=M,
            klass=klass,
            c_sample=config.c_sample,
            c_eta=config.c_eta,
            eta_override=config.eta_override,
            feas_tol=config.feas_tol,
            obj_tol=config.obj_tol,
            max_iters=config.max_iters,
            step_ratio=config.step_ratio,
        )
        m = sample_count(rc)
        J = search_set(rc)
        sparsity = None if config.sparsity == "full" else min(n, len(J))
        placement = "head" if config.sparsity == "head" else "random"
        errors = []
        certified = 0
        for t in range(config.trials_per_n):
            seed_f, seed_pts = _trial_seeds(config.seed_base, i_n, t)
            f = random_unit_function(klass, J, sparsity=sparsity, seed=seed_f,
                                     placement=placement)
            mode = "grid" if theorem == FOURIER_GRID else "continuous"
            grid_size = J.half_width if mode == "grid" else None
            plan = SamplePlan(seed=seed_pts, mode=mode, grid_size=grid_size)
            points = draw_points(system, m, plan)
            samples = evaluate_function(f, points)
            result = recover(samples, rc, points, f_true=f)
            if result.certified:
                certified += 1
                errors.append(result.l2_err)
            else:
                uncertified += 1
        if errors:
            median, q25, q75 = np.percentile(errors, [50, 25, 75])
        else:
            median = q25 = q75 = float("nan")
        rows.append(RateRow(n, m, float(median), float(q25), float(q75),
                            certified / config.trials_per_n))
    slope = fit_slope([row.n for row in rows], [row.median_error for row in rows])
    return RateReport(
        rows=tuple(rows),
        fitted_slope=slope,
        predicted_n=predicted_rate(klass, "n"),
        predicted_m=predicted_rate(klass, "m"),
        uncertified_trials=uncertified,
    )


def run_phase_experiment(
    system: System,
    N: int,
    s: int,
    m_grid: Sequence[int],
    trials: int,
    seed: int = 0,
    step_ratio: float = 1.0,
) -> RateReport:
    """Success-probability table for exact sparse recovery at eta = 0.

    Random s-sparse coefficient vectors (uniform support, unit-modulus
    random-phase entries) over the full frequency box of cardinality N are
    recovered from m lattice samples for each m in the grid.  A trial
    succeeds when the solve certifies and the relative l2 coefficient error
    is at most 1e-4; ``success_fraction`` reports that fraction, while the
    quantile columns summarize errors of certified trials.
    """
    if system.kind != FOURIER:
        raise ValueError("phase experiments run on the Fourier system")
    d = system.dim
    D_float = (N ** (1.0 / d) - 1.0) / 2.0
    D = int(round(D_float))
    if (2 * D + 1) ** d != N:
        raise ValueError("N must be (2D+1)^d for an integer box radius D")
    if not 1 <= s <= N:
        raise ValueError("need 1 <= s <= N")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    box = make_index_set(BOX, d=d, M=D) if D >= 1 else IndexSet(BOX, d, 0)
    rows = []
    uncertified = 0
    for i_m, m in enumerate(m_grid):
        if m < 1:
            raise ValueError("sample counts must be >= 1")
        errors = []
        successes = 0
        for t in range(trials):
            seeds = np.random.SeedSequence((seed, i_m, t)).generate_state(2)
            rng = np.random.default_rng(int(seeds[0]))
            support = rng.choice(N, size=s, replace=False)
            coeffs = np.zeros(N, dtype=np.complex128)
            coeffs[support] = np.exp(2j * np.pi * rng.random(s))
            plan = SamplePlan(seed=int(seeds[1]), mode="grid", grid_size=D)
            points = draw_points(system, m, plan)
            A = basis_matrix(system, box, points)
            y = A @ coeffs
            solution = solve_bpdn(BpdnProblem(A, y, eta=0.0, step_ratio=step_ratio))
            if solution.certified:
                rel = float(np.linalg.norm(solution.z - coeffs) / np.linalg.norm(coeffs))
                errors.append(rel)
                if rel <= PHASE_SUCCESS_THRESHOLD:
                    successes += 1
            else:
                uncertified += 1
        if errors:
            median, q25, q75 = np.percentile(errors, [50, 25, 75])
        else:
            median = q25 = q75 = float("nan")
        rows.append(RateRow(s, int(m), float(median), float(q25), float(q75),
                            successes / trials))
    return RateReport(rows=tuple(rows), uncertified_trials=uncertified)


# ---------------------------------------------------------------------------
# serialization

CSV_HEADER = "n,m,median_error,q25,q75,success_fraction"


def _csv_float(x: float) -> str:
    return "%.17g" % x


def emit_report(report: RateReport, fmt: str, path: Union[str, TextIO]) -> None:
    """Write a report as CSV (fixed header, 17 significant digits) or JSON."""
    kind = fmt.lower()
    if kind not in ("csv", "json"):
        raise ValueError("format must be 'csv' or 'json'")
    if kind == "csv":
        lines = [CSV_HEADER]
        for row in report.rows:
            lines.append(",".join([
                str(row.n),
                str(row.m),
                _csv_float(row.median_error),
                _csv_float(row.q25),
                _csv_float(row.q75),
                _csv_float(row.success_fraction),
            ]))
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(report.to_json(), indent=2) + "\n"
    if hasattr(path, "write"):
        path.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)

"""Estimator-style front end: fit points/values, predict anywhere.

``FunctionRecovery`` follows the familiar fit/predict/transform protocol
with plain-value constructor parameters and ``get_params``/``set_params``,
so it slots into pipelines and parameter sweeps without this package taking
a dependency on any particular ML framework.
"""

from __future__ import annotations

import numpy as np

from .classes import (
    FunctionClass,
    evaluate_function,
)
from .harness import box_parameter, default_theorem
from .recovery import (
    CHEBYSHEV_REGIME,
    FOURIER3,
    LEGENDRE_REGIME,
    RecoveryConfig,
    recover,
    search_set,
)
from .systems import (
    CHEBYSHEV,
    FOURIER,
    LEGENDRE_PRECONDITIONED,
    System,
    _point_array,
    basis_matrix,
)


class NotFittedError(ValueError, AttributeError):
    """predict/transform/score was called before fit."""


def check_sample_points(X, system: System) -> np.ndarray:
    """Canonicalize sample points for a system and reject non-finite input.

    Returns shape (m, d) for Fourier systems and (m,) for polynomial ones.
    """
    pts = _point_array(system, X)
    if pts.size == 0:
        raise ValueError("need at least one sample point")
    if not np.all(np.isfinite(pts)):
        raise ValueError("sample points must be finite")
    return pts


def check_sample_values(y, n_points: int) -> np.ndarray:
    """Flatten sample values, check finiteness and the length against X."""
    vals = np.asarray(y).reshape(-1)
    if vals.shape[0] != n_points:
        raise ValueError("X and y disagree on the number of samples")
    if not np.all(np.isfinite(vals)):
        raise ValueError("sample values must be finite")
    return vals


_DEFAULT_REGIME = {
    FOURIER: FOURIER3,
    CHEBYSHEV: CHEBYSHEV_REGIME,
    LEGENDRE_PRECONDITIONED: LEGENDRE_REGIME,
}

_PARAM_NAMES = (
    "system", "dim", "theorem", "class_kind", "r", "p", "alpha",
    "n", "M", "c_sample", "c_eta", "eta", "obj_tol", "max_iters", "step_ratio",
)


class FunctionRecovery:
    """Recover a sparse coefficient expansion from point samples.

    Parameters mirror the recovery config: the measurement system (a kind
    string or a ``System``), the sampling regime, the function-class
    parameters driving the automatic noise level, the target sparsity n and
    cut-off M.  ``eta`` overrides the automatic noise level; ``M=None``
    applies the class's cut-off rule to n.

    After ``fit(X, y)`` the instance exposes ``expansion_`` (the recovered
    expansion), ``coefficients_`` (aligned to ``index_set_``), and
    ``result_`` (the full recovery record).
    """

    def __init__(
        self,
        system: str = FOURIER,
        dim: int = 1,
        theorem: str = None,
        class_kind: str = "wiener_mixed",
        r: float = 1.0,
        p: float = None,
        alpha: float = None,
        n: int = 4,
        M: int = None,
        c_sample: float = 1.0,
        c_eta: float = 1.0,
        eta: float = None,
        obj_tol: float = 1e-7,
        max_iters: int = 50_000,
        step_ratio: float = 1.0,
    ):
        self.system = system
        self.dim = dim
        self.theorem = theorem
        self.class_kind = class_kind
        self.r = r
        self.p = p
        self.alpha = alpha
        self.n = n
        self.M = M
        self.c_sample = c_sample
        self.c_eta = c_eta
        self.eta = eta
        self.obj_tol = obj_tol
        self.max_iters = max_iters
        self.step_ratio = step_ratio

    # -- parameter protocol -------------------------------------------------

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in _PARAM_NAMES}

    def set_params(self, **params) -> "FunctionRecovery":
        for name, value in params.items():
            if name not in _PARAM_NAMES:
                raise ValueError(
                    f"invalid parameter {name!r} for FunctionRecovery"
                )
            setattr(self, name, value)
        return self

    # -- fitting ------------------------------------------------------------

    def _resolved_system(self) -> System:
        if isinstance(self.system, System):
            return self.system
        return System(str(self.system), int(self.dim) if self.system == FOURIER else 1)

    def _resolved_class(self) -> FunctionClass:
        return FunctionClass(
            self.class_kind,
            float(self.r),
            d=int(self.dim),
            p=None if self.p is None else float(self.p),
            alpha=None if self.alpha is None else float(self.alpha),
        )

    def _build_config(self) -> RecoveryConfig:
        system = self._resolved_system()
        theorem = self.theorem
        if theorem is None:
            try:
                theorem = _DEFAULT_REGIME[system.kind]
            except KeyError:
                raise ValueError(
                    f"no sampling regime for system kind {system.kind!r}"
                ) from None
        klass = None
        if self.eta is None or self.M is None:
            klass = self._resolved_class()
        M = self.M if self.M is not None else box_parameter(klass, int(self.n))
        return RecoveryConfig(
            system=system,
            theorem=theorem,
            n=int(self.n),
            M=int(M),
            klass=klass,
            c_sample=float(self.c_sample),
            c_eta=float(self.c_eta),
            eta_override=None if self.eta is None else float(self.eta),
            obj_tol=float(self.obj_tol),
            max_iters=int(self.max_iters),
            step_ratio=float(self.step_ratio),
        )

    def fit(self, X, y) -> "FunctionRecovery":
        config = self._build_config()
        pts = check_sample_points(X, config.system)
        vals = check_sample_values(y, pts.shape[0])
        result = recover(vals, config, pts)
        self.config_ = config
        self.result_ = result
        self.expansion_ = result.expansion
        self.index_set_ = search_set(config)
        self.coefficients_ = result.expansion.vector(self.index_set_)
        self.n_features_in_ = pts.shape[1] if pts.ndim == 2 else 1
        return self

    def _check_fitted(self) -> None:
        if not hasattr(self, "result_"):
            raise NotFittedError("this FunctionRecovery instance is not fitted yet")

    # -- inference ----------------------------------------------------------

    def predict(self, X) -> np.ndarray:
        """Values of the recovered expansion at new points (complex dtype)."""
        self._check_fitted()
        pts = check_sample_points(X, self.expansion_.system)
        return np.atleast_1d(evaluate_function(self.expansion_, pts))

    def transform(self, X) -> np.ndarray:
        """Basis features over the fitted index set, one row per point."""
        self._check_fitted()
        pts = check_sample_points(X, self.config_.system)
        return basis_matrix(self.config_.system, self.index_set_, pts)

    def score(self, X, y) -> float:
        """Negative mean squared error of the prediction (higher is better)."""
        self._check_fitted()
        pts = check_sample_points(X, self.expansion_.system)
        vals = check_sample_values(y, pts.shape[0])
        pred = self.predict(pts)
        return float(-np.mean(np.abs(pred - vals) ** 2))

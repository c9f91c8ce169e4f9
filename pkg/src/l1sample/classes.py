"""Coefficient-defined smoothness classes and finite expansions.

A function class assigns every admissible index a weight >= 1 and measures
functions by a weighted sequence norm of their coefficients:

* ``wiener_mixed``: weighted l1, weight prod_j (1+|k_j|)^r.
* ``wiener_iso``: weighted l^p quasi-norm (0 < p <= 1),
  weight (1+|k|_inf)^r.
* ``sobolev_mixed``: weighted l2, same tensor weight as wiener_mixed,
  r > 1/2.
* ``poly_wiener``: weighted l^p over polynomial degrees, weight (1+n)^r;
  the ``alpha`` tag (-1/2 or 0) selects the Chebyshev or Legendre family.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np
from numpy.polynomial.legendre import leggauss

from .systems import (
    FOURIER,
    LEGENDRE_RAW,
    IndexSet,
    System,
    _index_array,
    _normalize_index,
    basis_matrix,
    chebyshev_system,
    fourier_system,
    legendre_raw_system,
)

WIENER_MIXED = "wiener_mixed"
WIENER_ISO = "wiener_iso"
SOBOLEV_MIXED = "sobolev_mixed"
POLY_WIENER = "poly_wiener"

_CLASS_KINDS = (WIENER_MIXED, WIENER_ISO, SOBOLEV_MIXED, POLY_WIENER)


@dataclass(frozen=True)
class FunctionClass:
    kind: str
    r: float
    d: int = 1
    p: Optional[float] = None
    alpha: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind not in _CLASS_KINDS:
            raise ValueError(f"unknown class kind: {self.kind!r}")
        if not self.r > 0:
            raise ValueError("smoothness r must be positive")
        if self.d < 1:
            raise ValueError("dimension must be >= 1")
        if self.kind in (WIENER_ISO, POLY_WIENER):
            if self.p is None or not (0 < self.p <= 1):
                raise ValueError("need 0 < p <= 1")
        if self.kind == SOBOLEV_MIXED and not self.r > 0.5:
            raise ValueError("sobolev_mixed needs r > 1/2")
        if self.kind == POLY_WIENER:
            if self.alpha not in (-0.5, 0.0):
                raise ValueError("alpha must be -1/2 or 0")
            if self.d != 1:
                raise ValueError("poly_wiener is univariate")


def wiener_mixed(r: float, d: int) -> FunctionClass:
    return FunctionClass(WIENER_MIXED, r, d)


def wiener_iso(r: float, p: float, d: int) -> FunctionClass:
    return FunctionClass(WIENER_ISO, r, d, p=p)


def sobolev_mixed(r: float, d: int) -> FunctionClass:
    return FunctionClass(SOBOLEV_MIXED, r, d)


def poly_wiener(alpha: float, r: float, p: float) -> FunctionClass:
    return FunctionClass(POLY_WIENER, r, 1, p=p, alpha=float(alpha))


def default_system(klass: FunctionClass) -> System:
    """The orthonormal family a class's coefficients refer to."""
    if klass.kind == POLY_WIENER:
        return chebyshev_system() if klass.alpha == -0.5 else legendre_raw_system()
    return fourier_system(klass.d)


def _weights(klass: FunctionClass, idx: np.ndarray) -> np.ndarray:
    idx = np.asarray(idx)
    if klass.kind == POLY_WIENER:
        return (1.0 + idx.astype(float).reshape(-1)) ** klass.r
    if idx.ndim == 1:
        idx = idx.reshape(-1, 1)
    if klass.kind in (WIENER_MIXED, SOBOLEV_MIXED):
        return np.prod((1.0 + np.abs(idx)) ** klass.r, axis=1)
    return (1.0 + np.abs(idx).max(axis=1)) ** klass.r


def index_weight(klass: FunctionClass, index) -> float:
    """The class's per-index weight; always >= 1."""
    key = _normalize_index(index)
    if klass.kind == POLY_WIENER:
        if not isinstance(key, int) or key < 0:
            raise ValueError("polynomial degrees must be nonnegative ints")
        idx = np.array([key], dtype=np.int64)
    else:
        if isinstance(key, int):
            key = (key,)
        if len(key) != klass.d:
            raise ValueError("index dimension does not match the class")
        idx = np.asarray([key], dtype=np.int64)
    return float(_weights(klass, idx)[0])


# ---------------------------------------------------------------------------
# expansions


class CoefficientExpansion:
    """A finite complex expansion sum_k c_k b_k over one system.

    Keys are d-tuples of ints for Fourier systems and plain ints for
    polynomial systems.
    """

    def __init__(self, system: System, coefficients: Mapping):
        self.system = system
        coeffs = {}
        for key, value in coefficients.items():
            norm_key = _normalize_index(key)
            if system.kind == FOURIER:
                if isinstance(norm_key, int):
                    norm_key = (norm_key,)
                if len(norm_key) != system.dim:
                    raise ValueError("index dimension does not match the system")
            else:
                if not isinstance(norm_key, int) and len(norm_key) == 1:
                    norm_key = norm_key[0]
                if not isinstance(norm_key, int) or norm_key < 0:
                    raise ValueError("polynomial degrees must be nonnegative ints")
            if norm_key in coeffs:
                raise ValueError(f"duplicate index {norm_key!r}")
            coeffs[norm_key] = complex(value)
        self.coefficients = coeffs

    def __len__(self) -> int:
        return len(self.coefficients)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CoefficientExpansion)
            and self.system == other.system
            and self.coefficients == other.coefficients
        )

    def items(self):
        return sorted(self.coefficients.items())

    def support(self) -> list:
        return sorted(self.coefficients.keys())

    def get(self, index, default=0j) -> complex:
        key = _normalize_index(index)
        if self.system.kind == FOURIER and isinstance(key, int):
            key = (key,)
        return self.coefficients.get(key, default)

    def support_array(self) -> np.ndarray:
        keys = self.support()
        if self.system.kind == FOURIER:
            if not keys:
                return np.zeros((0, self.system.dim), dtype=np.int64)
            return np.asarray(keys, dtype=np.int64)
        return np.asarray(keys, dtype=np.int64)

    def values_array(self) -> np.ndarray:
        return np.asarray([v for _, v in self.items()], dtype=np.complex128)

    def vector(self, indices) -> np.ndarray:
        """Coefficients aligned to a given index order (zeros where absent)."""
        if isinstance(indices, IndexSet):
            keys = indices.as_tuples()
        else:
            keys = [_normalize_index(k) for k in indices]
        if self.system.kind == FOURIER:
            keys = [(k,) if isinstance(k, int) else k for k in keys]
        return np.asarray([self.coefficients.get(k, 0j) for k in keys], dtype=np.complex128)

    def max_order(self) -> int:
        """Largest absolute frequency component or polynomial degree."""
        if not self.coefficients:
            return 0
        arr = self.support_array()
        return int(np.abs(arr).max())

    def scaled(self, factor: complex) -> "CoefficientExpansion":
        return CoefficientExpansion(
            self.system, {k: factor * v for k, v in self.coefficients.items()}
        )

    def l1_norm(self) -> float:
        return float(sum(abs(v) for v in self.coefficients.values()))

    def l2_norm(self) -> float:
        return float(np.sqrt(sum(abs(v) ** 2 for v in self.coefficients.values())))

    def to_json(self) -> dict:
        entries = []
        for key, value in self.items():
            idx = list(key) if isinstance(key, tuple) else [key]
            entries.append([idx, value.real, value.imag])
        return {"system": self.system.to_json(), "entries": entries}

    @staticmethod
    def from_json(obj: dict) -> "CoefficientExpansion":
        system = System.from_json(obj["system"])
        coeffs = {}
        for idx, re, im in obj["entries"]:
            key = tuple(int(v) for v in idx)
            if system.kind != FOURIER:
                key = key[0]
            coeffs[key] = complex(re, im)
        return CoefficientExpansion(system, coeffs)


def class_norm(klass: FunctionClass, f: CoefficientExpansion) -> float:
    """Weighted l1 / l2 / l^p (quasi-)norm of the coefficients."""
    if not f.coefficients:
        return 0.0
    idx = f.support_array()
    w = _weights(klass, idx)
    a = w * np.abs(f.values_array())
    if klass.kind == WIENER_MIXED:
        return float(a.sum())
    if klass.kind == SOBOLEV_MIXED:
        return float(np.sqrt((a**2).sum()))
    p = klass.p
    return float((a**p).sum() ** (1.0 / p))


def random_unit_function(
    klass: FunctionClass,
    support,
    sparsity: Optional[int] = None,
    seed: int = 0,
    system: Optional[System] = None,
    placement: str = "random",
) -> CoefficientExpansion:
    """A random member of the class's unit sphere supported on the given set.

    Coefficients are Gaussian draws divided by the index weight, then the
    whole vector is rescaled to unit class norm.  Polynomial systems use real
    Gaussians so that sample vectors stay exactly real.

    ``placement`` selects where a sparse support lands: ``"random"`` draws it
    uniformly from the given set, ``"head"`` takes the smallest-weight
    indices (ties broken toward earlier positions).  Head placement gives the
    largest-norm members the class ball has at that sparsity, which keeps
    test functions well above any noise floor; random placement spreads mass
    onto heavily down-weighted indices and can produce members with
    vanishingly small norms.
    """
    if placement not in ("random", "head"):
        raise ValueError("placement must be 'random' or 'head'")
    system = system if system is not None else default_system(klass)
    if isinstance(support, IndexSet):
        idx = support.indices()
    else:
        idx = np.asarray(support)
    idx = _index_array(system, idx)
    N = idx.shape[0]
    if N == 0:
        raise ValueError("support must be non-empty")
    rng = np.random.default_rng(seed)
    if sparsity is not None:
        if not 1 <= sparsity <= N:
            raise ValueError("sparsity must be between 1 and the support size")
        if placement == "head":
            order = np.argsort(_weights(klass, idx), kind="stable")
            sel = np.sort(order[:sparsity])
        else:
            sel = np.sort(rng.choice(N, size=sparsity, replace=False))
        idx = idx[sel]
        N = sparsity
    if system.kind == FOURIER:
        g = rng.standard_normal(N) + 1j * rng.standard_normal(N)
        w = _weights(klass, idx)
        keys = [tuple(int(v) for v in row) for row in idx]
    else:
        g = rng.standard_normal(N).astype(np.complex128)
        w = _weights(klass, idx)
        keys = [int(v) for v in idx]
    values = g / w
    f = CoefficientExpansion(system, dict(zip(keys, values)))
    norm = class_norm(klass, f)
    if norm == 0.0:
        raise ValueError("degenerate draw with zero norm")
    return f.scaled(1.0 / norm)


def evaluate_function(f: CoefficientExpansion, points):
    """Pointwise values sum_k c_k b_k(t).  Scalar in, scalar out."""
    pts = np.asarray(points, dtype=float)
    scalar = pts.ndim == 0 or (
        f.system.kind == FOURIER and pts.ndim == 1 and f.system.dim > 1
    )
    if not f.coefficients:
        if scalar:
            return 0j
        m = 1 if pts.ndim == 0 else pts.shape[0]
        return np.zeros(m, dtype=np.complex128)
    A = basis_matrix(f.system, f.support_array(), pts)
    vals = A @ f.values_array()
    if scalar:
        return complex(vals.reshape(-1)[0])
    return vals


def truncation_error_bound(klass: FunctionClass, f: CoefficientExpansion, J) -> float:
    """The l1 coefficient tail outside J, an upper bound for the uniform-norm
    truncation error of the partial sum over J."""
    tail = 0.0
    for key, value in f.coefficients.items():
        if key not in J:
            tail += abs(value)
    return float(tail)


# ---------------------------------------------------------------------------
# analytic worst-case bounds used by automatic noise-level selection


def _guarded_log(x: float) -> float:
    return float(np.log(max(x, 2.0)))


def analytic_best_term_bound(klass: FunctionClass, n: int) -> float:
    """Upper bound for the worst-case uniform-norm best n-term error over
    the class's unit ball."""
    if n < 1:
        raise ValueError("n must be >= 1")
    r = klass.r
    g = _guarded_log(n)
    if klass.kind == WIENER_MIXED:
        return n ** -(r + 0.5) * g ** ((klass.d - 1) * r + 0.5)
    if klass.kind == SOBOLEV_MIXED:
        return n**-r * g ** ((klass.d - 1) * r + 0.5)
    if klass.kind == WIENER_ISO:
        return n ** -(r / klass.d + 1.0 / klass.p - 0.5)
    if klass.alpha == -0.5:
        return n ** -(r + 1.0 / klass.p - 0.5)
    return n ** -(r + 1.0 / klass.p - 1.0)


def _tail_power_sum(s: float, start: int) -> float:
    """Upper bound for sum_{i >= start} i^(-s), s > 1."""
    cutoff = start + 50_000
    i = np.arange(start, cutoff)
    partial = float((i.astype(float) ** -s).sum())
    remainder = cutoff ** -s + cutoff ** (1.0 - s) / (s - 1.0)
    return partial + remainder


def analytic_tail_bound(klass: FunctionClass, M: int) -> float:
    """Upper bound for the unit ball's l1 coefficient tail outside the box
    (or degree range) of parameter M."""
    if M < 1:
        raise ValueError("M must be >= 1")
    r = klass.r
    if klass.kind == WIENER_MIXED:
        return float(M**-r)
    if klass.kind in (WIENER_ISO, POLY_WIENER):
        return float((1.0 + M) ** -r)
    # sobolev_mixed: Cauchy-Schwarz against the weight, tail of the weight
    # series bounded from above
    S = 1.0 + 2.0 * _tail_power_sum(2.0 * r, 2)
    T = 2.0 * _tail_power_sum(2.0 * r, M + 2)
    inner = max(S - T, 0.0)
    return float(np.sqrt(max(S**klass.d - inner**klass.d, 0.0)))


# ---------------------------------------------------------------------------
# quadrature norms (cross-checks for Parseval identities)


def quadrature_l2_norm(f: CoefficientExpansion, num_nodes: Optional[int] = None) -> float:
    """L2 norm of the expansion in the system's orthogonality measure,
    computed by quadrature rather than through Parseval."""
    kind = f.system.kind
    order = f.max_order()
    if kind == FOURIER:
        nodes = num_nodes if num_nodes is not None else 2 * order + 1
        axes = [np.arange(nodes) / nodes] * f.system.dim
        grid = np.meshgrid(*axes, indexing="ij")
        pts = np.stack(grid, axis=-1).reshape(-1, f.system.dim)
        vals = evaluate_function(f, pts)
        return float(np.sqrt(np.mean(np.abs(vals) ** 2)))
    if kind == LEGENDRE_RAW:
        nodes = num_nodes if num_nodes is not None else 2 * order + 8
        x, w = leggauss(nodes)
        vals = evaluate_function(f, x)
        return float(np.sqrt(np.sum(w * np.abs(vals) ** 2)))
    # arcsine-measure systems: substitute x = cos(pi*theta); the pushforward
    # of the uniform theta-measure is exactly the arcsine measure
    nodes = num_nodes if num_nodes is not None else 4 * order + 64
    t, w = leggauss(nodes)
    theta = 0.5 * (t + 1.0)
    x = np.cos(np.pi * theta)
    vals = evaluate_function(f, x)
    return float(np.sqrt(np.sum(0.5 * w * np.abs(vals) ** 2)))

"""Bounded orthonormal systems, index sets, sampling plans, and quadrature.

Four families are supported:

* ``fourier``: complex exponentials exp(2*pi*i*<k, x>) on the torus [0, 1)^d,
  orthonormal for the uniform measure, uniform bound 1.
* ``chebyshev``: 1 and sqrt(2)*cos(n*arccos x) on [-1, 1], orthonormal for
  the arcsine measure (1/pi)*(1-x^2)^(-1/2) dx, uniform bound sqrt(2).
* ``legendre_preconditioned``: w(x)*L_n(x) with weight
  w(x) = sqrt(pi)*(1-x^2)^(1/4) and L_n = sqrt(n+1/2)*P_n the normalized
  Legendre polynomial; orthonormal for the arcsine measure, uniform
  bound 4*sqrt(pi).
* ``legendre_raw``: the normalized Legendre polynomials L_n themselves.
  Orthonormal for the Lebesgue measure on [-1, 1] but with no uniform bound,
  hence excluded from measurement-matrix construction; points are sampled
  uniformly on [-1, 1].
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from numpy.polynomial.chebyshev import chebgauss
from numpy.polynomial.legendre import leggauss, legvander

FOURIER = "fourier"
CHEBYSHEV = "chebyshev"
LEGENDRE_PRECONDITIONED = "legendre_preconditioned"
LEGENDRE_RAW = "legendre_raw"

_POLYNOMIAL_KINDS = (CHEBYSHEV, LEGENDRE_PRECONDITIONED, LEGENDRE_RAW)
_ALL_KINDS = (FOURIER,) + _POLYNOMIAL_KINDS

BOX = "box"
SEARCH_BOX = "search_box"
DEGREES = "degrees"
EXPLICIT = "explicit"


class UnboundedSystemError(ValueError):
    """An operation required a finite uniform bound and the system has none."""


class ResolutionError(ValueError):
    """A quadrature rule cannot resolve the requested index range."""


@dataclass(frozen=True)
class System:
    """Descriptor of an orthonormal system: family tag plus torus dimension.

    ``dim`` is only meaningful for the Fourier family; polynomial families
    are univariate.
    """

    kind: str
    dim: int = 1

    def __post_init__(self) -> None:
        if self.kind not in _ALL_KINDS:
            raise ValueError(f"unknown system kind: {self.kind!r}")
        if self.dim < 1:
            raise ValueError("system dimension must be >= 1")
        if self.kind != FOURIER and self.dim != 1:
            raise ValueError("polynomial systems are univariate")

    @property
    def is_polynomial(self) -> bool:
        return self.kind in _POLYNOMIAL_KINDS

    @property
    def measure(self) -> str:
        """Tag of the probability measure used for point sampling."""
        if self.kind == FOURIER:
            return "uniform-torus"
        if self.kind == LEGENDRE_RAW:
            return "uniform-interval"
        return "arcsine"

    def to_json(self) -> dict:
        return {"kind": self.kind, "dim": self.dim}

    @staticmethod
    def from_json(obj: dict) -> "System":
        return System(str(obj["kind"]), int(obj.get("dim", 1)))


def fourier_system(dim: int = 1) -> System:
    return System(FOURIER, dim)


def chebyshev_system() -> System:
    return System(CHEBYSHEV)


def legendre_preconditioned_system() -> System:
    return System(LEGENDRE_PRECONDITIONED)


def legendre_raw_system() -> System:
    return System(LEGENDRE_RAW)


def uniform_bound(system: System) -> float:
    """Uniform sup-norm bound K of the system's basis functions."""
    if system.kind == FOURIER:
        return 1.0
    if system.kind == CHEBYSHEV:
        return float(np.sqrt(2.0))
    if system.kind == LEGENDRE_PRECONDITIONED:
        return float(4.0 * np.sqrt(np.pi))
    raise UnboundedSystemError("raw Legendre polynomials have no uniform bound")


# ---------------------------------------------------------------------------
# index sets


def _normalize_index(index) -> Union[int, tuple]:
    if isinstance(index, (int, np.integer)):
        return int(index)
    arr = np.asarray(index)
    if arr.ndim == 0:
        return int(arr)
    return tuple(int(v) for v in arr)


@dataclass(frozen=True)
class IndexSet:
    """A finite family of frequency vectors or polynomial degrees.

    Kinds: ``box`` (max-norm ball of radius M in Z^d), ``search_box``
    (radius (2d+1)*M, the enlarged box quasi-projections map into),
    ``degrees`` (0..M), and ``explicit`` (a fixed list).
    """

    kind: str
    d: int = 1
    M: int = 0
    members: Optional[tuple] = None

    @property
    def half_width(self) -> int:
        """Max-norm radius of the box kinds."""
        if self.kind == BOX:
            return self.M
        if self.kind == SEARCH_BOX:
            return (2 * self.d + 1) * self.M
        raise ValueError(f"half_width is undefined for kind {self.kind!r}")

    def __len__(self) -> int:
        if self.kind in (BOX, SEARCH_BOX):
            return (2 * self.half_width + 1) ** self.d
        if self.kind == DEGREES:
            return self.M + 1
        return len(self.members)

    def __contains__(self, index) -> bool:
        key = _normalize_index(index)
        if self.kind in (BOX, SEARCH_BOX):
            if not isinstance(key, tuple) or len(key) != self.d:
                return False
            return max(abs(k) for k in key) <= self.half_width
        if self.kind == DEGREES:
            return isinstance(key, int) and 0 <= key <= self.M
        return key in self._member_set()

    def _member_set(self):
        return frozenset(self.members)

    def indices(self) -> np.ndarray:
        """All indices as an array: shape (N, d) for boxes, (N,) for degrees."""
        if self.kind in (BOX, SEARCH_BOX):
            R = self.half_width
            axes = [np.arange(-R, R + 1)] * self.d
            grid = np.meshgrid(*axes, indexing="ij")
            return np.stack(grid, axis=-1).reshape(-1, self.d)
        if self.kind == DEGREES:
            return np.arange(self.M + 1)
        arr = np.asarray(self.members)
        return arr

    def as_tuples(self) -> list:
        arr = self.indices()
        if arr.ndim == 1:
            return [int(v) for v in arr]
        return [tuple(int(v) for v in row) for row in arr]


def make_index_set(kind: str, d: int = 1, M: int = 1) -> IndexSet:
    """Build one of the standard index families.

    ``box``: {k in Z^d : |k|_inf <= M}, cardinality (2M+1)^d.
    ``search_box``: {k in Z^d : |k|_inf <= (2d+1)M}, cardinality
    (2(2d+1)M+1)^d.
    ``degrees``: {0, ..., M}.
    """
    if kind not in (BOX, SEARCH_BOX, DEGREES):
        raise ValueError(f"unknown index-set kind: {kind!r}")
    if d < 1 or M < 1:
        raise ValueError("index sets need d >= 1 and M >= 1")
    if kind == DEGREES:
        return IndexSet(DEGREES, 1, M)
    return IndexSet(kind, d, M)


def explicit_index_set(members: Iterable) -> IndexSet:
    keys = [_normalize_index(m) for m in members]
    if len(set(keys)) != len(keys):
        raise ValueError("explicit index set contains duplicates")
    return IndexSet(EXPLICIT, members=tuple(keys))


# ---------------------------------------------------------------------------
# evaluation


def _point_array(system: System, points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if system.kind == FOURIER:
        d = system.dim
        if pts.ndim == 0:
            pts = pts.reshape(1, 1)
        elif pts.ndim == 1:
            if d == 1:
                pts = pts[:, None]
            elif pts.shape[0] == d:
                pts = pts[None, :]
            else:
                raise ValueError("point dimension does not match the system")
        if pts.ndim != 2 or pts.shape[1] != d:
            raise ValueError("point dimension does not match the system")
        return np.mod(pts, 1.0)
    pts = np.atleast_1d(pts)
    if pts.ndim != 1:
        raise ValueError("polynomial systems take scalar points in [-1, 1]")
    if np.any(np.abs(pts) > 1.0 + 1e-12):
        raise ValueError("point outside the domain [-1, 1]")
    return np.clip(pts, -1.0, 1.0)


def _index_array(system: System, indices) -> np.ndarray:
    if isinstance(indices, IndexSet):
        arr = indices.indices()
    else:
        arr = np.asarray(indices)
    if system.kind == FOURIER:
        d = system.dim
        if arr.ndim == 1:
            if d == 1:
                arr = arr.reshape(-1, 1)
            elif arr.shape[0] == d:
                arr = arr.reshape(1, d)
            else:
                raise ValueError("index dimension does not match the system")
        if arr.ndim != 2 or arr.shape[1] != d:
            raise ValueError("index dimension does not match the system")
        return arr.astype(np.int64)
    arr = np.atleast_1d(arr)
    if arr.ndim != 1:
        raise ValueError("polynomial systems use scalar degree indices")
    arr = arr.astype(np.int64)
    if np.any(arr < 0):
        raise ValueError("polynomial degrees must be nonnegative")
    return arr


def _clamp_unit_modulus(A: np.ndarray) -> np.ndarray:
    # the exact basis values lie on the unit circle; rounding can push the
    # computed pair one ulp outside, which would break the bound |b| <= 1
    for _ in range(4):
        a = np.abs(A)
        if not np.any(a > 1.0):
            break
        np.divide(A, np.maximum(a, 1.0), out=A)
    return A


def basis_matrix(system: System, indices, points) -> np.ndarray:
    """Evaluate basis functions on points: entry (l, j) = b_{j}(t_l).

    Fourier matrices are complex; polynomial matrices are real float64.
    """
    pts = _point_array(system, points)
    idx = _index_array(system, indices)
    if system.kind == FOURIER:
        A = np.exp(2j * np.pi * (pts @ idx.T))
        return _clamp_unit_modulus(A)
    if system.kind == CHEBYSHEV:
        theta = np.arccos(pts)
        A = np.cos(theta[:, None] * idx[None, :])
        A *= np.where(idx == 0, 1.0, np.sqrt(2.0))
        return A
    max_degree = int(idx.max()) if idx.size else 0
    V = legvander(pts, max_degree)
    A = V[:, idx] * np.sqrt(idx + 0.5)
    if system.kind == LEGENDRE_PRECONDITIONED:
        A = A * (np.sqrt(np.pi) * (1.0 - pts**2) ** 0.25)[:, None]
    return A


def evaluate_basis(system: System, index, point) -> complex:
    """Value of one basis function at one point."""
    if system.kind == FOURIER:
        idx = np.asarray(_normalize_index(index), dtype=np.int64).reshape(1, -1)
    else:
        key = _normalize_index(index)
        if not isinstance(key, int):
            raise ValueError("polynomial systems use integer degree indices")
        idx = np.array([key])
    A = basis_matrix(system, idx, point)
    return complex(A.reshape(-1)[0])


# ---------------------------------------------------------------------------
# sampling


@dataclass(frozen=True)
class SamplePlan:
    """How to draw sample points: i.i.d. from the system's measure, or
    i.i.d. uniform from the torus grid (1/(2D+1))*{0,...,2D}^d."""

    seed: int
    mode: str = "continuous"
    grid_size: Optional[int] = None

    def __post_init__(self) -> None:
        if self.mode not in ("continuous", "grid"):
            raise ValueError(f"unknown sampling mode: {self.mode!r}")
        if self.mode == "grid" and (self.grid_size is None or self.grid_size < 1):
            raise ValueError("grid sampling needs grid_size >= 1")


def draw_points(system: System, m: int, plan: SamplePlan) -> np.ndarray:
    """Draw m sample points; deterministic given the plan's seed.

    Returns shape (m, d) for Fourier systems and (m,) for polynomial ones.
    """
    if m < 1:
        raise ValueError("need at least one sample point")
    rng = np.random.default_rng(plan.seed)
    if plan.mode == "grid":
        if system.kind != FOURIER:
            raise ValueError("grid sampling is only defined on the torus")
        q = 2 * plan.grid_size + 1
        return rng.integers(0, q, size=(m, system.dim)) / q
    if system.kind == FOURIER:
        return rng.random((m, system.dim))
    if system.kind == LEGENDRE_RAW:
        return 2.0 * rng.random(m) - 1.0
    # arcsine measure via the inverse transform x = cos(pi * u)
    return np.cos(np.pi * rng.random(m))


# ---------------------------------------------------------------------------
# quadrature


def _fourier_gram(dim: int, idx: np.ndarray, num_nodes: Optional[int]) -> np.ndarray:
    max_freq = int(np.abs(idx).max()) if idx.size else 0
    nodes = num_nodes if num_nodes is not None else 4 * max_freq + 1
    if nodes <= 2 * max_freq:
        raise ResolutionError(
            f"{nodes} nodes per axis cannot resolve frequencies up to {max_freq}"
        )
    t = np.arange(nodes) / nodes
    G = None
    for ax in range(dim):
        ka = idx[:, ax]
        uniq, inv = np.unique(ka, return_inverse=True)
        E = np.exp(2j * np.pi * np.outer(uniq, t))
        Gu = (E @ E.conj().T) / nodes
        # exact values are 0 or 1; the imaginary residue is rounding noise
        Ga = Gu.real[np.ix_(inv, inv)]
        if G is None:
            G = Ga
        else:
            G *= Ga
            del Ga
    return G.astype(np.complex128)


def _poly_gram(system: System, idx: np.ndarray, num_nodes: Optional[int]) -> np.ndarray:
    max_degree = int(idx.max()) if idx.size else 0
    nodes = num_nodes if num_nodes is not None else 2 * max_degree + 8
    if nodes < max_degree + 1:
        raise ResolutionError(
            f"{nodes} nodes cannot resolve polynomial degree {max_degree}"
        )
    if system.kind == CHEBYSHEV:
        x, w = chebgauss(nodes)
        B = basis_matrix(system, idx, x)
        G = (B.T * (w / np.pi)) @ B
    else:
        # both Legendre variants reduce to Lebesgue integrals of L_i * L_j:
        # for the preconditioned system the weight w(x)^2 cancels the
        # arcsine density exactly
        x, w = leggauss(nodes)
        B = basis_matrix(legendre_raw_system(), idx, x)
        G = (B.T * w) @ B
    return G.astype(np.complex128)


def gram_matrix(system: System, indices, num_nodes: Optional[int] = None) -> np.ndarray:
    """Gram matrix <b_i, b_j> in L2 of the system's orthogonality measure,
    computed by quadrature.  ``num_nodes`` is per axis for Fourier systems;
    defaults resolve the index set exactly."""
    idx = _index_array(system, indices)
    if system.kind == FOURIER:
        return _fourier_gram(system.dim, idx, num_nodes)
    return _poly_gram(system, idx, num_nodes)

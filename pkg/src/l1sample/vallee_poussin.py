"""Trapezoidal frequency filters and their kernels.

The univariate filter with parameters n >= m >= 0 multiplies the k-th
Fourier coefficient by

    a_k = 1                               |k| <= n - m,
    a_k = (n + m + 1 - |k|) / (2m + 1)    n - m < |k| <= n + m,
    a_k = 0                               otherwise,

so it reproduces trigonometric polynomials of degree n - m and cuts off at
degree n + m.  m = 0 gives the raw Fourier partial sum, m = n the Fejer
mean.  Multivariate filters are coordinatewise products; the standard
tensor pair for a box of radius M in d dimensions is
(n, m) = ((d+1)M, dM), whose kernel has L1 norm below e uniformly in d
and M.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .classes import CoefficientExpansion
from .systems import (
    CHEBYSHEV,
    FOURIER,
    ResolutionError,
    chebyshev_system,
    fourier_system,
)


def dlvp_coeff(n: int, m: int, k: int) -> float:
    """Univariate filter coefficient a_k for parameters (n, m)."""
    if not 0 <= m <= n:
        raise ValueError("need 0 <= m <= n")
    a = abs(int(k))
    if a <= n - m:
        return 1.0
    if a <= n + m:
        return (n + m + 1 - a) / (2 * m + 1)
    return 0.0


def tensor_dlvp_coeff(d: int, M: int, k) -> float:
    """Tensor filter coefficient for the pair ((d+1)M, dM) at k in Z^d."""
    return DlvpSpec.tensor(d, M).coeff(k)


@dataclass(frozen=True)
class DlvpSpec:
    """A coordinatewise product of d copies of the (n, m) filter."""

    n: int
    m: int
    d: int = 1

    def __post_init__(self) -> None:
        if not 0 <= self.m <= self.n:
            raise ValueError("need 0 <= m <= n")
        if self.d < 1:
            raise ValueError("dimension must be >= 1")

    @staticmethod
    def univariate(n: int, m: int) -> "DlvpSpec":
        return DlvpSpec(n, m, 1)

    @staticmethod
    def tensor(d: int, M: int) -> "DlvpSpec":
        """The pair (n, m) = ((d+1)M, dM) reproducing the box of radius M."""
        if M < 1:
            raise ValueError("M must be >= 1")
        return DlvpSpec((d + 1) * M, d * M, d)

    @property
    def support_radius(self) -> int:
        """Largest per-axis frequency the filter passes."""
        return self.n + self.m

    @property
    def reproduction_radius(self) -> int:
        """Largest per-axis frequency kept with coefficient exactly 1."""
        return self.n - self.m

    def coeff(self, k) -> float:
        ks = np.atleast_1d(np.asarray(k, dtype=np.int64))
        if ks.shape != (self.d,):
            raise ValueError("index dimension does not match the filter")
        out = 1.0
        for comp in ks:
            out *= dlvp_coeff(self.n, self.m, int(comp))
            if out == 0.0:
                return 0.0
        return out

    def l1_norm_bound(self) -> float:
        """Closed-form bound ((2n+1)/(2m+1))^d for the kernel's L1 norm."""
        return ((2 * self.n + 1) / (2 * self.m + 1)) ** self.d


def apply_quasi_projection(spec: DlvpSpec, f: CoefficientExpansion) -> CoefficientExpansion:
    """Multiply each Fourier coefficient by its filter value.

    Indices with filter value 0 are dropped; coefficients in the
    reproduction region are kept bitwise, with no float multiply.
    """
    if f.system.kind != FOURIER:
        raise ValueError("the frequency filter acts on Fourier expansions")
    if f.system.dim != spec.d:
        raise ValueError("filter dimension does not match the expansion")
    out = {}
    for key, value in f.coefficients.items():
        a = spec.coeff(key)
        if a == 0.0:
            continue
        out[key] = value if a == 1.0 else a * value
    return CoefficientExpansion(f.system, out)


def kernel_values(spec: DlvpSpec, x) -> np.ndarray:
    """Univariate kernel K(x) = 1 + 2 sum_k a_k cos(2 pi k x)."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    freqs = np.arange(1, spec.support_radius + 1)
    if freqs.size == 0:
        return np.ones_like(xs)
    a = np.array([dlvp_coeff(spec.n, spec.m, int(k)) for k in freqs])
    return 1.0 + 2.0 * np.cos(2.0 * np.pi * np.outer(xs, freqs)) @ a


def kernel_l1_norm(spec: DlvpSpec, num_nodes: Optional[int] = None) -> float:
    """L1([0,1)^d) norm of the convolution kernel.

    Computed as the d-th power of the univariate norm; the univariate
    integral of |K| uses the periodic trapezoid rule.  The node count must
    resolve the kernel's top frequency with margin.
    """
    deg = spec.support_radius
    floor = 8 * deg + 1
    nodes = num_nodes if num_nodes is not None else 32 * deg + 1
    if nodes < floor:
        raise ResolutionError(
            f"{nodes} nodes cannot resolve the kernel of degree {deg}; need >= {floor}"
        )
    t = np.arange(nodes) / nodes
    univariate = float(np.mean(np.abs(kernel_values(spec, t))))
    return univariate**spec.d


# ---------------------------------------------------------------------------
# cosine <-> exponential coefficient maps


def chebyshev_lift(f: CoefficientExpansion) -> CoefficientExpansion:
    """Rewrite a Chebyshev expansion as a univariate Fourier expansion.

    Substituting x = cos(2 pi t) turns sqrt(2) cos(n arccos x) into
    (exp(2 pi i n t) + exp(-2 pi i n t)) / sqrt(2), so degree n maps to the
    frequency pair +-n with coefficients beta_n / sqrt(2); the constant term
    maps to frequency 0 unchanged.  The map preserves l2 norms.
    """
    if f.system.kind != CHEBYSHEV:
        raise ValueError("lift is defined for Chebyshev expansions")
    out = {}
    for deg, value in f.coefficients.items():
        if deg == 0:
            out[(0,)] = value
        else:
            half = value / np.sqrt(2.0)
            out[(deg,)] = half
            out[(-deg,)] = half
    return CoefficientExpansion(fourier_system(1), out)


def chebyshev_unlift(g: CoefficientExpansion, tol: float = 1e-12) -> CoefficientExpansion:
    """Inverse of the lift; requires an even spectrum f(-n) == f(n)."""
    if g.system.kind != FOURIER or g.system.dim != 1:
        raise ValueError("unlift takes univariate Fourier expansions")
    scale = max(1.0, max((abs(v) for v in g.coefficients.values()), default=0.0))
    out = {}
    for key, value in g.coefficients.items():
        (k,) = key
        if k < 0:
            continue
        if k == 0:
            out[0] = value
            continue
        mirror = g.coefficients.get((-k,), 0j)
        if abs(mirror - value) > tol * scale:
            raise ValueError("spectrum is not even; no Chebyshev preimage")
        out[k] = value * np.sqrt(2.0)
    for key in g.coefficients:
        (k,) = key
        if k < 0 and (-k,) not in g.coefficients:
            raise ValueError("spectrum is not even; no Chebyshev preimage")
    return CoefficientExpansion(chebyshev_system(), out)

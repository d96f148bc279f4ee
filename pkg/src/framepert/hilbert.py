"""Finite frames, frame sequences and Riesz sequences in R^d.

A family of N vectors in R^d is stored as an N x d array, one vector per
row; :func:`synthesis` gives the d x N matrix with one vector per column.
All bounds returned here are the optimal ones.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import numerics as nx
from .errors import DimensionMismatch, LengthMismatch, ZeroFamily

__all__ = [
    "VectorFamily",
    "FrameBounds",
    "Verdict",
    "synthesis",
    "frame_operator",
    "frame_bounds",
    "frame_sequence_bounds",
    "canonical_dual",
    "verify_dual_pair",
    "riesz_bounds",
    "excess",
    "gap",
    "gap_details",
    "bessel_bound",
    "span_basis",
    "span_projector",
]

GAP_SLACK = 1e-12


class VectorFamily:
    """Ordered, non-empty list of vectors of a common dimension.

    Zero vectors are allowed.  The underlying array is read-only.
    """

    __slots__ = ("_v",)

    def __init__(self, vectors, dimension=None):
        v = np.array(vectors, dtype=float)
        if v.ndim == 1:
            v = v[None, :]
        if v.ndim != 2 or v.shape[0] == 0:
            raise ValueError("a family needs at least one vector")
        if dimension is not None and v.shape[1] != dimension:
            raise DimensionMismatch(f"vectors have length {v.shape[1]}, expected {dimension}")
        if v.shape[1] == 0:
            raise ValueError("vectors must have positive length")
        if not np.all(np.isfinite(v)):
            raise ValueError("family has non-finite entries")
        v.setflags(write=False)
        self._v = v

    @classmethod
    def from_columns(cls, m):
        return cls(np.asarray(m, dtype=float).T)

    @property
    def vectors(self) -> np.ndarray:
        return self._v

    @property
    def dimension(self) -> int:
        return self._v.shape[1]

    def __len__(self):
        return self._v.shape[0]

    def __getitem__(self, k):
        return self._v[k]

    def __iter__(self):
        return iter(self._v)

    def __sub__(self, other):
        _check_compatible(self, other)
        return VectorFamily(self._v - other.vectors)

    def __add__(self, other):
        _check_compatible(self, other)
        return VectorFamily(self._v + other.vectors)

    def norms(self) -> np.ndarray:
        return np.sqrt(np.sum(self._v**2, axis=1))

    def transform(self, q) -> "VectorFamily":
        """Apply the linear map ``q`` (d' x d) to every vector."""
        return VectorFamily(self._v @ np.asarray(q, dtype=float).T)

    def __repr__(self):
        return f"VectorFamily(N={len(self)}, d={self.dimension})"


@dataclass(frozen=True)
class FrameBounds:
    lower: float
    upper: float

    def __post_init__(self):
        if not (np.isfinite(self.lower) and np.isfinite(self.upper)):
            raise ValueError(f"bounds must be finite: {self}")
        if self.lower < 0 or self.upper < self.lower:
            raise ValueError(f"need 0 <= lower <= upper, got {self.lower}, {self.upper}")

    def encloses(self, other: "FrameBounds", slack=1e-9) -> bool:
        return self.lower <= other.lower + slack and other.upper <= self.upper + slack

    def as_list(self):
        return [self.lower, self.upper]


class Verdict(NamedTuple):
    bounds: FrameBounds
    holds: bool


def _check_compatible(f, g):
    if f.dimension != g.dimension:
        raise DimensionMismatch(f"dimensions differ: {f.dimension} vs {g.dimension}")
    if len(f) != len(g):
        raise LengthMismatch(f"family lengths differ: {len(f)} vs {len(g)}")


def _bounds(lo, hi):
    # clip round-off below zero and keep lo <= hi
    lo = max(float(lo), 0.0)
    hi = max(float(hi), lo)
    return FrameBounds(lo, hi)


def synthesis(fam: VectorFamily) -> np.ndarray:
    """d x N synthesis (pre-frame) operator; column k is vector k."""
    return fam.vectors.T.copy()


def frame_operator(fam: VectorFamily) -> np.ndarray:
    t = fam.vectors.T
    s = t @ t.T
    return 0.5 * (s + s.T)


def frame_bounds(fam: VectorFamily) -> Verdict:
    """Optimal frame bounds (extreme eigenvalues of S) and whether fam spans R^d."""
    w = nx.sym_eig(frame_operator(fam)).eigenvalues
    lo, hi = w[0], w[-1]
    return Verdict(_bounds(lo, hi), bool(hi > 0 and lo > nx.RANK_TOL * hi))


def _span_spectrum(fam: VectorFamily):
    # ONB of span(fam) as columns together with the nonzero eigenvalues of S
    # on that span, both read off a one-sided Jacobi SVD of T^T.
    sigma, _, v = nx.svd_jacobi(fam.vectors)
    if sigma[0] == 0.0:
        return np.zeros((fam.dimension, 0)), np.zeros(0)
    r = int(np.count_nonzero(sigma > nx.RANK_TOL * sigma[0]))
    return v[:, :r], sigma[:r] ** 2


def span_basis(fam: VectorFamily) -> np.ndarray:
    return _span_spectrum(fam)[0]


def span_projector(fam: VectorFamily) -> np.ndarray:
    u = span_basis(fam)
    return u @ u.T


def frame_sequence_bounds(fam: VectorFamily) -> FrameBounds:
    """Frame bounds of fam as a frame for its own span."""
    _, lam = _span_spectrum(fam)
    if lam.size == 0:
        raise ZeroFamily("all vectors are zero")
    return _bounds(lam.min(), lam.max())


def canonical_dual(fam: VectorFamily) -> VectorFamily:
    """Canonical dual {S^+ f_k}, S inverted on span(fam)."""
    u, lam = _span_spectrum(fam)
    if lam.size == 0:
        return VectorFamily(np.zeros_like(fam.vectors))
    s_pinv = (u / lam) @ u.T
    return VectorFamily(fam.vectors @ s_pinv)


def verify_dual_pair(f: VectorFamily, g: VectorFamily) -> float:
    """Spectral-norm distance of sum_k g_k f_k^T from the projector onto span(f)."""
    _check_compatible(f, g)
    m = g.vectors.T @ f.vectors
    return nx.op_norm_p(m - span_projector(f), 2)


def riesz_bounds(fam: VectorFamily) -> Verdict:
    """Optimal Riesz bounds; the lower one is 0 when N > d."""
    sv = nx.singular_values(fam.vectors.T)
    n, d = fam.vectors.shape
    hi = sv[0] ** 2
    lo = 0.0 if n > d else sv[n - 1] ** 2
    return Verdict(_bounds(lo, hi), bool(hi > 0 and lo > nx.RANK_TOL * hi))


def excess(fam: VectorFamily) -> int:
    return len(fam) - nx.rank(fam.vectors)


def gap_details(k_fam: VectorFamily, l_fam: VectorFamily):
    """Return ``(delta, U_K, U_L)`` for the gap from span(k_fam) to span(l_fam)."""
    if k_fam.dimension != l_fam.dimension:
        raise DimensionMismatch("families live in different dimensions")
    uk = span_basis(k_fam)
    ul = span_basis(l_fam)
    if uk.shape[1] == 0:
        return 0.0, uk, ul
    resid = uk - ul @ (ul.T @ uk)
    delta = nx.op_norm_p(resid, 2)
    if delta > 1.0 + GAP_SLACK:
        raise ArithmeticError(f"gap {delta} exceeds 1")
    return min(delta, 1.0), uk, ul


def gap(k_fam: VectorFamily, l_fam: VectorFamily) -> float:
    """Gap delta(K, L) = sup over unit x in K of dist(x, L).  Directional."""
    return gap_details(k_fam, l_fam)[0]


def bessel_bound(fam: VectorFamily) -> float:
    """Smallest M with sum |<f, u_k>|^2 <= M |f|^2."""
    return max(float(nx.sym_eig(frame_operator(fam)).eigenvalues[-1]), 0.0)

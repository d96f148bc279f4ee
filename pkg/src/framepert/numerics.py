"""Dense small-matrix kernels.

Symmetric eigenproblems are solved with cyclic two-sided Jacobi; singular
values, ranks and spans come from one-sided (Hestenes) Jacobi applied
directly to the matrix, so tiny singular values keep their relative
accuracy instead of being squared away through a Gram matrix.  Both
kernels are compiled with numba.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
from numba import njit

from .errors import NoConvergence, NonSymmetric, Singular, UnsupportedNorm

__all__ = [
    "Spectrum",
    "as_matrix",
    "sym_eig",
    "svd_jacobi",
    "singular_values",
    "rank",
    "orthonormal_span",
    "projector",
    "op_norm_p",
    "vector_norm_p",
    "dual_exponent",
    "solve",
    "RANK_TOL",
]

RANK_TOL = 1e-10
OFF_TOL = 1e-14
MAX_SWEEPS = 100
SYM_TOL = 1e-12
SOLVE_TOL = 1e-8


class Spectrum(NamedTuple):
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # orthonormal columns


def as_matrix(m, name="matrix") -> np.ndarray:
    """Validate and convert to a finite 2-D float array (copy-free when possible)."""
    a = np.asarray(m, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"{name} must have at least one row and column")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


@njit(cache=True)
def _jacobi_eig(a, tol, max_sweeps):
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n)
    scale = np.sqrt(np.sum(a * a))
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j] * a[i, j]
        if np.sqrt(off) <= tol * scale:
            return np.diag(a).copy(), v, True
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    return np.diag(a).copy(), v, False


@njit(cache=True)
def _hestenes(a, tol, max_sweeps):
    # Orthogonalise the columns of a by plane rotations: a @ v = u, with the
    # columns of u mutually orthogonal and v orthogonal.
    m, n = a.shape
    u = a.copy()
    v = np.eye(n)
    # columns below tol * |a|_F are noise; rotating them cannot converge
    # once their squared norms underflow
    floor = tol * tol * np.sum(a * a)
    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = 0.0
                beta = 0.0
                gamma = 0.0
                for k in range(m):
                    alpha += u[k, p] * u[k, p]
                    beta += u[k, q] * u[k, q]
                    gamma += u[k, p] * u[k, q]
                if gamma == 0.0 or alpha <= floor or beta <= floor:
                    continue
                if abs(gamma) <= tol * np.sqrt(alpha) * np.sqrt(beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                if zeta >= 0.0:
                    t = 1.0 / (zeta + np.sqrt(1.0 + zeta * zeta))
                else:
                    t = -1.0 / (-zeta + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                for k in range(m):
                    ukp = u[k, p]
                    ukq = u[k, q]
                    u[k, p] = c * ukp - s * ukq
                    u[k, q] = s * ukp + c * ukq
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
        if not rotated:
            return u, v, True
    return u, v, False


def _binary_exponent(x) -> int:
    # Exact power-of-two rescaling keeps the kernels clear of under/overflow.
    return int(np.frexp(x)[1]) if x > 0 else 0


def sym_eig(s) -> Spectrum:
    """Eigendecomposition of a symmetric matrix, eigenvalues ascending.

    Raises NonSymmetric when ``s`` is not symmetric to 1e-12 relative, and
    NoConvergence when the Jacobi sweep cap is exhausted.
    """
    s = as_matrix(s)
    if s.shape[0] != s.shape[1]:
        raise NonSymmetric(f"matrix is not square: {s.shape}")
    scale = np.max(np.abs(s))
    if np.max(np.abs(s - s.T)) > SYM_TOL * scale:
        raise NonSymmetric("matrix is not symmetric to tolerance")
    e = _binary_exponent(scale)
    w, v, ok = _jacobi_eig(np.ascontiguousarray(np.ldexp(0.5 * (s + s.T), -e)), OFF_TOL, MAX_SWEEPS)
    if not ok:
        raise NoConvergence(f"Jacobi did not converge in {MAX_SWEEPS} sweeps")
    w = np.ldexp(w, e)
    order = np.argsort(w, kind="stable")
    return Spectrum(w[order], v[:, order])


def svd_jacobi(a):
    """One-sided Jacobi SVD of ``a`` (m x n).

    Returns ``(sigma, w, v)`` with ``a @ v == w``, columns of ``w`` mutually
    orthogonal with norms ``sigma`` (descending) and ``v`` orthogonal n x n.
    Cost is O(n^2 m) per sweep, so pass the orientation with fewer columns.
    """
    a = as_matrix(a)
    e = _binary_exponent(np.max(np.abs(a)))
    w, v, ok = _hestenes(np.ascontiguousarray(np.ldexp(a, -e)), OFF_TOL, MAX_SWEEPS)
    if not ok:
        raise NoConvergence(f"one-sided Jacobi did not converge in {MAX_SWEEPS} sweeps")
    sigma = np.ldexp(np.sqrt(np.sum(w * w, axis=0)), e)
    w = np.ldexp(w, e)
    order = np.argsort(-sigma, kind="stable")
    return sigma[order], w[:, order], v[:, order]


def singular_values(m) -> np.ndarray:
    """Descending singular values, ``min(rows, cols)`` of them."""
    m = as_matrix(m)
    if m.shape[1] > m.shape[0]:
        m = m.T
    return svd_jacobi(m)[0]


def rank(m, rel_tol=RANK_TOL) -> int:
    """Number of singular values above ``rel_tol * sigma_max``; 0 for the zero matrix."""
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    sv = singular_values(m)
    if sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > rel_tol * sv[0]))


def orthonormal_span(vectors, rel_tol=RANK_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of the span of the columns of ``vectors``.

    ``vectors`` is d x N with one vector per column.  The result is d x r,
    r the numerical rank; r may be 0.
    """
    a = as_matrix(vectors)
    d = a.shape[0]
    # Left singular vectors of a are the right ones of a.T, which has only
    # d columns however many vectors there are.
    sigma, _, v = svd_jacobi(a.T)
    if sigma[0] == 0.0:
        return np.zeros((d, 0))
    r = int(np.count_nonzero(sigma > rel_tol * sigma[0]))
    return v[:, :r].copy()


def projector(basis: np.ndarray) -> np.ndarray:
    """Orthogonal projector onto the span of orthonormal columns."""
    return basis @ basis.T


def _check_p(p):
    if p in (1, 2):
        return int(p)
    if p == np.inf or p == "inf":
        return np.inf
    raise UnsupportedNorm(f"p must be 1, 2 or inf, got {p!r}")


def dual_exponent(p):
    p = _check_p(p)
    return {1: np.inf, 2: 2, np.inf: 1}[p]


def vector_norm_p(x, p) -> float:
    p = _check_p(p)
    x = np.asarray(x, dtype=float)
    if p == 1:
        return float(np.sum(np.abs(x)))
    if p == 2:
        return float(np.sqrt(np.dot(x, x)))
    return float(np.max(np.abs(x))) if x.size else 0.0


def op_norm_p(m, p) -> float:
    """Induced operator norm for p in {1, 2, inf}."""
    p = _check_p(p)
    m = as_matrix(m)
    if p == 1:
        return float(np.max(np.sum(np.abs(m), axis=0)))
    if p == np.inf:
        return float(np.max(np.sum(np.abs(m), axis=1)))
    return float(singular_values(m)[0])


def solve(a, b) -> np.ndarray:
    """Solve ``a @ x = b`` for square nonsingular ``a`` via the Jacobi SVD.

    Raises Singular if ``a`` has rank below its dimension at RANK_TOL.
    """
    a = as_matrix(a, "a")
    b_arr = np.asarray(b, dtype=float)
    vector_rhs = b_arr.ndim == 1
    b = as_matrix(b_arr, "b")
    n = a.shape[0]
    if a.shape[1] != n:
        raise ValueError(f"a must be square, got {a.shape}")
    if b.shape[0] != n:
        raise ValueError(f"b has {b.shape[0]} rows, expected {n}")
    sigma, w, v = svd_jacobi(a)
    if sigma[0] == 0.0 or sigma[-1] <= RANK_TOL * sigma[0]:
        raise Singular("matrix is rank-deficient")
    # a = w v^T with orthogonal columns in w, so a^-1 = v diag(1/sigma^2) w^T.
    x = v @ ((w.T @ b) / (sigma**2)[:, None])
    resid = np.max(np.abs(a @ x - b))
    if resid > SOLVE_TOL * (1.0 + np.max(np.abs(b))):
        raise Singular(f"solve residual {resid:.3e} too large; matrix too ill-conditioned")
    return x[:, 0] if vector_rhs else x

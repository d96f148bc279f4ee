"""Truncations of the worked examples, at a chosen depth.

Every generator builds the families explicitly and computes its series
traces from the generated vectors rather than from closed forms, so the
closed forms remain available as independent checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DepthTooLarge
from .hilbert import VectorFamily, riesz_bounds
from .schauder import SchauderFramePair
from .series import TruncatedSeriesTrace, trace_from_terms

__all__ = [
    "HilbertExample",
    "Example22",
    "Example31",
    "minimal_tail_index",
    "example21",
    "example_remark22",
    "example22",
    "example31",
]

MAX_DEPTH = {"ex21": 6, "remark22": 20, "ex22": 200, "ex31": 40}


@dataclass
class HilbertExample:
    f: VectorFamily
    h: VectorFamily
    g: VectorFamily
    c: list
    t: list
    k: list
    traces: dict
    offset: int = 0
    blocks: list = field(default_factory=list)  # (start, stop) vector indices per block


@dataclass
class Example22:
    f: VectorFamily
    g: VectorFamily
    ratios: list
    traces: dict
    f_nonzero_is_riesz: bool


@dataclass
class Example31:
    pair: SchauderFramePair
    y: np.ndarray
    offset: int
    traces: dict
    blocks: list


def _check_depth(name, depth):
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if depth > MAX_DEPTH[name]:
        raise DepthTooLarge(f"{name} supports depth <= {MAX_DEPTH[name]}, got {depth}")


def minimal_tail_index(exponent: float, bound: float = 1.0) -> int:
    """Least N >= 0 with sum_{n > N} n^-exponent < bound.

    The tail is zeta(exponent) minus a partial sum.  zeta comes from mpmath.
    """
    import mpmath

    total = float(mpmath.zeta(exponent))
    n, partial = 0, 0.0
    while total - partial >= bound:
        n += 1
        partial += n ** (-exponent)
    return n


def _blocked_family(d, c, k, first_scale):
    # block n: first_scale[n] * e_n / c_n, then (k_n - 1) copies of e_n / c_n
    f_rows, h_rows, blocks = [], [], []
    start = 0
    for n in range(d):
        e = np.zeros(d)
        e[n] = 1.0
        f_rows.append(np.tile(e / c[n], (k[n], 1)))
        hb = np.tile(e / c[n], (k[n], 1))
        hb[0] = first_scale[n] * e / c[n]
        h_rows.append(hb)
        blocks.append((start, start + k[n]))
        start += k[n]
    return VectorFamily(np.vstack(f_rows)), VectorFamily(np.vstack(h_rows)), blocks


def _block_sums(terms, blocks):
    return np.array([terms[a:b].sum() for a, b in blocks])


def _hilbert_traces(f, h, g, blocks, lam_reference=None):
    dn = (f - h).norms()
    lam_terms = _block_sums(dn**2, blocks)
    mu_terms = _block_sums(dn * g.norms(), blocks)
    return {
        "lambda": trace_from_terms(lam_terms, reference=lam_reference, label="sum |f_k - h_k|^2 by block"),
        "mu": trace_from_terms(mu_terms, target=1.0, label="sum |f_k - h_k| |g_k| by block"),
    }


def example21(depth: int) -> HilbertExample:
    """Tight frame whose perturbation has mu < 1 but divergent lambda.

    c_n = (n+N)^2, k_n = c_n^2 copies of e_n / c_n, t_n = n^(3/2) + 1, with
    N minimal such that sum_{n>N} 1/n^2 < 1.  Each lambda term n^3/(n+N)^4
    is at least (1+N)^-4 / n, so that harmonic series is the reference.
    """
    _check_depth("ex21", depth)
    offset = minimal_tail_index(2.0)
    ns = np.arange(1, depth + 1)
    c = [int((n + offset) ** 2) for n in ns]
    k = [ci**2 for ci in c]
    t = [n**1.5 + 1 for n in ns]
    f, h, blocks = _blocked_family(depth, c, k, t)
    # S = I, so the canonical dual is f itself
    g = f
    traces = _hilbert_traces(f, h, g, blocks, lam_reference=(1 + offset) ** -4.0 / ns)
    return HilbertExample(f, h, g, c, t, k, traces, offset, blocks)


def example_remark22(depth: int) -> HilbertExample:
    """c_n = n+1, t_1 = 3, t_n = 2: covered by mu < 1 but lambda > A = 1."""
    _check_depth("remark22", depth)
    c = [n + 1 for n in range(1, depth + 1)]
    k = [ci**2 for ci in c]
    t = [3.0] + [2.0] * (depth - 1)
    f, h, blocks = _blocked_family(depth, c, k, t)
    g = f
    traces = _hilbert_traces(f, h, g, blocks)
    traces["lambda"] = trace_from_terms(
        traces["lambda"].increments, target=1.0, label="sum |f_k - h_k|^2 by block vs A = 1"
    )
    return HilbertExample(f, h, g, c, t, k, traces, 0, blocks)


def example22(depth: int) -> Example22:
    """A Riesz sequence with a quadratically close sequence that is not a frame
    sequence, in R^(2 depth):

        f: 0, e_2, 0, e_4, ...        g: e_1, e_2, e_3/3, e_4, ...
    """
    _check_depth("ex22", depth)
    d = 2 * depth
    eye = np.eye(d)
    f_rows, g_rows = [], []
    for j in range(1, d + 1):
        if j % 2:
            f_rows.append(np.zeros(d))
            g_rows.append(eye[j - 1] / j)
        else:
            f_rows.append(eye[j - 1])
            g_rows.append(eye[j - 1])
    f, g = VectorFamily(f_rows), VectorFamily(g_rows)
    nonzero = VectorFamily(f.vectors[1::2])
    s_g = g.vectors.T @ g.vectors
    ratios = []
    for n in range(1, depth + 1):
        u = eye[2 * n - 2] / (2 * n - 1)
        ratios.append(float(u @ s_g @ u / (u @ u)))
    quad = _block_sums((f - g).norms() ** 2, [(2 * i, 2 * i + 2) for i in range(depth)])
    traces = {
        "quadratic": trace_from_terms(quad, label="sum |f_k - g_k|^2 by pair"),
        "ratio": TruncatedSeriesTrace(tuple(ratios), "bounded_below_target", None, "witness ratios r_n"),
    }
    return Example22(f, g, ratios, traces, riesz_bounds(nonzero).holds)


def example31(depth: int, direction=None) -> Example31:
    """Schauder frame x: e_n/n repeated n times, f: e_n repeated n times, in
    R^depth, perturbed to y_k = x_k + a_k e with a_k = (k+N)^(-3/2) and N
    minimal such that sum_{n>N} n^(-3/2) < 1.

    The lambda trace is compared block by block with the lower-bound term
    n^2 / (n(n-1)/2 + n + N)^(3/2).
    """
    _check_depth("ex31", depth)
    d = depth
    offset = minimal_tail_index(1.5)
    e = np.zeros(d)
    e[0] = 1.0
    if direction is not None:
        e = np.asarray(direction, dtype=float)
        e = e / np.linalg.norm(e)
    eye = np.eye(d)
    x_rows, f_rows, blocks = [], [], []
    start = 0
    for n in range(1, depth + 1):
        x_rows += [eye[n - 1] / n] * n
        f_rows += [eye[n - 1]] * n
        blocks.append((start, start + n))
        start += n
    x, fn = np.array(x_rows), np.array(f_rows)
    kk = np.arange(1, x.shape[0] + 1)
    a = (kk + offset) ** -1.5
    y = x + a[:, None] * e[None, :]
    pair = SchauderFramePair(x, fn, p=2)
    dn = np.linalg.norm(x - y, axis=1)
    mu_terms = _block_sums(dn * np.linalg.norm(fn, axis=1), blocks)
    lam_terms = _block_sums(dn / np.linalg.norm(x, axis=1), blocks)
    ns = np.arange(1, depth + 1)
    lower = ns**2 / (ns * (ns - 1) / 2 + ns + offset) ** 1.5
    traces = {
        "mu": trace_from_terms(mu_terms, target=1.0, label="sum |x_k - y_k| |f_k| by block"),
        "lambda": trace_from_terms(
            lam_terms, reference=lower, window=min(5, depth), label="sum |x_k - y_k| / |x_k| by block"
        ),
        "lambda_lower_reference": trace_from_terms(lower, label="sum n^2/(n(n-1)/2+n+N)^(3/2)"),
    }
    return Example31(pair, y, offset, traces, blocks)

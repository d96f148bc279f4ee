"""Schauder frames of (R^d, |.|_p) for p in {1, 2, inf}.

Vectors x_j carry the p-norm and functionals f_j the dual norm, so the
operator sum_j x_j f_j^T is measured p -> p.  The minimal space Z_Min is
represented only through its norm (:func:`min_norm`).  The decomposition
and reconstruction maps U and V are checked by sampling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import numerics as nx
from .certificates import CertificateReport
from .errors import DimensionMismatch, LengthMismatch, NotAFrame, Singular
from .hilbert import FrameBounds
from .series import trace_from_terms

__all__ = [
    "PNormSpace",
    "SchauderFramePair",
    "MinNormProfile",
    "reconstruction_residual",
    "projection_constant",
    "min_norm",
    "schauder_excess",
    "thm31_certificate",
    "thm33_certificate",
    "thm34_certificate",
]

RECON_TOL = 1e-8
CHECK_SLACK = 1e-9
FINITE_SCALE_NOTE = "automatic at finite scale"


@dataclass(frozen=True)
class PNormSpace:
    dimension: int
    p: float = 2

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be positive")
        object.__setattr__(self, "p", _norm_p(self.p))

    @property
    def dual_p(self):
        return nx.dual_exponent(self.p)

    def norm(self, x) -> float:
        return nx.vector_norm_p(x, self.p)

    def dual_norm(self, phi) -> float:
        return nx.vector_norm_p(phi, self.dual_p)

    def norms(self, rows) -> np.ndarray:
        return _row_norms(rows, self.p)

    def dual_norms(self, rows) -> np.ndarray:
        return _row_norms(rows, self.dual_p)

    def op_norm(self, m) -> float:
        return nx.op_norm_p(m, self.p)


def _norm_p(p):
    if p == "inf" or p == math.inf:
        return math.inf
    if p in (1, 2):
        return int(p)
    nx.dual_exponent(p)  # raises UnsupportedNorm
    return p


def _row_norms(rows, p):
    rows = np.asarray(rows, dtype=float)
    if p == 1:
        return np.sum(np.abs(rows), axis=-1)
    if p == 2:
        return np.sqrt(np.sum(rows * rows, axis=-1))
    return np.max(np.abs(rows), axis=-1)


class SchauderFramePair:
    """Paired vectors x_j and functionals f_j with sum_j f_j(x) x_j = x.

    Both are stored N x d, one per row.  Zero vectors x_j are rejected, and
    so is any pair whose reconstruction residual exceeds 1e-8.
    """

    def __init__(self, x_vectors, f_functionals, p=2, validate=True):
        x = np.array(x_vectors, dtype=float)
        f = np.array(f_functionals, dtype=float)
        if x.ndim != 2 or f.ndim != 2 or x.shape[0] == 0:
            raise ValueError("x and f must be non-empty N x d arrays")
        if x.shape[0] != f.shape[0]:
            raise LengthMismatch(f"{x.shape[0]} vectors but {f.shape[0]} functionals")
        if x.shape[1] != f.shape[1]:
            raise DimensionMismatch("vectors and functionals differ in dimension")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(f))):
            raise ValueError("non-finite entries")
        self.space = PNormSpace(x.shape[1], p)
        if np.any(self.space.norms(x) == 0):
            raise ValueError("zero vectors x_j are not allowed")
        x.setflags(write=False)
        f.setflags(write=False)
        self.x = x
        self.f = f
        if validate:
            res = reconstruction_residual(self)
            if res > RECON_TOL:
                raise NotAFrame(f"reconstruction residual {res:.3e} exceeds {RECON_TOL}")

    @property
    def p(self):
        return self.space.p

    @property
    def dimension(self):
        return self.space.dimension

    def __len__(self):
        return self.x.shape[0]

    def reconstruction_operator(self) -> np.ndarray:
        return self.x.T @ self.f

    def __repr__(self):
        return f"SchauderFramePair(N={len(self)}, d={self.dimension}, p={self.p})"


@dataclass
class MinNormProfile:
    projection_constant: float
    partial_sum_norms: np.ndarray = field(repr=False)  # [m, n] entry for window m..n, NaN below diagonal


def reconstruction_residual(fr: SchauderFramePair) -> float:
    return fr.space.op_norm(fr.reconstruction_operator() - np.eye(fr.dimension))


def projection_constant(fr: SchauderFramePair) -> MinNormProfile:
    """Exact max over windows m <= n of |sum_{i=m}^n x_i f_i^T|_{p->p}."""
    n, d = fr.x.shape
    # prefix[k] = sum_{i<k} x_i f_i^T
    outer = fr.x[:, :, None] * fr.f[:, None, :]
    prefix = np.concatenate([np.zeros((1, d, d)), np.cumsum(outer, axis=0)])
    table = np.full((n, n), np.nan)
    p = fr.p
    for m in range(n):
        windows = prefix[m + 1 :] - prefix[m]
        if p == 1:
            vals = np.abs(windows).sum(axis=1).max(axis=1)
        elif p == math.inf:
            vals = np.abs(windows).sum(axis=2).max(axis=1)
        else:
            vals = [nx.op_norm_p(w, 2) for w in windows]
        table[m, m:] = vals
    return MinNormProfile(float(np.nanmax(table)), table)


def min_norm(coeffs, fr: SchauderFramePair) -> float:
    """|sum c_i e_i|_Min = max over windows of |sum_{i=m}^n c_i x_i|_p."""
    c = np.asarray(coeffs, dtype=float)
    if c.ndim != 1 or c.size > len(fr):
        raise ValueError(f"need at most {len(fr)} coefficients")
    if c.size == 0:
        return 0.0
    prefix = np.concatenate([np.zeros((1, fr.dimension)), np.cumsum(c[:, None] * fr.x[: c.size], axis=0)])
    diffs = prefix[None, :, :] - prefix[:, None, :]
    return float(np.max(_row_norms(diffs, fr.p)))


def _min_norm_batch(coeffs, fr, chunk=64):
    # Min-norm of each row of coeffs (full length N), in chunks to cap memory
    out = np.empty(coeffs.shape[0])
    for start in range(0, coeffs.shape[0], chunk):
        c = coeffs[start : start + chunk]
        prefix = np.concatenate(
            [np.zeros((c.shape[0], 1, fr.dimension)), np.cumsum(c[:, :, None] * fr.x[None], axis=1)],
            axis=1,
        )
        diffs = prefix[:, None, :, :] - prefix[:, :, None, :]
        out[start : start + chunk] = _row_norms(diffs, fr.p).reshape(c.shape[0], -1).max(axis=1)
    return out


def schauder_excess(fr: SchauderFramePair) -> int:
    return len(fr) - nx.rank(fr.x)


def _sample_unit(rng, count, dim, p):
    z = rng.standard_normal((count, dim))
    return z / _row_norms(z, p)[:, None]


def _sampled_uv_checks(fr, y, g, rng, samples):
    """Sampled U and V inequalities.  Returns (U worst ratio, V min, V max)."""
    sp = fr.space
    c = rng.standard_normal((samples, len(fr)))
    mn = _min_norm_batch(c, fr)
    c = c / mn[:, None]  # unit Min-norm coefficient vectors
    u_vals = sp.norms(c @ y)
    xs = _sample_unit(rng, samples, fr.dimension, fr.p)
    v_vals = _min_norm_batch(xs @ g.T, fr)
    return float(u_vals.max()), float(v_vals.min()), float(v_vals.max())


def _perturbed_pair(fr, l_op, y):
    # g_n = (L^{-1})^T f_n, i.e. G = F L^{-1} with rows g_n
    try:
        g = nx.solve(l_op.T, fr.f.T).T
    except Singular as exc:
        raise Singular("L is singular although the hypothesis holds") from exc
    resid = fr.space.op_norm(y.T @ g - np.eye(fr.dimension))
    return g, resid


def _check_y(fr, y):
    y = np.asarray(y, dtype=float)
    if y.ndim == 1:
        y = y[None, :]
    if y.shape[0] != len(fr):
        raise LengthMismatch(f"{y.shape[0]} perturbed vectors for {len(fr)} frame elements")
    if y.shape[1] != fr.dimension:
        raise DimensionMismatch("perturbed vectors have the wrong dimension")
    return y


def _vector_perturbation(theorem, fr, y, seed, samples):
    y = _check_y(fr, y)
    sp = fr.space
    dn = sp.norms(fr.x - y)
    mu_terms = dn * sp.dual_norms(fr.f)
    lam_terms = dn / sp.norms(fr.x)
    mu, lam = float(mu_terms.sum()), float(lam_terms.sum())
    k = projection_constant(fr).projection_constant
    if theorem == "thm31":
        ok = mu < 1.0
        defect_bound = mu
        v_upper = k / (1 - mu) if ok else math.inf
    else:
        ok = lam * k < 1.0
        defect_bound = lam * k
        v_upper = k / (1 - lam * k) if ok else math.inf
    l_op = y.T @ fr.f
    defect = sp.op_norm(np.eye(fr.dimension) - l_op)
    values = {"mu": mu, "lambda": lam, "K": k}
    extras = {
        "defect_I_minus_L": defect,
        "unconditionality": FINITE_SCALE_NOTE,
        "seed": seed,
        "samples": samples,
    }
    traces = {
        "mu": trace_from_terms(mu_terms, target=1.0, label="sum |x_n - y_n| |f_n|"),
        "lambda": trace_from_terms(
            lam_terms, target=None if theorem == "thm31" else 1.0 / k, label="sum |x_n - y_n| / |x_n|"
        ),
    }
    checks = {"defect_le_bound": defect <= defect_bound + CHECK_SLACK}
    if theorem == "thm31":
        extras["core_verdict"] = ok
        extras["extended_verdict"] = ok and math.isfinite(lam)
    if not ok:
        return CertificateReport(theorem, values, False, None, None, extras=extras, series_traces=traces, checks=checks)

    g, resid = _perturbed_pair(fr, l_op, y)
    rng = np.random.default_rng(seed)
    u_max, v_min, v_max = _sampled_uv_checks(fr, y, g, rng, samples)
    extras.update(
        {
            "reconstruction_residual": resid,
            "g_functionals": g,
            "U_sampled_max": u_max,
            "V_sampled_min": v_min,
            "V_sampled_max": v_max,
            "excess_x": schauder_excess(fr),
            "excess_y": len(fr) - nx.rank(y),
            "actual_is_sampled": True,
        }
    )
    checks.update(
        {
            "reconstruction": resid <= RECON_TOL,
            "U_bound": u_max <= 1 + lam + CHECK_SLACK,
            "excess_preserved": extras["excess_x"] == extras["excess_y"],
        }
    )
    predicted = FrameBounds(1 / (1 + lam), v_upper)
    actual = FrameBounds(v_min, v_max)
    return CertificateReport(theorem, values, True, predicted, actual, extras=extras, series_traces=traces, checks=checks)


def thm31_certificate(fr: SchauderFramePair, y, seed=0, samples=1000) -> CertificateReport:
    """Perturb the vectors with mu = sum |x_n - y_n| |f_n|_* < 1.

    Builds L = sum y_n f_n^T and the new functionals g_n = (L^-1)^T f_n.
    The predicted/actual bounds are those of |V x|_Min / |x|, namely
    [1/(1+lambda), K/(1-mu)] against the sampled range.
    """
    return _vector_perturbation("thm31", fr, y, seed, samples)


def thm33_certificate(fr: SchauderFramePair, y, seed=0, samples=1000) -> CertificateReport:
    """Perturb the vectors with lambda = sum |x_n - y_n| / |x_n| < 1/K."""
    return _vector_perturbation("thm33", fr, y, seed, samples)


def thm34_certificate(fr: SchauderFramePair, g_pert) -> CertificateReport:
    """Perturb the functionals with mu = sum |f_n - g_n|_* |x_n| < 1.

    T = sum g_n x_n^T acts on functional coordinates.  L is its transpose
    and the new vectors are y_n = L^-1 x_n.
    """
    g = _check_y(fr, g_pert)
    sp = fr.space
    mu_terms = sp.dual_norms(fr.f - g) * sp.norms(fr.x)
    mu = float(mu_terms.sum())
    ok = mu < 1.0
    t_op = g.T @ fr.x
    defect = nx.op_norm_p(np.eye(fr.dimension) - t_op, sp.dual_p)
    extras = {
        "defect_I_minus_T": defect,
        "reflexivity": FINITE_SCALE_NOTE,
        "unconditionality": FINITE_SCALE_NOTE,
    }
    checks = {"defect_le_mu": defect <= mu + CHECK_SLACK}
    traces = {"mu": trace_from_terms(mu_terms, target=1.0, label="sum |f_n - g_n| |x_n|")}
    if ok:
        l_op = t_op.T
        try:
            y = nx.solve(l_op, fr.x.T).T
        except Singular as exc:
            raise Singular("L is singular although mu < 1") from exc
        resid = sp.op_norm(y.T @ g - np.eye(fr.dimension))
        extras.update({"reconstruction_residual": resid, "y_vectors": y})
        checks["reconstruction"] = resid <= RECON_TOL
    return CertificateReport("thm34", {"mu": mu}, ok, None, None, extras=extras, series_traces=traces, checks=checks)

"""Perturbation certificates for frames, frame sequences and Riesz sequences.

Every certificate follows the same recipe: compute the hypothesis
quantities, decide whether the hypothesis holds, emit the bounds the
theorem predicts, compute the optimal bounds of the perturbed family and
check that the prediction encloses them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import numerics as nx
from .errors import (
    BadDual,
    DimensionMismatch,
    InsufficientComplement,
    LengthMismatch,
    NotABasis,
    NotAFrame,
    NotRiesz,
)
from .hilbert import (
    FrameBounds,
    VectorFamily,
    bessel_bound,
    canonical_dual,
    excess,
    frame_bounds,
    frame_sequence_bounds,
    gap_details,
    riesz_bounds,
    span_projector,
    verify_dual_pair,
)
from .series import TruncatedSeriesTrace, trace_from_terms

__all__ = [
    "CertificateReport",
    "DichotomyReport",
    "ENCLOSURE_SLACK",
    "paley_wiener_constant",
    "paley_wiener_certificate",
    "christensen_exact_mu",
    "christensen_exact_lambda",
    "christensen_certificate",
    "thm21_certificate",
    "favier_zalik_certificate",
    "quadratic_closeness_check",
    "near_riesz_excess_certificate",
    "gap_certificate",
    "riesz_sequence_certificate",
    "frame_extension_dichotomy",
]

ENCLOSURE_SLACK = 1e-9
DUAL_TOL = 1e-8
CHECK_SLACK = 1e-9


@dataclass
class CertificateReport:
    theorem_id: str
    hypothesis_values: dict
    hypothesis_ok: bool
    predicted: FrameBounds | None
    actual: FrameBounds | None
    enclosed: bool | None = None
    extras: dict = field(default_factory=dict)
    series_traces: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    def __post_init__(self):
        for k, v in self.hypothesis_values.items():
            if not math.isfinite(v):
                raise ValueError(f"hypothesis value {k} is not finite: {v}")
        if self.predicted is not None and not self.hypothesis_ok:
            raise ValueError("predicted bounds given for a failed hypothesis")
        if self.enclosed is None and self.predicted is not None and self.actual is not None:
            self.enclosed = self.predicted.encloses(self.actual, ENCLOSURE_SLACK)
        if self.enclosed is not None and self.predicted is None:
            raise ValueError("enclosure verdict without predicted bounds")

    @property
    def verified(self) -> bool:
        """Hypothesis holds, prediction encloses the truth and internal checks pass."""
        return bool(self.hypothesis_ok and self.enclosed is not False and all(self.checks.values()))

    def to_dict(self):
        return {
            "theorem": self.theorem_id,
            "hypothesis_values": {k: float(v) for k, v in self.hypothesis_values.items()},
            "hypothesis_ok": bool(self.hypothesis_ok),
            "predicted": None if self.predicted is None else self.predicted.as_list(),
            "actual": None if self.actual is None else self.actual.as_list(),
            "enclosed": self.enclosed,
            "extras": _jsonable({**self.extras, "checks": self.checks}),
            "series_traces": {k: t.to_dict() for k, t in self.series_traces.items()},
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def _same_shape(f: VectorFamily, g: VectorFamily):
    if f.dimension != g.dimension:
        raise DimensionMismatch(f"dimensions differ: {f.dimension} vs {g.dimension}")
    if len(f) != len(g):
        raise LengthMismatch(f"family lengths differ: {len(f)} vs {len(g)}")


def _require_frame(f: VectorFamily) -> FrameBounds:
    bounds, is_frame = frame_bounds(f)
    if not is_frame:
        raise NotAFrame("base family does not span the ambient space")
    return bounds


def _diff_terms(f, h, g=None):
    dn = (f - h).norms()
    lam_terms = dn**2
    mu_terms = None if g is None else dn * g.norms()
    return lam_terms, mu_terms


def _hilbert_traces(lam_terms, mu_terms=None):
    traces = {"lambda": trace_from_terms(lam_terms, label="sum |f_k - h_k|^2")}
    if mu_terms is not None:
        traces["mu"] = trace_from_terms(mu_terms, target=1.0, label="sum |f_k - h_k| |g_k|")
    return traces


def paley_wiener_constant(x: VectorFamily, y: VectorFamily) -> float:
    """Least lambda with |sum c_i (x_i - y_i)| <= lambda |sum c_i x_i| for all c."""
    _same_shape(x, y)
    d = x.dimension
    if len(x) != d or nx.rank(x.vectors) < d:
        raise NotABasis("x must be a basis of R^d")
    xm = x.vectors.T
    diff = xm - y.vectors.T
    # (X - Y) X^{-1} = (X^{-T} (X - Y)^T)^T
    m = nx.solve(xm.T, diff.T).T
    return nx.op_norm_p(m, 2)


def paley_wiener_certificate(x: VectorFamily, y: VectorFamily) -> CertificateReport:
    """Basis perturbation: lambda* < 1 forces y to be a basis.

    In R^d the defining inequality also gives Riesz bounds
    ((1 - lambda)^2 A_x, (1 + lambda)^2 B_x) for y, which are checked too.
    """
    lam = paley_wiener_constant(x, y)
    ok = lam < 1.0
    xb = riesz_bounds(x).bounds
    actual, _ = riesz_bounds(y)
    d = x.dimension
    y_basis = nx.rank(y.vectors) == d
    predicted = FrameBounds((1 - lam) ** 2 * xb.lower, (1 + lam) ** 2 * xb.upper) if ok else None
    return CertificateReport(
        "pw",
        {"lambda": lam},
        ok,
        predicted,
        actual,
        extras={"y_is_basis": y_basis, "rank_y": nx.rank(y.vectors)},
        checks={"basis_implication": (not ok) or y_basis},
        series_traces=_hilbert_traces(_diff_terms(x, y)[0]),
    )


def christensen_exact_mu(f: VectorFamily, g: VectorFamily) -> float:
    """Best mu when lambda = 0: the spectral norm of the difference synthesis."""
    _same_shape(f, g)
    return nx.op_norm_p((f - g).vectors.T, 2)


def christensen_exact_lambda(f: VectorFamily, g: VectorFamily) -> float:
    """Best lambda when mu = 0, or inf if ker T_f is not inside ker T_{f-g}."""
    _same_shape(f, g)
    t_pinv = canonical_dual(f).vectors  # N x d, equals T_f^+
    diff = (f - g).vectors.T
    tf = f.vectors.T
    null_part = diff - diff @ t_pinv @ tf
    scale = 1.0 + np.max(np.abs(diff))
    if np.max(np.abs(null_part)) > 1e-10 * scale:
        return math.inf
    return nx.op_norm_p(diff @ t_pinv, 2)


def christensen_certificate(f, g, lam, mu, seed=0, samples=1000) -> CertificateReport:
    """Christensen's perturbation theorem with caller-supplied (lambda, mu).

    The caller's constants are checked on ``samples`` random coefficient
    vectors; any violation fails the hypothesis.  The printed upper bound has
    unbalanced parentheses and is read as B (1 + lambda + mu / sqrt(B))^2.
    """
    _same_shape(f, g)
    fb = _require_frame(f)
    a, b = fb.lower, fb.upper
    rng = np.random.default_rng(seed)
    c = rng.standard_normal((samples, len(f)))
    c /= np.linalg.norm(c, axis=1, keepdims=True)
    lhs = np.linalg.norm(c @ (f - g).vectors, axis=1)
    rhs = lam * np.linalg.norm(c @ f.vectors, axis=1) + mu
    slack = rhs - lhs
    violations = int(np.count_nonzero(slack < -1e-12 * (1.0 + rhs)))
    q = lam + mu / math.sqrt(a)
    ok = lam >= 0 and mu >= 0 and q < 1 and violations == 0
    actual, _ = frame_bounds(g)
    predicted = None
    if ok:
        predicted = FrameBounds(a * (1 - q) ** 2, b * (1 + lam + mu / math.sqrt(b)) ** 2)
    return CertificateReport(
        "christensen",
        {"lambda": lam, "mu": mu, "A": a, "B": b, "lambda_plus_mu_over_sqrtA": q},
        ok,
        predicted,
        actual,
        extras={
            "worst_sampled_slack": float(slack.min()),
            "sampled_violations": violations,
            "samples": samples,
            "seed": seed,
            "upper_bound_reading": "B*(1+lambda+mu/sqrt(B))**2",
        },
        series_traces=_hilbert_traces(_diff_terms(f, g)[0]),
    )


def _resolve_dual(f, dual, on_span):
    g = canonical_dual(f) if dual is None else dual
    _same_shape(f, g)
    res = verify_dual_pair(f, g)
    if res > DUAL_TOL:
        where = "on span(f)" if on_span else ""
        raise BadDual(f"dual residual {res:.3e} exceeds {DUAL_TOL} {where}".strip())
    return g, res


def thm21_certificate(f, h, dual=None) -> CertificateReport:
    """Frame perturbation controlled by mu = sum |f_k - h_k| |g_k| < 1."""
    _same_shape(f, h)
    fb = _require_frame(f)
    g, dual_res = _resolve_dual(f, dual, on_span=False)
    gb = frame_bounds(g).bounds
    c, d = gb.lower, gb.upper
    lam_terms, mu_terms = _diff_terms(f, h, g)
    lam, mu = float(lam_terms.sum()), float(mu_terms.sum())
    ok = mu < 1.0
    b = fb.upper
    predicted = FrameBounds((1 - mu) ** 2 / d, (math.sqrt(b) + math.sqrt(lam)) ** 2) if ok else None
    actual, _ = frame_bounds(h)
    l_op = h.vectors.T @ g.vectors
    defect = nx.op_norm_p(np.eye(f.dimension) - l_op, 2)
    return CertificateReport(
        "thm21",
        {"lambda": lam, "mu": mu, "A": fb.lower, "B": b, "C": c, "D": d},
        ok,
        predicted,
        actual,
        extras={"isomorphism_defect": defect, "dual_residual": dual_res},
        checks={"isomorphism_defect_le_mu": defect <= mu + CHECK_SLACK},
        series_traces=_hilbert_traces(lam_terms, mu_terms),
    )


def favier_zalik_certificate(f, h) -> CertificateReport:
    """Difference sequence Bessel with bound M < A."""
    _same_shape(f, h)
    fb = _require_frame(f)
    a, b = fb.lower, fb.upper
    m = bessel_bound(f - h)
    ok = m < a
    predicted = None
    if ok:
        predicted = FrameBounds((1 - math.sqrt(m / a)) ** 2 * a, (1 + math.sqrt(m / b)) ** 2 * b)
    actual, _ = frame_bounds(h)
    return CertificateReport(
        "fz",
        {"M": m, "A": a, "B": b},
        ok,
        predicted,
        actual,
        series_traces=_hilbert_traces(_diff_terms(f, h)[0]),
    )


def quadratic_closeness_check(f, g) -> CertificateReport:
    """Is sum |f_k - g_k|^2 < A?

    When it is, the difference sequence is Bessel with bound at most that
    sum, so the Favier-Zalik bounds with M replaced by the sum apply.
    """
    _same_shape(f, g)
    fb = _require_frame(f)
    a, b = fb.lower, fb.upper
    lam_terms, _ = _diff_terms(f, g)
    lam = float(lam_terms.sum())
    ok = lam < a
    predicted = None
    if ok:
        predicted = FrameBounds((1 - math.sqrt(lam / a)) ** 2 * a, (1 + math.sqrt(lam / b)) ** 2 * b)
    actual, _ = frame_bounds(g)
    traces = {"lambda": trace_from_terms(lam_terms, target=a, label="sum |f_k - g_k|^2 vs A")}
    return CertificateReport(
        "qc",
        {"lambda": lam, "A": a, "B": b},
        ok,
        predicted,
        actual,
        extras={"applicable": ok},
        series_traces=traces,
    )


def near_riesz_excess_certificate(f, h) -> CertificateReport:
    """Excess preservation for a near-Riesz basis under mu < 1.

    Bounds are those of the frame perturbation theorem with the canonical dual.
    """
    _same_shape(f, h)
    fb = _require_frame(f)
    g = canonical_dual(f)
    lam_terms, mu_terms = _diff_terms(f, h, g)
    lam, mu = float(lam_terms.sum()), float(mu_terms.sum())
    ok = mu < 1.0
    d = frame_bounds(g).bounds.upper
    predicted = FrameBounds((1 - mu) ** 2 / d, (math.sqrt(fb.upper) + math.sqrt(lam)) ** 2) if ok else None
    actual, _ = frame_bounds(h)
    ex_f, ex_h = excess(f), excess(h)
    complete = nx.rank(h.vectors) == f.dimension
    checks = {}
    if ok:
        checks = {"h_complete": complete, "excess_preserved": ex_f == ex_h}
    return CertificateReport(
        "nearriesz",
        {"lambda": lam, "mu": mu, "A": fb.lower, "B": fb.upper},
        ok,
        predicted,
        actual,
        extras={"excess_f": ex_f, "excess_h": ex_h, "h_complete": complete},
        checks=checks,
        series_traces=_hilbert_traces(lam_terms, mu_terms),
    )


def gap_certificate(f, h, dual=None) -> CertificateReport:
    """Frame-sequence perturbation with the gap delta(span h, span f) < 1."""
    _same_shape(f, h)
    fb = frame_sequence_bounds(f)
    g, dual_res = _resolve_dual(f, dual, on_span=True)
    d_up = frame_sequence_bounds(g).upper
    delta, uk, ul = gap_details(h, f)
    lam_terms, mu_terms = _diff_terms(f, h, g)
    lam, mu = float(lam_terms.sum()), float(mu_terms.sum())
    ok = delta < 1.0 and mu < 1.0
    predicted = None
    if ok:
        predicted = FrameBounds(
            (1 - mu) ** 2 / d_up,
            (math.sqrt(fb.upper) + math.sqrt(lam)) ** 2 / (1 - delta) ** 2,
        )
    dim_k, dim_l = uk.shape[1], ul.shape[1]
    actual = frame_sequence_bounds(h) if dim_k else None
    if dim_k:
        # P_L U_K and U_L^T U_K share their singular values.
        sv = nx.singular_values(ul.T @ uk)
        sigma_min = float(sv[dim_k - 1]) if dim_k <= dim_l else 0.0
        proj_rank = nx.rank(ul.T @ uk) if sv[0] > 0 else 0
    else:
        sigma_min, proj_rank = 0.0, 0
    checks = {"sigma_min_ge_one_minus_delta": sigma_min >= (1 - delta) - CHECK_SLACK}
    if ok:
        checks["projection_isomorphism"] = sigma_min > 0 and proj_rank == dim_l and dim_k == dim_l
    return CertificateReport(
        "gap",
        {"delta": delta, "lambda": lam, "mu": mu, "A": fb.lower, "B": fb.upper, "D": d_up},
        ok,
        predicted,
        actual,
        extras={
            "sigma_min_projection": sigma_min,
            "projection_rank": proj_rank,
            "dim_K": dim_k,
            "dim_L": dim_l,
            "dual_residual": dual_res,
        },
        checks=checks,
        series_traces=_hilbert_traces(lam_terms, mu_terms),
    )


def riesz_sequence_certificate(f, g) -> CertificateReport:
    """Riesz-sequence perturbation with mu = sum |f_k - g_k| |S^-1 f_k| < 1."""
    _same_shape(f, g)
    fb, is_riesz = riesz_bounds(f)
    if not is_riesz:
        raise NotRiesz("base family is not a Riesz sequence")
    dual = canonical_dual(f)
    lam_terms, mu_terms = _diff_terms(f, g, dual)
    lam, mu = float(lam_terms.sum()), float(mu_terms.sum())
    ok = mu < 1.0
    predicted = None
    if ok:
        predicted = FrameBounds(fb.lower * (1 - mu) ** 2, (math.sqrt(fb.upper) + math.sqrt(lam)) ** 2)
    actual, _ = riesz_bounds(g)
    return CertificateReport(
        "riesz",
        {"lambda": lam, "mu": mu, "A": fb.lower, "B": fb.upper},
        ok,
        predicted,
        actual,
        series_traces=_hilbert_traces(lam_terms, mu_terms),
    )


@dataclass
class DichotomyReport:
    codim: int
    rank: int
    g: VectorFamily
    h: VectorFamily
    witness_ratios: list
    expected_ratios: list
    quadratic_trace: TruncatedSeriesTrace
    h_sequence_lower: float

    @property
    def ratios_match(self) -> bool:
        return bool(np.allclose(self.witness_ratios, self.expected_ratios, rtol=0, atol=1e-12))

    def to_dict(self):
        return {
            "codim": self.codim,
            "rank": self.rank,
            "witness_ratios": [float(r) for r in self.witness_ratios],
            "expected_ratios": [float(r) for r in self.expected_ratios],
            "ratios_match": self.ratios_match,
            "quadratic_trace": self.quadratic_trace.to_dict(),
            "h_sequence_lower": self.h_sequence_lower,
        }


def frame_extension_dichotomy(f: VectorFamily, ambient_d: int) -> DichotomyReport:
    """Build the frame extension g and quadratically close h that is "almost"
    not a frame sequence, using an orthonormal basis e_1, e_2, ... of the
    complement of span(f):

        g: 0, f_1, 0, f_2, ...      h: e_1, f_1, e_3/3, f_2, e_5/5, ...

    Missing f_n (when the complement outlasts f) and missing e_j are zero.
    The witness u_n = e_{2n-1}/(2n-1) has sum_k <u_n, h_k>^2 / |u_n|^2 =
    1/(2n-1)^2, so the lower frame-sequence bound of h decays with the
    truncation.
    """
    if f.dimension != ambient_d:
        raise DimensionMismatch(f"family lives in R^{f.dimension}, not R^{ambient_d}")
    sigma, _, v = nx.svd_jacobi(f.vectors)
    r = 0 if sigma[0] == 0 else int(np.count_nonzero(sigma > nx.RANK_TOL * sigma[0]))
    codim = ambient_d - r
    if codim < 2:
        raise InsufficientComplement(
            f"complement of span(f) has dimension {codim}; the construction needs at least 2", codim
        )
    comp = v[:, r:]  # ONB of the complement, e_1 .. e_codim
    n_wit = (codim + 1) // 2
    n_pairs = max(len(f), n_wit)
    zero = np.zeros(ambient_d)
    g_rows, h_rows = [], []
    for n in range(1, n_pairs + 1):
        fn = f[n - 1] if n <= len(f) else zero
        j = 2 * n - 1
        e = comp[:, j - 1] / j if n <= n_wit else zero
        g_rows += [zero, fn]
        h_rows += [e, fn]
    g, h = VectorFamily(g_rows), VectorFamily(h_rows)
    s_h = h.vectors.T @ h.vectors
    ratios, expected = [], []
    for n in range(1, n_wit + 1):
        j = 2 * n - 1
        u = comp[:, j - 1] / j
        ratios.append(float(u @ s_h @ u / (u @ u)))
        expected.append(1.0 / j**2)
    quad_terms = (g - h).norms() ** 2
    per_pair = quad_terms.reshape(-1, 2).sum(axis=1)
    return DichotomyReport(
        codim=codim,
        rank=r,
        g=g,
        h=h,
        witness_ratios=ratios,
        expected_ratios=expected,
        quadratic_trace=trace_from_terms(per_pair, label="sum |g_k - h_k|^2"),
        h_sequence_lower=frame_sequence_bounds(h).lower,
    )

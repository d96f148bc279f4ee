import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from framepert import certificates as cert
from framepert.errors import (
    BadDual,
    DimensionMismatch,
    InsufficientComplement,
    LengthMismatch,
    NotABasis,
    NotAFrame,
    NotRiesz,
)
from framepert.gallery import example_remark22
from framepert.hilbert import FrameBounds, VectorFamily, excess, frame_bounds

from oracles import frac_ratio, random_frame
from suites import trial_christensen, trial_fz, trial_gap, trial_riesz, trial_thm21

E2 = VectorFamily(np.eye(2))
E3 = VectorFamily(np.eye(3))


def fam(rows):
    return VectorFamily(np.asarray(rows, dtype=float))


# -- report plumbing ----------------------------------------------------------

def test_report_json_fields_exact():
    d = cert.thm21_certificate(E2, E2).to_dict()
    assert list(d) == [
        "theorem",
        "hypothesis_values",
        "hypothesis_ok",
        "predicted",
        "actual",
        "enclosed",
        "extras",
        "series_traces",
    ]


def test_report_rejects_inconsistent_state():
    with pytest.raises(ValueError):
        cert.CertificateReport("x", {"mu": math.inf}, True, None, None)
    with pytest.raises(ValueError):
        cert.CertificateReport("x", {}, False, FrameBounds(0, 1), None)
    with pytest.raises(ValueError):
        cert.CertificateReport("x", {}, True, None, None, enclosed=True)


def test_report_enclosure_computed():
    rep = cert.CertificateReport("x", {}, True, FrameBounds(0.5, 2), FrameBounds(1, 3))
    assert rep.enclosed is False and not rep.verified


# -- Paley-Wiener ---------------------------------------------------------------

def test_pw_identity_and_diagonal():
    rep = cert.paley_wiener_certificate(E2, E2)
    assert rep.hypothesis_values["lambda"] == pytest.approx(0, abs=1e-15) and rep.extras["y_is_basis"]
    rep = cert.paley_wiener_certificate(E2, fam([[0.5, 0], [0, 1]]))
    assert rep.hypothesis_values["lambda"] == pytest.approx(0.5)
    assert rep.hypothesis_ok and rep.extras["y_is_basis"] and rep.enclosed


def test_pw_requires_basis():
    with pytest.raises(NotABasis):
        cert.paley_wiener_certificate(fam([[1, 0], [1, 0]]), E2)
    with pytest.raises(NotABasis):
        cert.paley_wiener_certificate(fam([[1, 0, 0]]), fam([[1, 0, 0]]))


def test_pw_random_basis_trials():
    rng = np.random.default_rng(0)
    for _ in range(200):
        d = int(rng.integers(2, 9))
        x = random_frame(rng, d, d)
        m = rng.standard_normal((d, d))
        m *= rng.uniform(0.01, 0.99) / np.linalg.norm(m, 2)
        # y_i = x_i - (M x)_i, so (X - Y) X^-1 = M in column convention
        y = x - (m @ x.T).T
        rep = cert.paley_wiener_certificate(VectorFamily(x), VectorFamily(y))
        assert rep.hypothesis_ok and np.linalg.matrix_rank(y) == d
        assert rep.enclosed and rep.checks["basis_implication"]


def test_pw_hypothesis_failure():
    rep = cert.paley_wiener_certificate(E2, fam([[0, 0], [0, 1]]))
    assert not rep.hypothesis_ok and rep.predicted is None


# -- Christensen ----------------------------------------------------------------

def test_christensen_identity():
    f = fam(np.random.default_rng(1).standard_normal((6, 3)))
    rep = cert.christensen_certificate(f, f, 0.0, 0.0)
    a, b = frame_bounds(f).bounds.as_list()
    assert rep.predicted.as_list() == pytest.approx([a, b]) and rep.enclosed


def test_christensen_diagonal_example():
    rep = cert.christensen_certificate(E2, fam([[1.1, 0], [0, 1]]), 0.0, 0.1)
    assert rep.hypothesis_ok
    assert rep.predicted.as_list() == pytest.approx([0.81, 1.21])
    assert rep.actual.as_list() == pytest.approx([1, 1.21])
    assert rep.enclosed


def test_christensen_sampled_violation_fails_hypothesis():
    rep = cert.christensen_certificate(E2, fam([[1.5, 0], [0, 1]]), 0.0, 0.1)
    assert not rep.hypothesis_ok and rep.extras["sampled_violations"] > 0


def test_christensen_exact_constants():
    f = fam(np.random.default_rng(2).standard_normal((5, 3)))
    g = fam(f.vectors * 1.1)
    assert cert.christensen_exact_mu(f, g) == pytest.approx(0.1 * np.linalg.norm(f.vectors, 2))
    assert cert.christensen_exact_lambda(f, g) == pytest.approx(0.1)
    # difference with a component in ker T_f: no finite lambda
    h = fam(np.vstack([f.vectors[:-1], f.vectors[-1] + 1.0]))
    assert math.isinf(cert.christensen_exact_lambda(f, h))


def test_christensen_requires_frame():
    with pytest.raises(NotAFrame):
        cert.christensen_certificate(fam([[1, 0]]), fam([[1, 0]]), 0, 0)


# -- Thm 2.1 ------------------------------------------------------------------

def test_thm21_identity():
    rng = np.random.default_rng(3)
    f = fam(rng.standard_normal((7, 3)))
    rep = cert.thm21_certificate(f, f)
    d = frame_bounds(cert.canonical_dual(f)).bounds.upper
    assert rep.hypothesis_values["mu"] == 0 and rep.predicted.lower == pytest.approx(1 / d)
    assert rep.enclosed


def test_thm21_remark22_example():
    ex = example_remark22(6)
    rep = cert.thm21_certificate(ex.f, ex.h, ex.g)
    mu_closed = 0.5 + sum(1 / (n + 1) ** 2 for n in range(2, 7))
    assert rep.hypothesis_values["mu"] == pytest.approx(mu_closed, rel=1e-12) and mu_closed < 1
    assert 1 - 1e-9 <= rep.actual.lower and rep.actual.upper <= 3 + 1e-9
    assert rep.verified and rep.enclosed


def test_thm21_bad_dual():
    with pytest.raises(BadDual):
        cert.thm21_certificate(E2, E2, fam(2 * np.eye(2)))


def test_thm21_shape_errors():
    with pytest.raises(LengthMismatch):
        cert.thm21_certificate(E2, fam([[1, 0]]))
    with pytest.raises(DimensionMismatch):
        cert.thm21_certificate(E2, E3)


def test_thm21_failure_has_no_prediction():
    rep = cert.thm21_certificate(E2, fam([[3, 0], [0, 1]]))
    assert not rep.hypothesis_ok and rep.predicted is None and rep.enclosed is None


# -- Favier-Zalik and quadratic closeness --------------------------------------

def test_fz_examples():
    rep = cert.favier_zalik_certificate(E2, E2)
    assert rep.hypothesis_values["M"] == 0 and rep.predicted.as_list() == pytest.approx([1, 1])
    rep = cert.favier_zalik_certificate(E2, fam([[0.5, 0], [0, 1]]))
    assert rep.hypothesis_values["M"] == pytest.approx(0.25)
    assert rep.predicted.as_list() == pytest.approx([0.25, 2.25])
    assert rep.actual.as_list() == pytest.approx([0.25, 1]) and rep.enclosed


def test_qc_examples():
    assert cert.quadratic_closeness_check(E2, E2).hypothesis_ok
    ex = example_remark22(6)
    rep = cert.quadratic_closeness_check(ex.f, ex.h)
    lam_closed = 1 + sum(1 / (n + 1) ** 2 for n in range(2, 7))
    assert rep.hypothesis_values["lambda"] == pytest.approx(lam_closed, rel=1e-12)
    assert not rep.hypothesis_ok and rep.extras["applicable"] is False
    assert cert.thm21_certificate(ex.f, ex.h).hypothesis_ok


def test_qc_applicable_implies_frame():
    rng = np.random.default_rng(4)
    for _ in range(50):
        f = random_frame(rng)
        e = rng.standard_normal(f.shape)
        a = frame_bounds(VectorFamily(f)).bounds.lower
        e *= np.sqrt(0.9 * a / np.sum(e**2))
        rep = cert.quadratic_closeness_check(VectorFamily(f), VectorFamily(f + e))
        assert rep.hypothesis_ok and rep.actual.lower > 0 and rep.enclosed


# -- near-Riesz ---------------------------------------------------------------

def test_nearriesz_examples():
    rep = cert.near_riesz_excess_certificate(E3, E3)
    assert rep.checks["excess_preserved"]
    f = fam(np.vstack([np.eye(3), [[1, 0, 0]]]))
    h = fam(f.vectors + 0.01 * np.random.default_rng(5).standard_normal((4, 3)))
    rep = cert.near_riesz_excess_certificate(f, h)
    assert rep.hypothesis_ok and excess(h) == 1 and rep.extras["excess_h"] == 1


# -- gap ------------------------------------------------------------------------

def _rotated_plane(theta):
    f = fam([[1, 0, 0], [0, 1, 0]])
    h = fam([[1, 0, 0], [0, np.cos(theta), np.sin(theta)]])
    return f, h


def test_gap_identity_reduces_to_thm21():
    f, _ = _rotated_plane(0)
    rep = cert.gap_certificate(f, f)
    assert rep.hypothesis_values["delta"] == pytest.approx(0, abs=1e-12)
    assert rep.predicted.as_list() == pytest.approx([1, 1]) and rep.enclosed


def test_gap_rotated_plane():
    f, h = _rotated_plane(0.2)
    rep = cert.gap_certificate(f, h)
    assert abs(rep.hypothesis_values["delta"] - math.sin(0.2)) <= 1e-9
    assert rep.extras["sigma_min_projection"] >= 1 - rep.hypothesis_values["delta"] - 1e-9
    assert rep.hypothesis_ok and rep.enclosed and rep.verified


def test_gap_accepts_dual_on_span():
    f, h = _rotated_plane(0.1)
    rep = cert.gap_certificate(f, h, f)
    assert rep.extras["dual_residual"] == pytest.approx(0, abs=1e-15)


# -- Riesz sequences ------------------------------------------------------------

def test_riesz_examples():
    f = fam([[1, 0, 0], [0, 1, 0]])
    rep = cert.riesz_sequence_certificate(f, f)
    assert rep.predicted.as_list() == pytest.approx([1, 1]) == rep.actual.as_list()
    rep = cert.riesz_sequence_certificate(f, fam([[1, 0, 0], [0, 1, 0.3]]))
    assert rep.hypothesis_values["mu"] == pytest.approx(0.3)
    assert rep.predicted.lower == pytest.approx(0.49) and rep.actual.lower == pytest.approx(1)
    assert rep.enclosed


def test_riesz_requires_riesz():
    with pytest.raises(NotRiesz):
        cert.riesz_sequence_certificate(fam([[1, 0], [1, 0]]), fam([[1, 0], [1, 0]]))


# -- dichotomy ----------------------------------------------------------------

def test_dichotomy_needs_complement():
    with pytest.raises(InsufficientComplement) as err:
        cert.frame_extension_dichotomy(E3, 3)
    assert err.value.codim == 0
    with pytest.raises(InsufficientComplement):
        cert.frame_extension_dichotomy(fam([[1, 0]]), 2)
    with pytest.raises(DimensionMismatch):
        cert.frame_extension_dichotomy(E2, 3)


def test_dichotomy_e1_in_r7():
    rep = cert.frame_extension_dichotomy(fam([[1, 0, 0, 0, 0, 0, 0]]), 7)
    assert rep.codim == 6
    for n, r in enumerate(rep.witness_ratios, start=1):
        assert abs(r - float(frac_ratio(n))) <= 1e-12
    assert len(rep.witness_ratios) == 3 and rep.ratios_match
    # g extends f by zero vectors, h is quadratically close to g
    assert rep.quadratic_trace.final == pytest.approx(sum(1 / (2 * n - 1) ** 2 for n in (1, 2, 3)))
    assert rep.h_sequence_lower == pytest.approx(1 / 25)


# -- randomised spot checks (the full 200-trial suites run in acceptance) ----

@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_hilbert_certificates(seed):
    rng = np.random.default_rng(seed)
    for trial in (trial_christensen, trial_thm21, trial_fz, trial_gap, trial_riesz):
        ok, rep = trial(rng)
        assert ok, rep.to_dict()

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from extgevrey.associated import AssocParams, T_discrete
from extgevrey.microlocal import (CutoffConfig, GridConfig, PlateauCutoff, ResolutionError,
                                  SignalSpec, check_n_family, classify, decay_fit,
                                  enumerated_envelope, localized_spectrum, make_cutoff)
from extgevrey.paleywiener import bump_spectrum, make_bump

GRID = GridConfig().grid()
TS = [(1.0, 2.0), (0.5, 1.5), (2.0, 3.0), (1.5, 2.5)]


def test_delta_spectrum_is_constant():
    phi = make_cutoff(1, 2, 0.0)
    s = localized_spectrum(SignalSpec("delta"), phi, GRID)
    assert np.all(s.abs == 1.0) and s.floor == 0.0
    off = localized_spectrum(SignalSpec("delta", position=5.0), phi, GRID)
    assert np.all(off.abs == 0.0)


def test_identity_localization_gives_bump_spectrum():
    b = make_bump(AssocParams(1, 2, 4), 8)
    phi = make_cutoff(1, 2, 0.0, r=1.0)
    s = localized_spectrum(SignalSpec("bump", bump=b), phi, GRID)
    assert np.array_equal(s.abs, np.abs(bump_spectrum(b, GRID)))


def test_gaussian_tracks_analytic_transform():
    phi = make_cutoff(1, 2, 0.0, r=7.0)
    xi = np.linspace(-10, 10, 81)
    s = localized_spectrum(SignalSpec("gaussian"), phi, xi)
    ref = math.sqrt(math.pi) * np.exp(-xi**2 / 4)
    assert s.method == "dft"
    assert np.all(s.abs / ref <= 2) and np.all(s.abs / ref >= 0.5)
    assert np.allclose(s.abs[np.abs(xi) <= 8], ref[np.abs(xi) <= 8], rtol=1e-8)


def test_heaviside_closed_form_matches_sampled_route():
    phi = make_cutoff(1, 2, 0.0, h=2.0, N=3, r=0.5)
    xi = np.linspace(-40, 40, 41)
    exact = localized_spectrum(SignalSpec("heaviside", position=0.1), phi, xi)
    assert exact.method == "exact:heaviside-jump"
    dx = math.pi / (4 * 40) / 8
    x = np.arange(-1.0, 1.0, dx)
    vals = np.clip((x + dx / 2 - 0.1) / dx, 0, 1)
    sampled = localized_spectrum(SignalSpec("samples", values=tuple(vals), spacing=dx, origin=-1.0),
                                 phi, xi)
    assert sampled.method == "dft"
    assert np.allclose(sampled.abs, exact.abs, rtol=0, atol=2e-3)
    # at xi = 0 the transform is the integral of phi over [s, oo)
    assert exact.abs[20] == pytest.approx(0.5 - 0.1)


def test_aliasing_guard():
    phi = make_cutoff(1, 2, 0.0)
    sig = SignalSpec("samples", values=(1.0,) * 100, spacing=0.05, origin=-2.5)
    with pytest.raises(ResolutionError, match="spacing"):
        localized_spectrum(sig, phi, np.linspace(-100, 100, 11))


def test_cutoff_geometry():
    phi = make_cutoff(1, 2, 0.3, h=2.0, N=8, r=0.5)
    lo, hi = phi.plateau
    x = np.linspace(phi.support[0] - 0.1, phi.support[1] + 0.1, 20001)
    vals = phi.sample(x)
    inside = (x > lo + 1e-3) & (x < hi - 1e-3)
    assert np.max(np.abs(vals[inside] - 1)) < 1e-6
    assert np.all(vals[(x < phi.support[0] - 1e-3) | (x > phi.support[1] + 1e-3)] < 1e-12)
    assert np.sum(vals) * (x[1] - x[0]) == pytest.approx(1.0, rel=1e-3)
    assert abs(phi.spectrum(np.array([0.0]))[0]) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        PlateauCutoff(make_bump(AssocParams(1, 2, 2), 8), 0.0, 0.1)


def test_cutoff_caps_order():
    phi = make_cutoff(2, 3, 0.0, N=8)
    assert phi.bump.N < 8


@pytest.mark.parametrize("bad", [dict(kind="sine"), dict(kind="gaussian", width=0.0),
                                 dict(kind="bump"), dict(kind="samples", values=(1.0,), spacing=0.0),
                                 dict(kind="samples", values=(math.nan,), spacing=0.1)])
def test_signal_validation(bad):
    with pytest.raises(ValueError):
        SignalSpec(**bad)


@pytest.mark.parametrize("tau,sigma", TS)
def test_decay_fit_delta(tau, sigma):
    rep = decay_fit(GRID, np.ones_like(GRID), tau, sigma, "+")
    assert rep.verdict == "not_in_class" and rep.h_star is None
    assert rep.max_defect > rep.ln_A_star


@pytest.mark.parametrize("hb", [0.5, 1.0, 2.0])
def test_decay_fit_bump(hb):
    spec = make_bump(AssocParams(1.0, 2.0, hb), 8)
    for d in "+-":
        rep = decay_fit(GRID, bump_spectrum(spec, GRID), 1.0, 2.0, d)
        assert rep.in_class and 0.5 / hb <= rep.h_star <= 2.0 / hb


@pytest.mark.parametrize("tau,sigma", TS)
def test_decay_fit_gaussian(tau, sigma):
    v = math.sqrt(math.pi) * np.exp(-GRID**2 / 4)
    assert decay_fit(GRID, v, tau, sigma, "-", floor=1e-300).in_class


def test_decay_fit_errors():
    with pytest.raises(ValueError, match="at least"):
        decay_fit(np.linspace(3, 10, 10), np.ones(10), 1, 2)
    with pytest.raises(ValueError, match="no grid points"):
        decay_fit(np.linspace(-10, -3, 30), np.ones(30), 1, 2, "+")
    with pytest.raises(ValueError):
        decay_fit(GRID, np.ones_like(GRID), 1, 2, "up")


@pytest.mark.parametrize("tau,sigma", TS)
def test_classify_examples(tau, sigma):
    assert all(not r.in_class for r in classify(SignalSpec("delta"), 0.0, tau, sigma))
    assert all(not r.in_class for r in classify(SignalSpec("heaviside"), 0.0, tau, sigma))
    assert all(r.in_class for r in classify(SignalSpec("heaviside"), 1.0, tau, sigma))
    assert all(r.in_class for r in classify(SignalSpec("gaussian", position=0.4), -0.2, tau, sigma))


def test_direction_symmetry():
    a, b = classify(SignalSpec("gaussian"), 0.0, 1.0, 2.0)
    assert (a.h_star, a.ln_A_star, a.max_defect, a.verdict) == (b.h_star, b.ln_A_star, b.max_defect, b.verdict)


@pytest.mark.parametrize("signal,x0", [(SignalSpec("heaviside"), 1.0), (SignalSpec("gaussian"), 0.0),
                                       (SignalSpec("delta"), 0.0)])
def test_scale_coherence(signal, x0):
    c = -3.5
    base = classify(signal, x0, 1.0, 2.0)
    scaled = classify(signal.scaled(c), x0, 1.0, 2.0)
    for r0, r1 in zip(base, scaled):
        assert r1.verdict == r0.verdict and r1.h_star == r0.h_star
        assert r1.ln_A_star - r0.ln_A_star == pytest.approx(math.log(abs(c)), abs=1e-9)


def test_cutoff_invariance():
    for signal, x0 in [(SignalSpec("heaviside"), 1.0), (SignalSpec("gaussian"), 0.0),
                       (SignalSpec("heaviside"), 0.0)]:
        a = classify(signal, x0, 1.0, 2.0, CutoffConfig(2.0, 8, 0.5))
        b = classify(signal, x0, 1.0, 2.0, CutoffConfig(4.0, 8, 0.4))
        for ra, rb in zip(a, b):
            assert ra.verdict == rb.verdict
            if ra.in_class:
                assert max(ra.h_star, rb.h_star) / min(ra.h_star, rb.h_star) <= 4


def test_n_family_recheck():
    phi = make_cutoff(1, 2, 1.0)
    s = localized_spectrum(SignalSpec("heaviside"), phi, GRID)
    for d in "+-":
        rep = decay_fit(s.xi, s.abs, 1, 2, d, s.floor)
        assert rep.in_class
        assert check_n_family(rep, s.xi, s.abs, s.floor) == []


def test_csv_row():
    rep = decay_fit(GRID, np.ones_like(GRID), 1, 2)
    assert rep.csv_row().split(",")[1] == "nan"
    assert rep.csv_row().endswith("not_in_class")


def test_enumerated_envelope_examples():
    # floor(9^{1/2}) = 3 enters form_A as xi^{-3}
    a, _ = enumerated_envelope(9, 1.0, 2.0, 1.0, math.e)
    assert a == pytest.approx(0.5 * math.lgamma(10) - 3)
    _, b = enumerated_envelope(3, 1.0, 2.0, 1.0, math.exp(10))
    assert b == pytest.approx(9 * math.log(3) - 30)
    with pytest.raises(ValueError):
        enumerated_envelope(0, 1, 2, 1, 10.0)
    with pytest.raises(ValueError):
        enumerated_envelope(3, 1, 2, 1, 1.0)


def test_floor_root_is_exact_for_perfect_powers():
    for m in range(1, 200):
        a1, _ = enumerated_envelope(m**3, 1.0, 3.0, 1.0, math.e)
        a0, _ = enumerated_envelope(m**3, 1.0, 3.0, 1.0, math.e**2)
        assert a1 - a0 == pytest.approx(m)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.3, 3.0), st.floats(1.2, 3.0), st.floats(0.25, 4.0), st.floats(1.5, 40.0))
def test_inf_form_b_is_minus_T(tau, sigma, h, lnxi):
    T, p = T_discrete(AssocParams(tau, sigma, h), math.exp(lnxi))
    if 1 <= p <= 100:
        inf_b = min(enumerated_envelope(n, tau, sigma, 1.0 / h, math.exp(lnxi))[1] for n in range(1, 101))
        assert inf_b == pytest.approx(-T, rel=1e-12, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.3, 3.0), st.floats(0.25, 4.0), st.integers(1, 30), st.floats(1.5, 60.0))
def test_forms_comparable_under_substitution(tau, h, m, lnxi):
    # with sigma = 2, form_A at N = m^2 and form_B at N = m agree up to Stirling terms
    a, _ = enumerated_envelope(m * m, tau, 2.0, h, math.exp(lnxi))
    _, b = enumerated_envelope(m, tau, 2.0, h * math.exp(-tau / 2), math.exp(lnxi))
    assert abs(a - b) <= tau / 2 * (0.5 * math.log(2 * math.pi * m * m) + 1)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 5.0), st.floats(0.2, 2.5), st.floats(-5, 5), st.sampled_from(TS))
def test_verdict_matches_defect_invariant(c, alpha, shift, ts):
    v = np.exp(shift - c * np.abs(GRID) ** alpha)
    rep = decay_fit(GRID, v, *ts, "+", floor=1e-300)
    assert rep.in_class == (rep.max_defect <= rep.ln_A_star)

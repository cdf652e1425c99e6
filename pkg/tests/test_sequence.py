import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from extgevrey.sequence import (GevreyParams, LogValue, M, check_log_convexity, check_ratio_bound,
                                first_argmax, fit_m2bar_constant, fit_stability_constant,
                                log_M, m2bar_defects, stability_defects)

P12 = GevreyParams(1.0, 2.0)
params_st = st.builds(GevreyParams, st.floats(0.1, 4.0), st.floats(1.05, 4.0))


def test_log_M_values():
    assert log_M(0, P12) == 0.0
    assert log_M(1, P12) == 0.0
    assert log_M(3, P12) == pytest.approx(9 * math.log(3), rel=1e-15)
    assert np.allclose(log_M(np.array([0, 1, 2, 3]), P12), [0, 0, 4 * math.log(2), 9 * math.log(3)])


def test_log_M_rejects_negative():
    with pytest.raises(ValueError):
        log_M(-1, P12)


@pytest.mark.parametrize("tau,sigma", [(0.0, 2.0), (-1.0, 2.0), (1.0, 1.0), (1.0, 0.5), (math.inf, 2.0)])
def test_params_validation(tau, sigma):
    with pytest.raises(ValueError):
        GevreyParams(tau, sigma)


def test_logvalue_overflow_guard():
    assert M(3, P12).value == pytest.approx(3.0**9)
    with pytest.raises(OverflowError):
        M(30, P12).value
    assert (M(3, P12) / M(2, P12)).log == pytest.approx(9 * math.log(3) - 4 * math.log(2))
    assert (M(2, P12) * M(2, P12)).log == pytest.approx(8 * math.log(2))


@pytest.mark.parametrize("tau,sigma", list(itertools.product((0.5, 1, 2, 3), (1.25, 1.5, 2, 3))))
def test_structural_conditions_on_grid(tau, sigma):
    params = GevreyParams(tau, sigma)
    assert check_log_convexity(params, 500) == []
    assert check_ratio_bound(params, 500) == []
    assert math.isfinite(fit_m2bar_constant(params, 60))
    assert math.isfinite(fit_stability_constant(2, params, 500))


def test_ratio_example():
    # M_1/M_2 = 1/16 against (2*2)^{-1} = 1/4
    lm = log_M(np.arange(3), P12)
    assert math.exp(lm[1] - lm[2]) == pytest.approx(0.0625)


def test_m2bar_examples():
    d = m2bar_defects(P12, 200)
    assert d[0, 0] == pytest.approx(2 * math.log(2))
    assert np.allclose(d, d.T)
    assert fit_m2bar_constant(P12, 200) == pytest.approx(d[0, 0], rel=1e-12)
    assert first_argmax(d) == (0, 0)


def test_stability_examples():
    assert stability_defects(1, P12, 10)[0] == pytest.approx(4 * math.log(2))
    assert fit_stability_constant(0, P12, 50) == 0.0
    ds = stability_defects(2, P12, 500)
    assert first_argmax(ds)[0] < 5
    consts = [fit_stability_constant(q, P12, 500) for q in range(1, 8)]
    assert all(a < b for a, b in zip(consts, consts[1:]))


def test_first_argmax_ridge():
    v = np.array([1.0, 3.0, 3.0 - 1e-14, 3.0])
    assert first_argmax(v) == (1,)


@given(params_st, st.integers(2, 300))
def test_log_convexity_property(params, p):
    lm = log_M(np.array([p - 1, p, p + 1]), params)
    assert 2 * lm[1] <= lm[0] + lm[2] + 1e-9


@given(params_st, st.integers(1, 200), st.integers(1, 200))
def test_m2bar_symmetric_and_bounded(params, p, q):
    d = m2bar_defects(params, max(p, q, 2))
    assert d[p - 1, q - 1] == pytest.approx(d[q - 1, p - 1])
    assert d[p - 1, q - 1] <= params.tau * 2 ** (params.sigma - 1) * math.log(2) * (1 + 1e-12) + 1e-12


@given(params_st, st.integers(0, 400))
def test_scalar_matches_array(params, p):
    assert log_M(p, params) == pytest.approx(float(log_M(np.array([p]), params)[0]), rel=1e-15)

"""Extended associated function T_{tau,sigma,h}(k) and its Lambert-W bounds.

T(k) = sup_p ln_+ (h^{p^sigma} k^p / M_p) is computed exactly as an integer
maximization. The continuous relaxation

    f(r) = r^sigma ln h + r ln k - tau r^sigma ln r

is unimodal on r > 0 whenever k > 1, with its maximizer r0 available in
closed form through W, so the integer maximizer is floor(r0) or ceil(r0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .lambert import DomainError, W
from .sequence import GevreyParams

_EXACT_INT_LIMIT = 2.0**52
_EPS = float(np.finfo(float).eps)
_SCAN_LIMIT = 10_000_000
# At k = C~ with integer r0 the upper bound is an exact equality; compare
# with a rounding allowance only, never an additive constant.
ROUNDING_RTOL = 1e-12


@dataclass(frozen=True)
class AssocParams:
    tau: float
    sigma: float
    h: float

    def __post_init__(self):
        GevreyParams(self.tau, self.sigma)
        if not (self.h > 0 and math.isfinite(self.h)):
            raise ValueError(f"h must be positive, got {self.h!r}")

    @property
    def gevrey(self) -> GevreyParams:
        return GevreyParams(self.tau, self.sigma)

    def with_h(self, h: float) -> "AssocParams":
        return AssocParams(self.tau, self.sigma, h)


def _lnk_checked(k: float) -> float:
    if not k > math.e:
        raise DomainError(f"requires k > e, got {k!r}")
    return math.log(k)


# -- closed forms in terms of ln k ------------------------------------------

def _frak_R(params: AssocParams, lnk: float) -> float:
    t, s, h = params.tau, params.sigma, params.h
    return h ** (-(s - 1) / t) * math.exp((s - 1) / s) * (s - 1) / (t * s) * lnk


def _r0(params: AssocParams, lnk: float) -> float:
    t, s, h = params.tau, params.sigma, params.h
    return h ** (1 / t) * math.exp(W(_frak_R(params, lnk)) / (s - 1) - 1 / s)


def _upper(params: AssocParams, lnk: float) -> float:
    t, s = params.tau, params.sigma
    w = W(_frak_R(params, lnk))
    return ((s - 1) / (t * s)) ** (1 / (s - 1)) * w ** (-1 / (s - 1)) * lnk ** (s / (s - 1))


def _lower(params: AssocParams, lnk: float) -> float:
    t, s = params.tau, params.sigma
    w = W(_frak_R(params, lnk))
    return ((2 ** (s - 1) * t) ** (-1 / (s - 1)) * ((s - 1) / s) ** (s / (s - 1))
            * w ** (-1 / (s - 1)) * lnk ** (s / (s - 1)))


def _continuous_sup(params: AssocParams, lnk: float) -> float:
    t, s = params.tau, params.sigma
    w = W(_frak_R(params, lnk))
    return (t ** (-1 / (s - 1)) * ((s - 1) / s) ** (s / (s - 1))
            * w ** (-s / (s - 1)) * lnk ** (s / (s - 1)) * (1 / s + w))


# -- public surface ---------------------------------------------------------

def frak_R(params: AssocParams, k: float) -> float:
    """Rescaled logarithm fed to W in every closed form; requires k > e."""
    return _frak_R(params, _lnk_checked(k))


def f_continuous(r, params: AssocParams, k: float):
    """Continuous objective r^sigma ln h + r ln k - tau r^sigma ln r (r > 0)."""
    lnk = math.log(k)
    rs = np.power(r, params.sigma)
    return rs * math.log(params.h) + np.multiply(r, lnk) - params.tau * rs * np.log(r)


def f_prime(r: float, params: AssocParams, k: float) -> float:
    t, s, h = params.tau, params.sigma, params.h
    rs1 = r ** (s - 1)
    return s * rs1 * math.log(h) + math.log(k) - t * s * rs1 * math.log(r) - t * rs1


def r_star(params: AssocParams, k: float) -> float:
    """Critical point r0 = h^{1/tau} exp(W(R)/(sigma-1) - 1/sigma) of f."""
    return _r0(params, _lnk_checked(k))


def continuous_sup(params: AssocParams, k: float) -> float:
    """sup_{r>0} f(r) in closed form."""
    return _continuous_sup(params, _lnk_checked(k))


def lower_expr(params: AssocParams, k: float) -> float:
    return _lower(params, _lnk_checked(k))


def upper_expr(params: AssocParams, k: float) -> float:
    return _upper(params, _lnk_checked(k))


def threshold_Ctilde(params: AssocParams) -> float:
    """k-threshold exp(tau h^{(sigma-1)/tau}) above which T <= upper_expr."""
    t, s, h = params.tau, params.sigma, params.h
    return math.exp(t * h ** ((s - 1) / t))


def asymptotic_expr(params: AssocParams, k: float) -> float:
    """(ln k / ln(C_h ln k))^{1/(sigma-1)} ln k; needs C_h ln k > e."""
    t, s, h = params.tau, params.sigma, params.h
    lnk = math.log(k)
    c_h = h ** (-(s - 1) / t) * math.exp((s - 1) / s) * (s - 1) / (t * s)
    if not c_h * lnk > math.e:
        raise DomainError(f"asymptotic form needs C_h ln k > e (C_h ln k = {c_h * lnk:.6g})")
    return (lnk / math.log(c_h * lnk)) ** (1 / (s - 1)) * lnk


def w_form(params: AssocParams, k: float) -> float:
    """(ln k)^{sigma/(sigma-1)} W(R)^{-1/(sigma-1)}, the shared shape of the bounds."""
    lnk = _lnk_checked(k)
    s = params.sigma
    return lnk ** (s / (s - 1)) * W(_frak_R(params, lnk)) ** (-1 / (s - 1))


def gevrey_majorant(t: float, k: float) -> float:
    """k^{1/t}, the Gevrey-order comparison function."""
    if not t > 1:
        raise ValueError("t must exceed 1")
    return k ** (1.0 / t)


# -- the discrete supremum --------------------------------------------------

def objective(p, params: AssocParams, lnk: float):
    """ln(h^{p^sigma} k^p / M_p) for integer p >= 1 (array friendly)."""
    p = np.asarray(p, dtype=float)
    ps = p ** params.sigma
    return ps * math.log(params.h) + p * lnk - params.tau * ps * np.log(p)


def _scan(params: AssocParams, lnk: float, p_hi: int) -> tuple[float, int]:
    if p_hi > _SCAN_LIMIT:
        raise ValueError(f"integer search range up to {p_hi} is too large")
    p = np.arange(1, p_hi + 1)
    g = objective(p, params, lnk)
    i = int(np.argmax(g))
    return float(g[i]), int(p[i])


def _search(params: AssocParams, lnk: float) -> tuple[float, int]:
    if lnk <= 0:
        # f may dip and recover; its right-hand local max lies below
        # r_z = h^{1/tau} e^{-1/sigma}, where ln h - tau ln r - tau/sigma = 0.
        r_z = params.h ** (1 / params.tau) * math.exp(-1 / params.sigma)
        return _scan(params, lnk, max(64, math.ceil(r_z) + 2))

    r0 = _r0(params, lnk)
    if r0 > _EXACT_INT_LIMIT:
        raise ValueError(f"maximizer r0={r0:.3g} is beyond the exact integer range")
    lo = max(1, math.floor(r0) - 2)
    hi = math.ceil(r0) + 2
    p = np.arange(lo, hi + 1)
    g = objective(p, params, lnk)
    # The window must hold an interior maximum (or start at p = 1). For huge
    # r0 neighbouring values differ by less than rounding, so an edge only
    # counts as the maximum when it wins by more than the rounding error.
    ps = p.astype(float) ** params.sigma
    tol = 64 * _EPS * float(np.max(ps * abs(math.log(params.h)) + p * lnk
                                   + params.tau * ps * np.log(p)))
    inner = slice(0 if lo == 1 else 1, len(p) - 1)
    i = inner.start + int(np.argmax(g[inner]))
    edges = [0, len(p) - 1] if lo > 1 else [len(p) - 1]
    if any(g[j] > g[i] + tol for j in edges):
        return _scan(params, lnk, math.ceil(2 * r0) + 2)
    return float(g[i]), int(p[i])


def T_discrete(params: AssocParams, k: float) -> tuple[float, int]:
    """(T_{tau,sigma,h}(k), argmax p). p = 0 when the ln_+ clamp is active."""
    if not k > 0:
        raise ValueError(f"k must be positive, got {k!r}")
    return T_from_log(params, math.log(k))


def T_from_log(params: AssocParams, lnk: float) -> tuple[float, int]:
    """T_discrete with the frequency given as ln k (no overflow for huge k)."""
    gmax, p = _search(params, lnk)
    if gmax <= 0:
        return 0.0, 0
    return gmax, p


def T_value(params: AssocParams, k: float) -> float:
    return T_discrete(params, k)[0]


# -- reports ----------------------------------------------------------------

@dataclass(frozen=True)
class BoundsReport:
    k: float
    T: float
    p_star: int
    f_sup: Optional[float]
    r0: Optional[float]
    W_R: Optional[float]
    lower: Optional[float]
    upper: Optional[float]

    @property
    def applicable(self) -> bool:
        return self.upper is not None


def bounds_report(params: AssocParams, k: float) -> BoundsReport:
    T, p = T_discrete(params, k)
    if not k > math.e:
        return BoundsReport(k, T, p, None, None, None, None, None)
    lnk = math.log(k)
    return BoundsReport(
        k=k, T=T, p_star=p,
        f_sup=_continuous_sup(params, lnk),
        r0=_r0(params, lnk),
        W_R=W(_frak_R(params, lnk)),
        lower=_lower(params, lnk),
        upper=_upper(params, lnk),
    )


def sandwich_k_grid(params: AssocParams, n: int = 50, log_k_max: float = 40.0) -> np.ndarray:
    """n values of k in [max(e + 0.01, C~), e^{log_k_max}], geometric in ln k."""
    k_lo = max(math.e + 0.01, threshold_Ctilde(params))
    lnk = np.geomspace(math.log(k_lo), log_k_max, n)
    ks = np.exp(lnk)
    ks[0] = k_lo
    return ks


def fit_lower_slack(params: AssocParams, log_k_lo: float = 2.0, log_k_hi: float = 6.0,
                    n: int = 200) -> float:
    """H = max over ln k in [lo, hi] of lower_expr - T (never below 0)."""
    worst = 0.0
    for lnk in np.linspace(log_k_lo, log_k_hi, n):
        worst = max(worst, _lower(params, lnk) - T_from_log(params, lnk)[0])
    return worst


@dataclass(frozen=True)
class SandwichResult:
    params: AssocParams
    H: float
    rows: list
    upper_violations: list
    lower_violations: list

    @property
    def ok(self) -> bool:
        return not self.upper_violations and not self.lower_violations


def verify_sandwich(params: AssocParams, n_k: int = 50) -> SandwichResult:
    """T <= upper_expr with no additive constant, and T >= lower_expr - H."""
    H = fit_lower_slack(params)
    rows, up_bad, lo_bad = [], [], []
    for k in sandwich_k_grid(params, n_k):
        rep = bounds_report(params, float(k))
        rows.append(rep)
        if rep.T > rep.upper * (1 + ROUNDING_RTOL):
            up_bad.append(rep)
        if rep.T < rep.lower - H:
            lo_bad.append(rep)
    return SandwichResult(params, H, rows, up_bad, lo_bad)

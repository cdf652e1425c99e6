"""Paley-Wiener decay envelopes and an explicit compactly supported test bump.

The bump is the N-fold convolution of unit-mass box kernels of widths

    a_p = h^{-(p^sigma - (p-1)^sigma)} M_{p-1} / M_p,

so its Fourier transform is the exact product of sinc factors and the
partial products telescope: prod_{p<=n} 1/a_p = h^{n^sigma} M_n.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .associated import AssocParams, T_from_log
from .lambert import W
from .sequence import log_M

SINC_SERIES_CUTOFF = 1e-4
FORWARD_SLACK = 1e-10
_MAX_LOG = 700.0


@dataclass(frozen=True)
class Box:
    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo, hi = tuple(map(float, self.lo)), tuple(map(float, self.hi))
        if len(lo) != len(hi) or not lo:
            raise ValueError("lo and hi must be nonempty and of equal length")
        if any(a > b for a, b in zip(lo, hi)):
            raise ValueError("box requires lo <= hi componentwise")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return len(self.lo)


def support_function(K: Box, mu: Sequence[float]) -> float:
    """H_K at a complex frequency with imaginary part mu: sup_{y in K} y . mu."""
    mu = tuple(float(m) for m in np.atleast_1d(mu))
    if len(mu) != K.dim:
        raise ValueError(f"mu has dimension {len(mu)}, box has {K.dim}")
    return sum(max(a * m, b * m) for a, b, m in zip(K.lo, K.hi, mu))


def _envelope_core(tau, sigma, h_eff, xi_abs):
    lnk = math.log(math.e + xi_abs)
    s = sigma
    R = h_eff ** (-(s - 1) / tau) * math.exp((s - 1) / s) * (s - 1) / (tau * s) * lnk
    return W(R) ** (-1 / (s - 1)) * lnk ** (s / (s - 1))


def forward_envelope(params: AssocParams, d: int, xi_abs: float) -> float:
    """Decay exponent E(|eta|) for phi in D^K_{tau,sigma,h}:

    |phi^(eta)| <= A exp(-E(|eta|) + H_K(Im eta)).
    """
    if d < 1:
        raise ValueError("dimension must be positive")
    if xi_abs < 0:
        raise ValueError("xi_abs must be nonnegative")
    t, s, h = params.tau, params.sigma, params.h
    h_eff = 1.0 / (2 * math.e * h * math.sqrt(d))
    c = (t * 2 ** (s - 1)) ** (-1 / (s - 1)) * ((s - 1) / s) ** (s / (s - 1))
    return c * _envelope_core(t, s, h_eff, xi_abs)


def inverse_envelope(params: AssocParams, xi_abs: float) -> float:
    """Decay an entire function needs to be the transform of a class member
    (with the class index inflated to 2^{sigma-1} tau)."""
    if xi_abs < 0:
        raise ValueError("xi_abs must be nonnegative")
    t, s, h = params.tau, params.sigma, params.h
    c = ((s - 1) / (t * s)) ** (1 / (s - 1))
    return c * _envelope_core(t, s, 2 ** t / h, xi_abs)


# -- the bump ----------------------------------------------------------------

class BumpRangeError(ValueError):
    pass


@dataclass(frozen=True)
class BumpSpec:
    params: AssocParams
    N: int
    lengths: tuple = field(repr=False)
    support_radius: float = 0.0

    def to_dict(self) -> dict:
        return {
            "tau": self.params.tau,
            "sigma": self.params.sigma,
            "h": self.params.h,
            "N": self.N,
            "lengths": list(self.lengths),
            "support_radius": self.support_radius,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "BumpSpec":
        spec = make_bump(AssocParams(d["tau"], d["sigma"], d["h"]), int(d["N"]))
        if "lengths" in d and not np.allclose(d["lengths"], spec.lengths, rtol=1e-12, atol=0):
            raise ValueError("stored lengths disagree with (tau, sigma, h, N)")
        return spec

    @classmethod
    def from_json(cls, text: str) -> "BumpSpec":
        return cls.from_dict(json.loads(text))


def log_lengths(params: AssocParams, N: int) -> np.ndarray:
    p = np.arange(1, N + 1)
    s = params.sigma
    g = params.gevrey
    return (-(p.astype(float) ** s - (p - 1.0) ** s) * math.log(params.h)
            + log_M(p - 1, g) - log_M(p, g))


def make_bump(params: AssocParams, N: int) -> BumpSpec:
    if N < 1:
        raise ValueError("N must be at least 1")
    la = log_lengths(params, N)
    bad = np.flatnonzero(np.abs(la) > _MAX_LOG)
    if bad.size:
        p = int(bad[0]) + 1
        raise BumpRangeError(
            f"a_{p} = exp({la[bad[0]]:.1f}) is outside the double range; reduce N below {p}")
    lengths = tuple(float(a) for a in np.exp(la))
    return BumpSpec(params, N, lengths, math.fsum(lengths) / 2)


def sinc(x):
    """sin(x)/x with a series branch near 0."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = np.abs(x) < SINC_SERIES_CUTOFF
    xs = x[small]
    out[small] = 1.0 - xs * xs / 6.0
    xl = x[~small]
    out[~small] = np.sin(xl) / xl
    return out


def bump_spectrum(spec: BumpSpec, xi):
    """Exact Fourier transform prod_p sinc(a_p xi / 2) (real and even)."""
    xi = np.asarray(xi, dtype=float)
    out = np.ones_like(xi)
    for a in spec.lengths:
        out = out * sinc(0.5 * a * xi)
    return out if out.ndim else float(out)


def telescoped_log_bounds(spec: BumpSpec, xi_abs: float) -> np.ndarray:
    """ln of 2^n h^{n^sigma} M_n |xi|^{-n} for n = 0..N (n = 0 gives 0)."""
    n = np.arange(0, spec.N + 1)
    p = spec.params
    lx = math.log(xi_abs) if xi_abs > 0 else -math.inf
    with np.errstate(invalid="ignore"):
        out = (n * math.log(2.0) + n.astype(float) ** p.sigma * math.log(p.h)
               + log_M(n, p.gevrey) - n * lx)
    out[0] = 0.0
    return out


def spectral_envelope(spec: BumpSpec, xi_abs: float) -> float:
    """exp(-T_{tau,sigma,1/h}(|xi|/2)), the telescoped decay envelope.

    A bump of order N realizes the bounds 2^n h^{n^sigma} M_n |xi|^{-n} for
    n <= N only, so the envelope is guaranteed where its optimal index is <= N.
    """
    if xi_abs <= 0:
        return 1.0
    T, _ = T_from_log(spec.params.with_h(1.0 / spec.params.h), math.log(xi_abs / 2))
    return math.exp(-T)


@dataclass
class ForwardRow:
    xi: float
    abs_spec: float
    envelope: float
    passed: bool


@dataclass
class ForwardReport:
    spec: BumpSpec
    rows: list
    A_star: float
    forward_h: float

    @property
    def all_pass(self) -> bool:
        return all(r.passed for r in self.rows)

    def to_csv(self) -> str:
        lines = ["xi,abs_spec,envelope,pass"]
        for r in self.rows:
            lines.append(f"{r.xi:.17g},{r.abs_spec:.17g},{r.envelope:.17g},{int(r.passed)}")
        return "\n".join(lines) + "\n"


def verify_forward(spec: BumpSpec, xi_grid) -> ForwardReport:
    """Check |phi^(xi)| <= exp(-T_{tau,sigma,1/h}(|xi|/2)) + 1e-10 on a grid.

    A_star is the smallest A with |phi^| <= A exp(-E(|xi|)) on the grid, E
    being the forward exponent for the class index the bump's derivative
    bounds give it (h' = 2h: the factor 2^n is absorbed as 2^{n^sigma}).
    """
    xi_grid = np.asarray(xi_grid, dtype=float)
    spec_vals = np.abs(bump_spectrum(spec, xi_grid))
    fwd_params = spec.params.with_h(2 * spec.params.h)
    rows, a_star = [], 0.0
    for xi, v in zip(xi_grid, spec_vals):
        env = spectral_envelope(spec, abs(xi))
        rows.append(ForwardRow(float(xi), float(v), env, bool(v <= env + FORWARD_SLACK)))
        a_star = max(a_star, float(v) * math.exp(forward_envelope(fwd_params, 1, abs(xi))))
    return ForwardReport(spec, rows, a_star, fwd_params.h)

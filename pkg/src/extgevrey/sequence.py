"""Log-domain evaluation of M_p = p^{tau p^sigma} and its structural conditions.

M_p overflows a double already at p ~ 10 for tau = 1, sigma = 2, so every
routine here works with ln M_p. Inequality checks use an additive slack of
``LOG_SLACK`` in the log domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

LOG_SLACK = 1e-9
_MAX_LOG = 700.0


@dataclass(frozen=True)
class GevreyParams:
    tau: float
    sigma: float

    def __post_init__(self):
        if not (self.tau > 0 and math.isfinite(self.tau)):
            raise ValueError(f"tau must be positive, got {self.tau!r}")
        if not (self.sigma > 1 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must exceed 1, got {self.sigma!r}")

    def scaled(self, factor: float) -> "GevreyParams":
        return GevreyParams(self.tau * factor, self.sigma)


@dataclass(frozen=True, order=True)
class LogValue:
    """Positive number held as its natural logarithm."""

    log: float

    @property
    def value(self) -> float:
        if abs(self.log) > _MAX_LOG:
            raise OverflowError(f"exp({self.log}) is outside the double range")
        return math.exp(self.log)

    def __mul__(self, other: "LogValue") -> "LogValue":
        return LogValue(self.log + other.log)

    def __truediv__(self, other: "LogValue") -> "LogValue":
        return LogValue(self.log - other.log)


class Violation(NamedTuple):
    p: int
    lhs: float
    rhs: float


def log_M(p, params: GevreyParams):
    """ln M_p = tau p^sigma ln p, with ln M_0 = ln M_1 = 0.

    Accepts an integer or an integer array; arrays are evaluated elementwise.
    """
    if np.ndim(p) == 0:
        p = int(p)
        if p < 0:
            raise ValueError("p must be nonnegative")
        if p <= 1:
            return 0.0
        return params.tau * p ** params.sigma * math.log(p)
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise ValueError("p must be nonnegative")
    out = np.zeros_like(p)
    pos = p > 1
    out[pos] = params.tau * p[pos] ** params.sigma * np.log(p[pos])
    return out


def M(p: int, params: GevreyParams) -> LogValue:
    return LogValue(log_M(p, params))


def check_log_convexity(params: GevreyParams, p_max: int) -> list[Violation]:
    """Violations of M_p^2 <= M_{p-1} M_{p+1} for 1 <= p <= p_max - 1."""
    if p_max < 2:
        raise ValueError("p_max must be at least 2")
    lm = log_M(np.arange(p_max + 1), params)
    p = np.arange(1, p_max)
    lhs = 2.0 * lm[p]
    rhs = lm[p - 1] + lm[p + 1]
    bad = lhs > rhs + LOG_SLACK
    return [Violation(int(q), float(a), float(b)) for q, a, b in zip(p[bad], lhs[bad], rhs[bad])]


def check_ratio_bound(params: GevreyParams, p_max: int) -> list[Violation]:
    """Violations of M_{p-1}/M_p <= (2p)^{-tau (p-1)^{sigma-1}} for 1 <= p <= p_max."""
    if p_max < 1:
        raise ValueError("p_max must be at least 1")
    lm = log_M(np.arange(p_max + 1), params)
    p = np.arange(1, p_max + 1)
    lhs = lm[p - 1] - lm[p]
    rhs = -params.tau * (p - 1.0) ** (params.sigma - 1.0) * np.log(2.0 * p)
    bad = lhs > rhs + LOG_SLACK
    return [Violation(int(q), float(a), float(b)) for q, a, b in zip(p[bad], lhs[bad], rhs[bad])]


def m2bar_defects(params: GevreyParams, p_max: int) -> np.ndarray:
    """Table D[p-1, q-1] of the normalized defect

        [ln M_{p+q} - ln M'_p - ln M'_q] / (p^sigma + q^sigma),

    where M' is the sequence with tau replaced by 2^{sigma-1} tau.
    """
    if p_max < 2:
        raise ValueError("p_max must be at least 2")
    wide = params.scaled(2.0 ** (params.sigma - 1.0))
    idx = np.arange(1, p_max + 1)
    lm_sum = log_M(np.arange(2 * p_max + 1), params)
    lm_wide = log_M(idx, wide)
    pw = idx.astype(float) ** params.sigma
    num = lm_sum[idx[:, None] + idx[None, :]] - lm_wide[:, None] - lm_wide[None, :]
    return num / (pw[:, None] + pw[None, :])


def fit_m2bar_constant(params: GevreyParams, p_max: int) -> float:
    """ln C* : smallest ln C making the (M.2)-bar inequality hold for p, q <= p_max."""
    return float(m2bar_defects(params, p_max).max())


def stability_defects(q: int, params: GevreyParams, p_max: int) -> np.ndarray:
    """Array over p = 1..p_max of [ln M_{p+q} - ln M_p] / p^sigma."""
    if q < 0 or p_max < 1:
        raise ValueError("need q >= 0 and p_max >= 1")
    p = np.arange(1, p_max + 1)
    return (log_M(p + q, params) - log_M(p, params)) / p.astype(float) ** params.sigma


def fit_stability_constant(q: int, params: GevreyParams, p_max: int) -> float:
    """ln C_q* for M_{p+q} <= C_q^{p^sigma} M_p over 1 <= p <= p_max."""
    if q == 0:
        return 0.0
    return float(stability_defects(q, params, p_max).max())


def first_argmax(values: np.ndarray, rtol: float = 1e-12) -> tuple[int, ...]:
    """Index of the first entry within ``rtol`` of the maximum (C order).

    Used to locate where a fitted constant is attained when the maximum is
    shared by a ridge of entries up to rounding.
    """
    top = values.max()
    hit = values >= top - rtol * max(1.0, abs(top))
    return tuple(int(i) for i in np.unravel_index(np.argmax(hit), values.shape))

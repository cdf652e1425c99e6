"""Principal real branch of the Lambert W function on [0, inf)."""

from __future__ import annotations

import math
from dataclasses import dataclass

_MAX_ITER = 50
_TINY = 1e-300


class DomainError(ValueError):
    """Argument outside the domain of a closed-form expression."""


@dataclass(frozen=True)
class WResult:
    value: float
    residual: float
    iterations: int


def w0_bracket(x: float) -> tuple[float, float]:
    """Two-sided logarithmic estimate of W(x), valid for x >= e.

    Returns ``(ln x - ln ln x, ln x - 0.5 ln ln x)``. Both ends coincide
    with W(e) = 1 at x = e and are strict elsewhere.
    """
    if not math.isfinite(x) or x < math.e:
        raise DomainError(f"w0_bracket requires x >= e, got {x!r}")
    lx = math.log(x)
    llx = math.log(lx)
    return lx - llx, lx - 0.5 * llx


def _residual(w: float, x: float) -> float:
    # |w e^w - x| / max(1, x), written to stay finite near the top of the
    # double range: w e^w = x * (w e^w / x) and w e^{w} / x = w / (x e^{-w}).
    scale = max(1.0, x)
    if w < 700.0:
        return abs(w * math.exp(w) - x) / scale
    return abs(w * math.exp(w - math.log(x)) - 1.0) * x / scale


def lambert_w0(x: float) -> WResult:
    """Evaluate W0(x) for finite x >= 0 by Halley iteration.

    The iteration works on g(w) = w - x e^{-w}, which has the same root as
    w e^w - x but never forms e^w, so it is safe up to the largest double.
    """
    if not (isinstance(x, (int, float)) and math.isfinite(x)) or x < 0:
        raise DomainError(f"lambert_w0 requires finite x >= 0, got {x!r}")
    x = float(x)
    if x == 0.0:
        return WResult(0.0, 0.0, 0)
    if x < _TINY:
        w = x * (1.0 - x)
        return WResult(w, _residual(w, x), 0)

    if x < math.e:
        w = math.log1p(x)
    else:
        lo, hi = w0_bracket(x)
        w = 0.5 * (lo + hi)

    for it in range(1, _MAX_ITER + 1):
        g = w - x * math.exp(-w)
        wp1 = w + 1.0
        step = g / (wp1 - (w + 2.0) * g / (2.0 * wp1))
        w_new = w - step
        if w_new <= 0.0:
            # stay on the principal branch; halve towards zero instead
            w_new = 0.5 * w
        if abs(w_new - w) <= 1e-15 * max(1.0, abs(w_new)):
            return WResult(w_new, _residual(w_new, x), it)
        w = w_new
    raise RuntimeError(f"lambert_w0 failed to converge for x={x!r}")


def W(x: float) -> float:
    """Shorthand for ``lambert_w0(x).value``."""
    return lambert_w0(x).value

"""Directional decay classification of localized spectra in 1-D.

A signal u is localized with a plateau cutoff phi (phi = 1 near x0) and
|(phi u)^(xi)| is tested against A exp(-T_{tau,sigma,h}(|xi|)) on each
half-line xi > 0, xi < 0. Transforms use the convention
u^(xi) = int u(x) e^{i x xi} dx.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy.signal import fftconvolve
from scipy.special import gammaln

from .associated import AssocParams, T_from_log
from .paleywiener import BumpRangeError, BumpSpec, bump_spectrum, make_bump, sinc

H_GRID = tuple(2.0**j for j in range(-10, 11))
STABILITY_MARGIN = math.log(10.0)
MIN_DIRECTION_POINTS = 16
_EPS = np.finfo(float).eps


class ResolutionError(ValueError):
    pass


SIGNAL_KINDS = ("delta", "heaviside", "gaussian", "bump", "samples")


@dataclass(frozen=True)
class SignalSpec:
    """Test signal. ``position`` is the delta location, the heaviside jump,
    the gaussian center or the bump center; gaussians are
    amplitude * exp(-((x - position) / width)^2)."""

    kind: str
    position: float = 0.0
    width: float = 1.0
    amplitude: float = 1.0
    bump: Optional[BumpSpec] = None
    values: Optional[tuple] = field(default=None, repr=False)
    spacing: Optional[float] = None
    origin: float = 0.0

    def __post_init__(self):
        if self.kind not in SIGNAL_KINDS:
            raise ValueError(f"unknown signal kind {self.kind!r}")
        if self.kind == "gaussian" and not self.width > 0:
            raise ValueError("gaussian width must be positive")
        if self.kind == "bump" and self.bump is None:
            raise ValueError("bump signal needs a BumpSpec")
        if self.kind == "samples":
            if self.values is None or not (self.spacing and self.spacing > 0):
                raise ValueError("samples signal needs values and spacing > 0")
            if not np.all(np.isfinite(self.values)):
                raise ValueError("sample values must be finite")

    @classmethod
    def from_dict(cls, d: dict) -> "SignalSpec":
        d = dict(d)
        if "bump" in d and isinstance(d["bump"], dict):
            d["bump"] = BumpSpec.from_dict(d["bump"])
        if "values" in d and d["values"] is not None:
            d["values"] = tuple(float(v) for v in d["values"])
        return cls(**d)

    def scaled(self, c: float) -> "SignalSpec":
        if self.kind == "samples":
            return replace(self, values=tuple(c * v for v in self.values))
        return replace(self, amplitude=self.amplitude * c)


@dataclass(frozen=True)
class PlateauCutoff:
    """phi = indicator[x0 - r, x0 + r] * bump, equal to 1 on
    [x0 - (r - rho), x0 + (r - rho)] with rho the bump's support radius."""

    bump: BumpSpec
    x0: float
    r: float

    def __post_init__(self):
        if not self.r > self.bump.support_radius:
            raise ValueError(
                f"plateau needs r > bump support radius {self.bump.support_radius:.6g}")

    @property
    def plateau(self) -> tuple[float, float]:
        m = self.r - self.bump.support_radius
        return self.x0 - m, self.x0 + m

    @property
    def support(self) -> tuple[float, float]:
        m = self.r + self.bump.support_radius
        return self.x0 - m, self.x0 + m

    def spectrum(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        return np.exp(1j * self.x0 * xi) * 2 * self.r * sinc(self.r * xi) * bump_spectrum(self.bump, xi)

    def sample(self, x: np.ndarray) -> np.ndarray:
        """Cell averages of phi on a uniform grid."""
        dx = x[1] - x[0]
        lo, hi = self.x0 - self.r, self.x0 + self.r
        ind = np.clip((np.minimum(x + dx / 2, hi) - np.maximum(x - dx / 2, lo)) / dx, 0, 1)
        return _smooth_by_boxes(ind, self.bump.lengths, dx)


def make_cutoff(tau: float, sigma: float, x0: float, h: float = 2.0, N: int = 8,
                r: float = 0.5) -> PlateauCutoff:
    """Plateau cutoff at x0. N is capped at the largest order whose box
    widths are representable; narrower boxes leave any finite grid unchanged."""
    params = AssocParams(tau, sigma, h)
    for n in range(N, 0, -1):
        try:
            return PlateauCutoff(make_bump(params, n), x0, r)
        except BumpRangeError:
            continue
    raise BumpRangeError("no representable cutoff for these parameters")


def _box_kernel(a: float, dx: float) -> np.ndarray:
    # weights = |cell m intersect [-a/2, a/2]| / a, cells centered at m dx
    half = int(math.ceil(a / (2 * dx) + 0.5))
    m = np.arange(-half, half + 1) * dx
    w = np.clip(np.minimum(m + dx / 2, a / 2) - np.maximum(m - dx / 2, -a / 2), 0, None)
    return w / w.sum()


def _smooth_by_boxes(f: np.ndarray, lengths, dx: float) -> np.ndarray:
    for a in lengths:
        k = _box_kernel(a, dx)
        if len(k) == 1:
            continue
        f = fftconvolve(f, k, mode="same") if len(k) > 64 else np.convolve(f, k, mode="same")
    return f


# -- localized spectra ------------------------------------------------------

@dataclass
class LocalizedSpectrum:
    xi: np.ndarray
    abs: np.ndarray
    floor: float
    method: str


def _inside(a: float, b: float, interval) -> bool:
    return interval[0] <= a and b <= interval[1]


def _exact_spectrum(signal: SignalSpec, cutoff: PlateauCutoff, xi: np.ndarray):
    plateau, support = cutoff.plateau, cutoff.support
    amp = abs(signal.amplitude)
    s = signal.position
    if signal.kind == "delta":
        if _inside(s, s, plateau):
            return np.full_like(xi, amp), "exact:delta"
        if s < support[0] or s > support[1]:
            return np.zeros_like(xi), "exact:delta"
        return None
    if signal.kind == "heaviside":
        if s < support[0]:
            return amp * np.abs(cutoff.spectrum(xi)), "exact:heaviside-smooth"
        if s > support[1]:
            return np.zeros_like(xi), "exact:heaviside-zero"
        if _inside(s, s, plateau):
            # phi H_s = 1_[s, x0+r] * b + (H - B)(. - s), whose transform is
            # (b^(xi) e^{i(x0+r)xi} - e^{i s xi}) / (i xi).
            out = np.empty_like(xi)
            nz = xi != 0
            b = bump_spectrum(cutoff.bump, xi[nz])
            out[nz] = np.abs(b * np.exp(1j * (cutoff.x0 + cutoff.r - s) * xi[nz]) - 1) / np.abs(xi[nz])
            out[~nz] = cutoff.x0 + cutoff.r - s
            return amp * out, "exact:heaviside-jump"
        return None
    if signal.kind == "bump":
        rho = signal.bump.support_radius
        if _inside(s - rho, s + rho, plateau):
            return amp * np.abs(bump_spectrum(signal.bump, xi)), "exact:bump"
        if s + rho < support[0] or s - rho > support[1]:
            return np.zeros_like(xi), "exact:bump"
        return None
    return None


def _dft_abs(x: np.ndarray, f: np.ndarray, dx: float, xi: np.ndarray) -> np.ndarray:
    keep = f != 0
    x, f = x[keep], f[keep]
    if not len(x):
        return np.zeros_like(xi)
    xc = 0.5 * (x[0] + x[-1])
    xr = x - xc
    out = np.empty(len(xi))
    chunk = max(1, int(4_000_000 // max(len(xr), 1)))
    for i in range(0, len(xi), chunk):
        ph = np.exp(1j * np.outer(xi[i:i + chunk], xr))
        out[i:i + chunk] = np.abs(ph @ f) * dx
    return out


def _signal_on_grid(signal: SignalSpec, x: np.ndarray, dx: float) -> np.ndarray:
    a, s = signal.amplitude, signal.position
    if signal.kind == "gaussian":
        return a * np.exp(-(((x - s) / signal.width) ** 2))
    if signal.kind == "heaviside":
        return a * np.clip((x + dx / 2 - s) / dx, 0, 1)
    if signal.kind == "delta":
        out = np.zeros_like(x)
        j = int(round((s - x[0]) / dx))
        if 0 <= j < len(x):
            out[j] = a / dx
        return out
    if signal.kind == "bump":
        # unit mass at the center spread by the box chain
        ind = np.zeros_like(x)
        j = int(round((s - x[0]) / dx))
        if 0 <= j < len(x):
            ind[j] = 1.0 / dx
        return a * _smooth_by_boxes(ind, signal.bump.lengths, dx)
    raise AssertionError(signal.kind)


def localized_spectrum(signal: SignalSpec, cutoff: PlateauCutoff, xi_grid) -> LocalizedSpectrum:
    """|(phi u)^| on ``xi_grid``; closed form where available, otherwise the
    discrete Fourier transform of the sampled product.

    The sampled route picks a spacing whose Nyquist frequency exceeds four
    times max|xi| (for ``samples`` signals the given spacing must satisfy
    this). Values at or below ``floor`` are below the numerical resolution.
    """
    xi = np.asarray(xi_grid, dtype=float)
    xi_max = float(np.max(np.abs(xi))) if xi.size else 0.0
    exact = _exact_spectrum(signal, cutoff, xi)
    if exact is not None:
        vals, method = exact
        return LocalizedSpectrum(xi, vals, 0.0, method)

    need = math.pi / (4 * xi_max) if xi_max > 0 else math.inf
    lo, hi = cutoff.support
    if signal.kind == "samples":
        dx = float(signal.spacing)
        if dx >= need:
            raise ResolutionError(
                f"sample spacing {dx:.6g} aliases at |xi| = {xi_max:.6g}; need spacing < {need:.6g}")
        vals = np.asarray(signal.values, dtype=float)
        x = signal.origin + dx * np.arange(len(vals))
        phi = cutoff.sample(_uniform_cover(lo, hi, dx, x[0]))
        grid = _uniform_cover(lo, hi, dx, x[0])
        j0 = int(round((grid[0] - x[0]) / dx))
        u = np.zeros_like(grid)
        idx = np.arange(len(grid)) + j0
        ok = (idx >= 0) & (idx < len(vals))
        u[ok] = vals[idx[ok]]
        x = grid
    else:
        dx = min(need * 0.8, (hi - lo) / 64)
        x = _uniform_cover(lo, hi, dx, lo)
        phi = cutoff.sample(x)
        u = _signal_on_grid(signal, x, dx)
    f = phi * u
    vals = _dft_abs(x, f, dx, xi)
    l1 = float(np.sum(np.abs(f)) * dx)
    span = float(np.max(np.abs(x - 0.5 * (x[0] + x[-1])))) if len(x) else 0.0
    floor = (1e-13 + 8 * _EPS * span * xi_max) * l1
    return LocalizedSpectrum(xi, vals, floor, "dft")


def _uniform_cover(lo: float, hi: float, dx: float, anchor: float) -> np.ndarray:
    j_lo = math.floor((lo - anchor) / dx) - 2
    j_hi = math.ceil((hi - anchor) / dx) + 2
    return anchor + dx * np.arange(j_lo, j_hi + 1)


# -- fitting ----------------------------------------------------------------

@dataclass(frozen=True)
class DecayReport:
    direction: str
    tau: float
    sigma: float
    h_star: Optional[float]
    ln_A_star: float
    max_defect: float
    verdict: str
    h_eval: float = 0.0

    @property
    def A_star(self) -> float:
        return math.exp(self.ln_A_star) if self.ln_A_star < 709 else math.inf

    @property
    def in_class(self) -> bool:
        return self.verdict == "in_class"

    def csv_row(self) -> str:
        h = "nan" if self.h_star is None else f"{self.h_star:.17g}"
        return f"{self.direction},{h},{self.ln_A_star:.17g},{self.max_defect:.17g},{self.verdict}"


CSV_HEADER = "direction,h_star,ln_A_star,max_defect,verdict"


def decay_fit(xi, values, tau: float, sigma: float, direction: str = "+",
              floor: float = 0.0, h_grid=H_GRID) -> DecayReport:
    """Fit an envelope A exp(-T_{tau,sigma,h}(|xi|)) on one half-line.

    The direction's samples with |xi| > e are split by |xi| into a primary
    (lower) and a sentinel (upper) window. For each h,

        defect_W(h) = max over resolved samples in W of ln|v| + T_h(|xi|),

    and h is *stable* when the sentinel defect exceeds the primary one by at
    most ln 10. Only h whose envelope is past its first-order regime at the
    primary window's top (optimal index >= 2) are admissible; otherwise
    exp(-T_h) coincides with C/|xi| there and cannot witness the class.
    h_star is the largest admissible stable h; ln A_star is the primary
    defect plus ln 10, so in_class holds iff max_defect <= ln A_star.
    """
    if direction not in ("+", "-"):
        raise ValueError("direction must be '+' or '-'")
    xi = np.asarray(xi, dtype=float)
    v = np.abs(np.asarray(values, dtype=float))
    sel = xi > math.e if direction == "+" else xi < -math.e
    if not np.any(sel):
        raise ValueError(f"no grid points with |xi| > e in direction {direction}")
    if np.count_nonzero(sel) < MIN_DIRECTION_POINTS:
        raise ValueError(f"need at least {MIN_DIRECTION_POINTS} points with |xi| > e "
                         f"in direction {direction}")
    axi = np.abs(xi[sel])
    order = np.argsort(axi, kind="stable")
    axi, v = axi[order], v[sel][order]
    n_prim = (len(axi) + 1) // 2
    resolved = v > floor
    if not np.any(resolved[:n_prim]):
        raise ValueError("no resolved samples in the primary window")
    lnv = np.where(resolved, np.log(np.where(resolved, v, 1.0)), -np.inf)
    lnxi = np.log(axi)
    top = lnxi[n_prim - 1]

    evaluated = []
    for h in sorted(h_grid):
        p = AssocParams(tau, sigma, h)
        if T_from_log(p, top)[1] < 2:
            continue
        T = np.array([T_from_log(p, s)[0] for s in lnxi])
        d = lnv + T
        d_prim = float(np.max(d[:n_prim]))
        d_sent = float(np.max(d[n_prim:])) if n_prim < len(d) else -math.inf
        evaluated.append((h, d_prim, d_sent))
    if not evaluated:
        raise ValueError("frequency window too narrow: no admissible h")

    stable = [e for e in evaluated if e[2] <= e[1] + STABILITY_MARGIN]
    if stable:
        h, d_prim, d_sent = stable[-1]
        h_star, verdict = h, "in_class"
    else:
        h, d_prim, d_sent = evaluated[0]
        h_star, verdict = None, "not_in_class"
    return DecayReport(direction, tau, sigma, h_star, d_prim + STABILITY_MARGIN,
                       max(d_prim, d_sent), verdict, h)


def enumerated_envelope(N: int, tau: float, sigma: float, h: float, xi_abs: float) -> tuple[float, float]:
    """Log of the two N-indexed decay families:

    form_A = ln[h^N (N!)^{tau/sigma} / xi^{floor(N^{1/sigma})}]
    form_B = ln[h^{N^sigma} N^{tau N^sigma} / xi^N]
    """
    if N < 1 or not xi_abs > 1:
        raise ValueError("need N >= 1 and |xi| > 1")
    m = int(math.floor(N ** (1.0 / sigma)))
    while (m + 1) ** sigma <= N:
        m += 1
    while m > 0 and m ** sigma > N:
        m -= 1
    lx = math.log(xi_abs)
    form_a = N * math.log(h) + tau / sigma * float(gammaln(N + 1)) - m * lx
    ns = float(N) ** sigma
    form_b = ns * math.log(h) + tau * ns * math.log(N) - N * lx
    return form_a, form_b


# -- classification ---------------------------------------------------------

@dataclass(frozen=True)
class GridConfig:
    xi_max: float = 1e4
    samples: int = 64

    def grid(self) -> np.ndarray:
        pos = np.geomspace(math.e * 1.01, self.xi_max, self.samples)
        return np.concatenate([-pos[::-1], pos])


@dataclass(frozen=True)
class CutoffConfig:
    h: float = 2.0
    N: int = 8
    r: float = 0.5


def classify(signal: SignalSpec, x0: float, tau: float, sigma: float,
             cutoff: CutoffConfig = CutoffConfig(), grid: GridConfig = GridConfig(),
             directions=("+", "-")) -> list[DecayReport]:
    """Localize at x0 and fit the decay envelope in each direction."""
    phi = make_cutoff(tau, sigma, x0, cutoff.h, cutoff.N, cutoff.r)
    spec = localized_spectrum(signal, phi, grid.grid())
    return [decay_fit(spec.xi, spec.abs, tau, sigma, d, spec.floor) for d in directions]


def check_n_family(report: DecayReport, xi, values, floor: float = 0.0,
                   n_max: int = 100) -> list[tuple[float, int]]:
    """Re-check a fitted pair against the N-indexed bounds

        |v(xi)| <= A_star M_N / (h_star^{N^sigma} |xi|^N),   N = 1..n_max,

    on the report's direction window; exp(-T_h) is their infimum over N.
    Returns the (xi, N) pairs that fail.
    """
    if report.h_star is None:
        raise ValueError("report has no fitted h")
    xi = np.asarray(xi, dtype=float)
    v = np.abs(np.asarray(values, dtype=float))
    sel = (xi > math.e if report.direction == "+" else xi < -math.e) & (v > floor)
    bad = []
    for x, val in zip(xi[sel], v[sel]):
        lv = math.log(val)
        for n in range(1, n_max + 1):
            _, form_b = enumerated_envelope(n, report.tau, report.sigma, 1.0 / report.h_star, abs(x))
            if lv > report.ln_A_star + form_b + 1e-9 * max(1.0, abs(lv)):
                bad.append((float(x), n))
    return bad

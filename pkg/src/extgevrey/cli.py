"""Command-line interface: ``extgevrey <command> [subcommand] [flags]``.

Exit codes: 0 success, 1 verification violation, 2 usage or domain error.
CSV floats carry 17 significant digits so values round-trip.
"""

from __future__ import annotations

import argparse
import io
import itertools
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .associated import AssocParams, bounds_report, T_discrete, verify_sandwich
from .lambert import DomainError, lambert_w0, w0_bracket
from .microlocal import (CSV_HEADER, CutoffConfig, GridConfig, SignalSpec, classify)
from .paleywiener import BumpSpec, bump_spectrum, make_bump, spectral_envelope, verify_forward
from .sequence import (GevreyParams, check_log_convexity, check_ratio_bound, first_argmax,
                       m2bar_defects, stability_defects)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

PRESETS = {
    "default": dict(taus=(0.5, 1.0, 2.0), sigmas=(1.5, 2.0, 3.0), hs=(0.5, 1.0, 2.0), n_k=50),
    "quick": dict(taus=(1.0,), sigmas=(1.5, 2.0), hs=(0.5, 1.0), n_k=20),
}


class UsageError(ValueError):
    pass


# -- parsing helpers --------------------------------------------------------

def parse_k(text: str) -> float:
    """A float literal, or ``eN`` meaning e^N."""
    t = text.strip()
    if t[:1] in ("e", "E") and len(t) > 1:
        try:
            return math.exp(float(t[1:]))
        except ValueError:
            pass
    try:
        return float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number or eN shorthand: {text!r}")


def parse_grid(text: str, geometric: bool = False) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must be lo:hi:n, got {text!r}")
    lo, hi = parse_k(parts[0]), parse_k(parts[1])
    try:
        n = int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid count must be an integer, got {parts[2]!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("grid count must be >= 1")
    if geometric:
        if not (lo > 0 and hi > 0):
            raise argparse.ArgumentTypeError("geometric grid needs positive endpoints")
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    return v


def render(header: list[str], rows: list[list], fmt: str) -> str:
    if fmt == "json":
        recs = [{k: _jsonable(v) for k, v in zip(header, r)} for r in rows]
        return json.dumps(recs, indent=1) + "\n"
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for r in rows:
        buf.write(",".join(_fmt(v) for v in r) + "\n")
    return buf.getvalue()


def emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def pmap(fn, items, jobs: int) -> list:
    """Order-preserving map, fanned out over processes when jobs > 1."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as ex:
        return list(ex.map(fn, items))


# -- commands ---------------------------------------------------------------

def cmd_lambert(args) -> int:
    if args.x is not None:
        xs = [args.x]
    elif args.grid is not None:
        xs = parse_grid(args.grid)
    else:
        raise UsageError("lambert needs --x or --grid")
    rows = []
    for x in xs:
        r = lambert_w0(float(x))
        lo, hi = w0_bracket(float(x)) if x >= math.e else (None, None)
        rows.append([float(x), r.value, r.residual, lo, hi])
    emit(render(["x", "W", "residual", "bracket_lo", "bracket_hi"], rows, args.format), args.out)
    return EXIT_OK


def _seq_row(params: GevreyParams, pmax: int):
    m1 = check_log_convexity(params, pmax)
    m3 = check_ratio_bound(params, pmax)
    small = min(pmax, 60)
    d2 = m2bar_defects(params, small)
    p2, q2 = first_argmax(d2)
    ds = stability_defects(1, params, pmax)
    (ps,) = first_argmax(ds)
    return [params.tau, params.sigma, pmax, len(m1), len(m3),
            float(np.max(d2)), p2 + 1, q2 + 1, float(np.max(ds)), ps + 1]


def cmd_seq(args) -> int:
    params = GevreyParams(args.tau, args.sigma)
    row = _seq_row(params, args.pmax)
    header = ["tau", "sigma", "pmax", "m1_violations", "m3_violations",
              "m2bar_const", "m2bar_p", "m2bar_q", "stability_const", "stability_p"]
    emit(render(header, [row], args.format), args.out)
    return EXIT_VIOLATION if row[3] or row[4] else EXIT_OK


def _k_values(args) -> np.ndarray:
    if args.k is not None:
        return np.array([args.k])
    if args.k_grid is not None:
        return parse_grid(args.k_grid, geometric=True)
    raise UsageError("need --k or --k-grid")


def _eval_row(job):
    params, k = job
    T, p = T_discrete(params, k)
    return [k, T, p]


def _bounds_row(job):
    params, k = job
    r = bounds_report(params, k)
    return [r.k, r.T, r.p_star, r.f_sup, r.r0, r.W_R, r.lower, r.upper]


def _verify_job_nk(job):
    params, n_k = job
    res = verify_sandwich(params, n_k)
    bad = ([["upper", r.k, r.T, r.upper] for r in res.upper_violations]
           + [["lower", r.k, r.T, r.lower - res.H] for r in res.lower_violations])
    return params, res.H, len(res.rows), bad


def cmd_assoc(args) -> int:
    if args.action == "verify":
        if args.tau is not None and args.sigma is not None and args.h is not None:
            grid = [AssocParams(args.tau, args.sigma, args.h)]
            n_k = PRESETS[args.preset]["n_k"]
        else:
            pr = PRESETS[args.preset]
            grid = [AssocParams(t, s, h) for t, s, h in itertools.product(pr["taus"], pr["sigmas"], pr["hs"])]
            n_k = pr["n_k"]
        results = pmap(_verify_job_nk, [(p, n_k) for p in grid], args.jobs)
        rows, viol = [], []
        for params, H, n, bad in results:
            rows.append([params.tau, params.sigma, params.h, H, n, len(bad), not bad])
            for b in bad:
                viol.append([params.tau, params.sigma, params.h] + b)
        text = render(["tau", "sigma", "h", "H", "n_k", "violations", "pass"], rows, args.format)
        if viol:
            text += render(["tau", "sigma", "h", "side", "k", "T", "bound"], viol, args.format)
        emit(text, args.out)
        return EXIT_VIOLATION if viol else EXIT_OK

    if args.tau is None or args.sigma is None or args.h is None:
        raise UsageError("need --tau, --sigma and --h")
    params = AssocParams(args.tau, args.sigma, args.h)
    jobs = [(params, float(k)) for k in _k_values(args)]
    if args.action == "eval":
        rows = pmap(_eval_row, jobs, args.jobs)
        header = ["k", "T", "p_star"]
    else:
        rows = pmap(_bounds_row, jobs, args.jobs)
        header = ["k", "T", "p_star", "f_sup", "r0", "W_R", "lower", "upper"]
    emit(render(header, rows, args.format), args.out)
    return EXIT_OK


def _load_spec(path) -> BumpSpec:
    if path is None:
        raise UsageError("need --spec")
    return BumpSpec.from_json(Path(path).read_text())


def _xi_values(args) -> np.ndarray:
    if args.xi is not None:
        return np.array([args.xi])
    return np.geomspace(1.0, args.xi_max, args.samples)


def cmd_bump(args) -> int:
    if args.action == "make":
        if args.tau is None or args.sigma is None or args.h is None:
            raise UsageError("need --tau, --sigma and --h")
        spec = make_bump(AssocParams(args.tau, args.sigma, args.h), args.n)
        emit(spec.to_json() + "\n", args.out)
        return EXIT_OK
    spec = _load_spec(args.spec)
    xi = _xi_values(args)
    if args.action == "spectrum":
        vals = np.abs(bump_spectrum(spec, xi))
        rows = [[float(x), float(v), spectral_envelope(spec, abs(float(x)))] for x, v in zip(xi, vals)]
        emit(render(["xi", "abs_spec", "envelope"], rows, args.format), args.out)
        return EXIT_OK
    rep = verify_forward(spec, xi)
    rows = [[r.xi, r.abs_spec, r.envelope, r.passed] for r in rep.rows]
    emit(render(["xi", "abs_spec", "envelope", "pass"], rows, args.format), args.out)
    return EXIT_OK if rep.all_pass else EXIT_VIOLATION


def _signal_from_args(args) -> SignalSpec:
    if args.signal_file:
        return SignalSpec.from_dict(json.loads(Path(args.signal_file).read_text()))
    if args.signal is None:
        raise UsageError("need --signal or --signal-file")
    if args.signal in ("samples",):
        raise UsageError("samples signals are read from --signal-file")
    kw = dict(kind=args.signal, position=args.position, width=args.width)
    if args.signal == "bump":
        kw["bump"] = make_bump(AssocParams(args.tau, args.sigma, args.bump_h), args.bump_n)
    return SignalSpec(**kw)


def cmd_wf(args) -> int:
    signal = _signal_from_args(args)
    directions = ("+", "-") if args.direction == "both" else (args.direction,)
    reports = classify(signal, args.x0, args.tau, args.sigma,
                       CutoffConfig(args.cutoff_h, args.cutoff_n, args.cutoff_r),
                       GridConfig(args.xi_max, args.samples), directions)
    if args.format == "json":
        recs = [{"direction": r.direction, "h_star": r.h_star, "ln_A_star": r.ln_A_star,
                 "max_defect": r.max_defect, "verdict": r.verdict} for r in reports]
        emit(json.dumps(recs, indent=1) + "\n", args.out)
    else:
        emit(CSV_HEADER + "\n" + "".join(r.csv_row() + "\n" for r in reports), args.out)
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--jobs", type=_positive_int, default=os.cpu_count() or 1)

    params = argparse.ArgumentParser(add_help=False)
    params.add_argument("--tau", type=float)
    params.add_argument("--sigma", type=float)
    params.add_argument("--h", type=float)

    p = argparse.ArgumentParser(prog="extgevrey", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    lam = sub.add_parser("lambert", parents=[common], help="principal Lambert W")
    g = lam.add_mutually_exclusive_group(required=True)
    g.add_argument("--x", type=float)
    g.add_argument("--grid", help="lo:hi:n, linearly spaced")
    lam.set_defaults(func=cmd_lambert)

    seq = sub.add_parser("seq", help="sequence structure checks")
    seq_sub = seq.add_subparsers(dest="action", required=True)
    sc = seq_sub.add_parser("check", parents=[common])
    sc.add_argument("--tau", type=float, required=True)
    sc.add_argument("--sigma", type=float, required=True)
    sc.add_argument("--pmax", type=_positive_int, default=500)
    sc.set_defaults(func=cmd_seq)

    assoc = sub.add_parser("assoc", help="associated function T")
    assoc_sub = assoc.add_subparsers(dest="action", required=True)
    for name in ("eval", "bounds", "verify"):
        a = assoc_sub.add_parser(name, parents=[common, params])
        if name == "verify":
            a.add_argument("--preset", choices=sorted(PRESETS), default="default")
        else:
            kg = a.add_mutually_exclusive_group(required=True)
            kg.add_argument("--k", type=parse_k, help="value or eN meaning e^N")
            kg.add_argument("--k-grid", help="lo:hi:n, geometric; endpoints accept eN")
        a.set_defaults(func=cmd_assoc)

    bump = sub.add_parser("bump", help="compactly supported bump")
    bump_sub = bump.add_subparsers(dest="action", required=True)
    bm = bump_sub.add_parser("make", parents=[common, params])
    bm.add_argument("--n", type=_positive_int, default=8)
    bm.set_defaults(func=cmd_bump)
    for name in ("spectrum", "verify"):
        b = bump_sub.add_parser(name, parents=[common])
        b.add_argument("--spec", required=True)
        b.add_argument("--xi", type=float)
        b.add_argument("--xi-max", type=float, default=1e8)
        b.add_argument("--samples", type=_positive_int, default=400)
        b.set_defaults(func=cmd_bump)

    wf = sub.add_parser("wf", help="directional decay classification")
    wf_sub = wf.add_subparsers(dest="action", required=True)
    wc = wf_sub.add_parser("classify", parents=[common])
    wc.add_argument("--signal", choices=("delta", "heaviside", "gaussian", "bump"))
    wc.add_argument("--signal-file", help="JSON SignalSpec (required for samples)")
    wc.add_argument("--position", type=float, default=0.0)
    wc.add_argument("--width", type=float, default=1.0)
    wc.add_argument("--bump-h", type=float, default=1.0)
    wc.add_argument("--bump-n", type=_positive_int, default=8)
    wc.add_argument("--x0", type=float, default=0.0)
    wc.add_argument("--tau", type=float, required=True)
    wc.add_argument("--sigma", type=float, required=True)
    wc.add_argument("--cutoff-h", type=float, default=2.0)
    wc.add_argument("--cutoff-n", type=_positive_int, default=8)
    wc.add_argument("--cutoff-r", type=float, default=0.5)
    wc.add_argument("--direction", choices=("+", "-", "both"), default="both")
    wc.add_argument("--xi-max", type=float, default=1e4)
    wc.add_argument("--samples", type=_positive_int, default=64)
    wc.set_defaults(func=cmd_wf)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DomainError, ValueError, OverflowError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

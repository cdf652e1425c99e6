"""Fitted h_star under a family of plateau cutoffs at a regular point.

The class verdict should not depend on the cutoff as long as its support
stays clear of the signal's singular points; how far the fitted h moves is
not quantified by the theory, so this script records it. The support
columns show when a wide cutoff reaches a singularity.

    python scripts/cutoff_drift.py --signal heaviside --x0 1 --tau 1 --sigma 2
"""

import argparse
import itertools

from extgevrey.microlocal import CutoffConfig, GridConfig, SignalSpec, classify, make_cutoff


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--signal", default="heaviside", choices=("heaviside", "gaussian", "delta"))
    ap.add_argument("--position", type=float, default=0.0)
    ap.add_argument("--x0", type=float, default=1.0)
    ap.add_argument("--tau", type=float, default=1.0)
    ap.add_argument("--sigma", type=float, default=2.0)
    ap.add_argument("--xi-max", type=float, default=1e4)
    args = ap.parse_args()

    signal = SignalSpec(args.signal, position=args.position)
    grid = GridConfig(args.xi_max)
    print("cutoff_h,cutoff_N,cutoff_r,support_lo,support_hi,direction,h_star,ln_A_star,verdict")
    for ch, n, r in itertools.product((1.0, 2.0, 4.0, 8.0), (4, 8), (0.4, 0.6, 0.9)):
        try:
            lo, hi = make_cutoff(args.tau, args.sigma, args.x0, ch, n, r).support
            reports = classify(signal, args.x0, args.tau, args.sigma, CutoffConfig(ch, n, r), grid)
        except ValueError as exc:  # plateau too narrow for this bump
            print(f"{ch:g},{n},{r:g},,,,,,skipped: {exc}")
            continue
        for rep in reports:
            hs = "" if rep.h_star is None else f"{rep.h_star:g}"
            print(f"{ch:g},{n},{r:g},{lo:.4g},{hi:.4g},{rep.direction},{hs},"
                  f"{rep.ln_A_star:.6g},{rep.verdict}")


if __name__ == "__main__":
    main()

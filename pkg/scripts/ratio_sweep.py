"""Measure T/upper_expr and T/lower_expr as k grows.

For 1 < sigma < 2 one might expect a lower bound with the upper bound's own
leading constant. The closed-form supremum instead suggests
T/upper_expr -> (sigma-1)/sigma; this sweep reports what the numbers do.

    python scripts/ratio_sweep.py --sigmas 1.25 1.5 1.75 --log-k-max 300
"""

import argparse
import math

import numpy as np

from extgevrey.associated import AssocParams, T_from_log, _lower, _upper


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--tau", type=float, default=1.0)
    ap.add_argument("--h", type=float, default=1.0)
    ap.add_argument("--sigmas", type=float, nargs="+", default=[1.25, 1.5, 1.75, 2.0, 3.0])
    ap.add_argument("--log-k-max", type=float, default=300.0)
    ap.add_argument("--points", type=int, default=12)
    args = ap.parse_args()

    print("sigma,ln_k,T,T_over_upper,T_over_lower,limit_(s-1)/s")
    for s in args.sigmas:
        params = AssocParams(args.tau, s, args.h)
        for lnk in np.geomspace(5.0, args.log_k_max, args.points):
            T, _ = T_from_log(params, lnk)
            up, lo = _upper(params, lnk), _lower(params, lnk)
            print(f"{s:g},{lnk:.6g},{T:.10g},{T / up:.6f},{T / lo:.6f},{(s - 1) / s:.6f}")


if __name__ == "__main__":
    main()

"""Integrate a family of profile curves for each reduced case and
summarize their endpoint behavior.

Usage: python3 scripts/profile_families.py [--out-dir out/families]
"""

import argparse
from pathlib import Path

import numpy as np

from hqn.cli import _write_curve_csv
from hqn.integrator import elliptic_integral_R, generate_family, limit_endpoint
from hqn.reduction import (
    ELLIPTIC,
    LOXODROMIC,
    PARABOLIC,
    SPECIAL_LOXODROMIC,
    SPECIAL_PARABOLIC,
    ReducedCase,
)

RUNS = [
    (ReducedCase(ELLIPTIC, 2, 1), [0.5, 1.0, 2.0], dict(s_max=12.0)),
    (ReducedCase(LOXODROMIC, 3, 2), [0.5, 1.0, 2.0], dict(s_max=10.0)),
    (ReducedCase(SPECIAL_LOXODROMIC, 2), [-0.5, 0.0, 0.5], dict(s_max=8.0)),
    (ReducedCase(PARABOLIC, 2, 1), [0.5, 1.0, 2.0],
     dict(s_max=60.0, c1_floor=1e-7)),
    (ReducedCase(SPECIAL_PARABOLIC, 2), [0.5, 1.0, 2.0],
     dict(s_max=50.0, tol=1e-12, c1_floor=0.25)),
]


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out-dir", default="out/families")
    ap.add_argument("--tol", type=float, default=1e-11)
    args = ap.parse_args()
    out = Path(args.out_dir)

    for case, grid, kwargs in RUNS:
        kwargs.setdefault("tol", args.tol)
        label = case.kind if case.m is None else f"{case.kind}-m{case.m}"
        d = out / f"{label}-n{case.n}"
        d.mkdir(parents=True, exist_ok=True)
        fam = generate_family(case, grid, **kwargs)
        print(f"== {label} n={case.n}")
        for curve in fam:
            _write_curve_csv(curve, d / f"curve_a{curve.a:g}.csv")
            lim = limit_endpoint(curve)
            fin = curve.final_state()
            print(f"  a={curve.a:+.2f}  stop={curve.termination:>10s}  "
                  f"final=({fin.c1:.4f}, {fin.c2:.4f}, {fin.sigma:.4f})  "
                  f"limit=({lim.c1:.4f}, {lim.c2:.6f}) [{lim.tag}]  "
                  f"max residual={np.nanmax(curve.residual):.2e}")
        if case.kind == SPECIAL_PARABOLIC:
            R = elliptic_integral_R(case.n)
            print(f"  closed-form transverse displacement R = {R:.10f}")


if __name__ == "__main__":
    main()

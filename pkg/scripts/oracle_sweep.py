"""Sweep the independent oracles: Killing-field orbit volumes against
the closed-form functionals, and ambient mean curvature of the three
distinguished hypersurfaces.

Usage: python3 scripts/oracle_sweep.py [--points 50]
"""

import argparse

import numpy as np

from hqn.charts import HORO, convert, horo_point
from hqn.loci import canonical_bisector_residual, fan_at_origin_residual
from hqn.oracles import (
    ambient_mean_curvature,
    killing_ratio_spread,
    killing_volume,
    orbit_project,
    section_point,
    volume_functional,
)
from hqn.quaternion import Quaternion
from hqn.reduction import (
    ELLIPTIC,
    LOXODROMIC,
    PARABOLIC,
    SPECIAL_LOXODROMIC,
    SPECIAL_PARABOLIC,
    ReducedCase,
)

CASES = [
    ReducedCase(ELLIPTIC, 2, 1),
    ReducedCase(LOXODROMIC, 3, 2),
    ReducedCase(SPECIAL_LOXODROMIC, 2),
    ReducedCase(PARABOLIC, 2, 1),
    ReducedCase(SPECIAL_PARABOLIC, 2),
    ReducedCase(ELLIPTIC, 3, 1),
    ReducedCase(ELLIPTIC, 3, 2),
]


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=50)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    print("Killing volume / closed-form ratio spread per case:")
    for case in CASES:
        spread = killing_ratio_spread(case, n_points=args.points,
                                      seed=args.seed)
        label = case.kind if case.m is None else f"{case.kind} m={case.m}"
        print(f"  {label:>24s} n={case.n}:  {spread:.3e}")

    sl = ReducedCase(SPECIAL_LOXODROMIC, 2)
    rng = np.random.default_rng(args.seed)
    ratios = []
    for _ in range(args.points):
        p = section_point(sl, float(rng.uniform(0.15, 0.6)),
                          float(rng.uniform(0.1, 0.5)))
        ratios.append(killing_volume(sl, p) / volume_functional(
            sl, orbit_project(sl, p), bracket_exponent=1))
    ratios = np.array(ratios)
    print(f"  un-cubed bracket control: spread "
          f"{(ratios.max() - ratios.min()) / ratios.mean():.3f} "
          f"(must be large)")

    print("Ambient mean curvature (n=2):")
    rng = np.random.default_rng(args.seed + 1)
    for name, make, expect in [
        ("canonical bisector", lambda om, al, b1, b2:
         (canonical_bisector_residual,
          horo_point((om,), al, Quaternion(0, b1, b2, 0.0))), 0.0),
        ("fan at origin", lambda om, al, b1, b2:
         (fan_at_origin_residual,
          horo_point((Quaternion(om.q0),), al,
                     Quaternion(0, b1, b2, 0.0))), 0.0),
        ("horosphere alpha=1", lambda om, al, b1, b2:
         (lambda q: convert(q, HORO).alpha - 1.0,
          horo_point((om,), 1.0, Quaternion(0, b1, b2, 0.1))), 5.0),
    ]:
        worst = 0.0
        for _ in range(20):
            om = Quaternion(*rng.normal(0, 0.25, 4))
            res, p = make(om, float(rng.uniform(0.4, 1.5)),
                          *rng.normal(0, 0.2, 2))
            worst = max(worst, abs(ambient_mean_curvature(res, p) - expect))
        print(f"  {name:>24s}: max |H - {expect:g}| = {worst:.3e}")


if __name__ == "__main__":
    main()

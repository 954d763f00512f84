"""Implicit residual functions for bisectors, slices, and fans.

Every hypersurface here is represented by a real residual function whose
zero level set is the locus. Residuals are cheap to sample, which is what
the verification oracles need; no parametrizations are kept.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .charts import HORO, BoundaryPoint, ChartPoint, convert, dist, horo_point
from .errors import DegenerateLocusError, ShapeError
from .quaternion import Quaternion


@dataclass(frozen=True)
class LocusSpec:
    """Which locus: a bisector of two points, the canonical bisector,
    a fan cut out by a real-linear functional of omega, the bisector
    degeneration family at parameter t, or the fan with vertex at the
    origin of the Heisenberg group."""

    kind: str
    p1: Optional[ChartPoint] = None
    p2: Optional[ChartPoint] = None
    normal: Optional[np.ndarray] = None    # real-linear functional on Q^{n-1}
    offset: float = 0.0
    t: float = 0.0

    def __post_init__(self):
        kinds = {"bisector", "canonical-bisector", "fan",
                 "bisector-family", "fan-at-origin"}
        if self.kind not in kinds:
            raise ShapeError(f"unknown locus kind {self.kind!r}")
        if self.kind == "bisector":
            if self.p1 is None or self.p2 is None:
                raise DegenerateLocusError("bisector needs two points")
            if dist(self.p1, self.p2) == 0.0:
                raise DegenerateLocusError("bisector of equal points")
        if self.kind == "fan":
            if self.normal is None or not np.any(np.asarray(self.normal)):
                raise DegenerateLocusError("fan needs a nonzero normal")


def bisector_residual(p: ChartPoint, p1: ChartPoint, p2: ChartPoint) -> float:
    """d(p, p1) - d(p, p2); zero exactly on the bisector of p1 and p2."""
    if dist(p1, p2) == 0.0:
        raise DegenerateLocusError("bisector of equal points is undefined")
    return dist(p, p1) - dist(p, p2)


def canonical_bisector_residual(p: ChartPoint) -> float:
    """Re(k beta) in horospherical coordinates, i.e. -beta_3."""
    q = convert(p, HORO)
    return -q.beta.q3


def spine_projection(p: ChartPoint) -> ChartPoint:
    """Orthogonal projection to the spine: (omega, alpha, beta) -> (0, alpha + |omega|^2, beta)."""
    q = convert(p, HORO)
    w2 = sum(w.norm2() for w in q.omega)
    return horo_point((Quaternion(),) * (q.n - 1), q.alpha + w2, q.beta)


def _omega_reals(q: ChartPoint) -> np.ndarray:
    return np.concatenate([w.as_array() for w in q.omega])


def fan_residual(p: ChartPoint, spec: LocusSpec) -> float:
    """Affine functional of omega alone; independent of alpha and beta.

    The default vertical fan has residual Re(omega_{n-1}); the rotated
    copy used by the inversion check has residual Re(k omega_{n-1}).
    """
    q = convert(p, HORO)
    if spec.kind != "fan":
        raise ShapeError("fan_residual expects a fan spec")
    normal = np.asarray(spec.normal, dtype=float)
    w = _omega_reals(q)
    if normal.shape != w.shape:
        raise ShapeError("fan normal does not match Q^{n-1}")
    return float(normal @ w) - spec.offset


def fan_normal(n: int, component: int, last_slot: bool = True) -> np.ndarray:
    """Functional selecting one real component of omega_{n-1}.

    component 0 gives Re(omega_{n-1}); component 3 with a sign flip
    gives Re(k omega_{n-1}).
    """
    v = np.zeros(4 * (n - 1))
    base = 4 * (n - 2) if last_slot else 0
    v[base + component] = 1.0
    return v


def bisector_family_residual(p: ChartPoint, t: float) -> float:
    """Re(k (beta - 2 t omega_{n-1})); t = 0 is the canonical bisector."""
    q = convert(p, HORO)
    return -q.beta.q3 + 2.0 * t * q.omega[-1].q3


def fan_at_origin_residual(p) -> float:
    """Residual of the fan with vertex at the Heisenberg origin.

    omega_{n-1,3} (alpha + sum |omega_l|^2) + omega_{n-1,2} beta_1
    - omega_{n-1,1} beta_2 - omega_{n-1,0} beta_3.

    Accepts interior points or finite boundary points (alpha = 0).
    """
    if isinstance(p, BoundaryPoint):
        if p.infinity:
            raise ShapeError("fan_at_origin_residual needs a finite point")
        omega, alpha, beta = p.omega, 0.0, p.beta
    else:
        q = convert(p, HORO)
        omega, alpha, beta = q.omega, q.alpha, q.beta
    w = omega[-1]
    w2 = sum(wl.norm2() for wl in omega)
    return (w.q3 * (alpha + w2)
            + w.q2 * beta.q1 - w.q1 * beta.q2 - w.q0 * beta.q3)


def locus_residual(p, spec: LocusSpec) -> float:
    if spec.kind == "bisector":
        return bisector_residual(p, spec.p1, spec.p2)
    if spec.kind == "canonical-bisector":
        return canonical_bisector_residual(p)
    if spec.kind == "fan":
        return fan_residual(p, spec)
    if spec.kind == "bisector-family":
        return bisector_family_residual(p, spec.t)
    return fan_at_origin_residual(p)

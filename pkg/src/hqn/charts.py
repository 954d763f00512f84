"""Coordinate models of quaternionic hyperbolic space.

Three charts are supported:

* ``ball``  -- affine coordinates x in Q^n with |x| < 1
* ``siegel`` -- zeta in Q^n with |zeta'|^2 - 2 Re(zeta_n) < 0
* ``horo``  -- (omega, alpha, beta) in Q^{n-1} x R_+ x Im(Q)

Tangent vectors are raw coordinate increments in the real coordinates of
each chart (length 4n); chart changes of tangents use central finite
differences of the conversion maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotInteriorError, ShapeError
from .quaternion import (
    LORENTZ,
    Quaternion,
    QVector,
    ZERO,
    herm_definite,
    qvector,
    right_mult_matrix,
    signature_class,
)

BALL = "ball"
SIEGEL = "siegel"
HORO = "horo"

INTERIOR_MARGIN = 1e-12


@dataclass(frozen=True)
class ChartPoint:
    """Interior point of H_Q^n tagged by its chart."""

    chart: str
    coords: tuple[Quaternion, ...] = ()      # ball / siegel
    omega: tuple[Quaternion, ...] = ()       # horo
    alpha: float = 0.0                       # horo
    beta: Quaternion = field(default_factory=Quaternion)  # horo, purely imaginary

    @property
    def n(self) -> int:
        if self.chart == HORO:
            return len(self.omega) + 1
        return len(self.coords)


@dataclass(frozen=True)
class BoundaryPoint:
    """Finite horospherical boundary datum (omega, 0, beta), or infinity."""

    infinity: bool = False
    omega: tuple[Quaternion, ...] = ()
    beta: Quaternion = field(default_factory=Quaternion)


INFINITY = BoundaryPoint(infinity=True)


def _as_quat(q) -> Quaternion:
    if isinstance(q, Quaternion):
        return q
    return Quaternion(float(q))


def ball_point(coords) -> ChartPoint:
    coords = tuple(_as_quat(c) for c in coords)
    x = qvector(coords)
    if herm_definite(x, x).re() >= 1.0 - INTERIOR_MARGIN:
        raise NotInteriorError("ball point must satisfy |x| < 1")
    return ChartPoint(BALL, coords=coords)


def siegel_point(coords) -> ChartPoint:
    coords = tuple(_as_quat(c) for c in coords)
    prime2 = sum(c.norm2() for c in coords[:-1])
    if prime2 - 2.0 * coords[-1].re() >= -INTERIOR_MARGIN:
        raise NotInteriorError("siegel point must satisfy |zeta'|^2 < 2 Re(zeta_n)")
    return ChartPoint(SIEGEL, coords=coords)


def horo_point(omega, alpha: float, beta) -> ChartPoint:
    omega = tuple(_as_quat(w) for w in omega)
    beta = _as_quat(beta)
    if abs(beta.re()) > INTERIOR_MARGIN:
        raise NotInteriorError("beta must be purely imaginary")
    beta = beta.im()
    if alpha <= INTERIOR_MARGIN:
        raise NotInteriorError("horospherical point must have alpha > 0")
    return ChartPoint(HORO, omega=omega, alpha=float(alpha), beta=beta)


# ---------------------------------------------------------------------------
# lifts and projectivization


def lift(p: ChartPoint) -> QVector:
    """Lorentz lift of an interior point, last coordinate 1 (ball chart)."""
    x = convert(p, BALL)
    return qvector(list(x.coords) + [1.0], LORENTZ)


def ball_from_lift(X: QVector) -> ChartPoint:
    """Re-project a negative Lorentz vector, x_l = X_l X_{n+1}^{-1}."""
    if signature_class(X) != "negative":
        raise NotInteriorError("lift is not a negative vector")
    inv = X[-1].inverse()
    return ball_point(tuple(X[l] * inv for l in range(len(X) - 1)))


# ---------------------------------------------------------------------------
# chart conversions


def cayley(p: ChartPoint) -> ChartPoint:
    """Ball -> Siegel."""
    if p.chart != BALL:
        raise ShapeError("cayley expects a ball-chart point")
    xp, xn = p.coords[:-1], p.coords[-1]
    inv = (Quaternion(1.0) - xn).inverse()
    zp = tuple(c * inv for c in xp)
    zn = 0.5 * ((Quaternion(1.0) + xn) * inv)
    return siegel_point(zp + (zn,))


def cayley_inv(p: ChartPoint) -> ChartPoint:
    """Siegel -> Ball."""
    if p.chart != SIEGEL:
        raise ShapeError("cayley_inv expects a siegel-chart point")
    zp, zn = p.coords[:-1], p.coords[-1]
    two_zn = 2.0 * zn
    xn = (two_zn + Quaternion(1.0)).inverse() * (two_zn - Quaternion(1.0))
    xp = tuple(c * (Quaternion(1.0) - xn) for c in zp)
    return ball_point(xp + (xn,))


def horo_from_siegel(p: ChartPoint) -> ChartPoint:
    if p.chart != SIEGEL:
        raise ShapeError("horo_from_siegel expects a siegel-chart point")
    zp, zn = p.coords[:-1], p.coords[-1]
    prime2 = sum(c.norm2() for c in zp)
    alpha = 2.0 * zn.re() - prime2
    beta = 2.0 * zn.im()
    return horo_point(zp, alpha, beta)


def siegel_from_horo(p: ChartPoint) -> ChartPoint:
    if p.chart != HORO:
        raise ShapeError("siegel_from_horo expects a horo-chart point")
    w2 = sum(w.norm2() for w in p.omega)
    zn = 0.5 * (Quaternion(p.alpha + w2) + p.beta)
    return siegel_point(p.omega + (zn,))


def convert(p: ChartPoint, chart: str) -> ChartPoint:
    if chart == p.chart:
        return p
    if p.chart == BALL:
        s = cayley(p)
        return s if chart == SIEGEL else horo_from_siegel(s)
    if p.chart == SIEGEL:
        return cayley_inv(p) if chart == BALL else horo_from_siegel(p)
    if p.chart == HORO:
        s = siegel_from_horo(p)
        return s if chart == SIEGEL else cayley_inv(s)
    raise ShapeError(f"unknown chart {chart!r}")


# ---------------------------------------------------------------------------
# real coordinate packing (4n reals per chart)


def coords_array(p: ChartPoint) -> np.ndarray:
    if p.chart in (BALL, SIEGEL):
        return np.concatenate([c.as_array() for c in p.coords])
    parts = [w.as_array() for w in p.omega]
    parts.append(np.array([p.alpha, p.beta.q1, p.beta.q2, p.beta.q3]))
    return np.concatenate(parts)


def point_from_array(chart: str, arr: np.ndarray, n: int) -> ChartPoint:
    arr = np.asarray(arr, dtype=float)
    if arr.shape != (4 * n,):
        raise ShapeError(f"expected {4 * n} reals, got shape {arr.shape}")
    if chart in (BALL, SIEGEL):
        coords = tuple(Quaternion.from_array(arr[4 * l:4 * l + 4]) for l in range(n))
        return ball_point(coords) if chart == BALL else siegel_point(coords)
    omega = tuple(Quaternion.from_array(arr[4 * l:4 * l + 4]) for l in range(n - 1))
    tail = arr[4 * (n - 1):]
    return horo_point(omega, tail[0], Quaternion(0.0, tail[1], tail[2], tail[3]))


# ---------------------------------------------------------------------------
# distance and Busemann function


def dist(p: ChartPoint, q: ChartPoint) -> float:
    """d = 2 arccosh(|1 - (x,y)| / sqrt((1-|x|^2)(1-|y|^2))), ball chart."""
    x = qvector(convert(p, BALL).coords)
    y = qvector(convert(q, BALL).coords)
    num = abs(Quaternion(1.0) - herm_definite(x, y))
    den = np.sqrt((1.0 - herm_definite(x, x).re()) * (1.0 - herm_definite(y, y).re()))
    return 2.0 * float(np.arccosh(max(num / den, 1.0)))


def busemann(p: ChartPoint) -> float:
    """Busemann function of the axis through 0 and infinity: -ln(alpha)."""
    return -float(np.log(convert(p, HORO).alpha))


# ---------------------------------------------------------------------------
# Riemannian metric


def metric_eval(p: ChartPoint, u: np.ndarray, v: np.ndarray) -> float:
    """Evaluate the metric at p on tangents given in p's chart coordinates."""
    g = metric_matrix(p)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != (g.shape[0],) or v.shape != (g.shape[0],):
        raise ShapeError("tangent vectors do not match the chart dimension")
    return float(u @ g @ v)


def metric_matrix(p: ChartPoint) -> np.ndarray:
    """Metric as a (4n)x(4n) real symmetric matrix in p's chart."""
    n = p.n
    if p.chart == BALL:
        return ball_metric_matrix(coords_array(p), n)
    if p.chart == HORO:
        return horo_metric_matrix(coords_array(p), n)
    # Siegel metric via the closed-form pushforward to horo coordinates:
    # omega = zeta', alpha = 2 Re(zeta_n) - |zeta'|^2, beta = 2 Im(zeta_n)
    horo = horo_from_siegel(p)
    gh = horo_metric_matrix(coords_array(horo), n)
    J = _siegel_to_horo_jacobian(p)
    return J.T @ gh @ J


CONJ4 = np.diag([1.0, -1.0, -1.0, -1.0])


def ball_metric_matrix(x: np.ndarray, n: int) -> np.ndarray:
    """ds^2 = 4[(1-|x|^2)|dx|^2 + |(dx,x)|^2] / (1-|x|^2)^2."""
    x = np.asarray(x, dtype=float)
    r2 = float(x @ x)
    if r2 >= 1.0:
        raise NotInteriorError("ball metric needs |x| < 1")
    # (dx, x) = sum_l conj(dx_l) x_l  is M @ dx with 4x4 blocks R(x_l) C
    M = np.zeros((4, 4 * n))
    for l in range(n):
        xl = Quaternion.from_array(x[4 * l:4 * l + 4])
        M[:, 4 * l:4 * l + 4] = right_mult_matrix(xl) @ CONJ4
    s = 1.0 - r2
    return 4.0 * (s * np.eye(4 * n) + M.T @ M) / s ** 2


def horo_metric_matrix(c: np.ndarray, n: int) -> np.ndarray:
    """ds^2 = [dalpha^2 + |dbeta - 2 Im(omega, domega)|^2 + 4 alpha |domega|^2] / alpha^2."""
    c = np.asarray(c, dtype=float)
    m = 4 * (n - 1)
    alpha = c[m]
    # B(u) = u_beta + 2 Im((u_omega, omega)) as a linear map to R^3;
    # note Im((omega, u)) = -Im((u, omega)) for the quaternionic pairing
    B = np.zeros((3, 4 * n))
    B[:, m + 1:] = np.eye(3)
    for l in range(n - 1):
        wl = Quaternion.from_array(c[4 * l:4 * l + 4])
        blk = right_mult_matrix(wl) @ CONJ4   # u_l -> conj(u_l) w_l
        B[:, 4 * l:4 * l + 4] += 2.0 * blk[1:, :]
    g = B.T @ B
    g[m, m] += 1.0
    for l in range(n - 1):
        sl = slice(4 * l, 4 * l + 4)
        g[sl, sl] += 4.0 * alpha * np.eye(4)
    return g / alpha ** 2


def _siegel_to_horo_jacobian(p: ChartPoint) -> np.ndarray:
    n = p.n
    J = np.zeros((4 * n, 4 * n))
    m = 4 * (n - 1)
    J[:m, :m] = np.eye(m)                      # domega = dzeta'
    z = coords_array(p)
    for l in range(n - 1):
        # dalpha = 2 d Re(zeta_n) - 2 Re((dzeta', zeta'))
        J[m, 4 * l:4 * l + 4] = -2.0 * z[4 * l:4 * l + 4]
    J[m, m] = 2.0                              # from 2 Re(dzeta_n)
    J[m + 1:, m + 1:] = 2.0 * np.eye(3)        # dbeta = 2 Im(dzeta_n)
    return J


def push_tangent(p: ChartPoint, u: np.ndarray, chart: str) -> tuple[ChartPoint, np.ndarray]:
    """Transport a tangent to another chart by central finite differences."""
    q = convert(p, chart)
    if chart == p.chart:
        return q, np.asarray(u, dtype=float)
    c = coords_array(p)
    h = 1e-6 * (1.0 + float(np.linalg.norm(c)))
    u = np.asarray(u, dtype=float)
    fwd = coords_array(convert(point_from_array(p.chart, c + h * u, p.n), chart))
    bwd = coords_array(convert(point_from_array(p.chart, c - h * u, p.n), chart))
    return q, (fwd - bwd) / (2.0 * h)

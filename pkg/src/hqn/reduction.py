"""Cohomogeneity-two reductions of the minimal hypersurface equation.

Five group actions reduce the mean-curvature-h equation to a three
dimensional ODE system for (c1, c2, sigma) on a two dimensional orbit
space: two compact-stabilizer actions on the ball ("elliptic" and
"loxodromic"), the stabilizer of a bisector ("special-loxodromic"),
and two parabolic actions in horospherical coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .charts import BALL, HORO, ChartPoint, convert
from .isometries import (
    Isometry,
    heisenberg_matrix,
    qmat_identity,
    random_lorentz_sp,
    random_sp,
    rotation_matrix,
    transvection_matrix,
)
from .quaternion import Quaternion
from .errors import (
    DomainError,
    NoSingularStratumError,
    ShapeError,
    SingularBoundaryError,
)

ELLIPTIC = "elliptic"
LOXODROMIC = "loxodromic"
SPECIAL_LOXODROMIC = "special-loxodromic"
PARABOLIC = "parabolic"
SPECIAL_PARABOLIC = "special-parabolic"

POLAR_KINDS = (ELLIPTIC, LOXODROMIC, SPECIAL_LOXODROMIC)
PARABOLIC_KINDS = (PARABOLIC, SPECIAL_PARABOLIC)
ALL_KINDS = POLAR_KINDS + PARABOLIC_KINDS


@dataclass(frozen=True)
class ReducedCase:
    """One of the five reductions, with its integer parameters."""

    kind: str
    n: int
    m: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ALL_KINDS:
            raise ShapeError(f"unknown case kind {self.kind!r}")
        if self.n < 2:
            raise DomainError("need n >= 2")
        if self.kind == ELLIPTIC and not (1 <= self.m <= self.n - 1):
            raise DomainError("elliptic case needs 1 <= m <= n-1")
        if self.kind == LOXODROMIC and not (2 <= self.m <= self.n - 1):
            raise DomainError("loxodromic case needs 2 <= m <= n-1")
        if self.kind == PARABOLIC and not (1 <= self.m <= self.n - 1):
            raise DomainError("parabolic case needs 1 <= m <= n-1")
        if self.kind in (SPECIAL_LOXODROMIC, SPECIAL_PARABOLIC) and self.m is not None:
            raise DomainError("special cases take no m")

    @property
    def exponents(self) -> tuple[int, int, int, int]:
        """(A, B, C, D) of the polar volume functional."""
        n, m = self.n, self.m
        if self.kind == ELLIPTIC:
            return (4 * n - 5, 3, 4 * n - 8 * m, 4 * m - 1)
        if self.kind == LOXODROMIC:
            return (4 * n - 8 * m + 3, 4 * m - 1, 4 * n - 4 * m - 4, 3)
        raise ShapeError("exponents defined for elliptic/loxodromic only")


@dataclass(frozen=True)
class PhaseState:
    """(c1, c2, sigma): c1 = r or alpha, c2 = theta or rho, sigma the
    angle from the first coordinate direction of the orbital frame."""

    c1: float
    c2: float
    sigma: float

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.sigma])


# ---------------------------------------------------------------------------
# coordinates on the orbit space


def uv_from_polar(r: float, theta: float) -> tuple[float, float]:
    t = np.tanh(r)
    return float(t * np.cos(theta)), float(t * np.sin(theta))


def polar_from_uv(u: float, v: float) -> tuple[float, float]:
    t = float(np.hypot(u, v))
    if t >= 1.0:
        raise DomainError("(u, v) must satisfy u^2 + v^2 < 1")
    return float(np.arctanh(t)), float(np.arctan2(v, u))


# ---------------------------------------------------------------------------
# orbit projections


def orbit_project(case: ReducedCase, p: ChartPoint) -> tuple[float, float]:
    """Project a point to the orbit space coordinates of the case:
    (u, v) for the three ball cases, (alpha, rho) for the parabolic ones."""
    n, m = case.n, case.m
    if case.kind in PARABOLIC_KINDS:
        q = convert(p, HORO)
        if case.kind == PARABOLIC:
            rho = np.sqrt(sum(q.omega[l].norm2() for l in range(n - m)))
        else:
            rho = q.omega[-1].q0
        return q.alpha, float(rho)
    x = convert(p, BALL).coords
    if case.kind == ELLIPTIC:
        u = np.sqrt(sum(x[l].norm2() for l in range(m)))
        v = np.sqrt(sum(x[l].norm2() for l in range(m, n)))
        return float(u), float(v)
    if case.kind == LOXODROMIC:
        tail = sum(x[l].norm2() for l in range(n - m + 1, n))
        den = np.sqrt(1.0 - tail)
        u = abs(x[n - m]) / den
        v = np.sqrt(sum(x[l].norm2() for l in range(n - m))) / den
        return float(u), float(v)
    # special loxodromic
    xn = x[-1]
    disc = ((1.0 - 2.0 * xn.q0 + xn.norm2()) * (1.0 + 2.0 * xn.q0 + xn.norm2())
            - 4.0 * xn.q1 ** 2 - 4.0 * xn.q2 ** 2)
    den = 1.0 - xn.norm2() + np.sqrt(max(disc, 0.0))
    u = 2.0 * xn.q3 / den
    prime = np.sqrt(sum(x[l].norm2() for l in range(n - 1)))
    v = np.sqrt(2.0) * prime / np.sqrt(den)
    return float(u), float(v)


def in_domain(case: ReducedCase, point: tuple[float, float]) -> bool:
    c1, c2 = point
    if case.kind in (ELLIPTIC, LOXODROMIC):
        return c1 >= 0.0 and c2 >= 0.0 and c1 * c1 + c2 * c2 < 1.0
    if case.kind == SPECIAL_LOXODROMIC:
        return c2 >= 0.0 and c1 * c1 + c2 * c2 < 1.0
    if case.kind == PARABOLIC:
        return c1 > 0.0 and c2 >= 0.0
    return c1 > 0.0


# ---------------------------------------------------------------------------
# orbital metric


def orbital_metric(case: ReducedCase, point, u, v, polar: bool = False) -> float:
    """Evaluate the orbit-space metric on tangents u, v at the point.

    The three ball cases carry the curvature -1/4 metric
    4 {(1-v^2) du^2 + 2uv du dv + (1-u^2) dv^2} / (1-u^2-v^2)^2
    (polar form 4(dr^2 + sinh^2 r dtheta^2)); the parabolic cases carry
    (dalpha^2 + 4 alpha drho^2) / alpha^2.
    """
    c1, c2 = float(point[0]), float(point[1])
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != (2,) or v.shape != (2,):
        raise ShapeError("orbit-space tangents have two components")
    if case.kind in PARABOLIC_KINDS:
        if not in_domain(case, (c1, c2)):
            raise DomainError("point outside the orbit space")
        g = np.array([[1.0, 0.0], [0.0, 4.0 * c1]]) / c1 ** 2
        return float(u @ g @ v)
    if polar:
        if c1 < 0.0:
            raise DomainError("polar radius must be nonnegative")
        g = 4.0 * np.array([[1.0, 0.0], [0.0, np.sinh(c1) ** 2]])
        return float(u @ g @ v)
    if not in_domain(case, (c1, c2)):
        raise DomainError("point outside the orbit space")
    s = 1.0 - c1 * c1 - c2 * c2
    g = (4.0 / s ** 2) * np.array([
        [1.0 - c2 * c2, c1 * c2],
        [c1 * c2, 1.0 - c1 * c1],
    ])
    return float(u @ g @ v)


# ---------------------------------------------------------------------------
# volume functionals


def volume_functional(case: ReducedCase, point, polar: bool = False,
                      bracket_exponent: int = 3) -> float:
    """Volume of the orbit over the given orbit-space point.

    Normalized per case (global constants drop out of the ODEs). The
    polar and (u, v) forms of a single case may differ by one constant;
    the special loxodromic forms agree exactly.
    """
    n, m = case.n, case.m
    c1, c2 = float(point[0]), float(point[1])
    if case.kind == PARABOLIC:
        return float(c1 ** (-(4 * n + 1) / 2.0) * c2 ** (4 * n - 4 * m - 1))
    if case.kind == SPECIAL_PARABOLIC:
        return float(c1 ** (-(4 * n + 1) / 2.0))
    if polar:
        r, theta = c1, c2
        if case.kind == SPECIAL_LOXODROMIC:
            bracket = np.cosh(r) ** 2 + (np.sinh(r) * np.cos(theta)) ** 2
            return float(bracket ** bracket_exponent
                         * np.sinh(r) ** (4 * n - 5)
                         * np.sin(theta) ** (4 * n - 5))
        A, B, C, D = case.exponents
        # combined form 2^D sin^{C+D} cos^D avoids 0^negative when C <= 0
        return float(np.sinh(r) ** A * np.sinh(2.0 * r) ** B * 2.0 ** D
                     * np.sin(theta) ** (C + D) * np.cos(theta) ** D)
    u, v = c1, c2
    s = 1.0 - u * u - v * v
    if s <= 0.0:
        raise DomainError("(u, v) outside the orbit space")
    if case.kind == ELLIPTIC:
        return float(u ** (4 * m - 1) * v ** (4 * n - 4 * m - 1)
                     / s ** ((4 * n + 1) / 2.0))
    if case.kind == LOXODROMIC:
        return float(u ** 3 * v ** (4 * n - 4 * m - 1) / s ** ((4 * n + 1) / 2.0))
    return float((1.0 + u * u) ** bracket_exponent * v ** (4 * n - 5)
                 / s ** ((4 * n + 1) / 2.0))


def log_volume_slope(case: ReducedCase, point) -> tuple[float, float]:
    """Closed-form (P, Q) coefficients of the reduced ODE.

    P = (1/2) d(ln V)/d c2 evaluated in the case's ODE coordinates;
    Q = (1/2)(d(ln V)/d c1 + connection term).
    """
    c1, c2 = float(point[0]), float(point[1])
    n = case.n
    if case.kind in (ELLIPTIC, LOXODROMIC):
        A, B, C, D = case.exponents
        P = 0.5 * C / np.tan(c2) + D / np.tan(2.0 * c2)
        Q = 0.5 * (A + 1) / np.tanh(c1) + B / np.tanh(2.0 * c1)
        return float(P), float(Q)
    if case.kind == SPECIAL_LOXODROMIC:
        bracket = np.cosh(c1) ** 2 + (np.sinh(c1) * np.cos(c2)) ** 2
        P = 0.5 * ((4 * n - 5) / np.tan(c2)
                   - 3.0 * np.sinh(c1) ** 2 * np.sin(2.0 * c2) / bracket)
        Q = 0.5 * ((4 * n - 4) / np.tanh(c1)
                   + 3.0 * np.sinh(2.0 * c1) * (1.0 + np.cos(c2) ** 2) / bracket)
        return float(P), float(Q)
    raise ShapeError("log_volume_slope applies to the polar cases")


# ---------------------------------------------------------------------------
# reduced ODE right-hand sides


def ode_rhs(case: ReducedCase, state: PhaseState, h: float = 0.0) -> tuple[float, float, float]:
    n, m = case.n, case.m
    c1, c2, sigma = state.c1, state.c2, state.sigma
    if case.kind in POLAR_KINDS:
        if c1 <= 0.0:
            raise DomainError("polar radius must be positive")
        top = np.pi if case.kind == SPECIAL_LOXODROMIC else 0.5 * np.pi
        if not (0.0 < c2 < top):
            raise SingularBoundaryError(
                "state on a singular stratum; use boundary_sigma_rate")
        P, Q = log_volume_slope(case, (c1, c2))
        dc1 = 0.5 * np.cos(sigma)
        dc2 = 0.5 * np.sin(sigma) / np.sinh(c1)
        dsig = P * np.cos(sigma) / np.sinh(c1) - Q * np.sin(sigma) + h
        return float(dc1), float(dc2), float(dsig)
    if c1 <= 0.0:
        raise DomainError("alpha must be positive")
    dc1 = c1 * np.cos(sigma)
    dc2 = 0.5 * np.sqrt(c1) * np.sin(sigma)
    if case.kind == PARABOLIC:
        if c2 <= 0.0:
            raise SingularBoundaryError(
                "rho = 0 is singular; use boundary_sigma_rate")
        dsig = ((2 * n - 2 * m - 0.5) * np.sqrt(c1) / c2 * np.cos(sigma)
                + (2 * n + 1) * np.sin(sigma) + h)
    else:
        dsig = (2 * n + 1) * np.sin(sigma) + h
    return float(dc1), float(dc2), float(dsig)


def boundary_sigma_rate(case: ReducedCase, a: float) -> float:
    """d(sigma)/ds at s = 0 for the orthogonal start on the singular
    stratum point with parameter a (the start is sigma = pi/2)."""
    n, m = case.n, case.m
    if case.kind == SPECIAL_PARABOLIC:
        raise NoSingularStratumError("all orbits are principal")
    if a <= 0.0:
        raise DomainError("stratum parameter a must be positive")
    if case.kind in (ELLIPTIC, LOXODROMIC):
        A, B, C, D = case.exponents
        Q = 0.5 * (A + 1) / np.tanh(a) + B / np.tanh(2.0 * a)
        return float(-Q / (C + D + 1))
    if case.kind == SPECIAL_LOXODROMIC:
        return float(-((4 * n - 4) / np.tanh(a) + 6.0 * np.tanh(2.0 * a))
                     / (2.0 * (4 * n - 4)))
    # parabolic: independent of a
    return float((2 * n + 1) / (4 * n - 4 * m))


# ---------------------------------------------------------------------------
# first integrals and semi-integrals


def first_integral_values(case: ReducedCase, state: PhaseState) -> dict:
    """Every (semi-)first integral of the case's h = 0 flow.

    Keys: I1 always present; I2 only for the parabolic case. The polar
    cases carry the growth quantity I1 = V cos(sigma); the parabolic
    case carries the sign pair (I, J); the special parabolic case
    carries the exactly conserved I1 = alpha^{-2n-1} sin(sigma).
    """
    n, m = case.n, case.m
    c1, c2, sigma = state.c1, state.c2, state.sigma
    if case.kind in POLAR_KINDS:
        V = volume_functional(case, (c1, c2), polar=True)
        return {"I1": float(V * np.cos(sigma))}
    if case.kind == SPECIAL_PARABOLIC:
        return {"I1": float(c1 ** (-2 * n - 1) * np.sin(sigma))}
    alpha, rho = c1, c2
    e_i = ((4 * n + 2) * (4 * n - 4 * m - 2) + 1) / (4 * n + 1)
    I = (alpha ** (-2 * n - 1) * rho ** e_i
         * (np.sqrt(alpha) * np.cos(sigma)
            + (4 * n + 1) / (4 * n - 4 * m - 1) * rho * np.sin(sigma)))
    e_j = (-(4 * n - 4 * m - 1) * (4 * n + 3) - 1) / (8 * n - 8 * m)
    J = (alpha ** e_j * rho ** (4 * n - 4 * m - 1)
         * (np.sqrt(alpha) * np.cos(sigma)
            + (4 * n + 2) / (4 * n - 4 * m) * rho * np.sin(sigma)))
    return {"I1": float(I), "I2": float(J)}


# ---------------------------------------------------------------------------
# symmetry groups


def random_symmetry(case: ReducedCase, rng: np.random.Generator) -> Isometry:
    """A random element of the group H whose orbits the case quotients by."""
    n, m = case.n, case.m
    if case.kind == ELLIPTIC:
        big = qmat_identity(n)
        big[:m, :m] = random_sp(m, rng)
        big[m:, m:] = random_sp(n - m, rng)
        return rotation_matrix(n, big, Quaternion(1.0))
    if case.kind == LOXODROMIC:
        A = np.zeros((n + 1, n + 1, 4))
        A[:n - m, :n - m] = random_sp(n - m, rng)
        A[n - m, n - m, 0] = 1.0
        A[n - m + 1:, n - m + 1:] = random_lorentz_sp(m, rng)
        return Isometry(A)
    if case.kind == SPECIAL_LOXODROMIC:
        nu = Quaternion(0.0, rng.standard_normal(), rng.standard_normal(), 0.0)
        g = heisenberg_matrix(n, (Quaternion(),) * (n - 1), nu)
        g = g.compose(transvection_matrix(n, float(rng.uniform(-1, 1))))
        big = qmat_identity(n)
        big[:n - 1, :n - 1] = random_sp(n - 1, rng)
        return g.compose(rotation_matrix(n, big, Quaternion(1.0)))
    if case.kind == PARABOLIC:
        xi = [Quaternion()] * (n - m) + [
            Quaternion.from_array(rng.standard_normal(4)) for _ in range(m - 1)]
        nu = Quaternion(0.0, *rng.standard_normal(3))
        g = heisenberg_matrix(n, xi, nu)
        big = qmat_identity(n)
        big[:n - m, :n - m] = random_sp(n - m, rng)
        return g.compose(rotation_matrix(n, big, Quaternion(1.0)))
    # special parabolic: Heisenberg translations with Re(xi_{n-1}) = 0
    xi = [Quaternion.from_array(rng.standard_normal(4)) for _ in range(n - 2)]
    xi.append(Quaternion(0.0, *rng.standard_normal(3)))
    nu = Quaternion(0.0, *rng.standard_normal(3))
    return heisenberg_matrix(n, xi, nu)


# ---------------------------------------------------------------------------
# explicit solutions


@dataclass(frozen=True)
class ExplicitSolution:
    """A closed-form solution family of the reduced ODE.

    state(a, t) walks along the curve of family parameter a; h(a) is
    the constant mean curvature of that member.
    """

    description: str
    state: Callable[[float, float], PhaseState]
    h: Callable[[float], float]


def explicit_solutions(case: ReducedCase) -> list[ExplicitSolution]:
    n, m = case.n, case.m
    out = []
    if case.kind in (ELLIPTIC, LOXODROMIC):
        A, B, C, D = case.exponents
        theta_star = float(np.arctan(np.sqrt((C + D) / D)))
        out.append(ExplicitSolution(
            "cone ray theta = arctan sqrt((C+D)/D), minimal",
            lambda a, t, th=theta_star: PhaseState(t, th, 0.0),
            lambda a: 0.0,
        ))
        if case.kind == ELLIPTIC:
            hval = lambda a: float((2 * n - 2) / np.tanh(a) + 3.0 / np.tanh(2 * a))
            desc = "metric sphere r = a"
        else:
            hval = lambda a: float((2 * n - 4 * m + 2) / np.tanh(a)
                                   + (4 * m - 1) / np.tanh(2 * a))
            desc = "tube of radius a around a quaternionic subspace"
        out.append(ExplicitSolution(
            desc,
            lambda a, t: PhaseState(a, t, 0.5 * np.pi),
            hval,
        ))
    elif case.kind == SPECIAL_LOXODROMIC:
        out.append(ExplicitSolution(
            "bisector line theta = pi/2, minimal",
            lambda a, t: PhaseState(t, 0.5 * np.pi, 0.0),
            lambda a: 0.0,
        ))
    elif case.kind == PARABOLIC:
        out.append(ExplicitSolution(
            "horosphere alpha = a",
            lambda a, t: PhaseState(a, t, -0.5 * np.pi),
            lambda a: float(2 * n + 1),
        ))
    else:
        out.append(ExplicitSolution(
            "fan line rho = R, minimal",
            lambda a, t: PhaseState(t, a, 0.0),
            lambda a: 0.0,
        ))
    return out

"""Sp(n,1) matrices, Iwasawa subgroup actions, and inversions.

Quaternionic matrices are stored as float arrays of shape (rows, cols, 4).
Matrix products and exponentials go through the real 4x-size representation
(each entry replaced by its left-multiplication 4x4 block), which is an
algebra homomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .charts import BALL, ChartPoint, ball_from_lift, convert, horo_point, lift
from .errors import NotInteriorError, NotPolarError, NotSymplecticError, ShapeError
from .quaternion import (
    LORENTZ,
    Quaternion,
    QVector,
    herm_lorentz,
    left_mult_matrix,
    qvector,
    signature_class,
)

SP_TOL = 1e-10


# ---------------------------------------------------------------------------
# quaternion matrix helpers


def qmat(rows) -> np.ndarray:
    """Build an (m, k, 4) array from nested lists of Quaternion/float."""
    def comp(entry):
        if isinstance(entry, Quaternion):
            return entry.as_array()
        return np.array([float(entry), 0.0, 0.0, 0.0])
    return np.array([[comp(e) for e in row] for row in rows])


def qmat_identity(m: int) -> np.ndarray:
    A = np.zeros((m, m, 4))
    A[np.arange(m), np.arange(m), 0] = 1.0
    return A


def qmat_to_real(A: np.ndarray) -> np.ndarray:
    m, k = A.shape[0], A.shape[1]
    R = np.zeros((4 * m, 4 * k))
    for r in range(m):
        for c in range(k):
            R[4 * r:4 * r + 4, 4 * c:4 * c + 4] = left_mult_matrix(
                Quaternion.from_array(A[r, c]))
    return R


def qmat_from_real(R: np.ndarray) -> np.ndarray:
    m, k = R.shape[0] // 4, R.shape[1] // 4
    A = np.zeros((m, k, 4))
    for r in range(m):
        for c in range(k):
            A[r, c] = R[4 * r:4 * r + 4, 4 * c]   # first column of L(q) is q
    return A


def qmat_mul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return qmat_from_real(qmat_to_real(A) @ qmat_to_real(B))


def qmat_conj_T(A: np.ndarray) -> np.ndarray:
    out = np.transpose(A, (1, 0, 2)).copy()
    out[..., 1:] *= -1.0
    return out


def qmat_expm(G: np.ndarray) -> np.ndarray:
    return qmat_from_real(expm(qmat_to_real(G)))


def qmat_vec(A: np.ndarray, X: QVector) -> QVector:
    """Apply a quaternion matrix to a column vector (entries act on the left)."""
    m, k = A.shape[0], A.shape[1]
    if k != len(X):
        raise ShapeError("matrix/vector size mismatch")
    out = []
    for r in range(m):
        acc = Quaternion()
        for c in range(k):
            acc = acc + Quaternion.from_array(A[r, c]) * X[c]
        out.append(acc)
    return qvector(out, X.form)


def lorentz_signature(m: int) -> np.ndarray:
    J = qmat_identity(m)
    J[-1, -1, 0] = -1.0
    return J


def sp_defect(A: np.ndarray) -> float:
    """max-norm of A* I_{n,1} A - I_{n,1}."""
    J = lorentz_signature(A.shape[0])
    return float(np.max(np.abs(qmat_mul(qmat_mul(qmat_conj_T(A), J), A) - J)))


# ---------------------------------------------------------------------------
# isometries


@dataclass(frozen=True)
class Isometry:
    """(n+1)x(n+1) quaternionic matrix satisfying A* I_{n,1} A = I_{n,1}."""

    A: np.ndarray

    def __post_init__(self):
        if sp_defect(self.A) > SP_TOL:
            raise NotSymplecticError("matrix violates the Sp(n,1) identity")

    @property
    def n(self) -> int:
        return self.A.shape[0] - 1

    def compose(self, other: "Isometry") -> "Isometry":
        return Isometry(qmat_mul(self.A, other.A))

    def inverse(self) -> "Isometry":
        # A^{-1} = I_{n,1} A* I_{n,1} for members of Sp(n,1)
        J = lorentz_signature(self.A.shape[0])
        return Isometry(qmat_mul(qmat_mul(J, qmat_conj_T(self.A)), J))


@dataclass(frozen=True)
class HeisenbergElement:
    """Heisenberg group element (xi, nu), xi in Q^{n-1}, nu purely imaginary."""

    xi: tuple[Quaternion, ...]
    nu: Quaternion

    def __post_init__(self):
        if self.nu.re() != 0.0:
            raise ValueError("nu must be purely imaginary")

    def inverse(self) -> "HeisenbergElement":
        return HeisenbergElement(tuple(-x for x in self.xi), -self.nu)


def heis_mul(a: HeisenbergElement, b: HeisenbergElement) -> HeisenbergElement:
    """(xi1, nu1)(xi2, nu2) = (xi1 + xi2, nu1 + nu2 + 2 Im(xi1* xi2))."""
    if len(a.xi) != len(b.xi):
        raise ShapeError("Heisenberg elements of different rank")
    cross = Quaternion()
    for x1, x2 in zip(a.xi, b.xi):
        cross = cross + x1.conj() * x2
    return HeisenbergElement(tuple(x1 + x2 for x1, x2 in zip(a.xi, b.xi)),
                             a.nu + b.nu + 2.0 * cross.im())


def heisenberg_matrix(n: int, xi, nu) -> Isometry:
    """Heisenberg translation h(xi, nu) as an Sp(n,1) matrix."""
    xi = tuple(x if isinstance(x, Quaternion) else Quaternion(float(x)) for x in xi)
    nu = nu if isinstance(nu, Quaternion) else Quaternion(float(nu))
    if len(xi) != n - 1:
        raise ShapeError(f"xi must have length {n - 1}")
    if abs(nu.re()) > 0.0:
        raise NotSymplecticError("nu must be purely imaginary")
    xi2 = sum(x.norm2() for x in xi)
    half = 0.5 * (Quaternion(xi2) + nu)
    A = qmat_identity(n + 1)
    for l in range(n - 1):
        A[l, n - 1] = (-xi[l]).as_array()
        A[l, n] = xi[l].as_array()
        A[n - 1, l] = xi[l].conj().as_array()
        A[n, l] = xi[l].conj().as_array()
    A[n - 1, n - 1] = (Quaternion(1.0) - half).as_array()
    A[n - 1, n] = half.as_array()
    A[n, n - 1] = (-half).as_array()
    A[n, n] = (Quaternion(1.0) + half).as_array()
    return Isometry(A)


def transvection_matrix(n: int, t: float) -> Isometry:
    A = qmat_identity(n + 1)
    ch, sh = float(np.cosh(t)), float(np.sinh(t))
    A[n - 1, n - 1, 0] = ch
    A[n - 1, n, 0] = sh
    A[n, n - 1, 0] = sh
    A[n, n, 0] = ch
    return Isometry(A)


def rotation_matrix(n: int, B: np.ndarray, lam: Quaternion) -> Isometry:
    """diag(B, lam) with B in Sp(n), lam a unit quaternion."""
    if B.shape[:2] != (n, n):
        raise ShapeError(f"rotation block must be {n}x{n}")
    if float(np.max(np.abs(qmat_mul(qmat_conj_T(B), B) - qmat_identity(n)))) > 1e-12:
        raise NotSymplecticError("rotation block is not in Sp(n)")
    if abs(abs(lam) - 1.0) > 1e-12:
        raise NotSymplecticError("lambda must be a unit quaternion")
    A = qmat_identity(n + 1)
    A[:n, :n] = B
    A[n, n] = lam.as_array()
    return Isometry(A)


def make_isometry(kind: str, n: int, **params) -> Isometry:
    if kind == "heisenberg":
        return heisenberg_matrix(n, params["xi"], params["nu"])
    if kind == "transvection":
        return transvection_matrix(n, params["t"])
    if kind == "rotation":
        return rotation_matrix(n, params["B"], params["lam"])
    raise ValueError(f"unknown isometry kind {kind!r}")


def act(g: Isometry, p: ChartPoint) -> ChartPoint:
    """Apply an isometry: lift, multiply, re-project; keeps p's chart."""
    X = lift(p)
    Y = qmat_vec(g.A, X)
    return convert(ball_from_lift(Y), p.chart)


def act_horo_closed(kind: str, p: ChartPoint, **params) -> ChartPoint:
    """Closed-form horospherical action of the three Iwasawa subgroup kinds.

    heisenberg: (xi+omega, alpha, nu+beta+2Im(xi* omega))
    transvection: (e^t omega, e^{2t} alpha, e^{2t} beta)
    rotation (B in Sp(n-1), lam in Sp(1)): (B omega lam^{-1}, alpha, lam beta lam^{-1})
    """
    q = convert(p, "horo")
    if kind == "heisenberg":
        xi = tuple(x if isinstance(x, Quaternion) else Quaternion(float(x))
                   for x in params["xi"])
        nu = params["nu"]
        nu = nu if isinstance(nu, Quaternion) else Quaternion(float(nu))
        if len(xi) != q.n - 1:
            raise ShapeError("xi length mismatch")
        cross = Quaternion()
        for x, w in zip(xi, q.omega):
            cross = cross + x.conj() * w
        return horo_point(tuple(x + w for x, w in zip(xi, q.omega)),
                          q.alpha, nu + q.beta + 2.0 * cross.im())
    if kind == "transvection":
        t = float(params["t"])
        e = float(np.exp(t))
        return horo_point(tuple(w * e for w in q.omega),
                          e * e * q.alpha, (e * e) * q.beta)
    if kind == "rotation":
        B, lam = params["B"], params["lam"]
        if B.shape[:2] != (q.n - 1, q.n - 1):
            raise ShapeError("rotation block must act on Q^{n-1}")
        lam_inv = lam.inverse()
        w = qmat_vec(B, qvector(q.omega))
        return horo_point(tuple(wl * lam_inv for wl in w.entries),
                          q.alpha, lam * q.beta * lam_inv)
    raise ValueError(f"unknown closed-form kind {kind!r}")


# ---------------------------------------------------------------------------
# inversions


def inversion_horo(p: ChartPoint) -> ChartPoint:
    """The involutive inversion fixing {|omega|^2 + alpha = 1, beta = 0}."""
    q = convert(p, "horo")
    w2 = sum(w.norm2() for w in q.omega)
    denom = Quaternion(q.alpha + w2) + q.beta
    d2 = denom.norm2()
    inv = denom.inverse()
    return convert(horo_point(tuple(w * inv for w in q.omega),
                              q.alpha / d2, (-1.0 / d2) * q.beta), p.chart)


def inversion_at_hyperplane(lam: QVector, X: QVector) -> QVector:
    """X -> X - 2 lam <lam, X> / <lam, lam> for a positive vector lam."""
    if signature_class(lam) != "positive":
        raise NotPolarError("hyperplane vector must be positive")
    if lam.form != LORENTZ or X.form != LORENTZ or len(lam) != len(X):
        raise ShapeError("inversion needs lorentz vectors of equal length")
    factor = (2.0 / herm_lorentz(lam, lam).re()) * herm_lorentz(lam, X)
    return qvector(tuple(x - l * factor for l, x in zip(lam.entries, X.entries)),
                   LORENTZ)


# ---------------------------------------------------------------------------
# test/oracle helpers


def random_unit_quaternion(rng: np.random.Generator) -> Quaternion:
    v = rng.standard_normal(4)
    return Quaternion.from_array(v / np.linalg.norm(v))


def random_skew_hermitian(m: int, rng: np.random.Generator,
                          scale: float = 0.5) -> np.ndarray:
    """Random S with S* = -S (diagonal purely imaginary)."""
    S = np.zeros((m, m, 4))
    for r in range(m):
        S[r, r] = scale * np.concatenate([[0.0], rng.standard_normal(3)])
        for c in range(r + 1, m):
            q = scale * rng.standard_normal(4)
            S[r, c] = q
            S[c, r] = -q * np.array([1.0, -1.0, -1.0, -1.0])
    return S


def random_lorentz_sp(m: int, rng: np.random.Generator) -> np.ndarray:
    """Random element of the isometry group of the form I_{m-1,1},
    built as exp(J S) with S skew-Hermitian and J the signature matrix."""
    S = random_skew_hermitian(m, rng)
    J = lorentz_signature(m)
    return qmat_expm(qmat_mul(J, S))


def random_sp(n: int, rng: np.random.Generator) -> np.ndarray:
    """Random element of Sp(n) by Gram-Schmidt over the quaternions."""
    cols = []
    for _ in range(n):
        v = [Quaternion.from_array(rng.standard_normal(4)) for _ in range(n)]
        for u in cols:
            # subtract u * (u, v)
            proj = Quaternion()
            for ul, vl in zip(u, v):
                proj = proj + ul.conj() * vl
            v = [vl - ul * proj for ul, vl in zip(u, v)]
        norm = float(np.sqrt(sum(vl.norm2() for vl in v)))
        cols.append([vl * (1.0 / norm) for vl in v])
    A = np.zeros((n, n, 4))
    for c, col in enumerate(cols):
        for r, entry in enumerate(col):
            A[r, c] = entry.as_array()
    return A

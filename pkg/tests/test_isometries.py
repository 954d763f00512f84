import numpy as np
import pytest

from hqn.charts import (
    BALL,
    HORO,
    ball_point,
    busemann,
    convert,
    coords_array,
    dist,
    horo_point,
    lift,
    point_from_array,
)
from hqn.errors import NotSymplecticError, ShapeError
from hqn.isometries import (
    HeisenbergElement,
    Isometry,
    act,
    act_horo_closed,
    heis_mul,
    heisenberg_matrix,
    inversion_at_hyperplane,
    inversion_horo,
    make_isometry,
    qmat_conj_T,
    qmat_expm,
    qmat_identity,
    qmat_mul,
    qmat_vec,
    random_sp,
    random_unit_quaternion,
    rotation_matrix,
    sp_defect,
    transvection_matrix,
)
from hqn.quaternion import LORENTZ, QI, QK, Quaternion, herm_lorentz, qvector


def random_ball_point(rng, n=2, rmax=0.8):
    v = rng.standard_normal(4 * n)
    v *= rng.uniform(0.05, rmax) / np.linalg.norm(v)
    return point_from_array(BALL, v, n)


def random_heis(rng, n=2):
    xi = tuple(Quaternion.from_array(rng.standard_normal(4)) for _ in range(n - 1))
    nu = Quaternion(0.0, *rng.standard_normal(3))
    return xi, nu


def test_membership_identity():
    rng = np.random.default_rng(0)
    for n in (2, 3):
        for _ in range(10):
            xi, nu = random_heis(rng, n)
            assert sp_defect(heisenberg_matrix(n, xi, nu).A) < 1e-12
            assert sp_defect(transvection_matrix(n, rng.uniform(-2, 2)).A) < 1e-12
            g = rotation_matrix(n, random_sp(n, rng), random_unit_quaternion(rng))
            assert sp_defect(g.A) < 1e-12


def test_compose_and_inverse():
    rng = np.random.default_rng(1)
    n = 2
    xi, nu = random_heis(rng, n)
    g = heisenberg_matrix(n, xi, nu).compose(transvection_matrix(n, 0.7))
    gi = g.inverse()
    prod = g.compose(gi)
    assert float(np.max(np.abs(prod.A - qmat_identity(n + 1)))) < 1e-12
    with pytest.raises(NotSymplecticError):
        Isometry(2.0 * qmat_identity(n + 1))


def test_matrix_vs_closed_form():
    # matrix action through the lift agrees with the horospherical formulas
    rng = np.random.default_rng(2)
    for _ in range(50):
        n = int(rng.integers(2, 4))
        p = convert(random_ball_point(rng, n), HORO)
        kind = ["heisenberg", "transvection", "rotation"][int(rng.integers(3))]
        if kind == "heisenberg":
            xi, nu = random_heis(rng, n)
            params = {"xi": xi, "nu": nu}
        elif kind == "transvection":
            params = {"t": float(rng.uniform(-1.5, 1.5))}
        else:
            lam = random_unit_quaternion(rng)
            B = random_sp(n - 1, rng)
            params = {"B": B, "lam": lam}
            # the horospherical rotation (B, lam) is the matrix diag(B, lam, lam)
            big = qmat_identity(n)
            big[:n - 1, :n - 1] = B
            big[n - 1, n - 1] = lam.as_array()
            g = rotation_matrix(n, big, lam)
        if kind != "rotation":
            g = make_isometry(kind, n, **params)
        q1 = act(g, p)
        q2 = act_horo_closed(kind, p, **params)
        np.testing.assert_allclose(coords_array(q1), coords_array(q2), atol=1e-10)


def test_heisenberg_group_law():
    rng = np.random.default_rng(3)
    n = 3
    for _ in range(20):
        a = HeisenbergElement(*random_heis(rng, n))
        b = HeisenbergElement(*random_heis(rng, n))
        ab = heis_mul(a, b)
        m1 = heisenberg_matrix(n, a.xi, a.nu).compose(heisenberg_matrix(n, b.xi, b.nu))
        m2 = heisenberg_matrix(n, ab.xi, ab.nu)
        np.testing.assert_allclose(m1.A, m2.A, atol=1e-13)
        # inverse: a a^{-1} = identity
        e = heis_mul(a, a.inverse())
        assert all(abs(x) < 1e-14 for x in e.xi) and abs(e.nu) < 1e-14


def test_transvection_one_parameter():
    n = 2
    for s, t in [(0.3, 0.5), (-1.1, 0.8), (2.0, -2.0)]:
        g = transvection_matrix(n, s).compose(transvection_matrix(n, t))
        np.testing.assert_allclose(g.A, transvection_matrix(n, s + t).A, atol=1e-13)


def test_distance_invariance():
    rng = np.random.default_rng(4)
    n = 2
    for _ in range(30):
        p, q = random_ball_point(rng, n), random_ball_point(rng, n)
        xi, nu = random_heis(rng, n)
        g = (heisenberg_matrix(n, xi, nu)
             .compose(transvection_matrix(n, rng.uniform(-1, 1)))
             .compose(rotation_matrix(n, random_sp(n, rng),
                                      random_unit_quaternion(rng))))
        assert dist(act(g, p), act(g, q)) == pytest.approx(dist(p, q), abs=1e-9)


def test_busemann_under_transvection():
    rng = np.random.default_rng(5)
    n = 2
    for _ in range(10):
        p = convert(random_ball_point(rng, n), HORO)
        t = float(rng.uniform(-1.5, 1.5))
        q = act_horo_closed("transvection", p, t=t)
        assert busemann(q) == pytest.approx(busemann(p) - 2.0 * t, abs=1e-12)
        # heisenberg translations preserve horospheres
        xi, nu = random_heis(rng, n)
        assert busemann(act_horo_closed("heisenberg", p, xi=xi, nu=nu)) == \
            pytest.approx(busemann(p), abs=1e-12)


def test_inversion_horo():
    rng = np.random.default_rng(6)
    n = 2
    # fixes the unit sphere |omega|^2 + alpha = 1 with beta = 0
    fixed = horo_point([Quaternion(0.6)], 1.0 - 0.36, 0)
    np.testing.assert_allclose(coords_array(inversion_horo(fixed)),
                               coords_array(fixed), atol=1e-14)
    for _ in range(30):
        p = convert(random_ball_point(rng, n), HORO)
        q = inversion_horo(inversion_horo(p))
        np.testing.assert_allclose(coords_array(q), coords_array(p), atol=1e-12)
        # inversion is an isometry
        p2 = convert(random_ball_point(rng, n), HORO)
        assert dist(inversion_horo(p), inversion_horo(p2)) == \
            pytest.approx(dist(p, p2), abs=1e-9)


def test_inversion_at_hyperplane():
    rng = np.random.default_rng(7)
    n = 2
    lam = qvector([1, 0, 0], LORENTZ)
    for _ in range(20):
        p = random_ball_point(rng, n)
        X = lift(p)
        Y = inversion_at_hyperplane(lam, X)
        # involution
        Z = inversion_at_hyperplane(lam, Y)
        for a, b in zip(Z.entries, X.entries):
            assert a.isclose(b, 1e-13)
        # preserves the form
        assert herm_lorentz(Y, Y).re() == pytest.approx(
            herm_lorentz(X, X).re(), abs=1e-12)
        # fixes the orthogonal complement of lam
        assert abs(herm_lorentz(lam, Y) + herm_lorentz(lam, X)) < 1e-12


def test_rotation_validation():
    with pytest.raises(NotSymplecticError):
        rotation_matrix(2, 2.0 * qmat_identity(2), Quaternion(1.0))
    with pytest.raises(NotSymplecticError):
        rotation_matrix(2, qmat_identity(2), Quaternion(2.0))
    with pytest.raises(ShapeError):
        heisenberg_matrix(2, [QI, QK], QI)


def test_expm_route():
    # exp of the transvection generator reproduces the closed form
    n = 2
    G = np.zeros((n + 1, n + 1, 4))
    G[n - 1, n, 0] = 1.0
    G[n, n - 1, 0] = 1.0
    for t in (0.4, -1.2):
        np.testing.assert_allclose(qmat_expm(t * G),
                                   transvection_matrix(n, t).A, atol=1e-12)


def test_qmat_vec_right_module():
    # matrix action commutes with right scalar multiplication of the vector
    rng = np.random.default_rng(8)
    A = random_sp(3, rng)
    X = qvector([Quaternion.from_array(rng.standard_normal(4)) for _ in range(3)])
    lam = random_unit_quaternion(rng)
    lhs = qmat_vec(A, X.scale_right(lam))
    rhs = qmat_vec(A, X).scale_right(lam)
    for a, b in zip(lhs.entries, rhs.entries):
        assert a.isclose(b, 1e-13)

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from eightvertex import qkz
from eightvertex.errors import ResonantIndices
from eightvertex.twistor import ModelParams


@pytest.fixture(scope="module")
def g_system():
    return qkz.build_two_point_system(ModelParams(), flavor="g")


def test_weight_config():
    w = qkz.WeightConfig()
    assert w.c_A == pytest.approx(1.375)
    assert np.allclose(np.diag(w.A(1)), 1.375 * np.array([1, 1, -1, -1]))
    assert np.allclose(qkz.total_weight(2), [2, 0, 0, -2])


@pytest.mark.parametrize("flavor", ["f", "g"])
def test_two_point_consistency(flavor):
    system = qkz.build_two_point_system(ModelParams(q=0.45), flavor=flavor)
    assert max(system.consistency_residuals().values()) < 1e-10
    branches = qkz.solve_two_point(system)
    assert len(branches) == 4
    for b in branches:
        assert b.residuals["T1"] < 1e-9 and b.residuals["T2"] < 1e-9


def test_shift_equation_pointwise(g_system):
    z1, z2 = 1.0, 0.04
    p = g_system.step
    for b in qkz.solve_two_point(g_system):
        lhs = qkz.two_point_value(g_system, b, z1, z2, shift1=1)
        R_inv = np.linalg.inv(qkz.R_numeric(g_system.q, z1, z2))
        rhs = g_system.weights.qA(g_system.q, 1) @ R_inv @ qkz.two_point_value(g_system, b, z1, z2)
        assert np.max(np.abs(lhs - rhs)) < 1e-10 * max(1, np.max(np.abs(lhs)))
        assert abs(p) != 1


def test_resonance_detected():
    # c_A = 1 at level 0 puts a second exponent at integer distance
    system = qkz.build_two_point_system(ModelParams(), qkz.WeightConfig(0.0, 0.0), flavor="f")
    with pytest.raises(ResonantIndices):
        qkz.solve_two_point(system)


def test_branch_json_shape(g_system):
    d = qkz.solve_two_point(g_system, order=4)[0].to_dict()
    assert set(d) == {"s", "eigenvalue", "weight", "coeffs", "residuals"}
    assert len(d["coeffs"]) == 5


def test_three_point():
    res = qkz.check_three_point(ModelParams())
    assert max(res.values()) < 1e-10


def test_unknown_flavor():
    with pytest.raises(ValueError):
        qkz.build_two_point_system(ModelParams(), flavor="h")


def test_twist_at_zero_nome_is_trivial(g_system):
    b = qkz.solve_two_point(g_system)[0]
    tw = qkz.twist_two_point(ModelParams(eps=0.0), g_system, b)
    r = qkz.covariance_residuals(tw)
    assert r["twist_deviation"] < 1e-14 and r["naive"] < 1e-10


def test_twist_covariance(g_system):
    params = ModelParams(eps=0.2)
    for b in qkz.solve_two_point(g_system):
        r = qkz.covariance_residuals(qkz.twist_two_point(params, g_system, b))
        assert r["correct"] < 1e-8
        assert r["naive"] > 1e-3


def test_twist_requires_g_type():
    f_sys = qkz.build_two_point_system(ModelParams(), flavor="f")
    with pytest.raises(ValueError):
        qkz.twist_two_point(ModelParams(), f_sys, qkz.solve_two_point(f_sys)[0])


@pytest.mark.parametrize("jp,jm", [(0.5, 0.5), (1.0, 0.5), (1.5, 1.0)])
def test_one_point_exponents(jp, jm):
    ev, pred = qkz.one_point_exponents(jp, jm)
    assert np.allclose(ev, pred)


def test_spin_matrices_commutators():
    H, E, F = qkz.spin_matrices(1.5)
    assert np.allclose(H @ E - E @ H, 2 * E)
    assert np.allclose(E @ F - F @ E, H)
    cas = H @ H / 2 + E @ F + F @ E
    assert np.allclose(cas, qkz.casimir_value(1.5) * np.eye(4))


@pytest.mark.parametrize("pol", ["pole", "euler"])
def test_kz_flat(pol):
    system = qkz.classical_kz_system(level=0.5, polarization=pol)
    assert qkz.flatness_residual(system, 1.3 + 0.2j, 0.2 - 0.1j) < 1e-12


@pytest.mark.parametrize("pol", ["pole", "euler"])
def test_kz_frobenius_against_ode(pol):
    """Series branch against a direct integration of the z2 equation at z1 = 1."""
    system = qkz.classical_kz_system(level=0.5, polarization=pol)
    for b in qkz.solve_kz(system, order=40)[:3]:
        assert max(b.residuals.values()) < 1e-10
        y0, y1 = 0.05, 0.3
        rhs = lambda t, f: system.connection(1.0, t)[1] @ f  # noqa: E731
        sol = solve_ivp(rhs, (y0, y1), b.evaluate(y0).astype(complex), rtol=1e-11, atol=1e-13)
        assert np.allclose(sol.y[:, -1], b.evaluate(y1), rtol=1e-7, atol=1e-9)


def test_kz_resonance_at_level_zero():
    with pytest.raises(ResonantIndices):
        qkz.solve_kz(qkz.classical_kz_system(level=0.0, polarization="pole"))

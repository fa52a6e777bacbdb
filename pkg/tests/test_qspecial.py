import numpy as np
import pytest
from scipy import special

from eightvertex.errors import BadModularParam, BadNome, DivergentBase, ModulusOne
from eightvertex.qspecial import (
    ThetaParams,
    elliptic_K_agm,
    jacobi_sn_cn_dn,
    normalizer_A,
    normalizer_A_product,
    poch,
    quarter_period_and_modulus,
    theta,
    theta_nome,
)


def test_pochhammer_basics():
    assert poch(0, 0.5) == 1
    # Euler: (q; q)_inf = sum (-1)^k q^{k(3k-1)/2}
    q = 0.3
    k = np.arange(-30, 31)
    assert abs(poch(q, q) - np.sum((-1.0) ** k * q ** (k * (3 * k - 1) / 2))) < 1e-14
    with pytest.raises(DivergentBase):
        poch(0.1, 1.2)


def test_double_pochhammer_factorizes():
    a, q, p = 0.2, 0.3, 0.4
    direct = np.prod([poch(a * p**j, q) for j in range(60)])
    assert abs(poch(a, q, p) - direct) < 1e-14


@pytest.mark.parametrize("q,x", [(0.5, 0.1), (0.3 + 0.2j, -0.4j), (1.8, 0.3), (0.7, 0.0)])
def test_normalizer_inversion_and_product(q, x):
    assert abs(normalizer_A(q, x) * normalizer_A(1 / q, x) - 1) < 1e-12
    assert abs(normalizer_A(q, x) - normalizer_A_product(q, x)) < 1e-12


def test_printed_product_orientation_is_inverse():
    q, x = 0.5, 0.2
    assert abs(normalizer_A_product(q, x, as_printed=True) * normalizer_A(q, x) - 1) < 1e-12


def test_normalizer_series_matches_numbers():
    s = normalizer_A(0.4, None, order=40)
    assert abs(s.evaluate(0.05) - normalizer_A(0.4, 0.05)) < 1e-14


def test_modulus_one_rejected():
    with pytest.raises(ModulusOne):
        normalizer_A(np.exp(0.3j), 0.1)


def test_theta_parameters():
    with pytest.raises(BadModularParam):
        ThetaParams(0.1, -0.5j)
    with pytest.raises(BadNome):
        theta_nome(3, 0.1, 1.0)
    t = ThetaParams(0.1, 0.8j, "theta")
    assert theta(t) == theta_nome(4, 0.1, t.nome)


def test_theta_identities():
    p = np.exp(-np.pi * 0.9)
    t2, t3, t4 = (theta_nome(j, 0, p) for j in (2, 3, 4))
    assert abs(t3**4 - t2**4 - t4**4) < 1e-13  # Jacobi
    z = 0.17 + 0.05j
    assert abs(theta_nome(1, z + 1, p) + theta_nome(1, z, p)) < 1e-13
    assert abs(theta_nome(1, -z, p) + theta_nome(1, z, p)) < 1e-13


@pytest.mark.parametrize("eps", [0.05, 0.2, 0.45])
def test_jacobi_against_scipy(eps):
    big_k, k = quarter_period_and_modulus(eps)
    m = (k**2).real
    assert abs(big_k - special.ellipk(m)) < 1e-10
    assert abs(big_k - elliptic_K_agm(k)) < 1e-10
    for v in (0.1, 0.7, 1.3):
        sn, cn, dn, _ = special.ellipj(v, m)
        assert np.allclose(jacobi_sn_cn_dn(v, eps), (sn, cn, dn), atol=1e-10)

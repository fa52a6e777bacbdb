import numpy as np
import pytest

from eightvertex import twistor
from eightvertex.errors import ConventionMismatch, ParameterConditionViolated, ProductDivergence, UnderdeterminedSystem
from eightvertex.twistor import EllipticPoint, ModelParams, SlotImages


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(q=1.0)
    with pytest.raises(ValueError):
        ModelParams(eps=1.2)
    assert ModelParams().replace(k=1.0).k == 1.0


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_factor_recursion_matches_closed_form(m):
    params = ModelParams(q=0.6 + 0.1j, eps=0.2, u=0.3, k=1.0, order_eps=8)
    a = twistor.solve_twistor_recursion(params, m, z1=0.4, z2=1.0).matrix
    b = twistor.closed_form_factor(params, m, z1=0.4, z2=1.0).matrix
    assert np.max(np.abs(a.data - b.data)) < 1e-10


def test_factor_starts_at_its_order():
    f = twistor.closed_form_factor(ModelParams(order_eps=8), 3).matrix
    assert np.allclose(f.data[:, :, 0], np.eye(4))
    assert np.allclose(f.data[:, :, 1:3], 0)
    assert not np.allclose(f.data[:, :, 3], 0)


def test_eight_vertex_sparsity():
    params = ModelParams(q=0.5, eps=0.25, u=0.3)
    prod, _ = twistor.product_numeric(params, 0.3, 1.0)
    assert twistor.eight_vertex_sparsity_residual(prod) < 1e-14
    assert twistor.eight_vertex_sparsity_residual(twistor.twisted_R(params, 0.3, 1.0)) < 1e-12


def test_zero_nome_gives_identity():
    params = ModelParams(eps=0.0)
    prod, factors = twistor.product_numeric(params, 0.3, 1.0, normalized=False)
    assert np.allclose(prod, np.eye(4))
    assert np.allclose(twistor.twisted_R(params, 0.3, 1.0), twistor.R_numeric(0.5, 0.3, 1.0))


@pytest.mark.parametrize("k", [0.0, 1.0])
def test_product_and_branch(k):
    res = twistor.assemble_product(ModelParams(q=0.55, eps=0.2, u=0.35, k=k), 0.4 + 0.1j, 1.0)
    assert res.residual < 1e-10
    assert res.half_integer_residual < 1e-10
    assert res.cutoff_M >= 1


def test_cutoff_grows_with_nome():
    small = twistor.cutoff_index(ModelParams(eps=0.05))
    large = twistor.cutoff_index(ModelParams(eps=0.5))
    assert small < large
    with pytest.raises(ProductDivergence):
        twistor.cutoff_index(ModelParams(q=0.25, eps=0.9, k=2.0))


def test_cocycle_hopf_and_control():
    assert twistor.verify_cocycle(ModelParams(k=0.0), 4)["residual"] < 1e-9
    assert twistor.verify_cocycle(ModelParams(k=1.0), 4)["residual"] > 1e-4


def test_pair_factor_in_triple_space_is_underdetermined():
    params = ModelParams()
    zs = (1.0, 0.7, 0.45)
    s1, s2 = SlotImages(params.q, (1,), zs, 3), SlotImages(params.q, (2,), zs, 3)
    with pytest.raises(UnderdeterminedSystem):
        twistor.solve_twistor_general(params, 1, 4, s1, s2, (0, 0))


def test_elliptic_needs_level_zero():
    with pytest.raises(ParameterConditionViolated):
        twistor.compare_elliptic(ModelParams(k=1.0))


def test_elliptic_report_and_mismatch():
    pt = EllipticPoint(0.13, 0.05j, complex(np.exp(-0.8 * np.pi)))
    rep = twistor.compare_elliptic(ModelParams(), [pt])
    assert rep.deviation < 1e-8 and rep.jacobi_deviation < 1e-8
    assert rep.printed_deviation > 1e-3
    with pytest.raises(ConventionMismatch):
        twistor.compare_elliptic(ModelParams(), [pt], tol=0.0)


def test_elliptic_trigonometric_limit():
    rep = twistor.compare_elliptic(ModelParams(), [EllipticPoint(0.2, 0.07j, 0.0)])
    assert rep.deviation < 1e-12

import numpy as np
import pytest

from eightvertex import evrep
from eightvertex.errors import DegenerateQ, IncompatibleWeights


def test_kappa_relation():
    rep = evrep.build_rep(0.5 + 0.1j)
    assert abs(rep.kappa**2 - (rep.q - 1 / rep.q)) < 1e-14


def test_degenerate_q():
    with pytest.raises(DegenerateQ):
        evrep.build_rep(1.0)


def test_generators_raise_and_lower_weight():
    rep = evrep.build_rep(0.5)
    H = rep.H
    for lab, w in (("1", 2), ("-1", -2), ("0", -2), ("-0", 2)):
        e = rep.e(lab, 0.7)
        assert np.allclose(H @ e - e @ H, w * e)


def test_cartan_form_and_element():
    cf = evrep.cartan_form(0.5)
    assert np.allclose(np.diag(cf.q_phi), [0.5**0.5, 0.5**-0.5, 0.5**-0.5, 0.5**0.5])
    h, g = evrep.solve_cartan_element(evrep.build_rep(0.5))
    assert np.allclose(h, evrep.H) and g == 2


def test_tensor_weights():
    rep = evrep.build_rep(0.5)
    m = evrep.tensor(rep.e_neg0, rep.e0, "z2/z1", order=3)
    assert np.allclose(m.data[:, :, 1], np.kron(rep.e_neg0.matrix, rep.e0.matrix))
    with pytest.raises(IncompatibleWeights):
        evrep.tensor(rep.e0, rep.e0)


def test_embed_pair_matches_kron():
    rng = np.random.default_rng(0)
    op = rng.normal(size=(4, 4))
    assert np.allclose(evrep.embed_pair(op, (1, 2)), np.kron(op, np.eye(2)))
    assert np.allclose(evrep.embed_pair(op, (2, 3)), np.kron(np.eye(2), op))
    swapped = evrep.embed_pair(evrep.SWAP @ op @ evrep.SWAP, (2, 1))
    assert np.allclose(swapped, evrep.embed_pair(op, (1, 2)))

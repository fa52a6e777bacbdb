import numpy as np
import pytest

from eightvertex import rmatrix
from eightvertex.fps import mat_mul, mat_norm_residual, mat_rescale_variable


@pytest.mark.parametrize("q", [0.3, 0.5 + 0.2j, 2.5])
def test_recursion_matches_closed_form(q):
    a = rmatrix.solve_T_recursion(q, 16)
    b = rmatrix.closed_form_T(q, 16)
    assert rmatrix.relative_residual(a, b) < 1e-12
    assert rmatrix.check_abc_relations(q, a, relative=True) < 1e-10


def test_six_vertex_shape():
    R = rmatrix.R_numeric(0.5, 1.0, 0.3)
    zero = np.ones((4, 4), bool)
    zero[[0, 1, 1, 2, 2, 3], [0, 1, 2, 1, 2, 3]] = False
    assert np.allclose(R[zero], 0)


def test_series_agrees_with_numbers():
    # radius of convergence is |q|^2
    R = rmatrix.R_series(0.5, 40)
    assert np.allclose(R.evaluate(0.05), rmatrix.R_numeric(0.5, 1.0, 0.05), atol=1e-12)


def test_inverse_and_control():
    assert rmatrix.verify_inverse_symmetry(0.5, 24) < 1e-10
    assert rmatrix.verify_inverse_symmetry(0.5, 24, tail="polynomial") > 1e-3


def test_inverse_series():
    r = rmatrix.natural_radius(0.4)
    R = mat_rescale_variable(rmatrix.R_series(0.4, 20), r)
    Ri = mat_rescale_variable(rmatrix.R_inverse_series(0.4, 20), r)
    assert mat_norm_residual(mat_mul(R, Ri), type(R).identity(4, 20, R.variable_tag)) < 1e-10


def test_ybe_and_quasi_triangularity():
    assert rmatrix.verify_ybe(0.6 + 0.2j, (0.7, 0.35, 0.5), 24) < 1e-10
    res = rmatrix.verify_quasi_triangularity(0.5, 1.0, 0.3, 24)
    assert res["R23R13"] < 1e-10
    assert res["R13R23"] > 1e-3


def test_natural_radius():
    assert rmatrix.natural_radius(0.5) == pytest.approx(0.25)
    assert rmatrix.natural_radius(2.0) == pytest.approx(0.25)

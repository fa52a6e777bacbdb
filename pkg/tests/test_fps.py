from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eightvertex.errors import IncompatibleExponents, SingularConstantTerm, TagMismatch, ZeroConstantTerm
from eightvertex.fps import (
    SeriesMatrix,
    TruncatedSeries,
    compose_monomial,
    exp_series,
    invert,
    kron,
    mat_inverse,
    mat_mul,
    mat_norm_residual,
    rescale_variable,
)

N = 12


def geometric(order):
    return TruncatedSeries(np.ones(order + 1))


def test_add_cancels():
    a = TruncatedSeries([1, 1, 0])
    b = TruncatedSeries([1, -1, 0])
    assert np.allclose((a + b).coeffs, [2, 0, 0])


def test_add_shifted_geometric():
    x_geo = TruncatedSeries(np.ones(N), leading_exponent=1)
    total = x_geo + TruncatedSeries.constant(1, N)
    assert np.allclose(total.coeffs, np.ones(N + 1))


def test_add_rejects_fractional_offset():
    with pytest.raises(IncompatibleExponents):
        TruncatedSeries([1.0], 0.5) + TruncatedSeries([1.0], 0)


def test_order_is_minimum():
    assert (geometric(3) + geometric(7)).order == 3
    assert (geometric(3) * geometric(7)).order == 3


def test_mul_examples():
    assert np.allclose((TruncatedSeries([1, 1, 0]) * TruncatedSeries([1, -1, 0])).coeffs, [1, 0, -1])
    prod = geometric(N) * TruncatedSeries(np.r_[1, -1, np.zeros(N - 1)])
    assert np.allclose(prod.coeffs, np.r_[1, np.zeros(N)])


def test_invert_zero_constant():
    with pytest.raises(ZeroConstantTerm):
        invert(TruncatedSeries([0, 1, 2]))


def test_exp_and_compose():
    e = exp_series(TruncatedSeries.variable(10))
    assert np.allclose(e.coeffs, [1 / factorial(n) for n in range(11)])
    c = compose_monomial(geometric(5), 2.0, 2, 10)
    assert np.allclose(c.coeffs[::2], 2.0 ** np.arange(6))
    assert np.allclose(c.coeffs[1::2], 0)


def test_rescale_keeps_branch_choice():
    s = TruncatedSeries([1, 2], leading_exponent=0.5)
    r = rescale_variable(s, -1.0, c_pow_s=-1j)
    assert r.coeffs[0] == -1j


def test_json_round_trip():
    s = TruncatedSeries([1 + 2j, 3, -1j], 0.25 - 0.5j)
    back = TruncatedSeries.from_json(s.to_json())
    assert np.array_equal(back.coeffs, s.coeffs) and back.leading_exponent == s.leading_exponent
    m = SeriesMatrix(np.arange(18).reshape(3, 3, 2) * (1 + 1j), "z1/z2")
    m2 = SeriesMatrix.from_json(m.to_json())
    assert np.array_equal(m2.data, m.data) and m2.variable_tag == "z1/z2"


def test_tags_must_match():
    a = SeriesMatrix.identity(2, 3, "z2/z1")
    with pytest.raises(TagMismatch):
        mat_mul(a, SeriesMatrix.identity(2, 3, "z1/z2"))


def test_singular_constant_term():
    d = np.zeros((2, 2, 3))
    d[0, 0, 0] = 1
    with pytest.raises(SingularConstantTerm):
        mat_inverse(SeriesMatrix(d))


def test_kron_matches_numpy_at_a_point():
    rng = np.random.default_rng(3)
    a = SeriesMatrix(rng.normal(size=(2, 2, 6)))
    b = SeriesMatrix(rng.normal(size=(2, 2, 6)))
    x = 0.01
    assert np.allclose(kron(a, b).evaluate(x), np.kron(a.evaluate(x), b.evaluate(x)), atol=1e-10)


coef = st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False)


@settings(max_examples=40, deadline=None)
@given(st.lists(coef, min_size=6, max_size=6), st.lists(coef, min_size=6, max_size=6))
def test_invert_roundtrip(c, d):
    c = [1 + abs(c[0])] + c[1:]
    s = TruncatedSeries(c)
    one = s * invert(s)
    assert np.allclose(one.coeffs, np.r_[1, np.zeros(5)], atol=1e-9 * max(1, np.max(np.abs(invert(s).coeffs))))


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_matrix_product_associative(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (SeriesMatrix(rng.normal(size=(3, 3, 5)) + 1j * rng.normal(size=(3, 3, 5))) for _ in range(3))
    assert mat_norm_residual(mat_mul(mat_mul(a, b), c), mat_mul(a, mat_mul(b, c))) < 1e-10


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_matrix_inverse(seed):
    rng = np.random.default_rng(seed)
    d = rng.normal(size=(3, 3, 6))
    d[:, :, 0] += 3 * np.eye(3)
    a = SeriesMatrix(d)
    assert mat_norm_residual(mat_mul(a, mat_inverse(a)), SeriesMatrix.identity(3, 5)) < 1e-9

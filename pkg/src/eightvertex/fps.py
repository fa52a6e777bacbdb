"""Truncated formal power series in one variable and square matrices of them.

A series is ``x**s * sum_{n=0}^{N} c_n x**n`` with complex coefficients.  The
truncation order ``N`` is part of the value: arithmetic returns the smallest
order that is still exact and never pads upward.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import IncompatibleExponents, SingularConstantTerm, TagMismatch, ZeroConstantTerm

ZERO_TOL = 1e-14


def _frozen(arr):
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


def _exponent_offset(s_a, s_b):
    d = complex(s_a) - complex(s_b)
    n = round(d.real)
    if abs(d - n) > 1e-12:
        raise IncompatibleExponents(f"leading exponents {s_a} and {s_b} differ by a non-integer")
    return n


def cpow(c, s):
    """Principal branch ``c**s`` computed as ``exp(s log c)``."""
    s = complex(s)
    if s == 0:
        return 1.0 + 0j
    return complex(np.exp(s * np.log(complex(c))))


@dataclass(frozen=True)
class TruncatedSeries:
    coeffs: np.ndarray
    leading_exponent: complex = 0

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coeffs must be a non-empty 1-d sequence")
        object.__setattr__(self, "coeffs", _frozen(c))

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @classmethod
    def constant(cls, value, order):
        c = np.zeros(order + 1, complex)
        c[0] = value
        return cls(c)

    @classmethod
    def variable(cls, order):
        c = np.zeros(order + 1, complex)
        if order >= 1:
            c[1] = 1
        return cls(c)

    def truncate(self, order):
        if order > self.order:
            raise ValueError("cannot raise truncation order")
        return TruncatedSeries(self.coeffs[: order + 1], self.leading_exponent)

    def evaluate(self, x):
        """Numeric value at ``x`` (principal branch for the prefactor)."""
        val = np.polynomial.polynomial.polyval(x, self.coeffs)
        return cpow(x, self.leading_exponent) * val

    def __add__(self, other):
        if np.isscalar(other):
            other = TruncatedSeries.constant(other, self.order)
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.coeffs, self.leading_exponent)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if np.isscalar(other):
            return TruncatedSeries(self.coeffs * other, self.leading_exponent)
        return mul(self, other)

    __rmul__ = __mul__

    def to_json(self):
        s = complex(self.leading_exponent)
        return {
            "order": self.order,
            "leading_exponent": [s.real, s.imag],
            "coeffs": [[c.real, c.imag] for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj):
        s = obj.get("leading_exponent", 0)
        if isinstance(s, (list, tuple)):
            s = complex(s[0], s[1])
        c = [complex(a, b) for a, b in obj["coeffs"]]
        if len(c) != obj["order"] + 1:
            raise ValueError("coeff count does not match order")
        return cls(c, s)


def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    shift = _exponent_offset(a.leading_exponent, b.leading_exponent)
    if shift < 0:
        a, b, shift = b, a, -shift
    # now a has the larger exponent: a = x^{s_b} x^{shift} (...)
    top = min(a.order + shift, b.order)
    out = b.coeffs[: top + 1].copy()
    n_a = top + 1 - shift
    if n_a > 0:
        out[shift:] += a.coeffs[:n_a]
    return TruncatedSeries(out, b.leading_exponent)


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    n = min(a.order, b.order)
    c = np.convolve(a.coeffs[: n + 1], b.coeffs[: n + 1])[: n + 1]
    return TruncatedSeries(c, complex(a.leading_exponent) + complex(b.leading_exponent))


def invert(a: TruncatedSeries) -> TruncatedSeries:
    c = a.coeffs
    if abs(c[0]) < ZERO_TOL:
        raise ZeroConstantTerm("constant term vanishes; series is not invertible")
    out = np.zeros_like(c)
    out[0] = 1 / c[0]
    for n in range(1, c.size):
        out[n] = -np.dot(c[1 : n + 1], out[n - 1 :: -1][:n]) / c[0]
    return TruncatedSeries(out, -complex(a.leading_exponent))


def rescale_variable(a: TruncatedSeries, c, c_pow_s=None) -> TruncatedSeries:
    """Substitute ``x -> c x``.

    The prefactor picks up ``c**s``; pass ``c_pow_s`` to fix the branch.
    """
    powers = complex(c) ** np.arange(a.coeffs.size)
    pref = cpow(c, a.leading_exponent) if c_pow_s is None else c_pow_s
    return TruncatedSeries(pref * powers * a.coeffs, a.leading_exponent)


def compose_monomial(a: TruncatedSeries, c, m: int, order: int) -> TruncatedSeries:
    """Series of ``a(c x**m)`` up to ``order``; needs ``a.order * m >= order``."""
    if a.leading_exponent != 0:
        raise IncompatibleExponents("composition needs a plain power series")
    if m < 1 or a.order * m < order:
        raise ValueError("input series too short for requested order")
    out = np.zeros(order + 1, complex)
    for j in range(order // m + 1):
        out[j * m] = a.coeffs[j] * complex(c) ** j
    return TruncatedSeries(out)


def exp_series(a: TruncatedSeries) -> TruncatedSeries:
    """``exp(a)`` for a plain series with zero constant term."""
    if abs(a.coeffs[0]) > ZERO_TOL or a.leading_exponent != 0:
        raise ValueError("exp_series needs zero constant term")
    c = a.coeffs
    n_max = c.size
    out = np.zeros(n_max, complex)
    out[0] = 1
    k = np.arange(n_max)
    # n e_n = sum_{k=1}^{n} k a_k e_{n-k}
    for n in range(1, n_max):
        out[n] = np.dot(k[1 : n + 1] * c[1 : n + 1], out[n - 1 :: -1][:n]) / n
    return TruncatedSeries(out)


# ---------------------------------------------------------------- matrices


@dataclass(frozen=True)
class SeriesMatrix:
    """Square matrix of series sharing one order and one leading exponent.

    ``data[i, j, n]`` is the coefficient of ``x**(s+n)`` in entry ``(i, j)``.
    """

    data: np.ndarray
    variable_tag: str = "z2/z1"
    leading_exponent: complex = 0
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        d = np.asarray(self.data, dtype=complex)
        if d.ndim != 3 or d.shape[0] != d.shape[1]:
            raise ValueError("data must have shape (d, d, N+1)")
        object.__setattr__(self, "data", _frozen(d))

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @property
    def order(self) -> int:
        return self.data.shape[2] - 1

    @classmethod
    def from_constant(cls, mat, order, variable_tag="z2/z1"):
        mat = np.asarray(mat, complex)
        d = np.zeros(mat.shape + (order + 1,), complex)
        d[:, :, 0] = mat
        return cls(d, variable_tag)

    @classmethod
    def from_coefficients(cls, coeff_list, variable_tag="z2/z1"):
        """Build from a list of d×d coefficient matrices (index = power)."""
        return cls(np.stack([np.asarray(c, complex) for c in coeff_list], axis=2), variable_tag)

    @classmethod
    def identity(cls, dim, order, variable_tag="z2/z1"):
        return cls.from_constant(np.eye(dim), order, variable_tag)

    def entry(self, i, j) -> TruncatedSeries:
        return TruncatedSeries(self.data[i, j], self.leading_exponent)

    def coefficient(self, n):
        return np.array(self.data[:, :, n])

    def truncate(self, order):
        if order > self.order:
            raise ValueError("cannot raise truncation order")
        return SeriesMatrix(self.data[:, :, : order + 1], self.variable_tag, self.leading_exponent)

    def evaluate(self, x):
        powers = complex(x) ** np.arange(self.order + 1)
        return cpow(x, self.leading_exponent) * np.tensordot(self.data, powers, axes=([2], [0]))

    def __add__(self, other):
        return mat_add(self, other)

    def __sub__(self, other):
        return mat_add(self, mat_scalar_mul(other, -1))

    def __matmul__(self, other):
        return mat_mul(self, other)

    def to_json(self):
        return {
            "dim": self.dim,
            "variable_tag": self.variable_tag,
            "entries": [[self.entry(i, j).to_json() for j in range(self.dim)] for i in range(self.dim)],
        }

    @classmethod
    def from_json(cls, obj):
        ents = [[TruncatedSeries.from_json(e) for e in row] for row in obj["entries"]]
        data = np.array([[e.coeffs for e in row] for row in ents])
        return cls(data, obj["variable_tag"], ents[0][0].leading_exponent)


def _check_tags(a: SeriesMatrix, b: SeriesMatrix):
    if a.variable_tag != b.variable_tag:
        raise TagMismatch(f"variable tags differ: {a.variable_tag!r} vs {b.variable_tag!r}")


def mat_add(a: SeriesMatrix, b: SeriesMatrix) -> SeriesMatrix:
    _check_tags(a, b)
    if _exponent_offset(a.leading_exponent, b.leading_exponent) != 0:
        raise IncompatibleExponents("matrix addition needs equal leading exponents")
    n = min(a.order, b.order)
    return SeriesMatrix(a.data[:, :, : n + 1] + b.data[:, :, : n + 1], a.variable_tag, a.leading_exponent)


def mat_mul(a: SeriesMatrix, b: SeriesMatrix) -> SeriesMatrix:
    _check_tags(a, b)
    n = min(a.order, b.order)
    out = np.zeros((a.dim, b.dim, n + 1), complex)
    for i in range(n + 1):
        out[:, :, i:] += np.einsum("ik,kjn->ijn", a.data[:, :, i], b.data[:, :, : n + 1 - i])
    return SeriesMatrix(out, a.variable_tag, complex(a.leading_exponent) + complex(b.leading_exponent))


def mat_const_mul(m, a: SeriesMatrix, right=False) -> SeriesMatrix:
    """Multiply by a constant matrix on the left (default) or right."""
    m = np.asarray(m, complex)
    d = np.einsum("jkn,kl->jln", a.data, m) if right else np.einsum("ij,jkn->ikn", m, a.data)
    return SeriesMatrix(d, a.variable_tag, a.leading_exponent)


def mat_scalar_mul(a: SeriesMatrix, s) -> SeriesMatrix:
    """Multiply by a complex scalar or by a TruncatedSeries."""
    if isinstance(s, TruncatedSeries):
        n = min(a.order, s.order)
        out = np.zeros((a.dim, a.dim, n + 1), complex)
        for i in range(n + 1):
            out[:, :, i:] += a.data[:, :, : n + 1 - i] * s.coeffs[i]
        return SeriesMatrix(out, a.variable_tag, complex(a.leading_exponent) + complex(s.leading_exponent))
    return SeriesMatrix(a.data * s, a.variable_tag, a.leading_exponent)


def mat_inverse(a: SeriesMatrix) -> SeriesMatrix:
    m0 = a.data[:, :, 0]
    if np.linalg.cond(m0) > 1e13:
        raise SingularConstantTerm("constant-term matrix is singular")
    inv0 = np.linalg.inv(m0)
    out = np.zeros_like(a.data)
    out[:, :, 0] = inv0
    for n in range(1, a.order + 1):
        acc = np.zeros_like(m0)
        for j in range(1, n + 1):
            acc += a.data[:, :, j] @ out[:, :, n - j]
        out[:, :, n] = -inv0 @ acc
    return SeriesMatrix(out, a.variable_tag, -complex(a.leading_exponent))


def mat_rescale_variable(a: SeriesMatrix, c) -> SeriesMatrix:
    powers = complex(c) ** np.arange(a.order + 1)
    return SeriesMatrix(cpow(c, a.leading_exponent) * a.data * powers, a.variable_tag, a.leading_exponent)


def mat_retag(a: SeriesMatrix, variable_tag: str) -> SeriesMatrix:
    """Relabel the variable; the caller asserts the relabelling is meaningful."""
    return SeriesMatrix(a.data, variable_tag, a.leading_exponent)


def mat_norm_residual(a: SeriesMatrix, b: SeriesMatrix) -> float:
    """Max absolute difference over entries and coefficients."""
    _check_tags(a, b)
    if _exponent_offset(a.leading_exponent, b.leading_exponent) != 0:
        raise IncompatibleExponents("residual needs equal leading exponents")
    n = min(a.order, b.order)
    return float(np.max(np.abs(a.data[:, :, : n + 1] - b.data[:, :, : n + 1])))


def kron(a: SeriesMatrix, b: SeriesMatrix) -> SeriesMatrix:
    """Kronecker product of two series matrices in the same variable."""
    _check_tags(a, b)
    n = min(a.order, b.order)
    out = np.zeros((a.dim * b.dim, a.dim * b.dim, n + 1), complex)
    for i in range(n + 1):
        for j in range(n + 1 - i):
            out[:, :, i + j] += np.kron(a.data[:, :, i], b.data[:, :, j])
    return SeriesMatrix(out, a.variable_tag, complex(a.leading_exponent) + complex(b.leading_exponent))

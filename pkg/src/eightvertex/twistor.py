"""Elliptic twistors F = F^1 F^2 F^3 ... in the fundamental evaluation representation.

Each factor ``F^M`` is handled at a fixed numeric point ``(z1, z2)`` with
``x = z1/z2``; its dependence on the nome ``eps`` is either expanded as a
series in ``eps`` (variable tag ``"eps"``) or evaluated numerically.

With ``ebar^2 = eps^2 q^{-k}`` the factor ``F^M`` carries the scalar
``w_M = q^k ebar^{2M} x`` and the normalizer ``A(1/q, w_M)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import evrep
from .errors import ConventionMismatch, ConvergenceDomain, ParameterConditionViolated, ProductDivergence, TagMismatch
from .fps import SeriesMatrix, TruncatedSeries, cpow, invert, mat_mul, mat_norm_residual, mat_scalar_mul
from .qspecial import (
    jacobi_sn_cn_dn,
    normalizer_A,
    normalizer_A_product,
    poch,
    quarter_period_and_modulus,
    theta_nome,
)
from .recursion import Term, solve_graded
from .rmatrix import R_numeric

LOOKAHEAD = 3
CUTOFF = 1e-16


@dataclass(frozen=True)
class ModelParams:
    q: complex = 0.5
    eps: complex = 0.2
    u: complex = 0.5
    k: complex = 0.0
    g: int = 2
    order_x: int = 32
    order_eps: int = 4
    tol: float = 1e-8

    def __post_init__(self):
        if abs(abs(complex(self.q)) - 1) < 1e-12:
            raise ValueError("|q| must differ from 1")
        if abs(complex(self.eps)) >= 1:
            raise ValueError("|eps| must be < 1")
        if self.order_x < 0 or self.order_eps < 0:
            raise ValueError("orders must be non-negative")

    def replace(self, **kw):
        d = {f: getattr(self, f) for f in self.__dataclass_fields__}
        d.update(kw)
        return ModelParams(**d)

    @property
    def ebar2(self):
        return complex(self.eps) ** 2 * cpow(self.q, -self.k)


def cartan_Q(params: ModelParams, M: int, rho: int) -> complex:
    """Scalar Cartan factor ``Q(M, rho)`` with the central element acting as ``k``."""
    q, k, u = params.q, params.k, params.u
    if M % 2 == 0:
        m = M // 2
        return cpow(q, (u - m) * k) if rho == 1 else cpow(q, (1 - u - m) * k)
    m = (M + 1) // 2
    return cpow(q, (1 - m) * k)


def tau_inv(M, rho):
    return rho if M % 2 == 0 else 1 - rho


def w_coeff(params: ModelParams, M: int):
    """``q^{k(1-M)}``: the coefficient of ``eps^{2M} x`` in ``w_M``."""
    return cpow(params.q, params.k * (1 - M))


def w_scalar(params: ModelParams, M: int):
    """Coefficient ``q^{k(1-M)} eps^{2M}`` of ``x`` in ``w_M``."""
    return w_coeff(params, M) * complex(params.eps) ** (2 * M)


@dataclass(frozen=True)
class TwistorFactor:
    m: int
    parity: str
    matrix: object  # SeriesMatrix in eps, or ndarray at a numeric eps
    normalizer: object
    cartan_Q: tuple
    point: tuple = (None, None)


@dataclass(frozen=True)
class TwistorProduct:
    factors: list
    cutoff_M: int
    level_k: complex
    u_param: complex
    assembled: np.ndarray
    closed: np.ndarray
    global_normalizer: complex
    global_normalizer_odd: complex
    basis_change: np.ndarray
    residual: float
    half_integer_residual: float = 0.0
    extras: dict = field(default_factory=dict)


# ----------------------------------------------------------- slot images


class SlotImages:
    """Images of ``f_s`` (s = 1, 0) and ``q^{aH}`` for one tensor slot of F.

    ``legs`` is ``(i,)`` for a single space or ``(i, j)`` for the coproduct
    image with first leg in space ``i`` and second in space ``j``;
    ``Delta(f_s) = q^{-phi(s,.)} (x) f_s + f_s (x) 1``.
    """

    def __init__(self, q, legs, zs, n_spaces):
        self.q, self.legs, self.n = q, tuple(legs), n_spaces
        rep = evrep.build_rep(q)
        self.tw = {i: evrep.twisted_generators(rep, zs[i - 1]) for i in self.legs}

    def _emb(self, op, i):
        return evrep.embed(op, i, self.n)

    def cartan(self, a):
        out = np.eye(2**self.n, dtype=complex)
        for i in self.legs:
            out = out @ self._emb(evrep.qpow_diag(self.q, [a, -a]), i)
        return out

    def f(self, sigma):
        if len(self.legs) == 1:
            return self._emb(self.tw[self.legs[0]].pos(sigma), self.legs[0])
        i, j = self.legs
        s = evrep.PHI_SIGN[sigma]
        k_i = self._emb(evrep.qpow_diag(self.q, [-s, s]), i)
        return k_i @ self._emb(self.tw[j].pos(sigma), j) + self._emb(self.tw[i].pos(sigma), i)


def solve_twistor_general(params, M, order_eps, slot1: SlotImages, slot2: SlotImages, norm_entry):
    """Series coefficients (in eps) of ``F^M`` for the given slot images.

    Solves ``[1 (x) f_r, F] = eps^M Q(M,r) (F (f_{t r} (x) q^{-phi(r,.)})
    - (f_{t r} (x) q^{phi(.,r)}) F)`` with ``F = 1 + O(eps^M)``; the scalar
    freedom is fixed by ``F_j[norm_entry] = 0`` for ``j >= M``.
    """
    dim = 2**slot1.n
    eye = np.eye(dim, dtype=complex)
    top = order_eps + LOOKAHEAD * M
    orders = list(range(M, top + 1, M))
    keep = [a for a in orders if a <= order_eps]

    def equations(a):
        for rho in (1, 0):
            s = evrep.PHI_SIGN[rho]
            f2 = slot2.f(rho)
            f1 = slot1.f(tau_inv(M, rho))
            qv = cartan_Q(params, M, rho)
            yield [
                Term(f2, 0, eye),
                Term(-eye, 0, f2),
                Term(-qv * eye, M, f1 @ slot2.cartan(-s)),
                Term(qv * f1 @ slot2.cartan(s), M, eye),
            ]

    norm = [(a, norm_entry, 0.0) for a in orders]
    sol = solve_graded(dim, orders, keep, equations, {0: eye}, norm)
    coeffs = [np.zeros((dim, dim), complex) for _ in range(order_eps + 1)]
    coeffs[0] = eye
    for a, mat in sol.items():
        coeffs[a] = mat
    return SeriesMatrix.from_coefficients(coeffs, "eps")


def _norm_entry(M):
    # (v1v1, v1v1) for even factors, (v1v2, v1v2) for odd ones: these carry
    # the leading (unit) diagonal of the closed form
    return (0, 0) if M % 2 == 0 else (1, 1)


def normalizer_series(params, M, x, order_eps) -> TruncatedSeries:
    """``A(1/q, w_M)`` expanded in eps."""
    w = np.zeros(order_eps + 1, complex)
    if 2 * M <= order_eps:
        w[2 * M] = w_coeff(params, M) * x
    if not np.any(w):
        return TruncatedSeries.constant(1, order_eps)
    return normalizer_A(1 / complex(params.q), TruncatedSeries(w))


def solve_twistor_recursion(params: ModelParams, m: int, order_eps=None, z1=0.3, z2=1.0) -> TwistorFactor:
    """``F^m`` at ``(z1, z2)`` from the recursion, times the scalar normalizer."""
    order_eps = params.order_eps if order_eps is None else order_eps
    s1 = SlotImages(params.q, (1,), (z1, z2), 2)
    s2 = SlotImages(params.q, (2,), (z1, z2), 2)
    mat = solve_twistor_general(params, m, order_eps, s1, s2, _norm_entry(m))
    nrm = normalizer_series(params, m, complex(z1) / complex(z2), order_eps)
    return TwistorFactor(
        m=m,
        parity="even" if m % 2 == 0 else "odd",
        matrix=mat_scalar_mul(mat, nrm),
        normalizer=nrm,
        cartan_Q=(cartan_Q(params, m, 1), cartan_Q(params, m, 0)),
        point=(z1, z2),
    )


def _factor_parts(params, M, z1, z2):
    """Scalars and tensor structures shared by the closed forms."""
    q, k, u = params.q, params.k, params.u
    rep = evrep.build_rep(q)
    f1, f2 = evrep.twisted_generators(rep, z1), evrep.twisted_generators(rep, z2)
    if M % 2 == 0:
        m = M // 2
        # alpha = q^{uk} ebar^{2m}, alpha' = q^{(1-u)k} ebar^{2m}, as coefficients of eps^{2m}
        al = cpow(q, u * k - m * k)
        alp = cpow(q, (1 - u) * k - m * k)
        return ("even", 2 * m, al, alp, np.kron(f1.f1, f2.f_neg1), np.kron(f1.f0, f2.f_neg0))
    m = (M + 1) // 2
    be = cpow(q, (1 - m) * k)
    return ("odd", M, be, be, np.kron(f1.f1, f2.f_neg0), np.kron(f1.f0, f2.f_neg1))


def closed_form_factor(params: ModelParams, m: int, order_eps=None, z1=0.3, z2=1.0) -> TwistorFactor:
    """Closed-form ``F^m`` at ``(z1, z2)`` expanded in eps."""
    order_eps = params.order_eps if order_eps is None else order_eps
    q = complex(params.q)
    x = complex(z1) / complex(z2)
    parity, p_a, ca, cb, ta, tb = _factor_parts(params, m, z1, z2)
    n = order_eps + 1

    def mono(c, power):
        arr = np.zeros(n, complex)
        if power < n:
            arr[power] = c
        return TruncatedSeries(arr)

    w = mono(w_coeff(params, m) * x, 2 * m)
    one = TruncatedSeries.constant(1, order_eps)
    den = invert(one - w * q**2)
    a_s, b_s = mono(ca, p_a), mono(cb, p_a)
    if parity == "even":
        hp, hm = one - w * q**2, one - w
    else:
        hp, hm = one - w, one - w * q**2
    data = np.zeros((4, 4, n), complex)
    for coef, mat in ((hp, evrep.H_PLUS), (hm, evrep.H_MINUS), (-a_s, ta), (-b_s, tb)):
        data += mat[:, :, None] * (coef * den).coeffs[None, None, :]
    nrm = normalizer_series(params, m, x, order_eps)
    return TwistorFactor(
        m=m,
        parity=parity,
        matrix=mat_scalar_mul(SeriesMatrix(data, "eps"), nrm),
        normalizer=nrm,
        cartan_Q=(cartan_Q(params, m, 1), cartan_Q(params, m, 0)),
        point=(z1, z2),
    )


def closed_form_factor_numeric(params: ModelParams, m: int, z1, z2, normalized=True) -> TwistorFactor:
    """Closed-form ``F^m`` evaluated at the numeric nome ``params.eps``."""
    q, eps = complex(params.q), complex(params.eps)
    x = complex(z1) / complex(z2)
    parity, p_a, ca, cb, ta, tb = _factor_parts(params, m, z1, z2)
    w = w_scalar(params, m) * x
    if abs(q * q * w - 1) < 1e-12:
        raise ConvergenceDomain("factor denominator vanishes")
    a, b = ca * eps**p_a, cb * eps**p_a
    if parity == "even":
        hp, hm = 1 - q * q * w, 1 - w
    else:
        hp, hm = 1 - w, 1 - q * q * w
    mat = (hp * evrep.H_PLUS + hm * evrep.H_MINUS - a * ta - b * tb) / (1 - q * q * w)
    nrm = normalizer_A_product(1 / q, w) if normalized else 1.0
    return TwistorFactor(
        m=m,
        parity=parity,
        matrix=nrm * mat,
        normalizer=nrm,
        cartan_Q=(cartan_Q(params, m, 1), cartan_Q(params, m, 0)),
        point=(z1, z2),
    )


def cutoff_index(params: ModelParams) -> int:
    """Last factor kept: odd factors differ from 1 by terms of size ``|ebar|^M``."""
    e = np.sqrt(abs(params.ebar2))
    if e >= 1:
        raise ProductDivergence("|ebar| must be < 1")
    if e == 0:
        return 1
    return max(1, int(np.ceil(np.log(CUTOFF) / np.log(e))))


def product_numeric(params: ModelParams, z1, z2, normalized=True):
    """Ordered product ``F^1 F^2 ... F^{cutoff}`` at a point, and its factors."""
    factors = [closed_form_factor_numeric(params, M, z1, z2, normalized) for M in range(1, cutoff_index(params) + 1)]
    out = np.eye(4, dtype=complex)
    for f in factors:
        out = out @ f.matrix
    return out, factors


def global_normalizer(params: ModelParams, x, odd_only=False) -> complex:
    """``prod_M A(1/q, w_M)`` over all factors, or over odd ``M`` only."""
    val = 1.0 + 0j
    for M in range(1, cutoff_index(params) + 1):
        if odd_only and M % 2 == 0:
            continue
        val *= normalizer_A_product(1 / complex(params.q), w_scalar(params, M) * x)
    return val


def global_normalizer_double_pochhammer(params: ModelParams, x) -> complex:
    """The double-Pochhammer quotient with bases ``(q^4, ebar^4)`` for ``|q| < 1``.

    Equals ``prod_{m >= 0} 1/A(1/q, q^k ebar^{4m+2} x)`` with the exponential-sum
    ``A``, i.e. the odd-factor product in the opposite orientation of ``A``.
    """
    q = complex(params.q)
    if abs(q) >= 1:
        raise ValueError("this form needs |q| < 1")
    e2 = params.ebar2
    base = cpow(q, params.k) * e2 * x
    num = poch(base, q**4, e2**2) * poch(base * q**4, q**4, e2**2)
    return num / poch(base * q**2, q**4, e2**2) ** 2


def closed_product_entries(params: ModelParams, x, sqrt_x=None):
    """``(a, b, c_hat, d_hat)`` from the infinite products; ``sqrt_x`` defaults to the principal root."""
    q, k = complex(params.q), params.k
    sx = np.sqrt(complex(x)) if sqrt_x is None else complex(sqrt_x)
    ebar = complex(params.eps) * cpow(q, -k / 2)
    lo, hi = cpow(q, -1 + k / 2) * sx, cpow(q, 1 + k / 2) * sx

    def prod(sign, odd):
        val = 1.0 + 0j
        for m in range(1, cutoff_index(params) + 2):
            e = ebar ** (2 * m - 1 if odd else 2 * m)
            val *= (1 + sign * lo * e) / (1 + sign * hi * e)
        return val

    ap, am, bp, bm = prod(1, True), prod(-1, True), prod(1, False), prod(-1, False)
    return (ap + am) / 2, (bp + bm) / 2, (bp - bm) / 2, (ap - am) / 2


def _symmetric(a, b, c, d):
    return np.array([[a, 0, 0, d], [0, b, c, 0], [0, c, b, 0], [d, 0, 0, a]], complex)


def basis_change(params: ModelParams, z1, z2):
    """Diagonal ``D`` with ``prod F^M = D S D^{-1}`` where S is the symmetric form."""
    x = complex(z1) / complex(z2)
    sx = np.sqrt(x)
    r = complex(z2) * sx
    s = cpow(params.q, (0.5 - params.u) * params.k) * sx
    return np.diag([1, 1, s, r]).astype(complex)


def assemble_product(params: ModelParams, z1=0.3, z2=1.0) -> TwistorProduct:
    """Factor-by-factor product versus the closed infinite-product formulas."""
    x = complex(z1) / complex(z2)
    prod, factors = product_numeric(params, z1, z2)
    entries = closed_product_entries(params, x)
    nrm = global_normalizer(params, x)
    D = basis_change(params, z1, z2)
    closed = nrm * D @ _symmetric(*entries) @ np.linalg.inv(D)
    # a, b are even in sqrt(x) and c_hat, d_hat odd, as are the last two
    # entries of D: the other branch must give the same matrix
    flipped = closed_product_entries(params, x, -np.sqrt(x))
    D_f = D @ np.diag([1, 1, -1, -1])
    other = nrm * D_f @ _symmetric(*flipped) @ np.linalg.inv(D_f)
    return TwistorProduct(
        factors=factors,
        cutoff_M=len(factors),
        level_k=params.k,
        u_param=params.u,
        assembled=prod,
        closed=closed,
        global_normalizer=nrm,
        global_normalizer_odd=global_normalizer(params, x, odd_only=True),
        basis_change=D,
        residual=float(np.max(np.abs(prod - closed))),
        half_integer_residual=float(np.max(np.abs(other - closed))),
        extras=dict(zip(("a", "b", "c_hat", "d_hat"), entries)),
    )


# -------------------------------------------------------------- cocycle


def _factor_product_series(params, order_eps, legs1, legs2, zs, n_spaces=3):
    """``prod_M F^M`` (recursion, unit normalization) for the given slot legs.

    A factor between two single spaces is solved on those spaces and then
    embedded: in the full product it would be fixed only up to the commutant
    of the spectator space.
    """
    dim = 2**n_spaces
    out = SeriesMatrix.identity(dim, order_eps, "eps")
    pair = len(legs1) == 1 and len(legs2) == 1
    if pair:
        i, j = legs1[0], legs2[0]
        sub = (zs[i - 1], zs[j - 1])
        s1, s2 = SlotImages(params.q, (1,), sub, 2), SlotImages(params.q, (2,), sub, 2)
    else:
        s1, s2 = SlotImages(params.q, legs1, zs, n_spaces), SlotImages(params.q, legs2, zs, n_spaces)
    for M in range(1, order_eps + 1):
        f = solve_twistor_general(params, M, order_eps, s1, s2, (0, 0))
        if pair:
            data = np.stack([evrep.embed_pair(f.data[:, :, n], (i, j), n_spaces) for n in range(order_eps + 1)], -1)
            f = SeriesMatrix(data, "eps")
        out = mat_mul(out, f)
    return out


def _projective(m: SeriesMatrix) -> SeriesMatrix:
    return mat_scalar_mul(m, invert(m.entry(0, 0)))


def verify_cocycle(params: ModelParams, order_eps=None, zs=(1.0, 0.7, 0.45)) -> dict:
    """Cocycle residual ``((1 (x) Delta_21) F) F_12`` versus ``((Delta_13 (x) 1) F) F_31``.

    All four objects are solved from the recursion in the triple product; each
    is known only up to a scalar series, so both sides are compared after
    dividing by their (v1v1v1, v1v1v1) entry.  The level in ``params`` enters
    every factor alike, which is the Hopf form of the identity.
    """
    n = params.order_eps if order_eps is None else order_eps
    lhs = mat_mul(
        _factor_product_series(params, n, (3,), (2, 1), zs),
        _factor_product_series(params, n, (1,), (2,), zs),
    )
    rhs = mat_mul(
        _factor_product_series(params, n, (1, 3), (2,), zs),
        _factor_product_series(params, n, (3,), (1,), zs),
    )
    resid = mat_norm_residual(_projective(lhs), _projective(rhs))
    # phi(s,.) + phi(., tau s) = 0 holds for the swap tau used by odd factors
    return {"residual": resid, "order_eps": n, "level_k": params.k, "hopf_condition": abs(params.k) == 0}


# ------------------------------------------------------- twisted R-matrix


def twisted_R(params: ModelParams, z1, z2, normalized=True) -> np.ndarray:
    """``R_eps(z1, z2) = (F^t)^{-1} R F`` at a point, ``F^t(z1, z2) = P F(z2, z1) P``."""
    F, _ = product_numeric(params, z1, z2, normalized)
    Fs, _ = product_numeric(params, z2, z1, normalized)
    Ft = evrep.SWAP @ Fs @ evrep.SWAP
    return np.linalg.solve(Ft, R_numeric(params.q, z1, z2, normalized) @ F)


def eight_vertex_sparsity_residual(m) -> float:
    mask = np.zeros((4, 4), bool)
    mask[[0, 0, 1, 1, 2, 2, 3, 3], [0, 3, 1, 2, 1, 2, 0, 3]] = True
    return float(np.max(np.abs(np.where(mask, 0, m))))


def check_tags(a: SeriesMatrix, b: SeriesMatrix):
    if a.variable_tag != b.variable_tag:
        raise TagMismatch(f"{a.variable_tag!r} vs {b.variable_tag!r}")


# ------------------------------------------------------ elliptic comparison

# label of the theta function matching each projective slot
# (alpha+delta, alpha-delta, beta+gamma, beta-gamma)
RESOLVED_LABELS = (3, 4, 2, 1)
PRINTED_LABELS = (3, 2, 1, 4)
PRINTED_Q_POWERS = (1, 1, 0, 0)


@dataclass(frozen=True)
class EllipticPoint:
    """A point of the elliptic dictionary ``x = e^{4 pi i u}, q = e^{2 pi i rho}``, nome ``p``."""

    u: complex
    rho: complex
    nome: complex

    @classmethod
    def from_params(cls, params: ModelParams):
        rho = np.log(complex(params.q)) / (2j * np.pi)
        return cls(complex(params.u), complex(rho), complex(params.eps))

    @property
    def q(self):
        return complex(np.exp(2j * np.pi * self.rho))

    @property
    def sqrt_x(self):
        return complex(np.exp(2j * np.pi * self.u))


@dataclass
class EllipticReport:
    points: list
    ratios_R: list
    ratios_theta: list
    deviation: float
    printed_deviation: float
    jacobi_deviation: float
    printed_jacobi_deviation: float
    scalar_deviation: float
    printed_scalar_deviation: float
    table: dict

    def to_dict(self):
        def c(z):
            return [float(np.real(z)), float(np.imag(z))]

        return {
            "points": [{"u": c(p.u), "rho": c(p.rho), "nome": c(p.nome)} for p in self.points],
            "ratios_R": [[c(v) for v in r] for r in self.ratios_R],
            "ratios_theta": [[c(v) for v in r] for r in self.ratios_theta],
            "deviation": self.deviation,
            "printed_deviation": self.printed_deviation,
            "jacobi_deviation": self.jacobi_deviation,
            "printed_jacobi_deviation": self.printed_jacobi_deviation,
            "scalar_deviation": self.scalar_deviation,
            "printed_scalar_deviation": self.printed_scalar_deviation,
            "labels": list(RESOLVED_LABELS),
        }


def theta_ratio(j, pt: EllipticPoint):
    """``theta_j(u - rho) / theta_j(u + rho)``, with the ``p -> 0`` limits at ``p = 0``."""
    a, b = pt.u - pt.rho, pt.u + pt.rho
    if pt.nome == 0:
        return {1: np.sin(np.pi * a) / np.sin(np.pi * b), 2: np.cos(np.pi * a) / np.cos(np.pi * b), 3: 1.0, 4: 1.0}[j]
    return theta_nome(j, a, pt.nome) / theta_nome(j, b, pt.nome)


def jacobi_ratios(pt: EllipticPoint):
    """``(dn, 1, cn, sn)`` ratios at ``2K(u -+ rho)``, without prefactors."""
    if pt.nome == 0:
        big_k = np.pi / 2
        sn_cn_dn = lambda v: (np.sin(v), np.cos(v), 1.0)  # noqa: E731
    else:
        big_k = quarter_period_and_modulus(pt.nome)[0]
        sn_cn_dn = lambda v: jacobi_sn_cn_dn(v, pt.nome)  # noqa: E731
    lo = sn_cn_dn(2 * big_k * (pt.u - pt.rho))
    hi = sn_cn_dn(2 * big_k * (pt.u + pt.rho))
    sn, cn, dn = (lo[i] / hi[i] for i in range(3))
    return np.array([dn, 1.0, cn, sn], complex)


def _projective_slots(Re, sqrt_x):
    # symmetric gauge: delta, gamma rescaled by sqrt(z1 z2) = sqrt(x), z2 = 1
    al, be = Re[0, 0], Re[1, 1]
    de, ga = Re[0, 3] * sqrt_x, Re[1, 2] * sqrt_x
    return np.array([al + de, al - de, be + ga, be - ga])


def _proj_dev(a, b):
    a, b = np.asarray(a) / a[1], np.asarray(b) / b[1]
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))))


def compare_elliptic(params: ModelParams, theta_inputs=None, tol=1e-6) -> EllipticReport:
    """Twisted R at level 0 versus the theta-function and Jacobi forms.

    ``theta_inputs`` is a list of :class:`EllipticPoint` (default: the point
    described by ``params``).  Ratios are compared projectively; the overall
    scalar is checked against ``A(q, 1/x) N(x) / N(1/x)`` with ``N`` the product
    of all factor normalizers (and, for reference, the odd factors only).
    """
    if abs(complex(params.k)) != 0:
        raise ParameterConditionViolated("theta formulas hold at level k = 0")
    points = list(theta_inputs) if theta_inputs is not None else [EllipticPoint.from_params(params)]
    ratios_R, ratios_th = [], []
    dev = pdev = jdev = pjdev = sdev = psdev = 0.0
    table = {}
    perms = list(itertools.permutations((1, 2, 3, 4)))
    for pt in points:
        q = pt.q
        p = params.replace(q=q, eps=pt.nome, u=pt.u, k=0)
        x = pt.sqrt_x**2
        Re = twisted_R(p, x, 1.0, normalized=True)
        got = _projective_slots(Re, pt.sqrt_x)
        th = {j: theta_ratio(j, pt) for j in (1, 2, 3, 4)}
        resolved = np.array([th[j] for j in RESOLVED_LABELS])
        printed = np.array([q**e * th[j] for j, e in zip(PRINTED_LABELS, PRINTED_Q_POWERS)])
        ratios_R.append(got / got[1])
        ratios_th.append(resolved / resolved[1])
        dev = max(dev, _proj_dev(got, resolved))
        pdev = max(pdev, _proj_dev(got, printed))
        jac = jacobi_ratios(pt)
        jdev = max(jdev, _proj_dev(got, jac))
        pjdev = max(pjdev, _proj_dev(got, jac * np.array([1, 1, 1 / q, 1 / q])))
        for perm in perms:
            for name, powers in (("plain", (0, 0, 0, 0)), ("q-prefactors", PRINTED_Q_POWERS)):
                cand = np.array([q**e * th[j] for j, e in zip(perm, powers)])
                key = f"{perm} {name}"
                table[key] = max(table.get(key, 0.0), _proj_dev(got, cand))
        # absolute scalar: alpha + delta = q^{1/2} A_eps theta_3 ratio
        base = cpow(q, 0.5) * th[3] * normalizer_A_product(q, 1 / x)
        full = base * global_normalizer(p, x) / global_normalizer(p, 1 / x)
        odd = base * global_normalizer(p, x, odd_only=True) / global_normalizer(p, 1 / x, odd_only=True)
        sdev = max(sdev, abs(got[0] / full - 1))
        psdev = max(psdev, abs(got[0] / odd - 1))
    report = EllipticReport(points, ratios_R, ratios_th, dev, pdev, jdev, pjdev, sdev, psdev, table)
    if dev > tol:
        raise ConventionMismatch(f"theta ratios deviate by {dev:.3e}", dict(sorted(table.items(), key=lambda t: t[1])))
    return report

"""q-series and elliptic special functions.

Theta functions use the classical convention: quasi-periods 1 and tau, nome
``p = exp(i pi tau)``, ``theta1`` odd with a simple zero at the origin and
``theta4`` (also reachable under the tag ``"theta"``) vanishing at ``tau/2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadModularParam, BadNome, DivergentBase, ModulusOne
from .fps import TruncatedSeries, exp_series

CUTOFF = 1e-16
_MAX_FACTORS = 100_000


def _check_q(q):
    if abs(abs(q) - 1) < 1e-12:
        raise ModulusOne(f"|q| = 1 is not allowed (q = {q})")


@dataclass(frozen=True)
class QPochhammerSpec:
    a: complex
    bases: tuple
    cutoff: float = CUTOFF

    def __post_init__(self):
        if not 1 <= len(self.bases) <= 2:
            raise ValueError("one or two bases expected")
        for b in self.bases:
            if abs(b) >= 1:
                raise DivergentBase(f"|base| = {abs(b)} >= 1")


def _single_product(a, q, cutoff):
    val = 1.0 + 0j
    term = complex(a)
    for _ in range(_MAX_FACTORS):
        if abs(term) < cutoff:
            return val
        val *= 1 - term
        term *= q
    raise DivergentBase("product did not reach the cutoff")


def q_pochhammer(spec: QPochhammerSpec) -> complex:
    """``(a; q)_inf`` or ``(a; q, p)_inf = prod_{i,j} (1 - a q^i p^j)``."""
    if len(spec.bases) == 1:
        return _single_product(spec.a, spec.bases[0], spec.cutoff)
    q, p = spec.bases
    val = 1.0 + 0j
    lead = complex(spec.a)
    for _ in range(_MAX_FACTORS):
        if abs(lead) < spec.cutoff:
            return val
        val *= _single_product(lead, q, spec.cutoff)
        lead *= p
    raise DivergentBase("double product did not reach the cutoff")


def poch(a, *bases, cutoff=CUTOFF):
    """Shorthand for :func:`q_pochhammer`."""
    return q_pochhammer(QPochhammerSpec(a, tuple(bases), cutoff))


def _a_coefficient(q, n):
    return ((q**n - q**-n) / (q**n + q**-n)) / n


def normalizer_A(q, x, order=None):
    """``A(q, x) = exp(sum_k (1/k) (q^k - q^-k)/(q^k + q^-k) x^k)``.

    ``x`` may be a number or a :class:`TruncatedSeries` in which the result is
    expanded.  The plain series of ``A`` in its own variable is returned when
    ``x`` is ``None`` (``order`` required).
    """
    _check_q(q)
    q = complex(q)
    if x is None:
        c = np.zeros(order + 1, complex)
        for n in range(1, order + 1):
            c[n] = _a_coefficient(q, n)
        return exp_series(TruncatedSeries(c))
    if isinstance(x, TruncatedSeries):
        if abs(x.coeffs[0]) > 0 or x.leading_exponent != 0:
            raise ValueError("series argument must start at order 1")
        # log A(q, x(t)) accumulated from powers of x(t)
        log = TruncatedSeries.constant(0, x.order)
        power = TruncatedSeries.constant(1, x.order)
        for n in range(1, x.order + 1):
            power = power * x
            log = log + power * _a_coefficient(q, n)
        return exp_series(log)
    x = complex(x)
    if abs(x) >= 1:
        raise ValueError("numeric evaluation of the sum needs |x| < 1")
    total = 0j
    xn = 1.0 + 0j
    for n in range(1, _MAX_FACTORS):
        xn *= x
        if abs(xn) < 1e-18 * n:
            break
        total += _a_coefficient(q, n) * xn
    return complex(np.exp(total))


def normalizer_A_product(q, x, as_printed=False) -> complex:
    """Pochhammer-quotient form of ``A(q, x)``, valid for every ``x`` off the poles.

    The quotient as usually printed evaluates the exponential sum at ``1/q``;
    the default orientation here agrees with :func:`normalizer_A`.  Pass
    ``as_printed=True`` for the other orientation.
    """
    _check_q(q)
    q = complex(q)
    x = complex(x)
    if abs(q) < 1:
        b = q**4
        val = poch(x, b) * poch(x * q**4, b) / poch(x * q**2, b) ** 2
    else:
        b = q**-4
        val = poch(x * q**-2, b) ** 2 / (poch(x, b) * poch(x * q**-4, b))
    return 1 / val if as_printed else val


# ------------------------------------------------------------------ thetas

THETA_TAGS = {"theta1": 1, "theta2": 2, "theta3": 3, "theta4": 4, "theta": 4}


@dataclass(frozen=True)
class ThetaParams:
    z: complex
    tau: complex
    convention_tag: str = "theta3"

    def __post_init__(self):
        if complex(self.tau).imag <= 0:
            raise BadModularParam("Im tau must be positive")
        if self.convention_tag not in THETA_TAGS:
            raise ValueError(f"unknown theta tag {self.convention_tag!r}")

    @property
    def nome(self):
        return complex(np.exp(1j * np.pi * complex(self.tau)))


def theta_nome(j: int, z, p) -> complex:
    """Classical theta function ``theta_j(z)`` with nome ``p`` (period 1 in z)."""
    p = complex(p)
    if abs(p) >= 1:
        raise BadNome("|nome| must be < 1")
    z = complex(z)
    if p == 0:
        return {1: 0j, 2: 0j, 3: 1 + 0j, 4: 1 + 0j}[j]
    # terms decay like |p|^{n^2} times exp(2 pi |Im z| n)
    n_max = 8
    while abs(p) ** (n_max**2) * np.exp(2 * np.pi * abs(z.imag) * (n_max + 1)) > 1e-18 and n_max < 2000:
        n_max += 4
    n = np.arange(-n_max, n_max + 1)
    if j == 3:
        return complex(np.sum(p ** (n * n) * np.exp(2j * np.pi * n * z)))
    if j == 4:
        return complex(np.sum((-1.0) ** n * p ** (n * n) * np.exp(2j * np.pi * n * z)))
    h = n + 0.5
    if j == 2:
        return complex(np.sum(p ** (h * h) * np.exp(2j * np.pi * h * z)))
    if j == 1:
        return complex(np.sum(-1j * (-1.0) ** n * p ** (h * h) * np.exp(2j * np.pi * h * z)))
    raise ValueError("theta index must be 1..4")


def theta(params: ThetaParams) -> complex:
    return theta_nome(THETA_TAGS[params.convention_tag], params.z, params.nome)


def jacobi_sn_cn_dn(v, nome):
    """Jacobi ``(sn, cn, dn)(v, k)`` for the modulus ``k`` belonging to ``nome``."""
    p = complex(nome)
    if abs(p) >= 1:
        raise BadNome("|nome| must be < 1")
    t2, t3, t4 = (theta_nome(j, 0, p) for j in (2, 3, 4))
    big_k = np.pi / 2 * t3**2
    z = complex(v) / (2 * big_k)
    th1, th2, th3, th4 = (theta_nome(j, z, p) for j in (1, 2, 3, 4))
    sn = (t3 / t2) * th1 / th4
    cn = (t4 / t2) * th2 / th4
    dn = (t4 / t3) * th3 / th4
    return complex(sn), complex(cn), complex(dn)


def quarter_period_and_modulus(eps):
    """``K`` and ``k`` for nome ``eps`` from the infinite product formulas."""
    eps = complex(eps)
    if abs(eps) >= 1:
        raise BadNome("|eps| must be < 1")
    big_k = np.pi / 2
    k_prod = 1.0 + 0j
    n = 1
    while True:
        a, b = eps ** (2 * n - 1), eps ** (2 * n)
        if abs(a) < CUTOFF:
            break
        big_k *= ((1 + a) / (1 - a) * (1 - b) / (1 + b)) ** 2
        k_prod *= ((1 + b) / (1 + a)) ** 4
        n += 1
    return complex(big_k), complex(4 * np.sqrt(eps) * k_prod)


def agm(a, b, tol=1e-16):
    a, b = complex(a), complex(b)
    for _ in range(200):
        if abs(a - b) <= tol * abs(a):
            break
        a, b = (a + b) / 2, np.sqrt(a * b)
    return a


def elliptic_K_agm(k):
    """Complete elliptic integral of the first kind via the AGM."""
    return complex(np.pi / (2 * agm(1, np.sqrt(1 - complex(k) ** 2))))

"""Standard trigonometric R-matrix in the fundamental evaluation representation.

``R(z1, z2) = A(q, y) q^phi T(y)`` with ``y = z2/z1`` and, in the basis
(v1v1, v1v2, v2v1, v2v2),

    T = [[1], [b, c y], [c, b], [1]],
    b = (1 - y)/(1 - y/q^2),  c = (q - 1/q)/(1 - y/q^2).

``T`` is obtained either from the recursion (solved jointly over orders in
``y``) or from the closed form above.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import evrep
from .errors import InconsistentRatios, RecursionInconsistent
from .fps import (
    SeriesMatrix,
    TruncatedSeries,
    invert,
    mat_const_mul,
    mat_inverse,
    mat_mul,
    mat_norm_residual,
    mat_rescale_variable,
    mat_scalar_mul,
)
from .qspecial import normalizer_A
from .recursion import Term, solve_graded

LOOKAHEAD = 3


@dataclass(frozen=True)
class RFactorization:
    q_phi: np.ndarray
    T: SeriesMatrix
    A: TruncatedSeries
    assembled: SeriesMatrix


def _qH(q, sign, dim_embed=None):
    return evrep.qpow_diag(q, [sign, -sign])


def solve_T_general(q, order, slot1, slot2, normalization_entry=(0, 0), lookahead=LOOKAHEAD):
    """Solve ``[e_g (x) 1, T] = T (q^{phi(g,.)} (x) e_g) - (q^{-phi(.,g)} (x) e_g) T``.

    ``slot1[g]`` = (image of e_g, image of q^{phi(g,.)}, image of q^{-phi(.,g)})
    acting on the first tensor slot, already embedded in the full space.
    ``slot2[g]`` = (image of e_g with the series variable stripped, its power).
    Returns the list of coefficient matrices ``T_0..T_order``.
    """
    dim = next(iter(slot1.values()))[0].shape[0]
    eye = np.eye(dim, dtype=complex)
    orders = list(range(order + 1 + lookahead))

    def equations(a):
        for g in (1, 0):
            e1, qp, qm = slot1[g]
            e2, shift = slot2[g]
            yield [
                Term(e1, 0, eye),
                Term(-eye, 0, e1),
                Term(-eye, shift, qp @ e2),
                Term(qm @ e2, shift, eye),
            ]

    norm = [(a, normalization_entry, 1.0 if a == 0 else 0.0) for a in orders]
    sol = solve_graded(dim, orders, range(order + 1), equations, {}, norm)
    return [sol[a] for a in range(order + 1)]


def _two_point_slots(q):
    rep = evrep.build_rep(q)
    slot1, slot2 = {}, {}
    for g, lab in ((1, "1"), (0, "0")):
        s = evrep.PHI_SIGN[g]
        e = rep.e(lab, 1.0)
        slot1[g] = (np.kron(e, evrep.I2), np.kron(_qH(q, s), evrep.I2), np.kron(_qH(q, -s), evrep.I2))
        w = {"1": rep.e1, "0": rep.e0}[lab]
        slot2[g] = (np.kron(evrep.I2, w.matrix), w.weight)
    return slot1, slot2


def solve_T_recursion(q, order) -> SeriesMatrix:
    """Nilpotent tail ``T`` as a series in ``z2/z1`` with ``a == 1``."""
    slot1, slot2 = _two_point_slots(q)
    coeffs = solve_T_general(q, order, slot1, slot2)
    T = SeriesMatrix.from_coefficients(coeffs, "z2/z1")
    if check_abc_relations(q, T, relative=True) > 1e-9:
        raise RecursionInconsistent("solution violates the a, b, c relations")
    return T


def check_abc_relations(q, T: SeriesMatrix, relative=False) -> float:
    """Residual of ``q(a - b) = c y`` and ``a q - b/q = c`` coefficient-wise.

    With ``relative=True`` the residual at each power is divided by the size
    of that coefficient of ``T`` (coefficients grow like ``|q|^{-2n}``).
    """
    a, b = T.entry(0, 0), T.entry(1, 1)
    c = T.entry(2, 1)
    cy = TruncatedSeries(np.concatenate([[0], c.coeffs[:-1]]))
    r1 = (a - b) * q - cy
    r2 = a * q - b * (1 / q) - c
    sym = np.abs(T.data[[1, 2, 3], [1, 2, 3]] - T.data[[2, 1, 0], [2, 1, 0]])
    w = coefficient_scale(T) if relative else np.ones(T.order + 1)
    return float(max(np.max(np.abs(r1.coeffs) / w), np.max(np.abs(r2.coeffs) / w), np.max(sym / w)))


def coefficient_scale(m: SeriesMatrix):
    """Per-power magnitude ``max(1, max_ij |M_n[i, j]|)`` used for relative residuals."""
    return np.maximum(1.0, np.max(np.abs(m.data), axis=(0, 1)))


def relative_residual(a: SeriesMatrix, b: SeriesMatrix) -> float:
    """Like :func:`mat_norm_residual` but each power is measured relative to its size."""
    n = min(a.order, b.order)
    w = np.maximum(coefficient_scale(a.truncate(n)), coefficient_scale(b.truncate(n)))
    return float(np.max(np.abs(a.data[:, :, : n + 1] - b.data[:, :, : n + 1]) / w))


def closed_form_T(q, order, tail="divided") -> SeriesMatrix:
    """Closed-form ``T`` in ``y = z2/z1``.

    ``tail="polynomial"`` returns ``(1 - y/q^2) T``, whose entries are
    polynomials; it is used as a negative control.
    """
    q = complex(q)
    y = TruncatedSeries.variable(order)
    den = invert(1 - y * q**-2) if tail == "divided" else TruncatedSeries.constant(1, order)
    unit = TruncatedSeries.constant(1, order) if tail == "divided" else 1 - y * q**-2
    b = (1 - y) * den
    c = den * (q - 1 / q)
    data = np.zeros((4, 4, order + 1), complex)
    data[0, 0] = data[3, 3] = unit.coeffs
    data[1, 1] = data[2, 2] = b.coeffs
    data[2, 1] = c.coeffs
    data[1, 2, 1:] = c.coeffs[:-1]
    return SeriesMatrix(data, "z2/z1")


def closed_form_R(q, x_mode="z2/z1", order=32, normalized=True, tail="divided") -> RFactorization:
    """Closed-form factorization.

    ``x_mode="z2/z1"`` gives ``R(z1, z2)`` as a series in ``z2/z1``;
    ``x_mode="z1/z2"`` gives the slot-exchanged ``R^t(z1, z2) = P R(z2, z1) P``
    which is a series in ``x = z1/z2``.
    """
    qphi = evrep.cartan_form(q).q_phi
    T = closed_form_T(q, order, tail)
    A = normalizer_A(q, None, order=order) if normalized else TruncatedSeries.constant(1, order)
    if x_mode == "z1/z2":
        p = evrep.SWAP
        T = SeriesMatrix(np.einsum("ij,jkn,kl->iln", p, T.data, p), "z1/z2")
    elif x_mode != "z2/z1":
        raise ValueError(f"unknown variable tag {x_mode!r}")
    assembled = mat_scalar_mul(mat_const_mul(qphi, T), A)
    return RFactorization(q_phi=qphi, T=T, A=A, assembled=assembled)


def R_series(q, order, normalized=True, tail="divided") -> SeriesMatrix:
    return closed_form_R(q, "z2/z1", order, normalized, tail).assembled


def R_numeric(q, z1, z2, normalized=True):
    """``R(z1, z2)`` evaluated at a point; the normalizer uses the product form."""
    from .qspecial import normalizer_A_product

    q = complex(q)
    y = complex(z2) / complex(z1)
    den = 1 - y / q**2
    b, c = (1 - y) / den, (q - 1 / q) / den
    T = np.array([[1, 0, 0, 0], [0, b, c * y, 0], [0, c, b, 0], [0, 0, 0, 1]], complex)
    A = normalizer_A_product(q, y) if normalized else 1.0
    return A * evrep.cartan_form(q).q_phi @ T


def natural_radius(q) -> float:
    """Radius ``min(|q|^2, |q|^-2)`` of the disk where both ``R(q)`` and ``R(1/q)`` converge.

    Residuals are measured in ``t = y / radius`` so that coefficients stay of
    order one; in ``y`` itself they grow like ``|q|^{-2n}`` and double
    precision cannot resolve cancellations between them.
    """
    a = abs(complex(q)) ** 2
    return min(a, 1 / a)


def verify_inverse_symmetry(q, order, normalized=True, tail="divided") -> float:
    """Residual of ``R(q, y) R(1/q, y) - 1`` in the natural variable."""
    r = natural_radius(q)
    a = mat_rescale_variable(R_series(q, order, normalized, tail), r)
    b = mat_rescale_variable(R_series(1 / complex(q), order, normalized, tail), r)
    return mat_norm_residual(mat_mul(a, b), SeriesMatrix.identity(4, order))


def _embed_series(m: SeriesMatrix, spaces):
    data = np.stack([evrep.embed_pair(m.data[:, :, n], spaces) for n in range(m.order + 1)], axis=2)
    return SeriesMatrix(data, m.variable_tag)


def verify_ybe(q, z_ratios, order, normalized=True) -> float:
    """YBE residual in the triple tensor product.

    ``z_ratios = (x12, x13, x23)``: R12 and R13 are series in ``t`` evaluated
    at ``x12 t`` and ``x13 t`` (``t`` measured in units of the natural radius);
    ``x23`` is a numeric ratio.  Consistency
    requires ``x13 = x12 x23``.
    """
    x12, x13, x23 = (complex(v) for v in z_ratios)
    if abs(x13 - x12 * x23) > 1e-12 * max(1, abs(x13)):
        raise InconsistentRatios("x13 must equal x12 * x23")
    base = R_series(q, order, normalized)
    r = natural_radius(q)
    r12 = _embed_series(mat_rescale_variable(base, x12 * r), (1, 2))
    r13 = _embed_series(mat_rescale_variable(base, x13 * r), (1, 3))
    r23 = evrep.embed_pair(R_numeric(q, 1.0, x23, normalized), (2, 3))
    lhs = mat_const_mul(r23, mat_mul(r12, r13), right=True)
    rhs = mat_const_mul(r23, mat_mul(r13, r12))
    return mat_norm_residual(lhs, rhs)


def coproduct_R_first_slot(q, z1, z2, order):
    """``(Delta (x) id) R`` on V(z1) (x) V(z2) (x) V(z3) as a series in ``z3``.

    Obtained by solving the recursion with the first slot replaced by the
    coproduct image; normalized so the (v1v1v1, v1v1v1) entry of the tail is 1.
    """
    rep = evrep.build_rep(q)
    emb = evrep.embed
    slot1, slot2 = {}, {}
    for g, lab in ((1, "1"), (0, "0")):
        s = evrep.PHI_SIGN[g]
        qp, qm = _qH(q, s), _qH(q, -s)
        e_a, e_b = rep.e(lab, z1), rep.e(lab, z2)
        # Delta(e) = 1 (x) e + e (x) q^{phi(g,.)}
        d_e = emb(e_b, 2) + emb(e_a, 1) @ emb(qp, 2)
        slot1[g] = (d_e, emb(qp, 1) @ emb(qp, 2), emb(qm, 1) @ emb(qm, 2))
        w = {"1": rep.e1, "0": rep.e0}[lab]
        slot2[g] = (emb(w.matrix, 3), w.weight)
    coeffs = solve_T_general(q, order, slot1, slot2)
    T = SeriesMatrix.from_coefficients(coeffs, "z3")
    qphi = evrep.cartan_form(q).q_phi
    cart = evrep.embed_pair(qphi, (1, 3)) @ evrep.embed_pair(qphi, (2, 3))
    return mat_const_mul(cart, T)


def verify_quasi_triangularity(q, z1, z2, order):
    """Compare ``(Delta (x) id) R`` with both orderings of ``R_13 R_23``.

    Returns ``{"R13R23": residual, "R23R13": residual}`` (unnormalized R,
    series variable ``z3`` measured in units of the natural radius).
    """
    r = natural_radius(q) * min(abs(complex(z1)), abs(complex(z2)))
    lhs = mat_rescale_variable(coproduct_R_first_slot(q, z1, z2, order), r)
    base = SeriesMatrix(R_series(q, order, normalized=False).data, "z3")
    r13 = _embed_series(mat_rescale_variable(base, r / complex(z1)), (1, 3))
    r23 = _embed_series(mat_rescale_variable(base, r / complex(z2)), (2, 3))
    return {
        "R13R23": mat_norm_residual(lhs, mat_mul(r13, r23)),
        "R23R13": mat_norm_residual(lhs, mat_mul(r23, r13)),
    }


def R_inverse_series(q, order, normalized=True) -> SeriesMatrix:
    return mat_inverse(R_series(q, order, normalized))

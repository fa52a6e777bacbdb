"""Fundamental evaluation representation of quantized affine sl(2).

Basis of C^2 is (v1, v2) with H = diag(1, -1).  Generators carry an integer
spectral weight: e0 is proportional to z, e_{-0} to 1/z.  Two-fold tensor
products use the basis (v1v1, v1v2, v2v1, v2v2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateQ, IncompatibleWeights
from .fps import SeriesMatrix, cpow

I2 = np.eye(2, dtype=complex)
H = np.diag([1.0, -1.0]).astype(complex)
E12 = np.array([[0, 1], [0, 0]], dtype=complex)
E21 = np.array([[0, 0], [1, 0]], dtype=complex)

# H_+ = e11(x)e11 + e22(x)e22, H_- = e11(x)e22 + e22(x)e11
H_PLUS = np.diag([1.0, 0, 0, 1.0]).astype(complex)
H_MINUS = np.diag([0, 1.0, 1.0, 0]).astype(complex)
# tensor flip on C^2 (x) C^2
SWAP = np.eye(4, dtype=complex)[[0, 2, 1, 3]]

# phi(alpha, .) as a multiple of H: phi(1, .) = H, phi(0, .) = -H
PHI_SIGN = {1: 1, 0: -1}


def qpow_diag(q, diag_exponents):
    return np.diag([cpow(q, a) for a in diag_exponents])


@dataclass(frozen=True)
class Weighted:
    """A 2×2 matrix times ``z**weight``."""

    matrix: np.ndarray
    weight: int = 0

    def at(self, z):
        return self.matrix * complex(z) ** self.weight


@dataclass(frozen=True)
class RepGenerators:
    q: complex
    kappa: complex
    e1: Weighted
    e_neg1: Weighted
    e0: Weighted
    e_neg0: Weighted
    H: np.ndarray

    def q_H(self, power=1):
        """``q^{power H}``."""
        return qpow_diag(self.q, [power, -power])

    def e(self, label, z):
        """Numeric generator at spectral parameter ``z``; labels 1, 0, -1, -0 as "1","0","-1","-0"."""
        return {"1": self.e1, "0": self.e0, "-1": self.e_neg1, "-0": self.e_neg0}[label].at(z)


@dataclass(frozen=True)
class TwistedGenerators:
    """``f_s = q^{-phi(s,.)} e_s`` and ``f_{-r} = e_{-r} q^{phi(.,r)}`` at fixed z."""

    f1: np.ndarray
    f0: np.ndarray
    f_neg1: np.ndarray
    f_neg0: np.ndarray

    def pos(self, sigma):
        return self.f1 if sigma == 1 else self.f0

    def neg(self, rho):
        return self.f_neg1 if rho == 1 else self.f_neg0


@dataclass(frozen=True)
class CartanForm:
    phi: np.ndarray
    q_phi: np.ndarray
    phi_weights: dict


def build_rep(q) -> RepGenerators:
    q = complex(q)
    if q == 0 or abs(q - 1) < 1e-14 or abs(q + 1) < 1e-14:
        raise DegenerateQ(f"q = {q} is degenerate")
    kappa = complex(np.sqrt(q - 1 / q))
    return RepGenerators(
        q=q,
        kappa=kappa,
        e1=Weighted(kappa * E12, 0),
        e_neg1=Weighted(kappa * E21, 0),
        e0=Weighted(kappa * E21, 1),
        e_neg0=Weighted(kappa * E12, -1),
        H=H.copy(),
    )


def cartan_form(q) -> CartanForm:
    phi = 0.5 * np.kron(H, H)
    q_phi = np.diag([cpow(q, d) for d in np.diag(phi).real])
    return CartanForm(phi=phi, q_phi=q_phi, phi_weights={1: H.copy(), 0: -H})


def twisted_generators(rep: RepGenerators, z) -> TwistedGenerators:
    return TwistedGenerators(
        f1=rep.q_H(-1) @ rep.e1.at(z),
        f0=rep.q_H(1) @ rep.e0.at(z),
        f_neg1=rep.e_neg1.at(z) @ rep.q_H(1),
        f_neg0=rep.e_neg0.at(z) @ rep.q_H(-1),
    )


def tensor(a: Weighted, b: Weighted, variable_tag="z2/z1", order=1) -> SeriesMatrix:
    """``a(z1) (x) b(z2)`` as a series matrix in a single ratio.

    With tag ``"z2/z1"`` the product must have weights ``(-w, w)`` and becomes
    ``kron(a, b) * (z2/z1)**w``; tag ``"z1/z2"`` needs ``(w, -w)``.
    """
    if a.weight != -b.weight:
        raise IncompatibleWeights("weights do not reduce to a single ratio")
    if variable_tag == "z2/z1":
        w = b.weight
    elif variable_tag == "z1/z2":
        w = a.weight
    else:
        raise IncompatibleWeights(f"unknown variable tag {variable_tag!r}")
    m = np.kron(a.matrix, b.matrix)
    if w < 0:
        raise IncompatibleWeights("negative power of the ratio variable")
    data = np.zeros((4, 4, max(order, w) + 1), complex)
    data[:, :, w] = m
    return SeriesMatrix(data, variable_tag)


def solve_cartan_element(rep: RepGenerators):
    """Diagonal traceless ``h`` with ``[h, e1] = phi(1,1) e1``; returns ``(h, g)``.

    ``phi(1,1) = 2`` for the normalization used here.  The degree part of the
    affine element is represented by ``g`` and acts by variable rescaling.
    """
    phi11 = 2.0
    # unknowns (h11, h22): [h, E12] = (h11 - h22) E12, plus trace zero
    lhs = np.array([[1.0, -1.0], [1.0, 1.0]])
    rhs = np.array([phi11, 0.0])
    h11, h22 = np.linalg.solve(lhs, rhs)
    return np.diag([h11, h22]).astype(complex), 2


def embed(op, space, n_spaces=3):
    """Place a 2×2 operator in tensor slot ``space`` (1-based) of ``n_spaces`` copies."""
    out = np.ones((1, 1), dtype=complex)
    for s in range(1, n_spaces + 1):
        out = np.kron(out, op if s == space else I2)
    return out


def embed_pair(op4, spaces, n_spaces=3):
    """Place a 4×4 operator on slots ``(i, j)`` (ordered) of ``n_spaces`` copies."""
    i, j = spaces
    d = 2**n_spaces
    t = np.asarray(op4, complex).reshape(2, 2, 2, 2)
    out = np.zeros((d, d), complex)
    for idx in range(d):
        bits = [(idx >> (n_spaces - 1 - s)) & 1 for s in range(n_spaces)]
        for a in range(2):
            for b in range(2):
                c = t[a, b, bits[i - 1], bits[j - 1]]
                if c == 0:
                    continue
                nb = list(bits)
                nb[i - 1], nb[j - 1] = a, b
                row = sum(v << (n_spaces - 1 - s) for s, v in enumerate(nb))
                out[row, idx] += c
    return out

"""The acceptance suite as plain functions, shared by the CLI and the tests.

Each criterion returns a :class:`Criterion` holding named residuals.  A
residual passes when it is below its tolerance, or above it for negative
controls (identities that are supposed to fail).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import qkz, qspecial, rmatrix, twistor
from .twistor import EllipticPoint, ModelParams


@dataclass(frozen=True)
class Residual:
    identity: str
    value: float
    tol: float
    expect_above: bool = False

    @property
    def passed(self) -> bool:
        ok = self.value > self.tol if self.expect_above else self.value < self.tol
        return bool(ok and np.isfinite(self.value))

    def to_dict(self):
        return {
            "identity": self.identity,
            "value": float(self.value),
            "tol": self.tol,
            "relation": ">" if self.expect_above else "<",
            "passed": self.passed,
        }


@dataclass
class Criterion:
    number: int
    title: str
    residuals: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.residuals)

    def worst(self):
        failing = [r for r in self.residuals if not r.passed]
        return failing[0] if failing else max(self.residuals, key=lambda r: r.value / r.tol if not r.expect_above else 0)

    def to_dict(self):
        return {
            "criterion": self.number,
            "title": self.title,
            "passed": self.passed,
            "residuals": [r.to_dict() for r in self.residuals],
        }


def _rng(seed):
    return np.random.default_rng(seed)


def normalizer_identity(seed=0) -> Criterion:
    c = Criterion(1, "normalizer A: inversion in q and sum versus product")
    rng = _rng(seed)
    inv = prod = 0.0
    for _ in range(10):
        q = complex(rng.uniform(0.2, 0.8) * np.exp(1j * rng.uniform(-0.5, 0.5)))
        x = complex(rng.uniform(0.05, 0.6) * np.exp(1j * rng.uniform(-np.pi, np.pi)))
        inv = max(inv, abs(qspecial.normalizer_A(q, x) * qspecial.normalizer_A(1 / q, x) - 1))
        prod = max(prod, abs(qspecial.normalizer_A(q, x) / qspecial.normalizer_A_product(q, x) - 1))
    c.residuals += [Residual("A(q,x) A(1/q,x) = 1", inv, 1e-12), Residual("A sum = A product", prod, 1e-12)]
    return c


def r_uniqueness(order=32) -> Criterion:
    c = Criterion(2, "R-matrix recursion versus closed form")
    for q in (0.3, 0.5, 2.0):
        T_rec = rmatrix.solve_T_recursion(q, order)
        T_cf = rmatrix.closed_form_T(q, order)
        c.residuals.append(Residual(f"T recursion = closed form, q={q}", rmatrix.relative_residual(T_rec, T_cf), 1e-12))
    return c


def ybe_grid(order=32) -> Criterion:
    c = Criterion(3, "Yang-Baxter equation in the triple product")
    for q in (0.4, 0.6 + 0.2j, 1.7):
        for x23 in (0.3, 0.5 + 0.2j, 0.8):
            x12 = 0.7
            val = rmatrix.verify_ybe(q, (x12, x12 * x23, x23), order)
            c.residuals.append(Residual(f"YBE q={q} x23={x23}", val, 1e-10))
    return c


def inverse_symmetry(order=32) -> Criterion:
    c = Criterion(4, "R(q)^-1 = R(1/q)")
    for q in (0.3, 0.5, 0.6 + 0.3j, 2.0):
        c.residuals.append(Residual(f"R(q) R(1/q) = 1, q={q}", rmatrix.verify_inverse_symmetry(q, order), 1e-10))
    # the divided tail is essential: truncating it to a polynomial breaks the identity
    bad = rmatrix.verify_inverse_symmetry(0.5, order, tail="polynomial")
    c.residuals.append(Residual("polynomial tail control", bad, 1e-3, expect_above=True))
    return c


def twistor_factors(order_eps=4, z1=0.3, z2=1.0) -> Criterion:
    c = Criterion(5, "twistor factors: recursion versus closed form")
    for k in (0.0, 1.0):
        params = ModelParams(q=0.5, eps=0.2, u=0.3, k=k, order_eps=order_eps)
        for m in (1, 2, 3):
            a = twistor.solve_twistor_recursion(params, m, order_eps, z1, z2).matrix
            b = twistor.closed_form_factor(params, m, order_eps, z1, z2).matrix
            c.residuals.append(Residual(f"F^{m} k={k}", float(np.max(np.abs(a.data - b.data))), 1e-10))
    return c


def product_formula(seed=1) -> Criterion:
    c = Criterion(6, "ordered twistor product versus closed product")
    rng = _rng(seed)
    worst = half = 0.0
    for _ in range(10):
        k = float(rng.choice([0.0, 1.0]))
        q = complex(rng.uniform(0.3, 0.8) * np.exp(1j * rng.uniform(-0.3, 0.3)))
        ebar = rng.uniform(0.05, 0.3)
        eps = ebar * np.sqrt(complex(q) ** k) * np.exp(1j * rng.uniform(-0.5, 0.5))
        params = ModelParams(q=q, eps=eps, u=rng.uniform(0.1, 0.9), k=k)
        z1 = complex(rng.uniform(0.2, 0.9) * np.exp(1j * rng.uniform(-1, 1)))
        res = twistor.assemble_product(params, z1, 1.0)
        worst, half = max(worst, res.residual), max(half, res.half_integer_residual)
    c.residuals += [Residual("product = closed form", worst, 1e-8), Residual("sqrt(x) branch independence", half, 1e-8)]
    return c


def cocycle(order_eps=4) -> Criterion:
    c = Criterion(7, "cocycle condition")
    hopf = twistor.verify_cocycle(ModelParams(q=0.5, eps=0.2, u=0.3, k=0.0), order_eps)["residual"]
    hopf_c = twistor.verify_cocycle(ModelParams(q=0.6 + 0.3j, eps=0.2, u=0.3, k=0.0), order_eps)["residual"]
    quasi = twistor.verify_cocycle(ModelParams(q=0.5, eps=0.2, u=0.3, k=1.0), order_eps)["residual"]
    c.residuals += [
        Residual("Hopf cocycle, q=0.5", hopf, 1e-9),
        Residual("Hopf cocycle, complex q", hopf_c, 1e-9),
        Residual("unshifted cocycle at k=1 (control)", quasi, 1e-4, expect_above=True),
    ]
    return c


DEFAULT_ELLIPTIC_POINTS = (
    EllipticPoint(0.13 + 0.02j, 0.05j, complex(np.exp(-0.7 * np.pi))),
    EllipticPoint(0.21, 0.01 + 0.03j, complex(np.exp(1j * np.pi * (0.1 + 0.5j)))),
    EllipticPoint(0.1, 0.05j, complex(np.exp(-1.2 * np.pi))),
    EllipticPoint(0.32 - 0.01j, 0.04j, complex(np.exp(-0.9 * np.pi))),
    EllipticPoint(0.07, -0.02 + 0.06j, complex(np.exp(1j * np.pi * (-0.2 + 0.8j)))),
)


def elliptic_match(points=DEFAULT_ELLIPTIC_POINTS) -> Criterion:
    c = Criterion(8, "elliptic R-matrix versus theta and Jacobi functions")
    rep = twistor.compare_elliptic(ModelParams(), points)
    c.residuals += [
        Residual("theta ratio line", rep.deviation, 1e-6),
        Residual("sn/cn/dn ratio line", rep.jacobi_deviation, 1e-6),
        Residual("overall scalar A(q,1/x) N(x)/N(1/x)", rep.scalar_deviation, 1e-6),
    ]
    kdev = 0.0
    for eps in (0.05, 0.2, 0.45):
        big_k, mod = qspecial.quarter_period_and_modulus(eps)
        kdev = max(kdev, abs(big_k - qspecial.elliptic_K_agm(mod)) / abs(big_k))
    c.residuals.append(Residual("K and k products versus AGM", kdev, 1e-9))
    return c


def qkz_consistency(order=32) -> Criterion:
    c = Criterion(9, "q-KZ consistency and two-point solutions")
    params = ModelParams(order_x=order)
    for flavor in ("f", "g"):
        system = qkz.build_two_point_system(params, flavor=flavor)
        for name, val in system.consistency_residuals().items():
            c.residuals.append(Residual(f"{flavor}-type {name} = q^(A1+A2)", val, 1e-10))
        worst1 = worst2 = 0.0
        for b in qkz.solve_two_point(system, order):
            worst1, worst2 = max(worst1, b.residuals["T1"]), max(worst2, b.residuals["T2"])
        c.residuals += [Residual(f"{flavor}-type solution, z1 shift", worst1, 1e-9), Residual(f"{flavor}-type solution, z2 shift", worst2, 1e-9)]
    for name, val in qkz.check_three_point(params).items():
        c.residuals.append(Residual(f"three-point {name}", val, 1e-10))
    return c


def twist_covariance(eps=0.2) -> Criterion:
    c = Criterion(10, "twisted two-point function: conjugated versus naive equation")
    params = ModelParams(eps=eps)
    system = qkz.build_two_point_system(params, flavor="g")
    correct = 0.0
    naive = np.inf
    for b in qkz.solve_two_point(system):
        r = qkz.covariance_residuals(qkz.twist_two_point(params, system, b, "hopf"))
        correct, naive = max(correct, r["correct"]), min(naive, r["naive"])
    c.residuals += [Residual("conjugated equation", correct, 1e-8), Residual("naive twisted equation (control)", naive, 1e-3, expect_above=True)]
    return c


def classical_kz(order=32, seed=2) -> Criterion:
    c = Criterion(11, "classical KZ flatness and Frobenius solutions")
    rng = _rng(seed)
    for pol in ("pole", "euler"):
        system = qkz.classical_kz_system(level=0.5, polarization=pol)
        flat = 0.0
        for _ in range(9):
            z1 = complex(rng.uniform(0.5, 2) * np.exp(1j * rng.uniform(-np.pi, np.pi)))
            z2 = complex(rng.uniform(0.1, 0.4) * np.exp(1j * rng.uniform(-np.pi, np.pi)))
            flat = max(flat, qkz.flatness_residual(system, z1, z2))
        series = max(max(b.residuals.values()) for b in qkz.solve_kz(system, order))
        c.residuals += [Residual(f"{pol} connection flatness", flat, 1e-12), Residual(f"{pol} Frobenius series", series, 1e-10)]
    return c


ALL = (
    normalizer_identity,
    r_uniqueness,
    ybe_grid,
    inverse_symmetry,
    twistor_factors,
    product_formula,
    cocycle,
    elliptic_match,
    qkz_consistency,
    twist_covariance,
    classical_kz,
)


def run_all():
    return [f() for f in ALL]

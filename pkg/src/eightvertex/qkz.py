"""Classical KZ and q-KZ systems for two- and three-point functions.

Correlation vectors live in tensor products of spin-1/2 evaluation modules;
the highest-weight modules enter only through scalars (the H eigenvalues of
source and sink vectors and the level).  Two-point functions are written as
``f(z1, z2) = z1^lam phi(y)`` with ``y = z2/z1``; a shift ``z1 -> z1/p`` with
``p = q^{k+g}`` becomes ``y -> p y``.  All powers ``p^s`` mean ``q^{(k+g)s}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import evrep
from .errors import ResonantIndices
from .fps import SeriesMatrix, TruncatedSeries, cpow, mat_const_mul, mat_mul, mat_rescale_variable
from .rmatrix import R_numeric, R_series, verify_quasi_triangularity
from .twistor import ModelParams, product_numeric, twisted_R

RESONANCE_TOL = 1e-10


@dataclass(frozen=True)
class WeightConfig:
    """H eigenvalues of the source/sink highest weight vectors.

    ``A_i = (phi(v0', .) + phi(., v0) + H)_i`` acts on an evaluation slot as
    ``c_A H`` with ``c_A = (m_source + m_sink)/2 + h_coeff``; ``h_coeff`` is the
    coefficient of the rep-level Cartan element (1 for the fundamental).
    """

    m_source: float = 0.5
    m_sink: float = 0.25
    h_coeff: float = 1.0
    grading_constant: complex = 0.0

    @property
    def c_A(self):
        return 0.5 * (self.m_source + self.m_sink) + self.h_coeff

    def A(self, slot, n_spaces=2):
        return evrep.embed(self.c_A * evrep.H, slot, n_spaces)

    def qA(self, q, slot, n_spaces=2, power=1):
        return np.diag([cpow(q, power * a) for a in np.diag(self.A(slot, n_spaces)).real])


def total_weight(n_spaces, spins=None):
    """Diagonal of the total H on ``n_spaces`` slots (all spin 1/2 by default)."""
    spins = spins or (0.5,) * n_spaces
    diag = np.zeros(1)
    for j in spins:
        h = np.diag(spin_matrices(j)[0]).real
        diag = (diag[:, None] + h[None, :]).reshape(-1)
    return diag


# ------------------------------------------------------------ series branches


@dataclass
class Branch:
    """One solution ``y^s sum_n phi_n y^n`` of a series system."""

    s: complex
    eigenvalue: complex
    weight: float
    coeffs: np.ndarray  # (order+1, dim)
    residuals: dict = field(default_factory=dict)

    def component(self, i) -> TruncatedSeries:
        return TruncatedSeries(self.coeffs[:, i].copy(), self.s)

    def evaluate(self, y):
        y = complex(y)
        powers = y ** np.arange(self.coeffs.shape[0])
        return cpow(y, self.s) * (powers @ self.coeffs)

    def to_dict(self):
        c = lambda z: [float(np.real(z)), float(np.imag(z))]  # noqa: E731
        return {
            "s": c(self.s),
            "eigenvalue": c(self.eigenvalue),
            "weight": float(self.weight),
            "coeffs": [[c(v) for v in row] for row in self.coeffs],
            "residuals": {k: float(v) for k, v in sorted(self.residuals.items())},
        }


def _sectors(weights):
    out = {}
    for i, w in enumerate(np.round(weights, 9)):
        out.setdefault(float(w), []).append(i)
    return out


def _series_branches(coeffs, level, exponent, order, weights, label):
    """Solve ``level(s + n) phi_n - N_0 phi_n = sum_{j>=1} N_j phi_{n-j}``.

    ``coeffs`` are the matrices ``N_j``; ``level`` maps an exponent to the
    scalar multiplying ``phi_n`` and ``exponent`` inverts it on an eigenvalue of
    ``N_0``.  Work is done sector by sector in the total weight.
    """
    dim = coeffs[0].shape[0]
    branches = []
    for w, idx in _sectors(weights).items():
        blocks = [c[np.ix_(idx, idx)] for c in coeffs]
        ev, vecs = np.linalg.eig(blocks[0])
        for e, v in zip(ev, vecs.T):
            s = exponent(e)
            for n in range(1, order + 1):
                lv = level(s + n)
                hit = np.abs(lv - ev) < RESONANCE_TOL * np.maximum(1.0, np.abs(ev))
                if np.any(hit):
                    raise ResonantIndices(f"{label}: exponent {s:.6g} resonates at shift {n}")
            phi = np.zeros((order + 1, len(idx)), complex)
            phi[0] = v / v[np.argmax(np.abs(v))]
            for n in range(1, order + 1):
                rhs = sum(blocks[j] @ phi[n - j] for j in range(1, min(n, len(blocks) - 1) + 1))
                phi[n] = np.linalg.solve(level(s + n) * np.eye(len(idx)) - blocks[0], rhs)
            full = np.zeros((order + 1, dim), complex)
            full[:, idx] = phi
            branches.append(Branch(s=complex(s), eigenvalue=complex(e), weight=w, coeffs=full))
    return branches


def _growth_radius(*arrays):
    """Crude convergence radius from the largest coefficients at the top orders."""
    r = np.inf
    for a in arrays:
        a = np.asarray(a)
        mags = np.max(np.abs(a.reshape(a.shape[0], -1)), axis=1)
        n = len(mags) - 1
        if n >= 4 and mags[n] > 0 and mags[n // 2] > 0:
            r = min(r, (mags[n // 2] / mags[n]) ** (1.0 / (n - n // 2)))
    return 1.0 if not np.isfinite(r) else float(r)


def _scaled_relative(resid, ref, rho):
    """``max_n |resid_n| rho^n / max_n |ref_n| rho^n``."""
    resid, ref = np.asarray(resid), np.asarray(ref)
    w = rho ** np.arange(resid.shape[0])
    num = np.max(np.abs(resid.reshape(resid.shape[0], -1)), axis=1) * w
    den = np.max(np.abs(ref.reshape(ref.shape[0], -1)), axis=1) * w
    return float(np.max(num) / max(np.max(den), 1e-300))


def _series_action(mats, phi):
    """Coefficients of ``N(y) phi(y)``."""
    n = phi.shape[0]
    out = np.zeros_like(phi)
    for m in range(n):
        for j in range(min(m, len(mats) - 1) + 1):
            out[m] += mats[j] @ phi[m - j]
    return out


# ------------------------------------------------------ q-KZ two-point systems


@dataclass
class DifferenceSystem:
    """``phi(p y) = Lambda M1(y) phi(y)`` and ``phi(y/p) = M2(y) phi(y)``."""

    flavor: str
    q: complex
    level: complex
    g: int
    weights: WeightConfig
    M1: SeriesMatrix
    M2: SeriesMatrix
    description: str
    dimension: int = 4

    @property
    def step_exponent(self):
        return self.level + self.g

    @property
    def step(self):
        return cpow(self.q, self.step_exponent)

    def qA_total(self, power=1):
        return self.weights.qA(self.q, 1, 2, power) @ self.weights.qA(self.q, 2, 2, power)

    def consistency_residuals(self):
        """``M2(p y) M1(y)`` and ``M1(y/p) M2(y)`` against ``q^{A1+A2}``."""
        p = self.step
        target = SeriesMatrix.from_constant(self.qA_total(), self.M1.order, self.M1.variable_tag)
        out = {}
        for name, a, b in (
            ("M2(py)M1(y)", mat_rescale_variable(self.M2, p), self.M1),
            ("M1(y/p)M2(y)", mat_rescale_variable(self.M1, 1 / p), self.M2),
        ):
            diff = np.moveaxis((mat_mul(a, b) - target).data, -1, 0)
            rho = min(_growth_radius(np.moveaxis(a.data, -1, 0), np.moveaxis(b.data, -1, 0)), 1.0)
            out[name] = _scaled_relative(diff, np.moveaxis(target.data, -1, 0), rho)
        return out


def build_two_point_system(params: ModelParams, weights: WeightConfig = None, flavor="f", order=None) -> DifferenceSystem:
    """Two-point q-KZ system of the given flavor.

    f-type: ``M1 = R^{-1}(p y) q^{A1}``, ``M2 = q^{A2} R(y)``.
    g-type: ``M1 = q^{A1} R^{-1}(y)``, ``M2 = R(y/p) q^{A2}``.
    ``R^{-1}(q, y)`` is taken as ``R(1/q, y)``.
    """
    weights = weights or WeightConfig()
    order = params.order_x if order is None else order
    q = complex(params.q)
    p = cpow(q, params.k + params.g)
    R = R_series(q, order)
    R_inv = R_series(1 / q, order)
    qA1, qA2 = weights.qA(q, 1), weights.qA(q, 2)
    if flavor == "f":
        M1 = mat_const_mul(qA1, mat_rescale_variable(R_inv, p), right=True)
        M2 = mat_const_mul(qA2, R)
        desc = "f-type two-point: T1 = R^-1(p y) q^A1, T2 = q^A2 R(y)"
    elif flavor == "g":
        M1 = mat_const_mul(qA1, R_inv)
        M2 = mat_const_mul(qA2, mat_rescale_variable(R, 1 / p), right=True)
        desc = "g-type two-point: T1 = q^A1 R^-1(y), T2 = R(y/p) q^A2"
    else:
        raise ValueError(f"unknown flavor {flavor!r}")
    return DifferenceSystem(flavor, q, complex(params.k), params.g, weights, M1, M2, desc)


def _coeff_list(m: SeriesMatrix):
    return [m.data[:, :, n] for n in range(m.order + 1)]


def solve_two_point(system: DifferenceSystem, order=None, grading_filter=None):
    """All eigenbranches of ``phi(p y) = q^{-(A1+A2)} M1(y) phi(y)``.

    Homogeneity ``f(z/p) = q^{A1+A2} f`` fixes ``lam`` in ``f = z1^lam phi(y)``
    and turns the ``z1`` shift into the equation above.  Residuals of both
    shift directions and of the combined shift are attached to each branch.
    """
    order = system.M1.order if order is None else min(order, system.M1.order)
    q, kg = system.q, system.step_exponent
    lam_op = system.qA_total(-1)
    N = [lam_op @ c for c in _coeff_list(system.M1)[: order + 1]]
    M2 = _coeff_list(system.M2)[: order + 1]
    log_q = np.log(q)

    def level(s):
        return cpow(q, kg * s)

    def exponent(e):
        return np.log(complex(e)) / (kg * log_q)

    weights = total_weight(2)
    branches = _series_branches(N, level, exponent, order, weights, "q-KZ")
    # the equations compare phi at y and at p^{+-1} y: both must sit in the disk
    ap = abs(system.step)
    ns = np.arange(order + 1)
    for b in branches:
        phi = b.coeffs
        up = np.array([level(b.s + n) for n in ns])[:, None] * phi
        down = np.array([cpow(q, -kg * (b.s + n)) for n in ns])[:, None] * phi
        act1, act2 = _series_action(N, phi), _series_action(M2, phi)
        rho1 = min(_growth_radius(np.array(N), phi), 1.0) * min(1.0, 1 / ap)
        rho2 = min(_growth_radius(np.array(M2), phi), 1.0) * min(1.0, ap)
        # each equation is measured on the disk where its operator converges
        b.residuals["T1"] = _scaled_relative(up - act1, up, rho1)
        b.residuals["T2"] = _scaled_relative(down - act2, down, rho2)
        b.lam = -system.weights.c_A * b.weight / kg
    if grading_filter is not None:
        branches = [b for b in branches if abs(b.s - grading_filter) < 1e-9]
    return branches


def two_point_value(system: DifferenceSystem, branch: Branch, z1, z2, shift1=0):
    """``f(z1 p^{-shift1}, z2)`` from the series, with ``z1^lam`` on the principal branch."""
    kg = system.step_exponent
    y = complex(z2) / complex(z1) * cpow(system.q, kg * shift1)
    return cpow(z1, branch.lam) * cpow(system.q, -kg * branch.lam * shift1) * branch.evaluate(y)


# ---------------------------------------------------- q-KZ three-point systems


def _R_pair(q, ratio, pair, inverse=False):
    m = R_numeric(q, 1.0, ratio)
    if inverse:
        m = np.linalg.inv(m)
    return evrep.embed_pair(m, pair, 3)


@dataclass
class ThreePointSystem:
    flavor: str
    q: complex
    level: complex
    g: int
    weights: WeightConfig

    @property
    def step(self):
        return cpow(self.q, self.level + self.g)

    def _qA(self, i):
        return self.weights.qA(self.q, i, 3)

    def M(self, i, z):
        """Operator with ``f(..., z_i/p, ...) = M_i(z) f(z)``."""
        q, p = self.q, self.step
        z1, z2, z3 = (complex(v) for v in z)
        R = lambda r, pair, inv=False: _R_pair(q, r, pair, inv)  # noqa: E731
        if self.flavor == "f":
            if i == 1:
                return R(p * z2 / z1, (1, 2), True) @ R(p * z3 / z1, (1, 3), True) @ self._qA(1)
            if i == 2:
                return R(p * z3 / z2, (2, 3), True) @ self._qA(2) @ R(z2 / z1, (1, 2))
            return self._qA(3) @ R(z3 / z1, (1, 3)) @ R(z3 / z2, (2, 3))
        if i == 1:
            # R_{1,23} = R12 R13 at rep level
            return self._qA(1) @ np.linalg.inv(R(z2 / z1, (1, 2)) @ R(z3 / z1, (1, 3)))
        if i == 2:
            return R(z2 / (p * z1), (1, 2)) @ self._qA(2) @ R(z3 / z2, (2, 3), True)
        return R(z3 / (p * z2), (2, 3)) @ R(z3 / (p * z1), (1, 3)) @ self._qA(3)

    def _shift(self, z, i):
        z = list(z)
        z[i - 1] = z[i - 1] / self.step
        return tuple(z)

    def closure_residual(self, z):
        """``T1 T2 T3 = q^{A1+A2+A3}``."""
        s3 = self._shift(z, 3)
        s23 = self._shift(s3, 2)
        prod = self.M(1, s23) @ self.M(2, s3) @ self.M(3, z)
        target = self._qA(1) @ self._qA(2) @ self._qA(3)
        return float(np.max(np.abs(prod - target)) / np.max(np.abs(target)))

    def integrability_residual(self, z):
        """``T_i T_j = T_j T_i`` for all pairs."""
        worst = 0.0
        for i, j in ((1, 2), (1, 3), (2, 3)):
            a = self.M(j, self._shift(z, i)) @ self.M(i, z)
            b = self.M(i, self._shift(z, j)) @ self.M(j, z)
            worst = max(worst, float(np.max(np.abs(a - b)) / np.max(np.abs(a))))
        return worst


def build_three_point_system(params: ModelParams, weights: WeightConfig = None, flavor="f") -> ThreePointSystem:
    if flavor not in ("f", "g"):
        raise ValueError(f"unknown flavor {flavor!r}")
    return ThreePointSystem(flavor, complex(params.q), complex(params.k), params.g, weights or WeightConfig())


def check_three_point(params: ModelParams, weights=None, z=(1.0, 0.35, 0.12), order=None) -> dict:
    """Closure and integrability for both flavors plus quasi-triangularity."""
    order = params.order_x if order is None else order
    out = {}
    for flavor in ("f", "g"):
        sys3 = build_three_point_system(params, weights, flavor)
        out[f"{flavor}:closure"] = sys3.closure_residual(z)
        out[f"{flavor}:integrability"] = sys3.integrability_residual(z)
    qt = verify_quasi_triangularity(params.q, z[0], z[1], order)
    out["quasi_triangularity"] = qt["R23R13"]
    return out


# ----------------------------------------------------- twisted two-point function


@dataclass
class TwistedTwoPoint:
    system: DifferenceSystem
    branch: Branch
    twist_params: ModelParams
    mode: str

    def G(self, z1, z2):
        """``F^{-1}(z2, z1)`` acting with its first slot on space 2."""
        F, _ = product_numeric(self.twist_params, z2, z1)
        return np.linalg.inv(evrep.SWAP @ F @ evrep.SWAP)

    def untwisted(self, z1, z2, shift1=0):
        return two_point_value(self.system, self.branch, z1, z2, shift1)

    def value(self, z1, z2, shift1=0):
        z1s = complex(z1) / cpow(self.system.q, self.system.step_exponent * shift1)
        return self.G(z1s, z2) @ self.untwisted(z1, z2, shift1)


def twist_two_point(params: ModelParams, system: DifferenceSystem, branch: Branch, mode="hopf") -> TwistedTwoPoint:
    """``g_eps(z1, z2) = F_eps^{-1}(z2, z1) g(z1, z2)``; level 0 for ``hopf``, ``params.k`` for ``quasi``."""
    if system.flavor != "g":
        raise ValueError("the twisting formula applies to the g-type function")
    if mode == "hopf":
        tp = params.replace(k=0)
    elif mode == "quasi":
        tp = params
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return TwistedTwoPoint(system, branch, tp, mode)


def covariance_residuals(tw: TwistedTwoPoint, z1=1.0, z2=0.05) -> dict:
    """Shift equation for ``g_eps``: conjugated form versus the naive twisted-R form."""
    q = tw.system.q
    lhs = tw.value(z1, z2, shift1=1)
    g_eps = tw.value(z1, z2)
    qA1 = tw.system.weights.qA(q, 1)
    p = tw.system.step
    correct = tw.G(complex(z1) / p, z2) @ qA1 @ np.linalg.solve(R_numeric(q, z1, z2), np.linalg.solve(tw.G(z1, z2), g_eps))
    naive = qA1 @ np.linalg.solve(twisted_R(tw.twist_params, z1, z2), g_eps)
    scale = float(np.max(np.abs(lhs)))
    identity = float(np.max(np.abs(g_eps - tw.untwisted(z1, z2)))) / scale
    return {
        "correct": float(np.max(np.abs(lhs - correct))) / scale,
        "naive": float(np.max(np.abs(lhs - naive))) / scale,
        "twist_deviation": identity,
    }


# ------------------------------------------------------------- classical KZ


def spin_matrices(j):
    """``(H, E, F)`` for spin ``j`` with ``H = 2 J_z``, basis ordered by decreasing weight."""
    n = int(round(2 * j)) + 1
    m = j - np.arange(n)
    H = np.diag(2 * m).astype(complex)
    E = np.zeros((n, n), complex)
    for i in range(1, n):
        E[i - 1, i] = np.sqrt(j * (j + 1) - m[i] * (m[i] + 1))
    return H, E, E.T.copy()


def casimir_value(j):
    """Eigenvalue ``2 j (j + 1)`` of ``H^2/2 + E F + F E`` on spin ``j``."""
    return 2 * j * (j + 1)


def casimir_pair(j1, j2):
    """``Omega = H (x) H / 2 + E (x) F + F (x) E``."""
    H1, E1, F1 = spin_matrices(j1)
    H2, E2, F2 = spin_matrices(j2)
    return 0.5 * np.kron(H1, H2) + np.kron(E1, F2) + np.kron(F1, E2)


def _embed_general(op_pair, pair, spins):
    """Embed a two-slot operator given on ``spins[i] (x) spins[j]``."""
    dims = [int(round(2 * j)) + 1 for j in spins]
    i, j = pair
    d = int(np.prod(dims))
    t = op_pair.reshape(dims[i - 1], dims[j - 1], dims[i - 1], dims[j - 1])
    out = np.zeros((d, d), complex)
    for idx in np.ndindex(*dims):
        col = np.ravel_multi_index(idx, dims)
        for a in range(dims[i - 1]):
            for b in range(dims[j - 1]):
                c = t[a, b, idx[i - 1], idx[j - 1]]
                if c != 0:
                    nb = list(idx)
                    nb[i - 1], nb[j - 1] = a, b
                    out[np.ravel_multi_index(nb, dims), col] += c
    return out


def one_point_exponents(j_pi, j_mu):
    """Eigenvalues of ``Omega`` on ``V_pi (x) V_mu`` against ``(C(nu) - C(mu) - C(pi))/2``."""
    ev = np.sort(np.linalg.eigvals(casimir_pair(j_pi, j_mu)).real)
    nus = np.arange(abs(j_pi - j_mu), j_pi + j_mu + 0.5)
    pred = []
    for nu in nus:
        pred += [0.5 * (casimir_value(nu) - casimir_value(j_mu) - casimir_value(j_pi))] * int(round(2 * nu + 1))
    return ev, np.sort(np.array(pred))


@dataclass
class KZSystem:
    """``(k+g) d f/d z_p = B_p(z) f`` for two points.

    ``pole`` polarization: slots 1, 2 and a source slot 3; ``euler``
    polarization: two slots with the Cartan terms ``A_p``.
    """

    polarization: str
    level: complex
    g: int
    spins: tuple
    ops: dict

    @property
    def kg(self):
        return self.level + self.g

    @property
    def dim(self):
        return self.ops["dim"]

    def connection(self, z1, z2):
        z1, z2 = complex(z1), complex(z2)
        o = self.ops
        if self.polarization == "pole":
            B1 = o["c12"] / (z1 - z2) + o["c13"] / z1
            B2 = o["c12"] / (z2 - z1) + o["c23"] / z2
        else:
            r = o["r"](z2 / z1)
            B1 = (r - o["A1"]) / z1
            B2 = -(r + o["A2"]) / z2
        return B1 / self.kg, B2 / self.kg

    def cross_derivatives(self, z1, z2):
        """``(d B2/d z1, d B1/d z2)``."""
        z1, z2 = complex(z1), complex(z2)
        o = self.ops
        if self.polarization == "pole":
            d = o["c12"] / (z1 - z2) ** 2
            return d / self.kg, d / self.kg
        y = z2 / z1
        rp = o["r_prime"](y)
        return rp / z1**2 / self.kg, rp / z1**2 / self.kg

    def y_coefficients(self, order):
        """``N_n`` with ``(k+g) y phi' = sum_n N_n y^n phi`` for ``f = z1^lam phi(z2/z1)``."""
        o = self.ops
        if self.polarization == "pole":
            return [o["c23"]] + [-o["c12"]] * order
        return [-(o["r0"] + o["A2"])] + [-o["Omega"]] * order

    def lam_operator(self):
        o = self.ops
        if self.polarization == "pole":
            return (o["c12"] + o["c13"] + o["c23"]) / self.kg
        return -(o["A1"] + o["A2"]) / self.kg


def classical_kz_system(weights: WeightConfig = None, level=0.0, g=2, spins=(0.5, 0.5, 0.5), polarization="pole") -> KZSystem:
    """Assemble the two-point classical KZ connection in either polarization."""
    if polarization == "pole":
        c = {pair: _embed_general(casimir_pair(spins[pair[0] - 1], spins[pair[1] - 1]), pair, spins) for pair in ((1, 2), (1, 3), (2, 3))}
        ops = {"c12": c[(1, 2)], "c13": c[(1, 3)], "c23": c[(2, 3)], "dim": c[(1, 2)].shape[0]}
        return KZSystem("pole", complex(level), g, tuple(spins), ops)
    if polarization != "euler":
        raise ValueError(f"unknown polarization {polarization!r}")
    weights = weights or WeightConfig()
    j1, j2 = spins[0], spins[1]
    H1, E1, F1 = spin_matrices(j1)
    H2, E2, F2 = spin_matrices(j2)
    omega = casimir_pair(j1, j2)
    r0 = 0.5 * np.kron(H1, H2) + np.kron(F1, E2)
    I1, I2 = np.eye(len(H1)), np.eye(len(H2))
    ops = {
        "r0": r0,
        "Omega": omega,
        "r": lambda y: r0 + y / (1 - y) * omega,
        "r_prime": lambda y: omega / (1 - y) ** 2,
        "A1": weights.c_A * np.kron(H1, I2),
        "A2": weights.c_A * np.kron(I1, H2),
        "dim": len(H1) * len(H2),
    }
    return KZSystem("euler", complex(level), g, (j1, j2), ops)


def flatness_residual(system: KZSystem, z1, z2) -> float:
    """``[d1 - B1, d2 - B2] = d2 B1 - d1 B2 + [B1, B2]``."""
    B1, B2 = system.connection(z1, z2)
    dB2_1, dB1_2 = system.cross_derivatives(z1, z2)
    comm = dB1_2 - dB2_1 + B1 @ B2 - B2 @ B1
    return float(np.max(np.abs(comm)))


def kz_weights(system: KZSystem):
    hs = [np.diag(spin_matrices(j)[0]).real for j in system.spins]
    w = np.zeros(1)
    for h in hs:
        w = (w[:, None] + h[None, :]).reshape(-1)
    return w


def solve_kz(system: KZSystem, order=32):
    """Frobenius branches of the ``z2`` equation in ``y = z2/z1``.

    Each branch is checked against both equations coefficient by coefficient;
    the ``z1`` equation needs ``phi`` in an eigenspace of the ``lam`` operator,
    which commutes with the connection, so eigenvectors are taken for a generic
    combination of the two.
    """
    kg = system.kg
    N = system.y_coefficients(order)
    lam_op = system.lam_operator()
    mix = N[0] + np.pi * lam_op  # joint eigenvectors
    weights = kz_weights(system)
    branches = []
    for w, idx in _sectors(weights).items():
        sub = np.ix_(idx, idx)
        _, v_mix = np.linalg.eig(mix[sub])
        ev0 = np.linalg.eigvals(N[0][sub])
        for v in v_mix.T:
            e0 = (v.conj() @ N[0][sub] @ v) / (v.conj() @ v)
            lam = (v.conj() @ lam_op[sub] @ v) / (v.conj() @ v)
            s = e0 / kg
            for n in range(1, order + 1):
                if np.any(np.abs(kg * (s + n) - ev0) < RESONANCE_TOL * np.maximum(1, np.abs(ev0))):
                    raise ResonantIndices(f"KZ: exponent {s:.6g} resonates at shift {n}")
            phi = np.zeros((order + 1, len(idx)), complex)
            phi[0] = v / v[np.argmax(np.abs(v))]
            blocks = [m[sub] for m in N]
            for n in range(1, order + 1):
                rhs = sum(blocks[j] @ phi[n - j] for j in range(1, n + 1))
                phi[n] = np.linalg.solve(kg * (s + n) * np.eye(len(idx)) - blocks[0], rhs)
            full = np.zeros((order + 1, system.dim), complex)
            full[:, idx] = phi
            b = Branch(s=complex(s), eigenvalue=complex(e0), weight=w, coeffs=full)
            b.lam = complex(lam)
            ns = np.arange(order + 1)[:, None]
            lhs2 = kg * (s + ns) * full
            b.residuals["z2"] = _scaled_relative(lhs2 - _series_action(N, full), lhs2, 1.0)
            # z1 equation: (k+g)(lam - y d/dy) phi = z1 B1 phi
            B1 = _z1_coefficients(system, order)
            lhs1 = kg * (lam - (s + ns)) * full
            b.residuals["z1"] = _scaled_relative(lhs1 - _series_action(B1, full), lhs2, 1.0)
            branches.append(b)
    return branches


def _z1_coefficients(system: KZSystem, order):
    """Coefficients of ``z1 B1 (k+g)`` as a series in ``y``."""
    o = system.ops
    if system.polarization == "pole":
        return [o["c12"] + o["c13"]] + [o["c12"]] * order
    return [o["r0"] - o["A1"]] + [o["Omega"]] * order

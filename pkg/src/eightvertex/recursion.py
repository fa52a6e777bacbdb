"""Joint linear solver for graded matrix recursions.

Unknowns are matrices ``X_a`` for an increasing list of orders ``a``.  Each
equation at order ``a`` is ``sum_t L_t X_{a - s_t} R_t = 0`` where a term
whose order is known contributes to the right-hand side and a term referring to
an order that is neither known nor unknown vanishes.

Orders are processed one at a time.  Whatever the equations up to order ``a``
leave undetermined is carried as a small vector of free parameters; later
orders fix those parameters.  Extra lookahead orders absorb the kernel that a
truncated system always has at its top, and the kept orders must end up free
of any remaining parameter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RecursionInconsistent, UnderdeterminedSystem


@dataclass(frozen=True)
class Term:
    left: np.ndarray
    shift: int
    right: np.ndarray


def _nullspace(mat, rel_tol=1e-10):
    u, s, vh = np.linalg.svd(mat, full_matrices=True)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > rel_tol * max(smax, 1e-300)))
    return vh[rank:].conj().T


def solve_graded(dim, orders, keep, equations, known, normalization, tol=1e-9):
    """Solve a graded recursion order by order.

    ``equations(a)`` yields lists of :class:`Term` for order ``a``.
    ``known`` maps order -> fixed matrix; ``normalization`` is a list of
    ``(order, (row, col), value)``.  Returns ``{order: X}`` for ``keep``.
    """
    orders = list(orders)
    n2 = dim * dim
    part = {}  # order -> particular vector
    dep = {}  # order -> (n2, n_params) dependence on free parameters
    n_par = 0
    norm_rows = {}
    for a, (r, c), val in normalization:
        norm_rows.setdefault(a, []).append((r * dim + c, val))

    for a in orders:
        rows_x, rows_t, rhs = [], [], []
        for terms in equations(a):
            bx = np.zeros((n2, n2), complex)
            bt = np.zeros((n2, n_par), complex)
            b = np.zeros(n2, complex)
            for t in terms:
                src = a - t.shift
                op = np.kron(t.left, t.right.T)
                if src == a:
                    bx += op
                elif src in part:
                    bt += op @ dep[src]
                    b -= op @ part[src]
                elif src in known:
                    b -= op @ np.asarray(known[src], complex).reshape(-1)
            rows_x.append(bx)
            rows_t.append(bt)
            rhs.append(b)
        for idx, val in norm_rows.get(a, []):
            row = np.zeros((1, n2), complex)
            row[0, idx] = 1
            rows_x.append(row)
            rows_t.append(np.zeros((1, n_par), complex))
            rhs.append(np.array([val], complex))
        mat = np.hstack([np.vstack(rows_x), np.vstack(rows_t)])
        vec = np.concatenate(rhs)
        scale = np.linalg.norm(mat, axis=0)
        scale[scale == 0] = 1
        ms = mat / scale
        sol = np.linalg.lstsq(ms, vec, rcond=1e-12)[0] / scale
        resid = float(np.max(np.abs(mat @ sol - vec))) if vec.size else 0.0
        if resid > tol * max(1.0, float(np.max(np.abs(vec)))):
            raise RecursionInconsistent(f"graded system inconsistent at order {a}, residual {resid:.3e}")
        null = _nullspace(ms) / scale[:, None]
        theta0, theta_null = sol[n2:], null[n2:]
        # substitute theta = theta0 + theta_null @ phi into earlier orders
        for b_ in part:
            part[b_] = part[b_] + dep[b_] @ theta0
            dep[b_] = dep[b_] @ theta_null
        part[a] = sol[:n2]
        dep[a] = null[:n2]
        n_par = null.shape[1]

    out = {}
    for a in keep:
        ref = max(1.0, float(np.max(np.abs(part[a]))))
        if dep[a].size and float(np.max(np.abs(dep[a]))) > 1e-7 * ref * max(1.0, np.max(np.abs(null))):
            raise UnderdeterminedSystem(f"order {a} still depends on {dep[a].shape[1]} free parameter(s)")
        out[a] = part[a].reshape(dim, dim)
    return out

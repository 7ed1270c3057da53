"""Exact state conversion under Wigner-positivity-preserving quasi-operations.

Two independent routes decide convertibility of Wigner vectors ``p -> q``:
:func:`construct_stochastic_map` writes down a column-stochastic ``W`` with
``W p = q`` from the positive/negative block structure, and
:func:`lp_feasibility_oracle` hands the stacked linear system to a generic LP
solver. They share no code and are cross-checked in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .wigner import check_state, mana, wigner_of_operator

__all__ = [
    "InfeasibleTransformError",
    "LPSolverError",
    "UndefinedRateError",
    "TransformPlan",
    "can_transform",
    "plan_transform",
    "construct_stochastic_map",
    "lp_feasibility_oracle",
    "asymptotic_rate",
]

ZERO_TOL = 1e-12
FEAS_TOL = 1e-9


class InfeasibleTransformError(ValueError):
    pass


class LPSolverError(RuntimeError):
    pass


class UndefinedRateError(ValueError):
    pass


@dataclass(frozen=True)
class TransformPlan:
    feasible: bool
    stochastic_map: np.ndarray | None
    mana_source: float
    mana_target: float


def can_transform(rho: np.ndarray, sigma: np.ndarray, dims_rho=None, dims_sigma=None) -> bool:
    """True iff ``mana(rho) >= mana(sigma)`` up to 1e-9."""
    return mana(rho, dims_rho) >= mana(sigma, dims_sigma) - FEAS_TOL


def plan_transform(rho: np.ndarray, sigma: np.ndarray, dims_rho=None, dims_sigma=None) -> TransformPlan:
    dims_rho = check_state(rho, dims_rho)
    dims_sigma = check_state(sigma, dims_sigma)
    m_rho, m_sigma = mana(rho, dims_rho), mana(sigma, dims_sigma)
    if m_rho < m_sigma - FEAS_TOL:
        return TransformPlan(False, None, m_rho, m_sigma)
    w = construct_stochastic_map(
        wigner_of_operator(rho, dims_rho), wigner_of_operator(sigma, dims_sigma)
    )
    return TransformPlan(True, w, m_rho, m_sigma)


def _check_quasi(v: np.ndarray, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError(f"{name} must be a non-empty vector")
    if abs(v.sum() - 1) > FEAS_TOL:
        raise ValueError(f"{name} sums to {v.sum():.12g}, expected 1")
    return v


def construct_stochastic_map(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Column-stochastic ``W`` (shape ``len(q) x len(p)``) with ``W p = q``.

    Raises :class:`InfeasibleTransformError` when ``||p||_1 < ||q||_1``.
    """
    p = _check_quasi(p, "p")
    q = _check_quasi(q, "q")
    norm_p, norm_q = np.abs(p).sum(), np.abs(q).sum()
    if norm_p < norm_q - FEAS_TOL:
        raise InfeasibleTransformError(f"||p||_1 = {norm_p:.12g} < ||q||_1 = {norm_q:.12g}")

    # near-zero entries join the positive block
    p_neg = p < -ZERO_TOL
    q_neg = q < -ZERO_TOL
    n_out, n_in = q.size, p.size

    if not q_neg.any():
        # every column is q, so W p = q * sum(p) = q
        return np.tile(q[:, None], (1, n_in))
    if not p_neg.any():
        # only reachable when q's negativity sits inside the tolerance
        q_clip = np.clip(q, 0, None)
        return np.tile((q_clip / q_clip.sum())[:, None], (1, n_in))

    p_order = np.concatenate([np.flatnonzero(~p_neg), np.flatnonzero(p_neg)])
    q_order = np.concatenate([np.flatnonzero(~q_neg), np.flatnonzero(q_neg)])
    n_pp = int((~p_neg).sum())
    n_qp = int((~q_neg).sum())
    p_plus, p_minus = p[p_order[:n_pp]], -p[p_order[n_pp:]]
    q_plus, q_minus = q[q_order[:n_qp]], -q[q_order[n_qp:]]
    q_hat = q_minus[:-1]

    s_pp, s_pm = p_plus.sum(), p_minus.sum()
    s_qp, s_qh = q_plus.sum(), q_hat.sum()

    w = np.zeros((n_out, n_in))
    w[:n_qp, :n_pp] = np.outer(q_plus, np.ones(n_pp)) / s_pp
    w[n_qp:n_out - 1, n_pp:] = np.outer(q_hat, np.ones(n_in - n_pp)) / s_pm
    # the last row absorbs the remaining column mass; clip rounding below zero
    w[-1, :n_pp] = max(1 - s_qp / s_pp, 0.0)
    w[-1, n_pp:] = max(1 - s_qh / s_pm, 0.0)

    out = np.empty_like(w)
    out[np.ix_(q_order, p_order)] = w
    return out


def lp_feasibility_oracle(p: np.ndarray, q: np.ndarray) -> bool:
    """Decide whether a column-stochastic ``W`` with ``W p = q`` exists via a generic LP.

    The unknowns are the columns ``w_1..w_m`` of ``W`` stacked into one vector,
    constrained by ``sum_j p_j w_j = q``, ``1^T w_j = 1`` and ``w >= 0``.
    """
    p = _check_quasi(p, "p")
    q = _check_quasi(q, "q")
    n, m = q.size, p.size
    a_eq = np.vstack([
        np.hstack([pj * np.eye(n) for pj in p]),
        np.kron(np.eye(m), np.ones((1, n))),
    ])
    b_eq = np.concatenate([q, np.ones(m)])
    res = linprog(np.zeros(n * m), A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if res.status == 0:
        return True
    if res.status == 2:
        return False
    raise LPSolverError(f"LP solver failed: {res.message}")


def asymptotic_rate(rho: np.ndarray, sigma: np.ndarray, dims_rho=None, dims_sigma=None) -> float:
    """Copies of ``sigma`` obtained per copy of ``rho``: ``mana(rho) / mana(sigma)``.

    ``n`` copies of ``rho`` reach ``r n`` copies of ``sigma`` exactly iff
    ``n mana(rho) >= r n mana(sigma)``. Returns ``inf`` when the target is
    Wigner-positive; raises :class:`UndefinedRateError` for a magic target
    and a Wigner-positive source.
    """
    m_rho, m_sigma = mana(rho, dims_rho), mana(sigma, dims_sigma)
    if m_sigma <= ZERO_TOL:
        return math.inf
    if m_rho <= ZERO_TOL:
        raise UndefinedRateError("source has zero mana but target does not")
    return m_rho / m_sigma

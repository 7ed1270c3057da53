"""Classification of linear maps given in Choi form, and maps rebuilt from Wigner matrices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .phase_space import as_dimspec, phase_point_operators
from .wigner import Choi, IMAG_TOL, default_dims, wigner_of_map

__all__ = [
    "MapClass",
    "classify",
    "map_from_wigner",
    "apply_choi",
    "choi_from_function",
    "identity_choi",
    "depolarizing_choi",
    "unitary_choi",
    "replacement_choi",
    "output_partial_trace",
]

# thresholds for CP (eigenvalues of J) and PWP (entries of W_N)
HP_TOL = 1e-9
TP_TOL = 1e-9
CP_TOL = 1e-9
PWP_TOL = 1e-9


@dataclass(frozen=True)
class MapClass:
    hermitian_preserving: bool
    trace_preserving: bool
    completely_positive: bool
    positive_wigner_preserving: bool

    @property
    def pwpq(self) -> bool:
        return self.hermitian_preserving and self.trace_preserving and self.positive_wigner_preserving

    @property
    def cptp_pwp(self) -> bool:
        return self.pwpq and self.completely_positive


def output_partial_trace(choi: Choi) -> np.ndarray:
    """``tr_B J``, an operator on the input space."""
    return np.einsum("ikjk->ij", choi.tensor())


def classify(choi: Choi, tol: float | None = None) -> MapClass:
    """Flag the HP, TP, CP and PWP properties of a map.

    ``tol`` overrides all four thresholds at once, e.g. to judge solver output
    at its own accuracy.
    """
    hp_tol, tp_tol, cp_tol, pwp_tol = (HP_TOL, TP_TOL, CP_TOL, PWP_TOL) if tol is None else (tol,) * 4
    j = choi.matrix
    hp = bool(np.allclose(j, j.conj().T, atol=hp_tol, rtol=0))
    tp = bool(np.allclose(output_partial_trace(choi), np.eye(choi.d_in), atol=tp_tol, rtol=0))
    herm = (j + j.conj().T) / 2
    cp = hp and bool(np.linalg.eigvalsh(herm).min() >= -cp_tol)
    w = wigner_of_map(choi, strict=False)
    pwp = bool(np.all(np.abs(np.imag(w)) <= max(IMAG_TOL, pwp_tol)) and np.all(np.real(w) >= -pwp_tol))
    return MapClass(hp, tp, cp, pwp)


def map_from_wigner(w_map: np.ndarray, dims_in=None, dims_out=None) -> Choi:
    """Choi matrix of the unique map with ``N(A_u) = sum_v W[v, u] A_v``.

    Dimensions default to single systems inferred from the matrix shape.
    """
    w_map = np.asarray(w_map)
    if w_map.ndim != 2:
        raise ValueError("stochastic Wigner matrix must be two-dimensional")
    dims_in = _infer(w_map.shape[1]) if dims_in is None else as_dimspec(dims_in)
    dims_out = _infer(w_map.shape[0]) if dims_out is None else as_dimspec(dims_out)
    if w_map.shape != (dims_out.n_points, dims_in.n_points):
        raise ValueError(f"matrix shape {w_map.shape} does not match dims {dims_in} -> {dims_out}")
    a_in = phase_point_operators(dims_in)
    a_out = phase_point_operators(dims_out)
    # |i><j| = sum_u A_u[j, i] A_u / D_A
    images = np.einsum("vu,vkl->ukl", w_map, a_out)
    j = np.einsum("uji,ukl->ikjl", a_in, images) / dims_in.total
    n = dims_in.total * dims_out.total
    return Choi(j.reshape(n, n), dims_in, dims_out)


def _infer(n_points: int):
    d = int(round(np.sqrt(n_points)))
    if d * d != n_points:
        raise ValueError(f"{n_points} is not a square number of phase points")
    return as_dimspec(d)


def apply_choi(choi: Choi, rho: np.ndarray) -> np.ndarray:
    """``N(rho) = tr_A[(rho^T (x) I) J]``."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (choi.d_in, choi.d_in):
        raise ValueError(f"input of shape {rho.shape} does not match input dimension {choi.d_in}")
    return np.einsum("ba,bkal->kl", rho, choi.tensor())


def choi_from_function(fn: Callable[[np.ndarray], np.ndarray], dims_in, dims_out=None) -> Choi:
    """Choi matrix of a linear map given as a Python callable on matrices."""
    dims_in = as_dimspec(dims_in)
    dims_out = dims_in if dims_out is None else as_dimspec(dims_out)
    a, b = dims_in.total, dims_out.total
    j = np.zeros((a, b, a, b), dtype=complex)
    for i in range(a):
        for k in range(a):
            e = np.zeros((a, a), dtype=complex)
            e[i, k] = 1
            j[i, :, k, :] = fn(e)
    return Choi(j.reshape(a * b, a * b), dims_in, dims_out)


def identity_choi(dims) -> Choi:
    spec = as_dimspec(dims)
    d = spec.total
    v = np.eye(d).reshape(d * d)
    return Choi(np.outer(v, v).astype(complex), spec, spec)


def depolarizing_choi(dims_in, dims_out=None) -> Choi:
    """Choi matrix of ``X -> tr[X] I / D_B``."""
    dims_in = as_dimspec(dims_in)
    dims_out = dims_in if dims_out is None else as_dimspec(dims_out)
    n = dims_in.total * dims_out.total
    return Choi(np.eye(n, dtype=complex) / dims_out.total, dims_in, dims_out)


def unitary_choi(u: np.ndarray, dims=None) -> Choi:
    u = np.asarray(u, dtype=complex)
    spec = default_dims(u, dims)
    v = u.T.reshape(-1)  # sum_i |i> (x) U|i>
    return Choi(np.outer(v, v.conj()), spec, spec)


def replacement_choi(sigma: np.ndarray, dims_in, dims_out=None) -> Choi:
    """Choi matrix of ``X -> tr[X] sigma``."""
    sigma = np.asarray(sigma, dtype=complex)
    dims_in = as_dimspec(dims_in)
    dims_out = default_dims(sigma, dims_out)
    return Choi(np.kron(np.eye(dims_in.total), sigma), dims_in, dims_out)

"""Wigner vectors of operators, stochastic Wigner matrices of linear maps, and mana."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .phase_space import DimSpec, as_dimspec, phase_point_operators

__all__ = [
    "IMAG_TOL",
    "Choi",
    "NotHermitianError",
    "NotAStateError",
    "default_dims",
    "check_state",
    "wigner_of_operator",
    "operator_from_wigner",
    "wigner_of_map",
    "apply_stochastic",
    "mana",
    "wigner_norm",
]

# imaginary parts below this are rounding noise when realness is guaranteed
IMAG_TOL = 1e-10


class NotHermitianError(ValueError):
    pass


class NotAStateError(ValueError):
    pass


@dataclass(frozen=True)
class Choi:
    """Choi matrix ``J = sum_ij |i><j|_A (x) N(|i><j|)_B`` of a map from A to B."""

    matrix: np.ndarray
    dims_in: DimSpec
    dims_out: DimSpec

    def __post_init__(self) -> None:
        object.__setattr__(self, "dims_in", as_dimspec(self.dims_in))
        object.__setattr__(self, "dims_out", as_dimspec(self.dims_out))
        m = np.asarray(self.matrix, dtype=complex)
        n = self.dims_in.total * self.dims_out.total
        if m.shape != (n, n):
            raise ValueError(
                f"Choi matrix shape {m.shape} does not match dims {self.dims_in} -> {self.dims_out}"
            )
        object.__setattr__(self, "matrix", m)

    @property
    def d_in(self) -> int:
        return self.dims_in.total

    @property
    def d_out(self) -> int:
        return self.dims_out.total

    def tensor(self) -> np.ndarray:
        """Choi matrix as ``J[i, k, j, l]`` with ``i, j`` on A and ``k, l`` on B."""
        a, b = self.d_in, self.d_out
        return self.matrix.reshape(a, b, a, b)


def default_dims(x: np.ndarray, dims=None) -> DimSpec:
    if dims is not None:
        spec = as_dimspec(dims)
    else:
        spec = as_dimspec(x.shape[0])
    if x.ndim != 2 or x.shape != (spec.total, spec.total):
        raise ValueError(f"operator of shape {x.shape} does not match dims {spec.dims}")
    return spec


def check_state(rho: np.ndarray, dims=None, tol: float = 1e-9) -> DimSpec:
    """Validate a density operator and return its DimSpec."""
    rho = np.asarray(rho)
    spec = default_dims(rho, dims)
    if not np.allclose(rho, rho.conj().T, atol=tol, rtol=0):
        raise NotAStateError("density operator is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise NotAStateError(f"density operator has trace {np.trace(rho).real:.3g}, expected 1")
    if np.linalg.eigvalsh((rho + rho.conj().T) / 2).min() < -tol:
        raise NotAStateError("density operator has a negative eigenvalue")
    return spec


def _realify(values: np.ndarray, strict: bool, what: str) -> np.ndarray:
    resid = np.max(np.abs(values.imag), initial=0.0)
    if resid <= IMAG_TOL:
        return np.ascontiguousarray(values.real)
    if strict:
        raise NotHermitianError(f"{what} (imaginary residue {resid:.2e})")
    return values


def wigner_of_operator(x: np.ndarray, dims=None, strict: bool = True) -> np.ndarray:
    """Wigner vector ``W_X(u) = tr[A_u X] / D`` in canonical point order.

    Raises ``NotHermitianError`` for a non-Hermitian ``x`` unless ``strict`` is
    false, in which case the complex vector is returned.
    """
    x = np.asarray(x, dtype=complex)
    spec = default_dims(x, dims)
    a = phase_point_operators(spec)
    w = np.einsum("kij,ji->k", a, x) / spec.total
    return _realify(w, strict, "complex Wigner vector")


def operator_from_wigner(w: np.ndarray, dims=None) -> np.ndarray:
    """Inverse of :func:`wigner_of_operator`: ``sum_u w(u) A_u``."""
    w = np.asarray(w)
    if w.ndim != 1:
        raise ValueError("Wigner vector must be one-dimensional")
    if dims is None:
        d = int(round(np.sqrt(w.size)))
        if d * d != w.size:
            raise ValueError(f"length {w.size} is not a square")
        dims = d
    spec = as_dimspec(dims)
    if w.size != spec.n_points:
        raise ValueError(f"Wigner vector of length {w.size} does not match dims {spec.dims}")
    return np.einsum("k,kij->ij", w, phase_point_operators(spec))


def wigner_of_map(choi: Choi, strict: bool = True) -> np.ndarray:
    """Stochastic Wigner matrix with entries ``tr[(A_u^T (x) A_v) J] / D_B`` at ``(v, u)``."""
    a_in = phase_point_operators(choi.dims_in)
    a_out = phase_point_operators(choi.dims_out)
    j = choi.tensor()
    # tr[(A^T (x) B) J] = sum A[i,j] B[l,k] J[i,k,j,l]
    tmp = np.einsum("uij,ikjl->ukl", a_in, j)
    w = np.einsum("vlk,ukl->vu", a_out, tmp) / choi.d_out
    return _realify(w, strict, "not Hermitian-preserving")


def apply_stochastic(w_map: np.ndarray, w: np.ndarray) -> np.ndarray:
    w_map = np.asarray(w_map)
    w = np.asarray(w)
    if w_map.ndim != 2 or w.ndim != 1 or w_map.shape[1] != w.shape[0]:
        raise ValueError(f"cannot apply {w_map.shape} matrix to vector of shape {w.shape}")
    return w_map @ w


def wigner_norm(rho: np.ndarray, dims=None) -> float:
    """l1-norm (sum negativity) of the Wigner vector."""
    return float(np.abs(wigner_of_operator(rho, dims)).sum())


def mana(rho: np.ndarray, dims=None) -> float:
    """Base-2 mana ``log2 sum_u |W_rho(u)|``."""
    spec = check_state(rho, dims)
    # rounding can push the norm a hair below 1 for Wigner-positive states
    return max(float(np.log2(wigner_norm(rho, spec))), 0.0)

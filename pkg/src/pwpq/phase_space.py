"""Heisenberg-Weyl and phase-space point operators for odd-dimensional qudits.

Phase points of a single qudit are flattened as ``u1 * d + u2``. For a
composite system the flattened index runs over subsystems in row-major
tensor order, so the point operator at index ``k`` is the Kronecker product of
the single-system operators at the digits of ``k`` in base ``(d1**2, d2**2, ...)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DimSpec",
    "PhasePoint",
    "as_dimspec",
    "shift_boost",
    "weyl_operator",
    "phase_point_operator",
    "phase_point_operators",
    "phase_points",
    "point_index",
]

PhasePoint = tuple[tuple[int, int], ...]


def _check_odd(d: int) -> int:
    if int(d) != d or d < 3 or d % 2 == 0:
        raise ValueError(f"dimension must be an odd integer >= 3, got {d!r}")
    return int(d)


@dataclass(frozen=True)
class DimSpec:
    """Ordered local dimensions of a (possibly composite) odd-dimensional system."""

    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.dims) == 0:
            raise ValueError("DimSpec needs at least one subsystem")
        object.__setattr__(self, "dims", tuple(_check_odd(d) for d in self.dims))

    @property
    def total(self) -> int:
        return int(np.prod(self.dims))

    @property
    def n_points(self) -> int:
        return self.total**2

    def __len__(self) -> int:
        return len(self.dims)

    def __str__(self) -> str:
        return "x".join(str(d) for d in self.dims)


def as_dimspec(dims: DimSpec | int | Iterable[int]) -> DimSpec:
    if isinstance(dims, DimSpec):
        return dims
    if isinstance(dims, (int, np.integer)):
        return DimSpec((int(dims),))
    return DimSpec(tuple(int(d) for d in dims))


@lru_cache(maxsize=None)
def _shift_boost(d: int) -> tuple[np.ndarray, np.ndarray]:
    x = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    z = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    x.setflags(write=False)
    z.setflags(write=False)
    return x, z


def shift_boost(d: int) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(X, Z)`` with ``X|j> = |j+1 mod d>`` and ``Z|j> = w**j |j>``."""
    return _shift_boost(_check_odd(d))


def weyl_operator(d: int, u: tuple[int, int]) -> np.ndarray:
    """Heisenberg-Weyl operator ``tau**(-u1*u2) Z**u1 X**u2`` with ``tau = exp((d+1) pi i / d)``."""
    d = _check_odd(d)
    if len(u) != 2:
        raise ValueError(f"single-qudit phase point needs two coordinates, got {u!r}")
    u1, u2 = int(u[0]) % d, int(u[1]) % d
    x, z = shift_boost(d)
    # tau**d == 1 for odd d, so the exponent may be reduced mod d
    phase = np.exp(-1j * np.pi * (d + 1) * ((u1 * u2) % d) / d)
    return phase * np.linalg.matrix_power(z, u1) @ np.linalg.matrix_power(x, u2)


@lru_cache(maxsize=None)
def _single_stack(d: int) -> np.ndarray:
    ts = [weyl_operator(d, (u1, u2)) for u1 in range(d) for u2 in range(d)]
    a0 = sum(ts) / d
    stack = np.array([t @ a0 @ t.conj().T for t in ts])
    stack.setflags(write=False)
    return stack


@lru_cache(maxsize=None)
def _composite_stack(dims: tuple[int, ...]) -> np.ndarray:
    stack = _single_stack(dims[0])
    for d in dims[1:]:
        other = _single_stack(d)
        # kron over the operator axes, outer product over the point axis
        stack = np.einsum("aij,bkl->abikjl", stack, other).reshape(
            stack.shape[0] * other.shape[0],
            stack.shape[1] * other.shape[1],
            stack.shape[2] * other.shape[2],
        )
    stack = np.ascontiguousarray(stack)
    stack.setflags(write=False)
    return stack


def phase_point_operators(dims: DimSpec | int | Iterable[int]) -> np.ndarray:
    """All point operators as a read-only array of shape ``(D**2, D, D)`` in canonical order."""
    spec = as_dimspec(dims)
    return _composite_stack(spec.dims)


def phase_points(dims: DimSpec | int | Iterable[int]) -> list[PhasePoint]:
    """Phase points in canonical flattened order."""
    spec = as_dimspec(dims)
    per_sys = [[(u1, u2) for u1 in range(d) for u2 in range(d)] for d in spec.dims]
    return [tuple(p) for p in product(*per_sys)]


def point_index(dims: DimSpec | int | Iterable[int], u: Sequence) -> int:
    """Flattened index of a phase point. ``u`` is ``(u1, u2)`` or a tuple of such pairs."""
    spec = as_dimspec(dims)
    coords = (tuple(u),) if len(u) == 2 and np.isscalar(u[0]) else tuple(tuple(c) for c in u)
    if len(coords) != len(spec):
        raise ValueError(f"phase point {u!r} does not match dimensions {spec.dims}")
    idx = 0
    for (u1, u2), d in zip(coords, spec.dims):
        if not (0 <= u1 < d and 0 <= u2 < d):
            raise ValueError(f"coordinates {(u1, u2)} out of range for d={d}")
        idx = idx * d * d + u1 * d + u2
    return idx


def phase_point_operator(dims: DimSpec | int | Iterable[int], u: Sequence) -> np.ndarray:
    """The point operator ``A_u = T_u A_0 T_u^dagger`` (tensor product for composites)."""
    return phase_point_operators(dims)[point_index(dims, u)]

"""Qutrit magic states and the plain-text state file format.

State files look like::

    dims 3
    kind vector
    0:0 0.7071067811865476:0 -0.7071067811865476:0

with one whitespace-separated ``re:im`` row per matrix row for ``kind density``.
"""

from __future__ import annotations

from functools import reduce
from pathlib import Path

import numpy as np

from .phase_space import DimSpec, as_dimspec

__all__ = [
    "STATE_NAMES",
    "StateFormatError",
    "ket",
    "named_state",
    "read_state",
    "write_state",
    "qft3",
]

STATE_NAMES = ("strange", "norrell", "tmagic", "hmagic", "maximally_mixed", "basis_0", "basis_1", "basis_2")

NORM_TOL = 1e-6


class StateFormatError(ValueError):
    pass


def qft3() -> np.ndarray:
    w = np.exp(2j * np.pi / 3)
    j, k = np.meshgrid(np.arange(3), np.arange(3), indexing="ij")
    return w ** (j * k) / np.sqrt(3)


def _h_ket() -> np.ndarray:
    vals, vecs = np.linalg.eig(qft3())
    close = np.abs(vals - 1) < 1e-8
    if close.sum() != 1:
        raise RuntimeError(f"+1 eigenspace of QFT_3 has dimension {close.sum()}, expected 1")
    v = vecs[:, np.argmax(close)]
    lead = v[np.argmax(np.abs(v) > 1e-12)]
    v = v * (abs(lead) / lead)
    return v / np.linalg.norm(v)


def ket(name: str, dim: int = 3) -> np.ndarray:
    """State vector for a named pure state. Only the basis states exist outside ``dim = 3``."""
    if name.startswith("basis_"):
        k = int(name.split("_", 1)[1])
        if not 0 <= k < dim:
            raise ValueError(f"basis index {k} out of range for dim {dim}")
        v = np.zeros(dim, dtype=complex)
        v[k] = 1
        return v
    if dim != 3:
        raise ValueError(f"state {name!r} is only defined for qutrits")
    if name == "strange":
        return np.array([0, 1, -1], dtype=complex) / np.sqrt(2)
    if name == "norrell":
        return np.array([-1, 2, -1], dtype=complex) / np.sqrt(6)
    if name == "tmagic":
        z = np.exp(2j * np.pi / 9)
        return np.array([z, 1, z.conjugate()]) / np.sqrt(3)
    if name == "hmagic":
        return _h_ket()
    raise ValueError(f"unknown state {name!r}; choose from {', '.join(STATE_NAMES)}")


def named_state(name: str, copies: int = 1, dim: int = 3) -> np.ndarray:
    """Density operator of ``copies`` tensor copies of a named state."""
    if copies < 1:
        raise ValueError("copies must be >= 1")
    if name == "maximally_mixed":
        if dim % 2 == 0 or dim < 3:
            raise ValueError(f"dimension must be odd and >= 3, got {dim}")
        rho = np.eye(dim, dtype=complex) / dim
    else:
        v = ket(name, dim)
        rho = np.outer(v, v.conj())
    return reduce(np.kron, [rho] * copies)


def _fmt(z: complex) -> str:
    return f"{z.real!r}:{z.imag!r}"


def write_state(path, state: np.ndarray, dims) -> None:
    """Write a vector (1-D) or density matrix (2-D) in the text format."""
    spec = as_dimspec(dims)
    state = np.asarray(state, dtype=complex)
    kind = "vector" if state.ndim == 1 else "density"
    if state.shape[0] != spec.total:
        raise ValueError(f"state of shape {state.shape} does not match dims {spec.dims}")
    rows = [state] if state.ndim == 1 else list(state)
    lines = [f"dims {' '.join(map(str, spec.dims))}", f"kind {kind}"]
    lines += [" ".join(_fmt(complex(z)) for z in row) for row in rows]
    Path(path).write_text("\n".join(lines) + "\n")


def _parse_complex(tok: str) -> complex:
    re_s, sep, im_s = tok.partition(":")
    if not sep:
        raise StateFormatError(f"expected re:im pair, got {tok!r}")
    try:
        return complex(float(re_s), float(im_s))
    except ValueError as exc:
        raise StateFormatError(f"bad number in {tok!r}") from exc


def read_state(path) -> tuple[np.ndarray, DimSpec]:
    """Read a state file and return ``(density matrix, dims)``."""
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if len(lines) < 3:
        raise StateFormatError("state file needs a dims line, a kind line and data")
    head = lines[0].split()
    if head[0] != "dims" or len(head) < 2:
        raise StateFormatError("first line must be 'dims d1 d2 ...'")
    try:
        spec = DimSpec(tuple(int(t) for t in head[1:]))
    except ValueError as exc:
        raise StateFormatError(str(exc)) from exc
    kind = lines[1].split()
    if len(kind) != 2 or kind[0] != "kind" or kind[1] not in ("vector", "density"):
        raise StateFormatError("second line must be 'kind vector' or 'kind density'")
    rows = [[_parse_complex(t) for t in ln.split()] for ln in lines[2:]]
    n = spec.total
    if kind[1] == "vector":
        if len(rows) != 1 or len(rows[0]) != n:
            raise StateFormatError(f"vector must be a single line of {n} entries")
        v = np.array(rows[0])
        if abs(np.linalg.norm(v) - 1) > NORM_TOL:
            raise StateFormatError(f"vector norm {np.linalg.norm(v):.6g} is not 1")
        return np.outer(v, v.conj()), spec
    if len(rows) != n or any(len(r) != n for r in rows):
        raise StateFormatError(f"density matrix must be {n} rows of {n} entries")
    rho = np.array(rows)
    if abs(np.trace(rho) - 1) > NORM_TOL:
        raise StateFormatError(f"density matrix trace {np.trace(rho).real:.6g} is not 1")
    if not np.allclose(rho, rho.conj().T, atol=NORM_TOL, rtol=0):
        raise StateFormatError("density matrix is not Hermitian")
    return rho, spec

"""Dense linear algebra and entropy primitives for operators on a few qubits.

Kets are 1-D complex arrays, operators are 2-D square arrays. Qubit 0 is the
leftmost tensor factor. All logarithms are base 2.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.special import xlogy

HERMITIAN_TOL = 1e-9
EIG_CLAMP = 1e-9
MAX_DIM = 2**32

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
#: sigma^0..sigma^3 with sigma^0 the identity
PAULIS = (I2, SIGMA_X, SIGMA_Y, SIGMA_Z)

_LN2 = np.log(2.0)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues sorted descending, with matching eigenvector columns if requested."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None

    def reconstruct(self) -> np.ndarray:
        if self.eigenvectors is None:
            raise ValueError("spectrum was computed without eigenvectors")
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def num_qubits(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 1 or 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def kron(*ops: np.ndarray) -> np.ndarray:
    """Tensor product of any number of operators or kets, left to right."""
    if not ops:
        raise ValueError("kron needs at least one operand")
    size = 1
    for op in ops:
        size *= int(np.asarray(op).shape[0])
    if size > MAX_DIM:
        raise OverflowError(f"tensor product dimension {size} exceeds {MAX_DIM}")
    return functools.reduce(np.kron, ops)


def ket_to_dm(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def as_density_matrix(state: np.ndarray) -> np.ndarray:
    """Promote a ket to its projector; pass density matrices through."""
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        return ket_to_dm(state)
    if state.ndim != 2 or state.shape[0] != state.shape[1]:
        raise ValueError(f"expected a ket or a square matrix, got shape {state.shape}")
    return state


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.abs(m - m.conj().T).max() <= tol


def is_density_matrix(rho: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    rho = np.asarray(rho)
    if not is_hermitian(rho, tol):
        return False
    if abs(np.trace(rho).real - 1.0) > tol:
        return False
    return np.linalg.eigvalsh(rho).min() >= -tol


def is_normalized(psi: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return abs(np.vdot(psi, psi).real - 1.0) <= tol


def partial_trace(state: np.ndarray, keep: Iterable[int], n_qubits: int | None = None) -> np.ndarray:
    """Reduced density matrix on the qubits in ``keep``, in the order listed.

    ``state`` may be a ket or a density matrix.
    """
    state = np.asarray(state, dtype=complex)
    dim = state.shape[0]
    n = num_qubits(dim) if n_qubits is None else n_qubits
    if 2**n != dim:
        raise ValueError(f"state dimension {dim} does not match {n} qubits")
    keep = list(dict.fromkeys(int(k) for k in keep))
    if not keep:
        raise ValueError("keep must be non-empty")
    if min(keep) < 0 or max(keep) >= n:
        raise IndexError(f"qubit indices {keep} out of range for {n} qubits")
    traced = [q for q in range(n) if q not in keep]
    dk = 2 ** len(keep)
    if state.ndim == 1:
        psi = state.reshape((2,) * n).transpose(keep + traced).reshape(dk, -1)
        return psi @ psi.conj().T
    rho = state.reshape((2,) * (2 * n))
    rho = rho.transpose(keep + traced + [n + q for q in keep] + [n + q for q in traced])
    dt = 2 ** len(traced)
    rho = rho.reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", rho)


def hermitian_eig(m: np.ndarray, vectors: bool = False, tol: float = HERMITIAN_TOL) -> Spectrum:
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m, tol):
        raise ValueError("matrix is not Hermitian within tolerance")
    m = 0.5 * (m + m.conj().T)
    if vectors:
        w, v = np.linalg.eigh(m)
        return Spectrum(w[::-1].copy(), v[:, ::-1].copy())
    return Spectrum(np.linalg.eigvalsh(m)[::-1].copy())


def entropy_terms(p: np.ndarray) -> np.ndarray:
    """Elementwise -x log2 x, with 0 log 0 = 0 and tiny negatives clipped."""
    p = np.clip(np.asarray(p, dtype=float), 0.0, None)
    return -xlogy(p, p) / _LN2


def spectral_entropy(eigenvalues: np.ndarray, axis: int = -1) -> np.ndarray:
    """Entropy in bits of (batches of) eigenvalue lists; no validation."""
    return entropy_terms(eigenvalues).sum(axis=axis)


def von_neumann_entropy(rho: np.ndarray) -> float:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim == 1:
        if not is_normalized(rho):
            raise ValueError("ket is not normalized")
        return 0.0
    w = hermitian_eig(rho).eigenvalues
    if w[-1] < -EIG_CLAMP:
        raise ValueError(f"matrix has negative eigenvalue {w[-1]:.3g}")
    return float(spectral_entropy(w))


def _check_distribution(p: Sequence[float], tol: float = HERMITIAN_TOL) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("probability list must be a non-empty 1-D sequence")
    if p.min() < -tol or abs(p.sum() - 1.0) > tol:
        raise ValueError(f"not a probability distribution: {p}")
    return p


def shannon_entropy(p: Sequence[float]) -> float:
    return float(spectral_entropy(_check_distribution(p)))


def binary_entropy(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary entropy needs x in [0, 1], got {x}")
    return float(entropy_terms(x) + entropy_terms(1.0 - x))


def inverse_binary_entropy(h: float, tol: float = 1e-12) -> float:
    """The x in [1/2, 1] with binary_entropy(x) == h, by bisection."""
    if not -tol <= h <= 1.0 + tol:
        raise ValueError(f"binary entropy value {h} outside [0, 1]")
    lo, hi = 0.5, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if binary_entropy(mid) > h:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def majorizes(p: Sequence[float], q: Sequence[float], tol: float = HERMITIAN_TOL) -> bool:
    """True iff sorted partial sums of ``p`` dominate those of ``q``."""
    p = _check_distribution(p)
    q = _check_distribution(q)
    n = max(p.size, q.size)
    p = np.sort(np.pad(p, (0, n - p.size)))[::-1]
    q = np.sort(np.pad(q, (0, n - q.size)))[::-1]
    return bool(np.all(np.cumsum(p) >= np.cumsum(q) - tol))

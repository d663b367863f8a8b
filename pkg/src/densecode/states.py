"""Named state families, sender/receiver layouts and seeded Haar sampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qmat

#: bit generator behind every sample stream; recorded in experiment output
RNG_ALGORITHM = "numpy.PCG64/SeedSequence"


@dataclass(frozen=True)
class SystemLayout:
    """Assignment of qubit indices to the senders and the single receiver."""

    n_qubits: int
    senders: tuple[int, ...]
    receiver: int

    def __post_init__(self):
        object.__setattr__(self, "senders", tuple(int(s) for s in self.senders))
        parties = set(self.senders) | {self.receiver}
        if len(self.senders) < 1 or self.receiver in self.senders:
            raise ValueError("need at least one sender, disjoint from the receiver")
        if len(parties) != len(self.senders) + 1 or parties != set(range(self.n_qubits)):
            raise ValueError(f"senders {self.senders} and receiver {self.receiver} "
                             f"must partition range({self.n_qubits})")

    @classmethod
    def default(cls, n_qubits: int = 3) -> "SystemLayout":
        """Senders are qubits 0..n-2, the receiver is the last qubit."""
        return cls(n_qubits, tuple(range(n_qubits - 1)), n_qubits - 1)

    @property
    def n_senders(self) -> int:
        return len(self.senders)


def make_rng(seed: int, stream: int | None = None) -> np.random.Generator:
    """Generator for ``seed``; ``stream`` selects an independent deterministic substream."""
    entropy = [int(seed)] if stream is None else [int(seed), int(stream)]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def basis_ket(bits: str) -> np.ndarray:
    psi = np.zeros(2 ** len(bits), dtype=complex)
    psi[int(bits, 2)] = 1.0
    return psi


def gghz(n_parties: int, alpha: float, phi: float = 0.0) -> np.ndarray:
    """sqrt(alpha)|0...0> + sqrt(1-alpha) e^{i phi} |1...1> on ``n_parties`` qubits."""
    if n_parties < 2:
        raise ValueError("gGHZ needs at least two parties")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    psi = np.zeros(2**n_parties, dtype=complex)
    psi[0] = np.sqrt(alpha)
    psi[-1] = np.sqrt(1.0 - alpha) * np.exp(1j * phi)
    return psi


def ghz(n_parties: int = 3, sign: int = +1) -> np.ndarray:
    psi = np.zeros(2**n_parties, dtype=complex)
    psi[0] = 1.0
    psi[-1] = sign
    return psi / np.sqrt(2.0)


def w_state(n_parties: int = 3) -> np.ndarray:
    psi = np.zeros(2**n_parties, dtype=complex)
    for k in range(n_parties):
        psi[1 << k] = 1.0
    return psi / np.sqrt(n_parties)


def haar_pure(n_qubits: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random ket: normalized vector of i.i.d. standard complex Gaussians."""
    if not 1 <= n_qubits <= 5:
        raise ValueError("haar_pure supports 1 to 5 qubits")
    dim = 2**n_qubits
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return psi / np.linalg.norm(psi)


def haar_pure_batch(n_qubits: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` Haar kets as rows; row k equals ``haar_pure`` on the k-th draw of ``rng``."""
    return np.array([haar_pure(n_qubits, rng) for _ in range(count)])


def haar_rank2_mixed(n_qubits: int, rng: np.random.Generator) -> np.ndarray:
    """Trace one ancilla qubit (last factor) out of a Haar (n+1)-qubit pure state."""
    if not 2 <= n_qubits <= 4:
        raise ValueError("haar_rank2_mixed supports 2 to 4 qubits")
    parent = haar_pure(n_qubits + 1, rng)
    return qmat.partial_trace(parent, range(n_qubits), n_qubits + 1)


def ghz_prime_mixture(q: float) -> np.ndarray:
    """q |GHZ><GHZ| + (1-q) |GHZ'><GHZ'| with |GHZ'> = (|000> - |111>)/sqrt 2."""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [0, 1], got {q}")
    return q * qmat.ket_to_dm(ghz(3, +1)) + (1.0 - q) * qmat.ket_to_dm(ghz(3, -1))


def rank8_family(rho: np.ndarray, p: float) -> np.ndarray:
    """(1-p) rho + p I/8 for a three-qubit ``rho``."""
    rho = qmat.as_density_matrix(rho)
    if rho.shape != (8, 8):
        raise ValueError("rank8_family expects a three-qubit state")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return (1.0 - p) * rho + (p / 8.0) * np.eye(8)

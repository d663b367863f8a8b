"""Pauli noise models acting on the senders' qubits, as explicit Kraus sums."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Callable, Mapping, Union

import numpy as np

from . import qmat
from .states import SystemLayout

WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class SinglePauli:
    """One qubit rotated by sigma_x, sigma_y, sigma_z with the given probabilities."""

    lx: float
    ly: float
    lz: float

    def __post_init__(self):
        w = (self.lx, self.ly, self.lz)
        if min(w) < 0 or sum(w) > 1 + WEIGHT_TOL:
            raise ValueError(f"invalid Pauli weights {w}")

    @classmethod
    def depolarizing(cls, p: float) -> "SinglePauli":
        return cls(p / 3, p / 3, p / 3)

    @property
    def weights(self) -> tuple[float, float, float, float]:
        return (1.0 - self.lx - self.ly - self.lz, self.lx, self.ly, self.lz)


@dataclass(frozen=True)
class FullyCorrelatedPauli:
    """The same Pauli sigma^m hits every sender with probability q[m]."""

    q: tuple[float, float, float, float]

    def __post_init__(self):
        q = tuple(float(x) for x in self.q)
        object.__setattr__(self, "q", q)
        if len(q) != 4 or min(q) < 0 or abs(sum(q) - 1.0) > WEIGHT_TOL:
            raise ValueError(f"correlated Pauli weights must be 4 probabilities summing to 1, got {q}")

    @property
    def flip_probability(self) -> float:
        """q1 + q2: weight of the Paulis that anticommute with sigma_z."""
        return self.q[1] + self.q[2]


@dataclass(frozen=True)
class UncorrelatedDepolarizing:
    """Independent depolarizing channel of strength ``p`` on each sender."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"depolarizing strength must lie in [0, 1], got {self.p}")


NoiseSpec = Union[SinglePauli, FullyCorrelatedPauli, UncorrelatedDepolarizing]


def noise_entropy(spec: NoiseSpec) -> float:
    """Noise measure used on sweep axes: H({q}) correlated, 2 H(p) uncorrelated."""
    if isinstance(spec, FullyCorrelatedPauli):
        return qmat.shannon_entropy(spec.q)
    if isinstance(spec, UncorrelatedDepolarizing):
        return 2.0 * qmat.binary_entropy(spec.p)
    return qmat.shannon_entropy(spec.weights)


def _on_qubits(n_qubits: int, factors: Mapping[int, np.ndarray]) -> np.ndarray:
    return qmat.kron(*(factors.get(k, qmat.I2) for k in range(n_qubits)))


def kraus_operators(spec: NoiseSpec, layout: SystemLayout | None = None):
    """(weights, operators) such that the channel is sum_k w_k K_k rho K_k^dagger.

    Operators act on the full register described by ``layout``; the receiver
    always gets the identity.
    """
    if isinstance(spec, SinglePauli):
        if layout is None:
            return np.array(spec.weights), np.array(qmat.PAULIS)
        if layout.n_senders != 1:
            raise ValueError("a single-qubit Pauli channel needs exactly one sender")
        ops = [_on_qubits(layout.n_qubits, {layout.senders[0]: p}) for p in qmat.PAULIS]
        return np.array(spec.weights), np.array(ops)
    if layout is None:
        raise ValueError(f"{type(spec).__name__} needs a system layout")
    n = layout.n_qubits
    if isinstance(spec, FullyCorrelatedPauli):
        ops = [_on_qubits(n, {s: qmat.PAULIS[m] for s in layout.senders}) for m in range(4)]
        return np.array(spec.q), np.array(ops)
    if isinstance(spec, UncorrelatedDepolarizing):
        single = (1.0 - spec.p, spec.p / 3, spec.p / 3, spec.p / 3)
        weights, ops = [], []
        for ms in itertools.product(range(4), repeat=layout.n_senders):
            weights.append(np.prod([single[m] for m in ms]))
            ops.append(_on_qubits(n, {s: qmat.PAULIS[m] for s, m in zip(layout.senders, ms)}))
        return np.array(weights), np.array(ops)
    raise TypeError(f"unknown noise spec {spec!r}")


def apply_kraus(rho: np.ndarray, weights: np.ndarray, ops: np.ndarray) -> np.ndarray:
    rho = qmat.as_density_matrix(rho)
    return np.einsum("k,kij,jl,kml->im", weights, ops, rho, ops.conj(), optimize=True)


def apply_channel(rho: np.ndarray, spec: NoiseSpec, layout: SystemLayout | None = None) -> np.ndarray:
    return apply_kraus(rho, *kraus_operators(spec, layout))


def pauli_single(rho: np.ndarray, spec: SinglePauli) -> np.ndarray:
    rho = qmat.as_density_matrix(rho)
    if rho.shape != (2, 2):
        raise ValueError("pauli_single acts on one qubit")
    return apply_channel(rho, spec)


def fully_correlated_pauli(rho: np.ndarray, layout: SystemLayout, q) -> np.ndarray:
    return apply_channel(rho, FullyCorrelatedPauli(tuple(q)), layout)


def uncorrelated_depolarizing(rho: np.ndarray, layout: SystemLayout, p: float) -> np.ndarray:
    return apply_channel(rho, UncorrelatedDepolarizing(p), layout)


def pauli_strings(layout: SystemLayout) -> list[np.ndarray]:
    """All 4^N Pauli strings on the senders, identity on the receiver."""
    return [
        _on_qubits(layout.n_qubits, dict(zip(layout.senders, ms)))
        for ms in itertools.product(qmat.PAULIS, repeat=layout.n_senders)
    ]


def _random_density_matrix(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def covariance_check(
    channel: NoiseSpec | Callable[[np.ndarray], np.ndarray],
    trials: int,
    rng: np.random.Generator,
    layout: SystemLayout | None = None,
    atol: float = 1e-10,
) -> bool:
    """Whether the channel commutes with conjugation by every sender Pauli string.

    ``channel`` is a noise spec or any callable on density matrices. A single
    Pauli spec is checked on one qubit against the four Paulis; other channels
    use ``layout`` (three qubits, receiver last, by default).
    """
    if isinstance(channel, SinglePauli):
        spec = channel
        channel = lambda r: pauli_single(r, spec)
        strings, dim = list(qmat.PAULIS), 2
    else:
        layout = SystemLayout.default(3) if layout is None else layout
        if not callable(channel):
            spec = channel
            channel = lambda r: apply_channel(r, spec, layout)
        strings, dim = pauli_strings(layout), 2**layout.n_qubits
    for _ in range(trials):
        rho = _random_density_matrix(dim, rng)
        out = channel(rho)
        for w in strings:
            lhs = channel(w @ rho @ w.conj().T)
            if np.abs(lhs - w @ out @ w.conj().T).max() > atol:
                return False
    return True


def choi_matrix(channel: Callable[[np.ndarray], np.ndarray], n_qubits: int) -> np.ndarray:
    """(id (x) channel) applied to the maximally entangled state on two copies."""
    dim = 2**n_qubits
    choi = np.zeros((dim * dim, dim * dim), dtype=complex)
    for i in range(dim):
        for j in range(dim):
            unit = np.zeros((dim, dim), dtype=complex)
            unit[i, j] = 1.0
            choi += np.kron(unit, channel(unit))
    return choi / dim


def noise_to_config(spec: NoiseSpec) -> dict[str, str]:
    if isinstance(spec, FullyCorrelatedPauli):
        return {"channel": "correlated_pauli", "q": json.dumps(list(spec.q))}
    if isinstance(spec, UncorrelatedDepolarizing):
        return {"channel": "depolarizing", "p": repr(spec.p)}
    if isinstance(spec, SinglePauli):
        return {"channel": "pauli", "lambdas": json.dumps([spec.lx, spec.ly, spec.lz])}
    raise TypeError(f"unknown noise spec {spec!r}")


def _floats(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    text = str(text).strip().strip("[]")
    return [float(x) for x in text.split(",") if x.strip()]


def noise_from_config(cfg: Mapping[str, object]) -> NoiseSpec | None:
    """Parse ``channel=...`` plus ``q=[...]`` / ``p=...`` / ``lambdas=[...]`` keys."""
    kind = cfg.get("channel")
    if kind in (None, "", "none"):
        return None
    if kind == "correlated_pauli":
        return FullyCorrelatedPauli(tuple(_floats(cfg["q"])))
    if kind == "depolarizing":
        return UncorrelatedDepolarizing(float(cfg["p"]))
    if kind == "pauli":
        return SinglePauli(*_floats(cfg["lambdas"]))
    raise ValueError(f"unknown channel {kind!r}")

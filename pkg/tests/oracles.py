"""Slow, direct reference implementations used only to cross-check the library."""

from __future__ import annotations

import itertools
import math

import numpy as np

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def entropy_bits(probs) -> float:
    return -sum(p * math.log2(p) for p in np.real(probs) if p > 1e-15)


def binary_entropy(x: float) -> float:
    return entropy_bits([x, 1 - x])


def reduced(rho: np.ndarray, keep: list[int], n: int) -> np.ndarray:
    """Partial trace by summing over basis states of the traced qubits one by one."""
    traced = [q for q in range(n) if q not in keep]
    dk = 2 ** len(keep)
    out = np.zeros((dk, dk), dtype=complex)
    for bits_t in itertools.product((0, 1), repeat=len(traced)):
        for a, bits_a in enumerate(itertools.product((0, 1), repeat=len(keep))):
            for b, bits_b in enumerate(itertools.product((0, 1), repeat=len(keep))):
                ia = [0] * n
                ib = [0] * n
                for q, v in zip(keep, bits_a):
                    ia[q] = v
                for q, v in zip(keep, bits_b):
                    ib[q] = v
                for q, v in zip(traced, bits_t):
                    ia[q] = ib[q] = v
                row = int("".join(map(str, ia)), 2)
                col = int("".join(map(str, ib)), 2)
                out[a, b] += rho[row, col]
    return out


def concurrence(rho: np.ndarray) -> float:
    """Square roots of the (non-Hermitian) spectrum of rho times its spin flip."""
    yy = np.kron(SY, SY)
    flipped = yy @ rho.conj() @ yy
    ev = np.sqrt(np.clip(np.sort(np.linalg.eigvals(rho @ flipped).real)[::-1], 0, None))
    return max(0.0, ev[0] - ev[1] - ev[2] - ev[3])


def discord_grid(rho: np.ndarray, resolution: int = 512) -> float:
    """Discord with the second qubit measured, minimized over a dense (theta, phi) grid.

    Each grid point builds the projector |v><v| explicitly and contracts it
    against rho to get the unnormalized post-measurement state of qubit 0.
    """
    rho_a = reduced(rho, [0], 2)
    rho_b = reduced(rho, [1], 2)
    mutual = (entropy_bits(np.linalg.eigvalsh(rho_a)) + entropy_bits(np.linalg.eigvalsh(rho_b))
              - entropy_bits(np.linalg.eigvalsh(rho)))
    t, f = np.meshgrid(np.linspace(0, np.pi, resolution),
                       np.linspace(0, 2 * np.pi, resolution, endpoint=False), indexing="ij")
    t, f = t.ravel(), f.ravel()
    v = np.stack([np.cos(t / 2), np.exp(1j * f) * np.sin(t / 2)], axis=1)
    w = np.stack([-np.exp(-1j * f) * np.sin(t / 2), np.cos(t / 2)], axis=1)
    r4 = rho.reshape(2, 2, 2, 2)  # [a, b, a', b']
    cond = np.zeros(t.size)
    for vec in (v, w):
        proj = vec[:, :, None] * vec.conj()[:, None, :]  # [g, b, b']
        left = np.einsum("gcb,abde->gacde", proj, r4)  # (I x P) rho
        both = np.einsum("gacde,gef->gacdf", left, proj)  # (I x P) rho (I x P)
        post_a = np.einsum("gacdc->gad", both)  # trace out the measured qubit
        prob = np.einsum("gaa->g", post_a).real
        ev = np.linalg.eigvalsh(post_a)
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(ev > 1e-15, -ev * np.log2(np.where(ev > 1e-15, ev, 1.0)), 0.0).sum(1)
            # p S(post/p) = -sum ev log ev + p log p
            terms += np.where(prob > 1e-15, prob * np.log2(np.where(prob > 1e-15, prob, 1.0)), 0.0)
        cond += terms
    classical = entropy_bits(np.linalg.eigvalsh(rho_a)) - cond.min()
    return mutual - classical


def schmidt_max(psi: np.ndarray, part: tuple[int, ...], n: int) -> float:
    """Largest squared Schmidt coefficient across the cut part | rest, via SVD."""
    rest = [q for q in range(n) if q not in part]
    m = psi.reshape((2,) * n).transpose(list(part) + rest).reshape(2 ** len(part), -1)
    return float(np.linalg.svd(m, compute_uv=False)[0] ** 2)


def ggm(psi: np.ndarray, n: int) -> float:
    best = 0.0
    for k in range(1, n // 2 + 1):
        for part in itertools.combinations(range(n), k):
            best = max(best, schmidt_max(psi, part, n))
    return 1.0 - best


def depolarize_qubit(rho: np.ndarray, p: float, qubit: int, n: int) -> np.ndarray:
    """Single-qubit depolarizing channel on one qubit of an n-qubit operator."""
    out = (1 - p) * rho
    for s in (SX, SY, SZ):
        op = np.eye(1)
        for q in range(n):
            op = np.kron(op, s if q == qubit else I2)
        out = out + (p / 3) * op @ rho @ op.conj().T
    return out


def haar_ket_from_unitary(dim: int, seed: int) -> np.ndarray:
    """First column of a Haar unitary (scipy), an independent Haar ket sampler."""
    from scipy.stats import unitary_group

    return unitary_group.rvs(dim, random_state=seed)[:, 0]


def concurrence_mp(rho: np.ndarray, digits: int = 40) -> float:
    """Same spectrum route in extended precision, for rank-deficient inputs."""
    import mpmath

    with mpmath.workdps(digits):
        yy = np.kron(SY, SY)
        r = mpmath.matrix(rho.tolist())
        flipped = mpmath.matrix((yy @ rho.conj() @ yy).tolist())
        ev = mpmath.eig(r * flipped, left=False, right=False)
        lam = sorted((mpmath.sqrt(abs(mpmath.re(e))) for e in ev), reverse=True)
        return float(max(0, lam[0] - lam[1] - lam[2] - lam[3]))

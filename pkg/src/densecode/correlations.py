"""Concurrence, quantum discord, monogamy scores and the generalized geometric measure.

Discord measures one qubit with a rank-1 projective measurement parameterized
by Bloch angles (theta, phi). The minimization over measurements is a dense
angular grid followed by a lockstep simplex polish of the best cells; both run
vectorized over batches of states.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import qmat
from .optimize import DISCORD_DEFAULTS, OptimizerConfig, nelder_mead_batch, warn_unconverged
from .states import SystemLayout

PURITY_TOL = 1e-9
#: discord values below this are treated as an error, not rounding
NEGATIVE_DISCORD_TOL = 1e-6
_RANK_CUTOFF = 1e-13
_GRID_CHUNK = 1 << 20
_YY = qmat.kron(qmat.SIGMA_Y, qmat.SIGMA_Y)


def measurement_projectors(theta: float, phi: float) -> tuple[np.ndarray, np.ndarray]:
    """The two orthogonal rank-1 projectors along Bloch direction (theta, phi)."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    up = np.array([c, np.exp(1j * phi) * s])
    down = np.array([-np.exp(-1j * phi) * s, c])
    return np.outer(up, up.conj()), np.outer(down, down.conj())


def concurrence(rho: np.ndarray) -> float:
    """max(0, l1 - l2 - l3 - l4) over the square-rooted spectrum of rho * spin-flipped rho."""
    rho = qmat.as_density_matrix(rho)
    if rho.shape != (4, 4):
        raise ValueError("concurrence is defined here for two qubits")
    # with rho = W W^dagger, the square roots of the spectrum of rho * flipped rho are
    # the singular values of W^T (Y x Y) W; tiny weights then enter linearly, not as sqrt
    w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    factor = v * np.sqrt(np.clip(w, 0, None))
    lam = np.linalg.svd(factor.T @ _YY @ factor, compute_uv=False)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


# -- discord ------------------------------------------------------------------


def _factorize(rhos: np.ndarray, dim_a: int):
    """Split each rho = W W^dagger into blocks W_b (measured-qubit value b)."""
    w, v = np.linalg.eigh(rhos)
    w = np.clip(w, 0.0, None)
    rank = max(1, int((w > _RANK_CUTOFF).sum(axis=1).max()))
    w, v = w[:, -rank:], v[:, :, -rank:]
    factors = (v * np.sqrt(w)[:, None, :]).reshape(len(rhos), dim_a, 2, rank)
    return w, factors[:, :, 0, :], factors[:, :, 1, :]


def _gram_blocks(w0: np.ndarray, w1: np.ndarray):
    """Fixed matrices whose combinations give each post-measurement block.

    Returns (mats, use_right) with mats[:, a, b] = W_a^dagger W_b when the rank
    is at most the unmeasured dimension (small right Gram), else W_a W_b^dagger.
    """
    dim_a, rank = w0.shape[1], w0.shape[2]
    blocks = (w0, w1)
    if rank <= dim_a:
        mats = [[np.conj(np.swapaxes(blocks[a], 1, 2)) @ blocks[b] for b in range(2)] for a in range(2)]
        return np.array(mats).transpose(2, 0, 1, 3, 4), True
    mats = [[blocks[a] @ np.conj(np.swapaxes(blocks[b], 1, 2)) for b in range(2)] for a in range(2)]
    return np.array(mats).transpose(2, 0, 1, 3, 4), False


def _coefficients(theta: np.ndarray, phi: np.ndarray, use_right: bool):
    """Per-outcome 2x2 coefficient arrays kappa[..., a, b] for both outcomes."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    e = np.exp(1j * phi)
    # amplitudes of <b| on the measured qubit, for the two outcomes
    outcomes = ((c + 0j, np.conj(e) * s), (-e * s, c + 0j))
    out = []
    for x0, x1 in outcomes:
        x = np.stack(np.broadcast_arrays(x0, x1), axis=-1)
        if use_right:
            kappa = np.conj(x)[..., :, None] * x[..., None, :]
        else:
            kappa = x[..., :, None] * np.conj(x)[..., None, :]
        out.append(kappa)
    return out


def _block_entropy_terms(mats: np.ndarray, kappa: np.ndarray) -> np.ndarray:
    """h(eigs(M)) - h(tr M) for M = sum_ab kappa_ab mats_ab; broadcast over leading axes."""
    k = mats.shape[-1]
    if k == 2:
        m00 = np.einsum("...ab,...ab->...", kappa, mats[..., 0, 0]).real
        m11 = np.einsum("...ab,...ab->...", kappa, mats[..., 1, 1]).real
        m01 = np.einsum("...ab,...ab->...", kappa, mats[..., 0, 1])
        tr = m00 + m11
        gap = np.sqrt((m00 - m11) ** 2 + 4 * (m01.real**2 + m01.imag**2))
        eig = qmat.entropy_terms(0.5 * (tr + gap)) + qmat.entropy_terms(0.5 * (tr - gap))
        return eig - qmat.entropy_terms(tr)
    m = np.einsum("...ab,...abij->...ij", kappa, mats)
    if k == 1:
        return np.zeros(m.shape[:-2])
    ev = np.linalg.eigvalsh(m)
    return qmat.spectral_entropy(ev) - qmat.entropy_terms(ev.sum(axis=-1))


def _conditional_entropy(mats: np.ndarray, theta, phi, use_right: bool) -> np.ndarray:
    """Measured conditional entropy sum_i p_i S(rho_{A|i}); mats (..., 2, 2, k, k)."""
    total = 0.0
    for kappa in _coefficients(np.asarray(theta), np.asarray(phi), use_right):
        total = total + _block_entropy_terms(mats, kappa)
    return total


def _angle_grid(resolution: int):
    theta = np.linspace(0.0, np.pi, resolution)
    phi = np.linspace(0.0, 2 * np.pi, resolution, endpoint=False)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    return tt.ravel(), pp.ravel(), (theta[1] - theta[0], phi[1] - phi[0])


def min_conditional_entropy_batch(rhos: np.ndarray, opt: OptimizerConfig = DISCORD_DEFAULTS):
    """Minimum measured conditional entropy with the last qubit measured.

    Returns (values, best_angles, converged) for a stack of density matrices.
    """
    rhos = np.asarray(rhos, dtype=complex)
    nb, dim = rhos.shape[0], rhos.shape[1]
    dim_a = dim // 2
    _, w0, w1 = _factorize(rhos, dim_a)
    mats, use_right = _gram_blocks(w0, w1)
    k = mats.shape[-1]

    tt, pp, steps = _angle_grid(opt.grid_resolution)
    ngrid = tt.size
    nstart = min(opt.restarts, ngrid)
    chunk = max(1, _GRID_CHUNK // (ngrid * k * k))
    starts = np.empty((nb, nstart), dtype=int)
    grid_best = np.empty(nb)
    for lo in range(0, nb, chunk):
        part = mats[lo:lo + chunk, None]
        vals = _conditional_entropy(part, tt[None, :], pp[None, :], use_right)
        idx = np.argpartition(vals, nstart - 1, axis=1)[:, :nstart]
        starts[lo:lo + chunk] = idx
        grid_best[lo:lo + chunk] = np.take_along_axis(vals, idx, axis=1).min(axis=1)

    x0 = np.stack([tt[starts], pp[starts]], axis=-1).reshape(-1, 2)
    owner = np.repeat(np.arange(nb), nstart)

    def objective(points, rows):
        return _conditional_entropy(mats[owner[rows]], points[:, 0], points[:, 1], use_right)

    res = nelder_mead_batch(objective, x0, np.array(steps), opt.xtol, opt.tol, opt.max_iters)
    warn_unconverged(res, "discord measurement search")
    fun = res.fun.reshape(nb, nstart)
    pick = fun.argmin(axis=1)
    polished = fun[np.arange(nb), pick]
    angles = res.x.reshape(nb, nstart, 2)[np.arange(nb), pick]
    converged = res.converged.reshape(nb, nstart).all(axis=1)
    values = np.minimum(polished, grid_best)
    return values, angles, converged


def quantum_discord_batch(rhos: np.ndarray, opt: OptimizerConfig = DISCORD_DEFAULTS) -> np.ndarray:
    """Discord D(A:B) for a stack of states whose last qubit B is measured.

    A may be any number of qubits.
    """
    rhos = np.asarray(rhos, dtype=complex)
    dim = rhos.shape[1]
    n = qmat.num_qubits(dim)
    cond, _, _ = min_conditional_entropy_batch(rhos, opt)
    s_ab = qmat.spectral_entropy(np.linalg.eigvalsh(rhos))
    rho_b = np.einsum("najak->njk", rhos.reshape(-1, dim // 2, 2, dim // 2, 2))
    s_b = qmat.spectral_entropy(np.linalg.eigvalsh(rho_b))
    disc = s_b - s_ab + cond
    if disc.min(initial=0.0) < -NEGATIVE_DISCORD_TOL:
        raise ArithmeticError(f"negative discord {disc.min():.3g} on {n}-qubit input")
    return np.clip(disc, 0.0, None)


def quantum_discord(rho: np.ndarray, measured_side: str = "second",
                    opt: OptimizerConfig = DISCORD_DEFAULTS) -> float:
    """Two-qubit discord with the projective measurement on ``measured_side``."""
    rho = qmat.as_density_matrix(rho)
    if rho.shape != (4, 4):
        raise ValueError("quantum_discord expects a two-qubit state")
    if measured_side == "first":
        rho = qmat.partial_trace(rho, [1, 0])
    elif measured_side != "second":
        raise ValueError("measured_side must be 'first' or 'second'")
    return float(quantum_discord_batch(rho[None], opt)[0])


# -- multipartite measures ----------------------------------------------------


def _is_pure(state: np.ndarray) -> bool:
    state = np.asarray(state)
    if state.ndim == 1:
        return True
    return np.linalg.eigvalsh(state)[-1] > 1.0 - PURITY_TOL


def _require_pure(state: np.ndarray, what: str) -> None:
    if not _is_pure(state):
        raise ValueError(f"{what} is defined here only for pure states")


def tangle_score(psi: np.ndarray, layout: SystemLayout) -> float:
    """4 det(rho_R) - sum_i C^2(rho_{S_i R}), receiver as nodal observer."""
    _require_pure(psi, "tangle_score")
    rho_r = qmat.partial_trace(psi, [layout.receiver], layout.n_qubits)
    total = 4.0 * float(np.linalg.det(rho_r).real)
    for s in layout.senders:
        total -= concurrence(qmat.partial_trace(psi, [s, layout.receiver], layout.n_qubits)) ** 2
    return total


def discord_score_batch(states: np.ndarray, layout: SystemLayout,
                        opt: OptimizerConfig = DISCORD_DEFAULTS) -> np.ndarray:
    """Discord monogamy score for a stack of kets or density matrices.

    Every discord measures the receiver. For pure inputs the N:1 term is S(rho_R).
    """
    states = np.asarray(states, dtype=complex)
    n, r = layout.n_qubits, layout.receiver
    pure = states.ndim == 2
    pairs = [np.array([qmat.partial_trace(st, [s, r], n) for st in states]) for s in layout.senders]
    score = -sum(quantum_discord_batch(p, opt) for p in pairs)
    if pure:
        rho_r = np.array([qmat.partial_trace(st, [r], n) for st in states])
        return score + qmat.spectral_entropy(np.linalg.eigvalsh(rho_r))
    whole = np.array([qmat.partial_trace(st, list(layout.senders) + [r], n) for st in states])
    return score + quantum_discord_batch(whole, opt)


def discord_score(state: np.ndarray, layout: SystemLayout,
                  opt: OptimizerConfig = DISCORD_DEFAULTS) -> float:
    state = np.asarray(state, dtype=complex)
    if state.ndim == 2 and _is_pure(state):
        w, v = np.linalg.eigh(state)
        state = v[:, -1]
    return float(discord_score_batch(state[None], layout, opt)[0])


def bipartition_max_eigenvalues(psi: np.ndarray) -> dict[tuple[int, ...], float]:
    """Largest reduced eigenvalue for each subset of size 1..n//2."""
    _require_pure(psi, "bipartition spectrum")
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim == 2:
        psi = np.linalg.eigh(psi)[1][:, -1]
    n = qmat.num_qubits(psi.shape[0])
    out = {}
    for size in range(1, n // 2 + 1):
        for part in itertools.combinations(range(n), size):
            out[part] = float(np.linalg.eigvalsh(qmat.partial_trace(psi, part, n))[-1])
    return out


def ggm(psi: np.ndarray) -> float:
    """1 minus the largest squared Schmidt coefficient over all bipartitions."""
    psi = np.asarray(psi)
    if qmat.num_qubits(psi.shape[0]) < 2:
        raise ValueError("ggm needs at least two qubits")
    return 1.0 - max(bipartition_max_eigenvalues(psi).values())

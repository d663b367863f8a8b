"""Multiparty dense-coding capacities with unitary encoding.

Capacities are normalized by log2 of the total dimension, so for N sending
qubits and one receiving qubit they lie in [N/(N+1), 1]. The "raw" capacity is
the quantum branch of the max, which drops below N/(N+1) when the shared state
gives no advantage.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import channels, qmat
from .channels import FullyCorrelatedPauli, NoiseSpec, UncorrelatedDepolarizing
from .optimize import ENCODING_DEFAULTS, OptimizerConfig, nelder_mead_batch, warn_unconverged
from .states import SystemLayout, gghz, make_rng

#: strict-inequality guard for dense codeability and the eigenvalue criterion
STRICT_TOL = 1e-9
#: tie tolerance when asking whether the receiver carries the largest marginal eigenvalue
MARGINAL_TIE_TOL = 1e-10
_INITIAL_STEP = 0.5
_ALPHA_MAX = 1.0 - 1e-12


@dataclass(frozen=True)
class CapacityResult:
    capacity: float
    raw_capacity: float
    dense_codeable: bool
    entropy_receiver: float
    entropy_state: float
    n_senders: int
    optimal_unitary_params: np.ndarray | None = None
    converged: bool = True


def _result(n_senders, s_r, s_state, params=None, converged=True) -> CapacityResult:
    floor = n_senders / (n_senders + 1)
    raw = (n_senders + s_r - s_state) / (n_senders + 1)
    return CapacityResult(
        capacity=max(floor, raw),
        raw_capacity=raw,
        dense_codeable=bool(raw > floor + STRICT_TOL),
        entropy_receiver=float(s_r),
        entropy_state=float(s_state),
        n_senders=n_senders,
        optimal_unitary_params=params,
        converged=bool(converged),
    )


def _receiver_state(state, layout: SystemLayout) -> np.ndarray:
    return qmat.partial_trace(state, [layout.receiver], layout.n_qubits)


def _check_state(state, layout: SystemLayout) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    if state.shape[0] != 2**layout.n_qubits:
        raise ValueError(f"state of dimension {state.shape[0]} does not fit {layout}")
    return state


def noiseless_capacity(state: np.ndarray, layout: SystemLayout) -> CapacityResult:
    state = _check_state(state, layout)
    s_r = qmat.von_neumann_entropy(_receiver_state(state, layout))
    return _result(layout.n_senders, s_r, qmat.von_neumann_entropy(state))


def is_dense_codeable(state: np.ndarray, layout: SystemLayout) -> bool:
    return noiseless_capacity(state, layout).dense_codeable


def prop1_necessary(state: np.ndarray, layout: SystemLayout) -> bool:
    """Largest eigenvalue of the whole state strictly above that of the receiver's marginal."""
    state = _check_state(state, layout)
    mu = 1.0 if state.ndim == 1 else qmat.hermitian_eig(state).eigenvalues[0]
    lam = qmat.hermitian_eig(_receiver_state(state, layout)).eigenvalues[0]
    return bool(mu > lam + STRICT_TOL)


# -- local encodings ------------------------------------------------------------


def euler_unitary(a: float, b: float, c: float) -> np.ndarray:
    """Rz(a) Ry(b) Rz(c)."""
    return _euler_batch(np.array([[a, b, c]], dtype=float))[0]


def _euler_batch(angles: np.ndarray) -> np.ndarray:
    """ZYZ unitaries for angles of shape (..., 3) -> (..., 2, 2)."""
    a, b, c = angles[..., 0], angles[..., 1], angles[..., 2]
    cb, sb = np.cos(b / 2), np.sin(b / 2)
    plus, minus = np.exp(-0.5j * (a + c)), np.exp(-0.5j * (a - c))
    u = np.empty(angles.shape[:-1] + (2, 2), dtype=complex)
    u[..., 0, 0] = plus * cb
    u[..., 0, 1] = -minus * sb
    u[..., 1, 0] = np.conj(minus) * sb
    u[..., 1, 1] = np.conj(plus) * cb
    return u


def local_unitary(params) -> np.ndarray:
    """U_{S1} (x) ... (x) U_{SN} from 3N Euler angles (three per sender)."""
    params = np.asarray(params, dtype=float)
    if params.ndim != 1 or params.size == 0 or params.size % 3:
        raise ValueError(f"expected 3N Euler angles, got {params.size}")
    return qmat.kron(*_euler_batch(params.reshape(-1, 3)))


def _embed_batch(params: np.ndarray, layout: SystemLayout) -> np.ndarray:
    """Full-register operators (U_S (x) I_R) for a batch of 3N-angle vectors."""
    m = params.shape[0]
    singles = _euler_batch(params.reshape(m, layout.n_senders, 3))
    owner = {s: k for k, s in enumerate(layout.senders)}
    full = np.ones((m, 1, 1), dtype=complex)
    for q in range(layout.n_qubits):
        f = singles[:, owner[q]] if q in owner else np.broadcast_to(qmat.I2, (m, 2, 2))
        full = np.einsum("mij,mkl->mikjl", full, f).reshape(m, full.shape[1] * 2, -1)
    return full


def _factor_states(states: np.ndarray) -> np.ndarray:
    """Stack of W with rho = W W^dagger, padded to the largest rank in the batch."""
    if states.ndim == 2:
        return states[:, :, None]
    w, v = np.linalg.eigh(states)
    w = np.clip(w, 0.0, None)
    rank = max(1, int((w > 1e-13).sum(axis=1).max()))
    return v[:, :, -rank:] * np.sqrt(w[:, -rank:])[:, None, :]


def _output_spectra(factors: np.ndarray, kraus: np.ndarray, unitaries: np.ndarray | None) -> np.ndarray:
    """Eigenvalues of sum_k K_k U rho U^dagger K_k^dagger, kraus carrying sqrt weights."""
    y = factors if unitaries is None else unitaries @ factors
    m, d, r = y.shape
    v = np.einsum("kij,mjr->mikr", kraus, y).reshape(m, d, -1)
    if v.shape[2] <= d:
        gram = np.conj(np.swapaxes(v, 1, 2)) @ v
    else:
        gram = v @ np.conj(np.swapaxes(v, 1, 2))
    return np.linalg.eigvalsh(gram)


def _sqrt_kraus(spec: NoiseSpec, layout: SystemLayout) -> np.ndarray:
    weights, ops = channels.kraus_operators(spec, layout)
    keep = weights > 0
    return np.sqrt(weights[keep])[:, None, None] * ops[keep]


def encoding_is_irrelevant(spec: NoiseSpec) -> bool:
    """Channels that commute with every local unitary on the senders.

    For these the output entropy does not depend on the local encoding, so the
    identity is already optimal.
    """
    if isinstance(spec, UncorrelatedDepolarizing):
        return True
    if isinstance(spec, channels.SinglePauli):
        return spec.lx == spec.ly == spec.lz
    return False


def encoded_output(state: np.ndarray, layout: SystemLayout, spec: NoiseSpec,
                   params=None) -> np.ndarray:
    """Channel output after local encoding with the given Euler angles (identity if None)."""
    rho = qmat.as_density_matrix(_check_state(state, layout))
    if params is not None:
        u = _embed_batch(np.asarray(params, dtype=float)[None], layout)[0]
        rho = u @ rho @ u.conj().T
    return channels.apply_channel(rho, spec, layout)


def noisy_capacity_batch(states: np.ndarray, layout: SystemLayout, spec: NoiseSpec,
                         opt: OptimizerConfig = ENCODING_DEFAULTS,
                         optimize_encoding: bool = True) -> list[CapacityResult]:
    """Noisy capacities for a stack of kets (2-D input) or density matrices (3-D input).

    The output entropy is minimized over local encodings with a multi-start
    simplex search: the identity plus ``opt.restarts`` uniformly random angle
    vectors, shared by every state in the batch. ``optimize_encoding=False``
    evaluates the identity (equivalently any Pauli-string) encoding only.
    """
    states = np.asarray(states, dtype=complex)
    if states.shape[1] != 2**layout.n_qubits:
        raise ValueError(f"states of dimension {states.shape[1]} do not fit {layout}")
    nb = states.shape[0]
    n_params = 3 * layout.n_senders
    factors = _factor_states(states)
    kraus = _sqrt_kraus(spec, layout)
    s_r = qmat.spectral_entropy(np.linalg.eigvalsh(
        np.array([_receiver_state(st, layout) for st in states])))

    if not optimize_encoding or encoding_is_irrelevant(spec):
        s_out = qmat.spectral_entropy(_output_spectra(factors, kraus, None))
        zero = np.zeros(n_params)
        return [_result(layout.n_senders, s_r[i], s_out[i], zero.copy()) for i in range(nb)]

    rng = make_rng(opt.seed)
    starts = np.vstack([np.zeros(n_params), rng.uniform(0, 2 * np.pi, (opt.restarts, n_params))])
    nstart = starts.shape[0]
    owner = np.repeat(np.arange(nb), nstart)
    x0 = np.tile(starts, (nb, 1))

    def objective(points, rows):
        u = _embed_batch(points, layout)
        return qmat.spectral_entropy(_output_spectra(factors[owner[rows]], kraus, u))

    res = nelder_mead_batch(objective, x0, _INITIAL_STEP, opt.xtol, opt.tol, opt.max_iters)
    warn_unconverged(res, "encoding search")
    fun = res.fun.reshape(nb, nstart)
    pick = fun.argmin(axis=1)
    xs = res.x.reshape(nb, nstart, n_params)
    conv = res.converged.reshape(nb, nstart)
    return [
        _result(layout.n_senders, s_r[i], fun[i, pick[i]], xs[i, pick[i]].copy(), conv[i, pick[i]])
        for i in range(nb)
    ]


def noisy_capacity(state: np.ndarray, layout: SystemLayout, spec: NoiseSpec,
                   opt: OptimizerConfig = ENCODING_DEFAULTS,
                   optimize_encoding: bool = True) -> CapacityResult:
    state = _check_state(state, layout)
    return noisy_capacity_batch(state[None], layout, spec, opt, optimize_encoding)[0]


# -- generalized GHZ reference curve -------------------------------------------


def gghz_noisy_entropy(alpha: float, layout: SystemLayout, spec: NoiseSpec | None) -> float:
    """Output entropy of the gGHZ state after the channel (0 without noise).

    Correlated Pauli noise gives H(q1 + q2) for every Pauli-string encoding;
    depolarizing noise is unaffected by the encoding. Both are evaluated at the
    identity encoding.
    """
    if spec is None:
        return 0.0
    if isinstance(spec, FullyCorrelatedPauli):
        return qmat.binary_entropy(min(1.0, spec.flip_probability))
    return qmat.von_neumann_entropy(encoded_output(gghz(layout.n_qubits, alpha), layout, spec))


def gghz_raw_capacity(alpha: float, layout: SystemLayout, spec: NoiseSpec | None = None) -> float:
    n = layout.n_senders
    h = qmat.binary_entropy(alpha)
    return (n + h - gghz_noisy_entropy(alpha, layout, spec)) / (n + 1)


def matched_gghz_alpha(raw_capacity: float, layout: SystemLayout,
                       spec: NoiseSpec | None = None) -> float | None:
    """alpha >= 1/2 of the gGHZ state with the same raw capacity, or None if out of reach."""
    n = layout.n_senders
    if spec is None or isinstance(spec, FullyCorrelatedPauli):
        h = (n + 1) * raw_capacity - n + gghz_noisy_entropy(0.5, layout, spec)
        if h < -STRICT_TOL or h > 1.0 + STRICT_TOL:
            return None
        return qmat.inverse_binary_entropy(min(max(h, 0.0), 1.0), tol=1e-10)
    gap = lambda a: gghz_raw_capacity(a, layout, spec) - raw_capacity
    hi_val, lo_val = gap(0.5), gap(_ALPHA_MAX)
    if hi_val < 0 or lo_val > 0:
        return None
    if hi_val == 0:
        return 0.5
    return brentq(gap, 0.5, _ALPHA_MAX, xtol=1e-10)


# -- receiver-marginal and noisy-eigenvalue conditions ----------------------------


@dataclass(frozen=True)
class EncodingConditionFlags:
    cond_i: bool
    cond_ii: bool
    noisy_max_eigenvalue: float
    capacity: CapacityResult


def receiver_has_max_marginal(psi: np.ndarray, layout: SystemLayout) -> bool:
    """Whether the receiver's largest eigenvalue is the largest over all single-party marginals."""
    tops = {
        q: np.linalg.eigvalsh(qmat.partial_trace(psi, [q], layout.n_qubits))[-1]
        for q in range(layout.n_qubits)
    }
    return bool(tops[layout.receiver] >= max(tops.values()) - MARGINAL_TIE_TOL)


def theorem3_conditions_batch(psis: np.ndarray, spec: FullyCorrelatedPauli,
                              opt: OptimizerConfig = ENCODING_DEFAULTS,
                              layout: SystemLayout | None = None) -> list[EncodingConditionFlags]:
    """Condition (i) on the optimally encoded noisy state, condition (ii) on the marginals."""
    psis = np.asarray(psis, dtype=complex)
    layout = SystemLayout.default(qmat.num_qubits(psis.shape[1])) if layout is None else layout
    c = spec.flip_probability
    bound = max(c, 1.0 - c)
    caps = noisy_capacity_batch(psis, layout, spec, opt)
    out = []
    for psi, cap in zip(psis, caps):
        top = np.linalg.eigvalsh(encoded_output(psi, layout, spec, cap.optimal_unitary_params))[-1]
        out.append(EncodingConditionFlags(
            cond_i=bool(top <= bound + STRICT_TOL),
            cond_ii=receiver_has_max_marginal(psi, layout),
            noisy_max_eigenvalue=float(top),
            capacity=cap,
        ))
    return out


def theorem3_conditions(psi: np.ndarray, spec: FullyCorrelatedPauli,
                        opt: OptimizerConfig = ENCODING_DEFAULTS,
                        layout: SystemLayout | None = None) -> EncodingConditionFlags:
    return theorem3_conditions_batch(np.asarray(psi)[None], spec, opt, layout)[0]

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from densecode import qmat, states
from densecode.qmat import I2, SIGMA_X, SIGMA_Y, SIGMA_Z

seeds = st.integers(0, 2**32 - 1)


def random_dm(n, seed, rank=None):
    rng = np.random.default_rng(seed)
    d = 2**n
    g = rng.standard_normal((d, rank or d)) + 1j * rng.standard_normal((d, rank or d))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def test_kron_identity_and_diagonal():
    assert np.allclose(qmat.kron(I2, I2), np.eye(4))
    assert np.allclose(qmat.kron(SIGMA_Z, SIGMA_Z), np.diag([1, -1, -1, 1]))


def test_kron_flips_leftmost_qubit():
    ket00 = states.basis_ket("00")
    assert np.allclose(qmat.kron(SIGMA_X, I2) @ ket00, states.basis_ket("10"))


def test_kron_rejects_huge_dimension():
    big = [np.eye(2)] * 33
    with pytest.raises(OverflowError):
        qmat.kron(*big)


def test_partial_trace_examples():
    rho00 = qmat.ket_to_dm(states.basis_ket("00"))
    assert np.allclose(qmat.partial_trace(rho00, [0]), np.diag([1, 0]))
    bell = (states.basis_ket("00") + states.basis_ket("11")) / math.sqrt(2)
    assert np.allclose(qmat.partial_trace(bell, [1]), I2 / 2)
    psi = states.gghz(3, 0.7)
    assert np.allclose(qmat.partial_trace(psi, [2]), np.diag([0.7, 0.3]))


def test_partial_trace_keeps_listed_order():
    psi = np.kron(states.basis_ket("0"), states.basis_ket("1"))
    assert np.allclose(qmat.partial_trace(psi, [1, 0]), qmat.ket_to_dm(states.basis_ket("10")))


def test_partial_trace_errors():
    with pytest.raises(ValueError):
        qmat.partial_trace(np.eye(3) / 3, [0])
    with pytest.raises(IndexError):
        qmat.partial_trace(np.eye(4) / 4, [2])


@given(seeds, st.sampled_from([[0], [1], [2], [0, 2], [1, 2], [0, 1]]))
def test_partial_trace_matches_loop_oracle(seed, keep):
    rho = random_dm(3, seed)
    assert np.allclose(qmat.partial_trace(rho, keep), oracles.reduced(rho, keep, 3), atol=1e-12)


@given(seeds)
def test_ket_and_matrix_partial_traces_agree(seed):
    psi = states.haar_pure(3, states.make_rng(seed))
    assert np.allclose(qmat.partial_trace(psi, [0, 2]),
                       qmat.partial_trace(qmat.ket_to_dm(psi), [0, 2]), atol=1e-12)


def test_hermitian_eig_examples():
    assert np.allclose(qmat.hermitian_eig(np.diag([0.3, 0.7])).eigenvalues, [0.7, 0.3])
    assert np.allclose(qmat.hermitian_eig(SIGMA_X).eigenvalues, [1, -1])
    marginal = qmat.partial_trace(states.gghz(3, 0.8), [2])
    assert np.allclose(qmat.hermitian_eig(marginal).eigenvalues, [0.8, 0.2])


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(ValueError):
        qmat.hermitian_eig(np.array([[0, 1], [0, 0]]))


@given(seeds)
def test_hermitian_eig_reconstructs(seed):
    rho = random_dm(2, seed)
    spec = qmat.hermitian_eig(rho, vectors=True)
    assert np.all(np.diff(spec.eigenvalues) <= 1e-15)
    assert np.allclose(spec.reconstruct(), rho, atol=1e-12)


def test_entropy_examples():
    assert qmat.von_neumann_entropy(qmat.ket_to_dm(states.ghz(3))) == pytest.approx(0, abs=1e-12)
    assert qmat.von_neumann_entropy(I2 / 2) == pytest.approx(1.0)
    assert qmat.von_neumann_entropy(np.diag([0.9, 0.1])) == pytest.approx(0.4690, abs=1e-4)
    assert qmat.shannon_entropy([1, 0, 0, 0]) == 0
    assert qmat.shannon_entropy([0.25] * 4) == pytest.approx(2.0)
    assert qmat.binary_entropy(0.03) == pytest.approx(0.1944, abs=1e-4)


def test_entropy_of_normalized_ket_is_zero():
    assert qmat.von_neumann_entropy(states.ghz(3)) == 0.0
    with pytest.raises(ValueError):
        qmat.von_neumann_entropy(np.array([1.0, 1.0]))


def test_entropy_rejects_negative_spectrum():
    with pytest.raises(ValueError):
        qmat.von_neumann_entropy(np.diag([1.1, -0.1]))


def test_shannon_rejects_bad_distribution():
    with pytest.raises(ValueError):
        qmat.shannon_entropy([0.5, 0.6])


@given(seeds)
def test_entropy_matches_scalar_formula(seed):
    rho = random_dm(2, seed)
    expected = oracles.entropy_bits(np.linalg.eigvalsh(rho))
    assert qmat.von_neumann_entropy(rho) == pytest.approx(expected, abs=1e-12)
    assert 0 <= qmat.von_neumann_entropy(rho) <= 2 + 1e-12


@given(st.floats(0.0, 1.0))
def test_inverse_binary_entropy_roundtrip(h):
    x = qmat.inverse_binary_entropy(h)
    assert 0.5 <= x <= 1.0
    assert qmat.binary_entropy(x) == pytest.approx(h, abs=1e-9)


def test_majorization_examples():
    assert qmat.majorizes([1, 0], [0.5, 0.5])
    assert qmat.majorizes([0.5, 0.5], [0.5, 0.5])
    assert not qmat.majorizes([0.6, 0.4], [0.7, 0.3])


@given(seeds)
def test_majorization_implies_lower_entropy(seed):
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.ones(4))
    q = rng.dirichlet(np.ones(4))
    if qmat.majorizes(p, q):
        assert qmat.shannon_entropy(p) <= qmat.shannon_entropy(q) + 1e-12
    # the uniform distribution is majorized by everything
    assert qmat.majorizes(p, np.full(4, 0.25))


def test_is_density_matrix():
    assert qmat.is_density_matrix(I2 / 2)
    assert not qmat.is_density_matrix(np.diag([1.5, -0.5]))
    assert not qmat.is_density_matrix(SIGMA_Y + I2)

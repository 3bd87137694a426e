"""Pauli-basis utilities: transfer matrices, twirling, fidelities."""

from __future__ import annotations

from itertools import product

import numpy as np

PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_labels(n_qubits: int) -> list:
    return ["".join(p) for p in product("IXYZ", repeat=n_qubits)]


def pauli_matrices(n_qubits: int) -> list:
    mats = []
    for label in pauli_labels(n_qubits):
        m = np.array([[1.0 + 0j]])
        for ch in label:
            m = np.kron(m, PAULI_1Q[ch])
        mats.append(m)
    return mats


def ptm_from_map(channel, n_qubits: int) -> np.ndarray:
    """Pauli transfer matrix R_ij = tr(P_i Λ(P_j)) / d of a matrix-valued map."""
    d = 2**n_qubits
    paulis = pauli_matrices(n_qubits)
    r = np.empty((d * d, d * d))
    images = [channel(p) for p in paulis]
    for i, pi in enumerate(paulis):
        for j in range(d * d):
            r[i, j] = np.trace(pi @ images[j]).real
    return r / d


def ptm_of_unitary(u: np.ndarray) -> np.ndarray:
    n = int(np.log2(u.shape[0]))
    return ptm_from_map(lambda p: u @ p @ u.conj().T, n)


def apply_ptm_to_state(r: np.ndarray, rho: np.ndarray) -> np.ndarray:
    n = int(np.log2(rho.shape[0]))
    d = 2**n
    paulis = pauli_matrices(n)
    coeffs = np.array([np.trace(p @ rho) / d for p in paulis]).real
    out = r @ coeffs
    return sum(c * p for c, p in zip(out, paulis))


def pauli_commutation_table(n_qubits: int) -> np.ndarray:
    """W[k, j] = +1 if P_k and P_j commute, else -1."""
    paulis = pauli_matrices(n_qubits)
    d = 2**n_qubits
    m = len(paulis)
    w = np.empty((m, m))
    for k in range(m):
        for j in range(m):
            w[k, j] = np.sign(
                np.trace(paulis[k] @ paulis[j] @ paulis[k] @ paulis[j]).real / d
            )
    return w


def twirl_error_probabilities(r_error: np.ndarray, n_qubits: int) -> np.ndarray:
    """Pauli-error probabilities from the error channel's PTM diagonal.

    Equals the chi-matrix diagonal in the Pauli basis; for channels with
    trace loss the probabilities sum to the retained weight.
    """
    w = pauli_commutation_table(n_qubits)
    return (w @ np.diag(r_error)) / (4**n_qubits)


def process_fidelity(r_channel: np.ndarray, r_ideal: np.ndarray) -> float:
    d2 = r_channel.shape[0]
    return float(np.trace(r_ideal.T @ r_channel) / d2)


def average_fidelity(f_process: float, dim: int) -> float:
    return (dim * f_process + 1.0) / (dim + 1.0)


def choi_from_ptm(r: np.ndarray, n_qubits: int) -> np.ndarray:
    d = 2**n_qubits
    paulis = pauli_matrices(n_qubits)
    c = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d * d):
        for j in range(d * d):
            c += r[i, j] * np.kron(paulis[i], paulis[j].T)
    return c / (d * d)


def assert_physical_ptm(r: np.ndarray, n_qubits: int, tol: float = 1e-7) -> None:
    """Raise if the channel is not completely positive beyond tolerance."""
    eig = np.linalg.eigvalsh(choi_from_ptm(r, n_qubits))
    if eig.min() < -tol:
        raise ValueError(f"non-physical PTM: Choi eigenvalue {eig.min():.3e}")

import numpy as np
import pytest
import scipy.sparse as sp
from scipy.linalg import expm

from replgate.atoms import (
    DOWN,
    UP,
    atom_basis,
    calibrate_cnot_atoms,
    calibrate_x_atoms,
    compact_controlled_tunnel,
    controlled_tunnel,
    entangling_unitary,
    ideal_x,
    run_cnot_atoms,
    run_x_gate_atoms,
    tunneling_unitary,
    verification_report,
)
from replgate.fock import LocalState, basis_state
from replgate.framework import QubitState

E, D, U, S = (
    LocalState.EMPTY,
    LocalState.DOWN,
    LocalState.UP,
    LocalState.SINGLET,
)


def rand_qubit(rng):
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    return QubitState(v[0], v[1])


def test_tunneling_matches_matrix_exponential():
    # closed-form blocks vs dense expm of the generator recovered from a
    # small-angle rotation
    basis = atom_basis(3, 2)
    for spin in (DOWN, UP):
        eps = 1e-7
        u_eps = tunneling_unitary(basis, 0, 2, spin, eps).toarray()
        k_num = (np.eye(basis.dim) - u_eps) / (1j * eps / 2)
        for phi in (0.4, np.pi / 2, np.pi):
            u = tunneling_unitary(basis, 0, 2, spin, phi).toarray()
            assert np.allclose(u, expm(-1j * phi / 2 * k_num), atol=1e-6)


def test_tunneling_phi0_identity_and_unitarity():
    basis = atom_basis(3, 3)
    u0 = tunneling_unitary(basis, 0, 1, DOWN, 0.0)
    assert abs(u0 - sp.identity(basis.dim)).max() < 1e-15
    u = tunneling_unitary(basis, 0, 1, DOWN, 1.2345)
    assert abs(u.getH() @ u - sp.identity(basis.dim)).max() < 1e-12


def test_tunneling_full_transfer_population():
    basis = atom_basis(2, 1)
    v = basis_state(basis, (E, D))
    u = tunneling_unitary(basis, 0, 1, DOWN, np.pi)
    out = u @ v
    assert abs(out[basis.index_of((D, E))]) ** 2 == pytest.approx(1.0)


def test_tunneling_half_transfer_populations():
    basis = atom_basis(2, 1)
    v = basis_state(basis, (E, D))
    u = tunneling_unitary(basis, 0, 1, DOWN, np.pi / 2)
    out = u @ v
    assert abs(out[basis.index_of((D, E))]) ** 2 == pytest.approx(0.5)
    assert abs(out[basis.index_of((E, D))]) ** 2 == pytest.approx(0.5)


def test_entangling_diagonal_values():
    basis = atom_basis(2, 2)
    e = entangling_unitary(basis, (0, 1), (DOWN, UP))
    v = basis_state(basis, (D, U))
    assert (e @ v)[basis.index_of((D, U))] == pytest.approx(-1.0)
    w = basis_state(basis, (U, D))
    assert (e @ w)[basis.index_of((U, D))] == pytest.approx(1.0)
    assert abs(e @ e - sp.identity(basis.dim)).max() < 1e-15


def test_entangling_three_body_sign_pattern():
    basis = atom_basis(3, 3)
    e3 = entangling_unitary(basis, (0, 1, 2), (DOWN, UP, DOWN)).diagonal()
    for a, cfg in enumerate(basis.configs):
        n = (
            int(cfg[0] in (D, S))
            * int(cfg[1] in (U, S))
            * int(cfg[2] in (D, S))
        )
        assert e3[a] == pytest.approx(-1.0 if n else 1.0)


def test_controlled_tunnel_identity_when_control_empty():
    basis = atom_basis(3, 1)
    u = controlled_tunnel(basis, ((0, UP),), (1, 2, DOWN))
    v = basis_state(basis, (E, E, D))  # control site empty
    assert abs((u @ v) - v).max() < 1e-12


def test_controlled_tunnel_full_transfer_when_control_set():
    basis = atom_basis(3, 2)
    u = controlled_tunnel(basis, ((0, UP),), (2, 1, DOWN))
    v = basis_state(basis, (U, E, D))
    out = u @ v
    assert abs(out[basis.index_of((U, D, E))]) ** 2 == pytest.approx(1.0)


def test_controlled_tunnel_compact_identity_exhaustive():
    basis = atom_basis(3, 2)
    for ctrl_spin in (DOWN, UP):
        for t_spin in (DOWN, UP):
            seq = controlled_tunnel(basis, ((0, ctrl_spin),), (1, 2, t_spin))
            cmp_ = compact_controlled_tunnel(basis, ((0, ctrl_spin),), (1, 2, t_spin))
            assert abs(seq - cmp_).max() < 1e-12


def test_negated_two_site_control():
    basis = atom_basis(2, 2)
    # tunnel DOWN between sites 0,1 unless the pair is (up0, down1)
    u = controlled_tunnel(basis, ((0, UP), (1, DOWN)), (0, 1, DOWN), negated=True)
    blocked = basis_state(basis, (U, D))
    out = u @ blocked
    assert abs(out[basis.index_of((U, D))]) ** 2 == pytest.approx(1.0)
    moves = basis_state(basis, (E, S))  # no up at 0: down moves 1 -> 0
    out = u @ moves
    assert abs(out[basis.index_of((D, U))]) ** 2 == pytest.approx(1.0)


def test_ideal_x_singlet_sign():
    basis = atom_basis(2, 2)
    x0 = ideal_x(basis, 0)
    v = basis_state(basis, (S, E))
    assert (x0 @ v)[basis.index_of((S, E))] == pytest.approx(-1.0)
    assert abs(x0 @ x0 - sp.identity(basis.dim)).max() < 1e-15


def test_x_gate_truth_table():
    for bit, out_bit in ((0, 1), (1, 0)):
        for m in (0, 1):
            res = run_x_gate_atoms(QubitState(1 - bit, bit), seed=0, force_outcome=m)
            assert abs(res.output[out_bit]) ** 2 == pytest.approx(1.0, abs=1e-12)
            assert res.purity == pytest.approx(1.0, abs=1e-12)


def test_x_gate_superposition_all_branches():
    q = QubitState(1 / np.sqrt(2), np.exp(1j * np.pi / 3) / np.sqrt(2))
    target = np.array([q.a1, q.a0])
    frame = calibrate_x_atoms()
    for m in (0, 1):
        res = run_x_gate_atoms(q, seed=0, frame=frame, force_outcome=m)
        fid = abs(np.vdot(target, res.output)) ** 2
        assert 1.0 - fid < 1e-12


def test_x_gate_measurement_branches_balanced():
    q = QubitState(0.6, 0.8j)
    hits = [0, 0]
    for seed in range(200):
        res = run_x_gate_atoms(q, seed=seed)
        hits[res.outcomes[0]] += 1
    assert min(hits) > 50


def test_cnot_truth_table():
    frame = calibrate_cnot_atoms()
    truth = {(0, 0): (0, 0), (0, 1): (0, 1), (1, 0): (1, 1), (1, 1): (1, 0)}
    for (bc, bt), (oc, ot) in truth.items():
        res = run_cnot_atoms(
            QubitState(1 - bc, bc), QubitState(1 - bt, bt), seed=3, frame=frame
        )
        assert abs(res.output[2 * oc + ot]) ** 2 == pytest.approx(1.0, abs=1e-12)
        assert res.purity == pytest.approx(1.0, abs=1e-12)


def test_cnot_superposition_all_branches():
    rng = np.random.default_rng(11)
    frame = calibrate_cnot_atoms()
    cnot = np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    )
    for _ in range(5):
        qc, qt = rand_qubit(rng), rand_qubit(rng)
        target = cnot @ np.kron(qc.vector(), qt.vector())
        for m1 in (0, 1):
            for m2 in (0, 1, 2):
                res = run_cnot_atoms(qc, qt, seed=0, frame=frame,
                                     force_outcomes=(m1, m2))
                assert 1.0 - abs(np.vdot(target, res.output)) ** 2 < 1e-12


def test_cnot_bell_output_entropy():
    s = 1 / np.sqrt(2)
    frame = calibrate_cnot_atoms()
    res = run_cnot_atoms(QubitState(s, s), QubitState(1, 0), seed=1, frame=frame)
    lam = np.linalg.svd(res.output.reshape(2, 2), compute_uv=False) ** 2
    entropy = -(lam * np.log(lam)).sum()
    assert entropy == pytest.approx(np.log(2), abs=1e-12)


@pytest.mark.slow
def test_verification_report_all_below_tolerance():
    report = verification_report()
    for name, dev in report.items():
        assert dev < 1e-12, f"{name}: {dev}"

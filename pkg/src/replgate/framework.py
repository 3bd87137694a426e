"""Abstract replacement-gate protocol on a symbolic three-site register.

The register holds two candidate qubits |0_U>, |1_U> and one empty slot.
A rearrangement conditionally displaces the candidates; two projective
measurements (or one joint measurement) disentangle the output slot,
leaving U Z^c |psi_in> with a classical correction bit c.

Candidate states are opaque labels; the gate U enters only when checking
fidelities.  Derived parity rule (documented, verified against the
linear-algebra oracle in the tests): with measurement signs
s_i = (-1)^{m_i}, the output is alpha_0 |0_U> + s_1 s_2 alpha_1 |1_U>,
i.e. c = m_1 XOR m_2.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .paulis import ptm_from_map

ZERO_U, ONE_U, EMPTY = "0U", "1U", "x"
SLOT_CONFIGS = tuple(permutations((ZERO_U, ONE_U, EMPTY)))
_INITIAL = (ZERO_U, ONE_U, EMPTY)
_CFG0 = (EMPTY, ONE_U, ZERO_U)  # branch of |0>
_CFG1 = (ZERO_U, EMPTY, ONE_U)  # branch of |1>


@dataclass(frozen=True)
class QubitState:
    a0: complex
    a1: complex

    def __post_init__(self):
        norm = abs(self.a0) ** 2 + abs(self.a1) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state not normalized: |a|^2 = {norm}")

    def vector(self) -> np.ndarray:
        return np.array([self.a0, self.a1], dtype=complex)


@dataclass(frozen=True)
class MeasurementRecord:
    outcomes: tuple
    correction: int  # classical bit c

    def __post_init__(self):
        if self.correction != (sum(self.outcomes) % 2):
            raise ValueError("correction bit violates the parity rule")


@dataclass
class AbstractRegister:
    """Joint amplitudes over (input-qubit bit) x (slot configuration)."""

    input: QubitState
    sites: tuple
    joint: np.ndarray  # shape (2, len(SLOT_CONFIGS))

    @classmethod
    def prepare(cls, psi: QubitState) -> "AbstractRegister":
        joint = np.zeros((2, len(SLOT_CONFIGS)), dtype=complex)
        k = SLOT_CONFIGS.index(_INITIAL)
        joint[0, k] = psi.a0
        joint[1, k] = psi.a1
        return cls(psi, _INITIAL, joint)


def rearrange(reg: AbstractRegister) -> AbstractRegister:
    """Conditional displacement |b>|0_U,1_U,x> -> |b>|cfg_b>."""
    if reg.sites != _INITIAL:
        raise ValueError("register must start as (0_U, 1_U, x)")
    k_in = SLOT_CONFIGS.index(_INITIAL)
    if not np.allclose(
        np.delete(reg.joint, k_in, axis=1), 0.0
    ):
        raise ValueError("register already rearranged")
    joint = np.zeros_like(reg.joint)
    joint[0, SLOT_CONFIGS.index(_CFG0)] = reg.joint[0, k_in]
    joint[1, SLOT_CONFIGS.index(_CFG1)] = reg.joint[1, k_in]
    return AbstractRegister(reg.input, reg.sites, joint)


def disentangle(
    reg: AbstractRegister,
    rng_seed,
    one_shot: bool = False,
) -> tuple:
    """Measure out the auxiliary content; returns (QubitState, MeasurementRecord).

    The returned qubit is expressed in the (|0_U>, |1_U>) frame, i.e. it
    equals Z^c applied to the input amplitudes; applying U to its basis
    reproduces U Z^c |psi_in>.

    Two-shot: a +/- measurement of the input qubit, then a hybrid-position
    measurement of slots 0 and 1.  One-shot: the single joint measurement in
    the product of those bases.  Both give identical statistics.
    """
    rng = np.random.default_rng(rng_seed)
    k0, k1 = SLOT_CONFIGS.index(_CFG0), SLOT_CONFIGS.index(_CFG1)
    a0 = reg.joint[0, k0]
    a1 = reg.joint[1, k1]
    if abs(abs(a0) ** 2 + abs(a1) ** 2 - 1.0) > 1e-10:
        raise ValueError("register is not a post-rearrangement state")

    if one_shot:
        # joint probabilities over (m1, m2) are uniform for any input
        m1, m2 = divmod(int(rng.integers(4)), 2)
    else:
        p_plus = 0.5  # |<+|psi>|^2 is input-independent
        m1 = int(rng.random() >= p_plus)
        m2 = int(rng.random() >= 0.5)
    s = (-1) ** m1 * (-1) ** m2
    out = QubitState(a0, s * a1)
    return out, MeasurementRecord((m1, m2), (m1 + m2) % 2)


def apply_correction(q: QubitState, record: MeasurementRecord) -> QubitState:
    if record.correction:
        return QubitState(q.a0, -q.a1)
    return q


def dephasing_channel(p_d: float, err_states_overlap: complex = 0.0) -> np.ndarray:
    """PTM of the discard-after-disentangling-error channel.

    With probability p_d the auxiliary register ends in branch-dependent
    error states whose overlap is `err_states_overlap`; discarding then
    multiplies the qubit coherence by (1 - p_d) + p_d * conj(overlap).
    For zero overlap this is rho -> (1 - p_d) rho + p_d diag(rho).
    """
    if not 0.0 <= p_d <= 1.0:
        raise ValueError("p_d must lie in [0, 1]")
    w = complex(err_states_overlap)
    if abs(w) > 1.0 + 1e-12:
        raise ValueError("|overlap| must not exceed 1")
    lam = (1.0 - p_d) + p_d * w.conjugate()

    def channel(rho):
        out = rho.astype(complex).copy()
        out[0, 1] *= lam
        out[1, 0] *= lam.conjugate()
        return out

    return ptm_from_map(channel, 1)

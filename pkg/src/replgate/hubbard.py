"""Extended Hubbard Hamiltonian for a linear array of quantum dots.

H = sum_j [ (E_j + eps_j(t)) n_j + Bz_j (n_up - n_down)_j + Bx_j (s_x terms)
            + U2/2 n_j(n_j-1) + E_ST on the triplet level ]
    + sum_bonds sum_spins ( t_{cons/flip} c†_{j,s} c_{j+1,s'} + h.c. )
    + U1 sum_bonds n_j n_{j+1}

All second-quantized matrix elements between the {empty, down, up, singlet}
levels carry exact fermionic signs for the fixed mode ordering of
:mod:`replgate.fock`.  The doubly-occupied triplet level sits E_ST above
the singlet, has no Zeeman energy, and couples to neighboring
configurations only through the spin-flip amplitude, with the same signed
structure as the corresponding singlet element.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np
import scipy.sparse as sp

from .fock import (
    Config,
    FockBasis,
    LocalState,
    MODE_OCC,
    config_mode_bits,
    enumerate_basis,
    hop_sign,
    spin_register_rule,
)

_E = LocalState.EMPTY
_D = LocalState.DOWN
_U = LocalState.UP
_S = LocalState.SINGLET
_T = LocalState.TRIPLET


@dataclass(frozen=True)
class DeviceParams:
    """Hamiltonian parameters, energies in µeV.

    Per-site arrays have length num_sites, per-bond arrays num_sites - 1.
    """

    num_sites: int
    e0: tuple
    bz: tuple
    bx: tuple
    t_cons: tuple
    t_flip: tuple
    u1: float
    u2: float
    e_st: float

    def __post_init__(self):
        ns = self.num_sites
        for name, n in (("e0", ns), ("bz", ns), ("bx", ns),
                        ("t_cons", ns - 1), ("t_flip", ns - 1)):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} must have length {n}")
        if not (self.u2 > self.u1 >= 0):
            raise ValueError("require U2 > U1 >= 0")
        if self.e_st <= 0:
            raise ValueError("require E_ST > 0")
        if any(t <= 0 for t in self.t_cons):
            raise ValueError("require t_cons > 0")

    @property
    def bias_regime(self) -> bool:
        """Interference-suppression condition 2 t_cons > (B_i + B_j)/2 per bond."""
        return all(
            2 * self.t_cons[j] > (self.bz[j] + self.bz[j + 1]) / 2
            for j in range(self.num_sites - 1)
        )


def x_gate_params(**overrides) -> DeviceParams:
    """Four-dot register at the parameter set used for the X-gate studies."""
    base = dict(
        num_sites=4,
        e0=(0.0, 0.0, 0.0, 0.0),
        bz=(45.0, 35.0, 25.0, 15.0),
        bx=(0.0, 0.0, 0.0, 0.0),
        t_cons=(25.0, 25.0, 25.0),
        t_flip=(0.25, 0.25, 0.25),
        u1=0.0,
        u2=5000.0,
        e_st=200.0,
    )
    base.update(overrides)
    return DeviceParams(**base)


def cnot_params(**overrides) -> DeviceParams:
    """Eight-dot register; larger tunneling keeps 2 t_c above the bond-average
    Zeeman field along the longer array, and a finite U1 provides the
    neighbor-charge selectivity used by the sequential-PSB variant."""
    base = dict(
        num_sites=8,
        e0=(0.0,) * 8,
        bz=(85.0, 75.0, 65.0, 55.0, 45.0, 35.0, 25.0, 15.0),
        bx=(0.0,) * 8,
        t_cons=(45.0,) * 7,
        t_flip=(0.25,) * 7,
        u1=4000.0,
        u2=9000.0,
        e_st=200.0,
    )
    base.update(overrides)
    return DeviceParams(**base)


def spin_basis(num_sites: int, num_particles: int) -> FockBasis:
    return enumerate_basis(num_sites, num_particles, spin_register_rule(num_sites))


# ---------------------------------------------------------------------------
# bond transition table

_PURE = (_E, _D, _U, _S)


def _bond_table(tc: float, tf: float, flip_order: bool) -> dict:
    """All hop elements on one bond: {(a_j, a_k): [(b_j, b_k, amp), ...]}.

    Base elements come from exact mode algebra over {E, D, U, S}; every
    element with singlet slots spawns triplet twins at amplitude
    sign * t_flip.
    """
    elements = []
    for aj, ak in product(_PURE, repeat=2):
        bits = config_mode_bits((aj, ak), flip_order)
        for s_to, s_from in product((0, 1), repeat=2):
            amp = tc if s_to == s_from else tf
            for m_to, m_from in (
                (2 * 0 + (s_to ^ 1 if flip_order else s_to),
                 2 * 1 + (s_from ^ 1 if flip_order else s_from)),
                (2 * 1 + (s_to ^ 1 if flip_order else s_to),
                 2 * 0 + (s_from ^ 1 if flip_order else s_from)),
            ):
                if bits[m_from] != 1 or bits[m_to] != 0:
                    continue
                sign = hop_sign(bits, m_to, m_from)
                new = list(bits)
                new[m_from] = 0
                new[m_to] = 1
                locals_ = []
                for site in (0, 1):
                    occ = (new[2 * site], new[2 * site + 1])
                    if flip_order:
                        occ = (occ[1], occ[0])
                    locals_.append(
                        {(0, 0): _E, (1, 0): _D, (0, 1): _U, (1, 1): _S}[occ]
                    )
                elements.append(((aj, ak), (locals_[0], locals_[1]), sign * amp))

    # triplet twins: replace singlet slots by the triplet level, t_flip amplitude
    twins = []
    for (aj, ak), (bj, bk), amp in elements:
        slots = [
            (0, aj), (1, ak), (2, bj), (3, bk)
        ]
        s_pos = [p for p, s in slots if s == _S]
        if not s_pos:
            continue
        sign = 1.0 if amp > 0 else -1.0
        for mask in range(1, 1 << len(s_pos)):
            repl = [s_pos[b] for b in range(len(s_pos)) if mask >> b & 1]
            pat = [aj, ak, bj, bk]
            for p in repl:
                pat[p] = _T
            twins.append(((pat[0], pat[1]), (pat[2], pat[3]), sign * tf))
    elements.extend(twins)

    table: dict = {}
    for src, dst, amp in elements:
        table.setdefault(src, []).append((dst[0], dst[1], amp))
    return table


@dataclass(frozen=True)
class StaticHamiltonian:
    """Time-independent pieces of H over a fixed basis.

    H(t) = diag(diag0 + occupancy @ detunings(t)) + vmat
    """

    params: DeviceParams
    basis: FockBasis
    diag0: np.ndarray
    occupancy: np.ndarray
    vmat: sp.csr_matrix

    def diagonal(self, detunings) -> np.ndarray:
        return self.diag0 + self.occupancy @ np.asarray(detunings, dtype=float)

    def matrix(self, detunings) -> sp.csr_matrix:
        return (sp.diags(self.diagonal(detunings)) + self.vmat).tocsr()

    def coupling(self, cfg_a: Config, cfg_b: Config) -> complex:
        ia, ib = self.basis.index_of(cfg_a), self.basis.index_of(cfg_b)
        return complex(self.vmat[ia, ib])


def build_static(
    params: DeviceParams, basis: FockBasis, flip_order: bool = False
) -> StaticHamiltonian:
    if basis.num_sites != params.num_sites:
        raise ValueError("basis and params disagree on num_sites")
    occ = basis.occupancies()
    zval = basis.spin_z()

    diag0 = occ @ np.asarray(params.e0, dtype=float)
    diag0 += zval @ np.asarray(params.bz, dtype=float)
    for i, cfg in enumerate(basis.configs):
        for j, s in enumerate(cfg):
            if s in (_S, _T):
                diag0[i] += params.u2
            if s == _T:
                diag0[i] += params.e_st
        for j in range(params.num_sites - 1):
            diag0[i] += params.u1 * occ[i, j] * occ[i, j + 1]

    rows, cols, vals = [], [], []
    tables = [
        _bond_table(params.t_cons[j], params.t_flip[j], flip_order)
        for j in range(params.num_sites - 1)
    ]
    for i, cfg in enumerate(basis.configs):
        for j in range(params.num_sites - 1):
            src = (cfg[j], cfg[j + 1])
            for bj, bk, amp in tables[j].get(src, ()):
                tgt = list(cfg)
                tgt[j], tgt[j + 1] = bj, bk
                k = basis.index.get(tuple(tgt))
                if k is not None:
                    rows.append(k)
                    cols.append(i)
                    vals.append(amp)
        # transverse field: on-site spin flip on singly occupied dots
        for j in range(params.num_sites):
            if params.bx[j] == 0.0 or cfg[j] not in (_D, _U):
                continue
            tgt = list(cfg)
            tgt[j] = _U if cfg[j] == _D else _D
            k = basis.index.get(tuple(tgt))
            if k is not None:
                rows.append(k)
                cols.append(i)
                vals.append(params.bx[j])

    vmat = sp.csr_matrix(
        (np.asarray(vals, dtype=complex), (rows, cols)),
        shape=(basis.dim, basis.dim),
    )
    vmat.sum_duplicates()
    herm_dev = abs(vmat - vmat.getH()).max() if vmat.nnz else 0.0
    if herm_dev > 1e-12:
        raise AssertionError(f"bond table broke hermiticity: {herm_dev}")
    return StaticHamiltonian(params, basis, diag0, occ, vmat)


def build_hamiltonian(
    params: DeviceParams,
    detunings,
    basis: FockBasis,
    flip_order: bool = False,
) -> sp.csr_matrix:
    """Sparse H at fixed per-site detunings (µeV)."""
    return build_static(params, basis, flip_order).matrix(detunings)


# ---------------------------------------------------------------------------
# spectrum scans (double-dot level diagram)


def spectrum_scan(
    params: DeviceParams,
    basis: FockBasis,
    site: int,
    e_values: np.ndarray,
) -> np.ndarray:
    """Eigenvalues (sorted, per detuning of one site) over a scan grid."""
    static = build_static(params, basis)
    out = np.empty((len(e_values), basis.dim))
    det = np.zeros(params.num_sites)
    for i, e in enumerate(e_values):
        det[site] = e
        h = static.matrix(det).toarray()
        out[i] = np.linalg.eigvalsh(h)
    return out


def minimum_gap(
    params: DeviceParams,
    basis: FockBasis,
    site: int,
    e_window: tuple,
    levels: tuple,
    n_coarse: int = 400,
) -> tuple:
    """Minimum gap between two adjacent sorted levels over a detuning window.

    Returns (gap, detuning at minimum); refines the coarse scan once.
    """
    lo, hi = e_window
    a, b = levels
    for _ in range(3):
        grid = np.linspace(lo, hi, n_coarse)
        scan = spectrum_scan(params, basis, site, grid)
        gaps = scan[:, b] - scan[:, a]
        k = int(np.argmin(gaps))
        lo = grid[max(0, k - 2)]
        hi = grid[min(len(grid) - 1, k + 2)]
    return float(gaps[k]), float(grid[k])

"""Truncated many-body bases for arrays of sites holding spinful fermions.

Each site carries one of five local levels: empty, a single electron with
spin down or up, a doubly-occupied spin singlet, or one doubly-occupied
triplet level (an orbital-excited state kept as a single extra level).
Configurations with a fixed total particle number form the working basis;
operators over it are scipy sparse matrices and states are dense complex
vectors.

Fermionic convention: one mode per (site, spin), ordered site-ascending
with spin down before up; a basis configuration is the ordered product of
creation operators (ascending mode index) on the vacuum.  The triplet
level occupies both modes of its site for parity purposes but is excluded
from second-quantized hops (its couplings are assigned explicitly by the
Hamiltonian builder).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import IntEnum
from itertools import product
from typing import Callable, Iterable, Sequence

import numpy as np
import scipy.sparse as sp


class LocalState(IntEnum):
    EMPTY = 0
    DOWN = 1
    UP = 2
    SINGLET = 3
    TRIPLET = 4


# particle count per local level
PARTICLES = {
    LocalState.EMPTY: 0,
    LocalState.DOWN: 1,
    LocalState.UP: 1,
    LocalState.SINGLET: 2,
    LocalState.TRIPLET: 2,
}

# (n_down, n_up) mode occupancies; the triplet fills both modes for
# parity counting even though it is not a two-mode state.
MODE_OCC = {
    LocalState.EMPTY: (0, 0),
    LocalState.DOWN: (1, 0),
    LocalState.UP: (0, 1),
    LocalState.SINGLET: (1, 1),
    LocalState.TRIPLET: (1, 1),
}

Config = tuple  # tuple[LocalState, ...]

_STATE_CHARS = {
    LocalState.EMPTY: "x",
    LocalState.DOWN: "d",
    LocalState.UP: "u",
    LocalState.SINGLET: "S",
    LocalState.TRIPLET: "T",
}


def config_str(config: Config) -> str:
    return "".join(_STATE_CHARS[s] for s in config)


class EmptyBasisError(ValueError):
    """No configuration satisfies the admissibility rule."""


@dataclass(frozen=True)
class FockBasis:
    """Ordered set of admissible configurations at fixed particle number."""

    configs: tuple
    num_sites: int
    num_particles: int
    index: dict = field(compare=False, repr=False)

    @property
    def dim(self) -> int:
        return len(self.configs)

    def index_of(self, config: Config) -> int:
        try:
            return self.index[tuple(config)]
        except KeyError:
            raise KeyError(f"config {config_str(config)} not in basis") from None

    def __contains__(self, config: Config) -> bool:
        return tuple(config) in self.index

    def occupancies(self) -> np.ndarray:
        """(dim, num_sites) particle counts per site."""
        return np.array(
            [[PARTICLES[s] for s in cfg] for cfg in self.configs], dtype=float
        )

    def spin_z(self) -> np.ndarray:
        """(dim, num_sites) values of n_up - n_down per site."""
        val = {
            LocalState.EMPTY: 0,
            LocalState.DOWN: -1,
            LocalState.UP: 1,
            LocalState.SINGLET: 0,
            LocalState.TRIPLET: 0,
        }
        return np.array([[val[s] for s in cfg] for cfg in self.configs], dtype=float)


def _make_basis(configs: Iterable[Config], num_sites: int, num_particles: int) -> FockBasis:
    configs = tuple(tuple(c) for c in configs)
    index = {c: i for i, c in enumerate(configs)}
    if len(index) != len(configs):
        raise ValueError("duplicate configurations")
    return FockBasis(configs, num_sites, num_particles, index)


def enumerate_basis(
    num_sites: int,
    num_particles: int,
    admissible: Callable[[int, LocalState], bool] | None = None,
) -> FockBasis:
    """All configurations with the given particle total, lexicographic order.

    `admissible(site, state)` filters local levels per site; by default all
    five levels are allowed everywhere.
    """
    if num_particles > 2 * num_sites:
        raise ValueError("num_particles exceeds 2 per site")
    if admissible is None:
        admissible = lambda site, state: True
    per_site = [
        tuple(s for s in LocalState if admissible(j, s)) for j in range(num_sites)
    ]
    configs = [
        cfg
        for cfg in product(*per_site)
        if sum(PARTICLES[s] for s in cfg) == num_particles
    ]
    if not configs:
        raise EmptyBasisError(
            f"no admissible configuration for {num_sites} sites / "
            f"{num_particles} particles"
        )
    return _make_basis(configs, num_sites, num_particles)


def spin_register_rule(num_sites: int) -> Callable[[int, LocalState], bool]:
    """Admissibility for quantum-dot registers: the leftmost dot is never
    empty and the rightmost dot never doubly occupied."""

    def rule(site: int, state: LocalState) -> bool:
        if site == 0 and state == LocalState.EMPTY:
            return False
        if site == num_sites - 1 and state in (LocalState.SINGLET, LocalState.TRIPLET):
            return False
        return True

    return rule


def atom_register_rule(num_sites: int) -> Callable[[int, LocalState], bool]:
    """Tweezer registers: no triplet level anywhere."""
    return lambda site, state: state != LocalState.TRIPLET


def reachable_subspace(
    basis: FockBasis,
    seeds: Sequence[Config],
    coupling,
    max_depth: int | None = None,
) -> FockBasis:
    """Closure of `seeds` under a symmetric adjacency, preserving basis order.

    `coupling` is a sparse operator over `basis` (nonzero off-diagonal
    entries define adjacency) or a callable index -> iterable of indices.
    `max_depth` truncates the breadth-first closure at a finite radius.
    """
    if sp.issparse(coupling):
        adj = coupling.tocsr()

        def neighbors(i: int):
            row = adj.getrow(i)
            return [j for j, v in zip(row.indices, row.data) if j != i and v != 0]

    else:
        neighbors = coupling

    seed_idx = []
    for s in seeds:
        if tuple(s) not in basis.index:
            raise KeyError(f"seed {config_str(s)} not in basis")
        seed_idx.append(basis.index_of(s))

    depth = {i: 0 for i in seed_idx}
    queue = deque(seed_idx)
    while queue:
        i = queue.popleft()
        if max_depth is not None and depth[i] >= max_depth:
            continue
        for j in neighbors(i):
            if j not in depth:
                depth[j] = depth[i] + 1
                queue.append(j)

    keep = sorted(depth)
    configs = [basis.configs[i] for i in keep]
    return _make_basis(configs, basis.num_sites, basis.num_particles)


# ---------------------------------------------------------------------------
# elementary operators and state plumbing


def apply(op, v: np.ndarray) -> np.ndarray:
    if op.shape[1] != v.shape[0]:
        raise ValueError(f"dimension mismatch: {op.shape} @ {v.shape}")
    return op @ v


def inner(u: np.ndarray, v: np.ndarray) -> complex:
    return complex(np.vdot(u, v))


def basis_state(basis: FockBasis, config: Config) -> np.ndarray:
    v = np.zeros(basis.dim, dtype=complex)
    v[basis.index_of(config)] = 1.0
    return v


def number_operator(basis: FockBasis, site: int) -> sp.csr_matrix:
    return sp.diags(basis.occupancies()[:, site]).tocsr()


def spin_z_operator(basis: FockBasis, site: int) -> sp.csr_matrix:
    return sp.diags(basis.spin_z()[:, site]).tocsr()


def lowering_operator(basis: FockBasis, site: int) -> sp.csr_matrix:
    """Per-site spin lowering c†_down c_up (UP -> DOWN on single occupancy)."""
    rows, cols = [], []
    for i, cfg in enumerate(basis.configs):
        if cfg[site] == LocalState.UP:
            target = list(cfg)
            target[site] = LocalState.DOWN
            j = basis.index.get(tuple(target))
            if j is not None:
                rows.append(j)
                cols.append(i)
    data = np.ones(len(rows))
    return sp.csr_matrix((data, (rows, cols)), shape=(basis.dim, basis.dim))


def mode_index(site: int, spin: int, flip_order: bool = False) -> int:
    """Mode ordering: site-ascending, spin down (0) before up (1).

    `flip_order` swaps the intra-site spin order (gauge check).
    """
    s = spin ^ 1 if flip_order else spin
    return 2 * site + s


def config_mode_bits(config: Config, flip_order: bool = False) -> tuple:
    bits = []
    for s in config:
        nd, nu = MODE_OCC[s]
        bits.extend((nu, nd) if flip_order else (nd, nu))
    return tuple(bits)


def hop_sign(bits: Sequence[int], m_to: int, m_from: int) -> int:
    """Sign of c†_{m_to} c_{m_from} between ordered-product basis states.

    `bits` is the source occupancy; requires bits[m_from] = 1 and
    bits[m_to] = 0 (m_to != m_from).
    """
    sign = 1
    # annihilate m_from: parity of occupied modes below it
    if sum(bits[:m_from]) % 2:
        sign = -sign
    # create at m_to on the intermediate state
    inter = list(bits)
    inter[m_from] = 0
    if sum(inter[:m_to]) % 2:
        sign = -sign
    return sign

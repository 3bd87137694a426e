"""Detuning-sweep protocols for the spin-qubit replacement gates.

Protocols are stroke plans over a staggered rest potential E_j = -j*stagger
(every bond parked far from its avoided crossings).  Crossing positions are
solved from the nominal branch configurations, slow windows are centered on
them, and the classical adiabatic propagator cross-checks that each branch
moves exactly as the gate requires before any quantum integration runs.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .fock import Config, FockBasis, LocalState, config_str
from .hubbard import DeviceParams, StaticHamiltonian, build_static, spin_basis
from .schedule import (
    ChargeMeasure,
    Hold,
    IdealFlip,
    RampSchedule,
    Relabel,
    Stroke,
    crossing_position,
    propagate_classical,
)

_E = LocalState.EMPTY
_D = LocalState.DOWN
_U = LocalState.UP
_S = LocalState.SINGLET


@dataclass(frozen=True)
class ScheduleOptions:
    """Tunable ramp geometry (µeV, µeV/ns)."""

    stagger: float = 300.0
    m_psb: float = 2500.0
    m_est: float = 2500.0
    v_slow: float = 800.0
    v_fast: float = 20000.0
    shape_power: int = 4
    hold: float = 0.0


@dataclass(frozen=True)
class GateProtocol:
    kind: str
    params: DeviceParams
    basis: FockBasis
    static: StaticHamiltonian
    options: ScheduleOptions
    input_sites: tuple
    output_sites: tuple
    template: tuple  # LocalState per site; None marks input slots
    schedule: RampSchedule
    branches: dict  # branch key -> (initial Config, nominal final Config)

    @property
    def aux_sites(self) -> tuple:
        return tuple(
            s for s in range(self.params.num_sites) if s not in self.output_sites
        )

    def initial_config(self, branch) -> Config:
        return self.branches[branch][0]

    def nominal_final(self, branch) -> Config:
        return self.branches[branch][1]


def _stroke(static, site, e_from, e_to, crossings, gap, opt, label):
    centers = tuple(sorted(crossings))
    return Stroke(
        site=site,
        e_from=e_from,
        e_to=e_to,
        slow_centers=centers,
        gap=gap,
        v_slow=opt.v_slow,
        v_fast=opt.v_fast,
        shape_power=opt.shape_power,
        label=label,
    )


def _solve(static, cfg_a, cfg_b, e_base, site, label):
    x = crossing_position(static, tuple(cfg_a), tuple(cfg_b), e_base, site)
    if x is None:
        raise ValueError(f"{label}: configurations do not cross on site {site}")
    return x


def _mirror_spin(cfg, sites):
    """Spin-swapped variant of a config on the given sites (for twin ALCs)."""
    flip = {_D: _U, _U: _D}
    out = list(cfg)
    for s in sites:
        out[s] = flip.get(out[s], out[s])
    return tuple(out)


def _psb_stroke(static, e, bond, cfg_11, cfg_20, opt, label, margin=None):
    """Sweep the left dot of `bond` down through the (1,1)->(2,0) crossing.

    Slow centers cover both product-pair crossings (their splitting is the
    Zeeman difference, well inside one gap width).
    """
    j = bond
    x_t = _solve(static, cfg_11, cfg_20, e, j, label)
    twin = _mirror_spin(cfg_11, (j, j + 1))
    centers = [x_t]
    if twin in static.basis.index:
        centers.append(_solve(static, twin, cfg_20, e, j, label))
    gap = 2.0 * np.sqrt(2.0) * static.params.t_cons[j]
    m = opt.m_psb if margin is None else margin
    return _stroke(static, j, e[j], x_t - m, centers, gap, opt, label), x_t - m


def _est_stroke(static, e, site, cfg_from, cfg_to, opt, label, down=False,
                margin=None):
    """Sweep `site` through a single-particle charge crossing."""
    x = _solve(static, cfg_from, cfg_to, e, site, label)
    centers = [x]
    movers = [s for s in range(len(cfg_from)) if cfg_from[s] != cfg_to[s]]
    twin_a = _mirror_spin(cfg_from, movers)
    twin_b = _mirror_spin(cfg_to, movers)
    if twin_a in static.basis.index and twin_b in static.basis.index:
        centers.append(_solve(static, twin_a, twin_b, e, site, label))
    gap = 2.0 * static.params.t_cons[min(movers)]
    m = opt.m_est if margin is None else margin
    target = x - m if down else x + m
    return _stroke(static, site, e[site], target, centers, gap, opt, label), target


def _validated(proto: GateProtocol, expected_finals: dict) -> GateProtocol:
    plan = [it for it in proto.schedule.items]
    traces = propagate_classical(
        proto.static,
        {k: v[0] for k, v in proto.branches.items()},
        plan,
        proto.schedule.e_rest,
    )
    branches = {}
    for key, tr in traces.items():
        if tuple(tr.config) != tuple(expected_finals[key]):
            raise AssertionError(
                f"branch {key}: classical propagation ends in "
                f"{config_str(tr.config)}, expected "
                f"{config_str(expected_finals[key])};\n"
                f"strong crossings: {tr.strong_crossings}"
            )
        branches[key] = (proto.branches[key][0], tuple(expected_finals[key]))
    return replace(proto, branches=branches)


# ---------------------------------------------------------------------------
# X gate (four dots): PSB(0,1), EST(2->1), EST(3->2)


def build_x_protocol(
    params: DeviceParams | None = None,
    options: ScheduleOptions | None = None,
) -> GateProtocol:
    from .hubbard import x_gate_params

    params = params or x_gate_params()
    opt = options or ScheduleOptions()
    basis = spin_basis(4, 4)
    static = build_static(params, basis)
    d = opt.stagger
    e_rest = (0.0, -d, -2 * d, -3 * d)

    init = {
        0: (_D, _D, _U, _D),
        1: (_D, _U, _U, _D),
    }
    final = {
        0: (_D, _D, _U, _D),
        1: (_S, _U, _D, _E),
    }

    e = np.array(e_rest)
    items = []

    s1, e0_end = _psb_stroke(
        static, e, 0, init[1], (_S, _E, _U, _D), opt, "psb01"
    )
    items.append(s1)
    e[0] = e0_end

    s2, e2_end = _est_stroke(
        static, e, 2, (_S, _E, _U, _D), (_S, _U, _E, _D), opt, "est21"
    )
    items.append(s2)
    e[2] = e2_end

    s3, e3_end = _est_stroke(
        static, e, 3, (_S, _U, _E, _D), (_S, _U, _D, _E), opt, "est32"
    )
    items.append(s3)
    e[3] = e3_end

    if opt.hold > 0:
        items.append(Hold(opt.hold, label="hold"))

    proto = GateProtocol(
        kind="x",
        params=params,
        basis=basis,
        static=static,
        options=opt,
        input_sites=(1,),
        output_sites=(2,),
        template=(_D, None, _U, _D),
        schedule=RampSchedule(e_rest, tuple(items)),
        branches={k: (init[k], final[k]) for k in init},
    )
    return _validated(proto, final)

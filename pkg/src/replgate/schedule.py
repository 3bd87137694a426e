"""Piecewise-linear detuning schedules with gap-shaped sweep velocities.

A protocol is a sequence of strokes; each stroke sweeps one site's
potential between two values.  Near every strong avoided crossing the
level velocity drops to `v_slow` and grows back as the cube-or-higher
power of the local gap, capped at `v_fast` away from the sensitive spots.

The module also provides a classical adiabatic propagator: it pushes
nominal basis configurations through a stroke plan, swapping a
configuration with its partner whenever a strongly-coupled crossing is
traversed and recording weakly-coupled (leaky) crossings.  Protocol
builders use it to place slow windows, to verify that only the intended
transfers happen in every branch, and to derive the nominal final
configurations used by tomography.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .fock import Config, config_str
from .hubbard import StaticHamiltonian


@dataclass(frozen=True)
class Stroke:
    """Linear sweep of one site's potential with shaped velocity."""

    site: int
    e_from: float
    e_to: float
    slow_centers: tuple = ()
    gap: float = 50.0
    v_slow: float = 800.0
    v_fast: float = 20000.0
    shape_power: int = 4
    label: str = ""

    def velocity(self, e) -> np.ndarray:
        e = np.asarray(e, dtype=float)
        if not self.slow_centers:
            return np.full_like(e, self.v_fast)
        d = np.min(
            np.abs(e[..., None] - np.asarray(self.slow_centers)), axis=-1
        )
        g = np.hypot(d, self.gap)
        v = self.v_slow * (g / self.gap) ** self.shape_power
        return np.minimum(v, self.v_fast)


@dataclass(frozen=True)
class Hold:
    duration: float
    label: str = ""


@dataclass(frozen=True)
class Relabel:
    """Ideal shuttling: move the occupant of one site to an empty site."""

    src: int
    dst: int
    label: str = ""


@dataclass(frozen=True)
class IdealFlip:
    """Instantaneous EDSR X on one site (optionally imperfect)."""

    site: int
    label: str = ""


@dataclass(frozen=True)
class ChargeMeasure:
    """Hybrid charge measurement (|1_a, x_b> +- |x_a, 1_b>)/sqrt2."""

    site_a: int
    site_b: int
    label: str = ""


@dataclass(frozen=True)
class RampSchedule:
    """Contiguous sequence of schedule items starting from rest detunings."""

    e_rest: tuple
    items: tuple

    def __post_init__(self):
        e = np.asarray(self.e_rest, dtype=float)
        for it in self.items:
            if isinstance(it, Stroke):
                if it.e_from != e[it.site]:
                    raise ValueError(
                        f"stroke '{it.label}' starts at {it.e_from}, site is at "
                        f"{e[it.site]}"
                    )
                if it.e_from == it.e_to:
                    raise ValueError(f"stroke '{it.label}' has zero span")
                e = e.copy()
                e[it.site] = it.e_to
        object.__setattr__(self, "_e_final", tuple(e))

    @property
    def e_final(self):
        return self._e_final

    def duration(self) -> float:
        t = 0.0
        for it in self.items:
            if isinstance(it, Stroke):
                grid = stroke_time_grid(it)
                t += float(np.sum(grid[:, 1]))
            elif isinstance(it, Hold):
                t += it.duration
        return t


def stroke_time_grid(
    stroke: Stroke,
    theta_res: float = 0.04,
    dt_max: float = 0.02,
    step_scale: float = 1.0,
) -> np.ndarray:
    """(n_steps, 2) array of (de, dt) covering the sweep.

    Step sizes resolve the mixing-angle rotation near crossings
    (de <= theta_res * G^2 / (gap/2)) and are time-capped at dt_max away
    from them; `step_scale` < 1 refines everything for convergence checks.
    """
    span = stroke.e_to - stroke.e_from
    direction = np.sign(span)
    e = stroke.e_from
    out = []
    theta_res = theta_res * step_scale
    dt_max = dt_max * step_scale
    guard = 0
    while (stroke.e_to - e) * direction > 1e-12:
        if stroke.slow_centers:
            d = min(abs(e - c) for c in stroke.slow_centers)
            g2 = d * d + stroke.gap * stroke.gap
            de_theta = theta_res * g2 / (stroke.gap / 2.0)
        else:
            de_theta = abs(span)
        v = float(stroke.velocity(e))
        de = min(de_theta, v * dt_max, abs(stroke.e_to - e))
        out.append((direction * de, de / v))
        e += direction * de
        guard += 1
        if guard > 2_000_000:
            raise RuntimeError("stroke grid did not terminate")
    return np.array(out)


# ---------------------------------------------------------------------------
# crossing solver and classical adiabatic propagation


def crossing_position(
    static: StaticHamiltonian, cfg_a: Config, cfg_b: Config, e_base, site: int
):
    """Swept-site potential at which the two configs are degenerate, or None."""
    ia, ib = static.basis.index_of(cfg_a), static.basis.index_of(cfg_b)
    d_occ = static.occupancy[ia, site] - static.occupancy[ib, site]
    if d_occ == 0.0:
        return None
    e = np.asarray(e_base, dtype=float).copy()
    e[site] = 0.0
    gap0 = static.diagonal(e)[ia] - static.diagonal(e)[ib]
    return -gap0 / d_occ


@dataclass
class BranchTrace:
    """Classical state of one nominal branch during plan propagation."""

    config: Config
    weak_crossings: list = field(default_factory=list)
    strong_crossings: list = field(default_factory=list)


def _partners(static: StaticHamiltonian, cfg: Config):
    i = static.basis.index_of(cfg)
    row = static.vmat.getrow(i)
    for j, v in zip(row.indices, row.data):
        if j != i and v != 0:
            yield static.basis.configs[j], abs(v)


def propagate_classical(
    static: StaticHamiltonian,
    branches: dict,
    plan,
    e_rest,
    strong_threshold: float = 5.0,
) -> dict:
    """Push nominal configs through a stroke plan with adiabatic rules.

    Strongly-coupled crossings (|V| >= strong_threshold, µeV) traversed by
    the sweep swap the branch config to its partner; weak ones are recorded
    as leaks and skipped.  Returns {branch: BranchTrace}.
    """
    e = np.asarray(e_rest, dtype=float).copy()
    traces = {name: BranchTrace(tuple(cfg)) for name, cfg in branches.items()}
    for item in plan:
        if isinstance(item, Stroke):
            lo, hi = sorted((item.e_from, item.e_to))
            direction = np.sign(item.e_to - item.e_from)
            for name, tr in traces.items():
                pos = item.e_from
                for _ in range(60):
                    events = []
                    for partner, v in _partners(static, tr.config):
                        x = crossing_position(
                            static, tr.config, partner, e, item.site
                        )
                        if x is None or not (lo + 1e-9 < x < hi - 1e-9):
                            continue
                        if (x - pos) * direction <= 1e-9:
                            continue
                        events.append((direction * x, x, partner, v))
                    if not events:
                        break
                    events.sort()
                    _, x, partner, v = events[0]
                    pos = x
                    if v >= strong_threshold:
                        tr.strong_crossings.append(
                            (item.label, config_str(tr.config),
                             config_str(partner), x, v)
                        )
                        tr.config = tuple(partner)
                    else:
                        tr.weak_crossings.append(
                            (item.label, config_str(tr.config),
                             config_str(partner), x, v)
                        )
            e[item.site] = item.e_to
        elif isinstance(item, Relabel):
            from .fock import LocalState

            for tr in traces.values():
                cfg = list(tr.config)
                if cfg[item.dst] != LocalState.EMPTY:
                    if cfg[item.src] == LocalState.EMPTY:
                        continue
                    raise ValueError(
                        f"relabel {item.src}->{item.dst} onto occupied site "
                        f"in {config_str(cfg)}"
                    )
                cfg[item.dst], cfg[item.src] = cfg[item.src], LocalState.EMPTY
                tr.config = tuple(cfg)
        elif isinstance(item, IdealFlip):
            from .fock import LocalState

            flip = {
                LocalState.DOWN: LocalState.UP,
                LocalState.UP: LocalState.DOWN,
            }
            for tr in traces.values():
                cfg = list(tr.config)
                cfg[item.site] = flip.get(cfg[item.site], cfg[item.site])
                tr.config = tuple(cfg)
        # Hold / ChargeMeasure do not move charges classically
    return traces

"""Tabulated data for each figure of the protocol, plus CSV/JSON rendering.

Parameters follow the figure-caption conventions: ``g`` is m g d / (hbar^2 pi)
and ``kd`` is k d / pi (or k0 d / pi for the averaged figures); ``epsilon``
is the momentum width in units of pi / d.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from . import states
from .channel import spectrum, superoperator_of
from .protocol import SchemeKind, run
from .scattering import ScatteringParams, closed_form_T_R, transmission_probability
from .wavepacket import (
    MomentumDistribution,
    asymptotic_fidelity,
    averaged_channel,
    averaged_trajectory,
    averaged_transition,
)

G_PRESETS = (0.5, 1.0, 2.0)
KD_PRESETS = (1.0, 2.0, 3.0)


def _fmt(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


@dataclass
class Block:
    params: dict
    columns: list
    rows: list


@dataclass
class ResultTable:
    """Named collection of blocks sharing a parameter echo.

    Rendering is deterministic: identical inputs give byte-identical text.
    """

    name: str
    params: dict
    blocks: list = field(default_factory=list)

    def to_csv(self):
        lines = [f"# resonant-filter {self.name}"]
        lines += [f"# {k}={_fmt_param(v)}" for k, v in self.params.items()]
        for b in self.blocks:
            echo = " ".join(f"{k}={_fmt_param(v)}" for k, v in b.params.items())
            lines.append(f"# block {echo}".rstrip())
            lines.append(",".join(b.columns))
            lines += [",".join(_fmt(x) for x in row) for row in b.rows]
        return "\n".join(lines) + "\n"

    def to_json(self):
        doc = {
            "figure": self.name,
            "parameters": self.params,
            "blocks": [
                {
                    "parameters": b.params,
                    "columns": b.columns,
                    "rows": [[_json_value(x) for x in row] for row in b.rows],
                }
                for b in self.blocks
            ],
        }
        return json.dumps(doc, indent=1) + "\n"

    def render(self, fmt="csv"):
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown output format {fmt!r}")


def _fmt_param(v):
    if isinstance(v, (list, tuple)):
        return ";".join(_fmt_param(x) for x in v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _json_value(x):
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    return x if np.isfinite(x) else None


def family(presets, extra):
    """Caption presets followed by any extra values not already present."""
    out = list(presets)
    for v in extra or ():
        if not any(np.isclose(v, p, rtol=0, atol=1e-12) for p in out):
            out.append(float(v))
    return out


def grid(upper, points):
    """``points`` equally spaced values on (0, upper], right end included."""
    return upper * np.arange(1, points + 1) / points


def fig2(g_values=G_PRESETS, points=400, kd_max=4.0, rho_ab=None, rho_ab_name="singlet"):
    """Transmission probability of unpolarized X through AB vs kd/pi."""
    rho_ab = states.singlet() if rho_ab is None else rho_ab
    x_spin = np.eye(2) / 2
    table = ResultTable("fig2", {"kd_max": kd_max, "points": points, "x_spin": "mixed", "rho_ab": rho_ab_name})
    for g in g_values:
        rows = [
            (x, transmission_probability(ScatteringParams.from_caption(g, x), x_spin, rho_ab))
            for x in grid(kd_max, points)
        ]
        table.blocks.append(Block({"g": g}, ["kd_over_pi", "transmission"], rows))
    return table


def fig3(g=1.0, points=350, kd_max=3.5):
    """|lambda0| and |lambda1| of the transmission map vs kd/pi."""
    rows = []
    for x in grid(kd_max, points):
        ev = spectrum(superoperator_of(closed_form_T_R(ScatteringParams.from_caption(g, x)).t)).eigenvalues
        rows.append((x, abs(ev[0]), abs(ev[1])))
    table = ResultTable("fig3", {"g": g, "kd_max": kd_max, "points": points})
    table.blocks.append(Block({"g": g}, ["kd_over_pi", "abs_lambda0", "abs_lambda1"], rows))
    return table


def _panel_family(panel, g, kd, extra_g, extra_kd):
    """(list of (g, kd) pairs, echo dict) for panel a (kd family at fixed g)
    or panel b (g family at fixed kd)."""
    if panel == "a":
        return [(g, x) for x in family(KD_PRESETS, extra_kd)], {"panel": "a", "g": g}
    if panel == "b":
        return [(x, kd) for x in family(G_PRESETS, extra_g)], {"panel": "b", "kd": kd}
    raise ValueError(f"panel must be 'a' or 'b', got {panel!r}")


def _trajectory_rows(traj, n_max):
    rows = [(int(n), f, p) for n, f, p in zip(traj.n, traj.fidelity, traj.probability)]
    rows += [(n, float("nan"), 0.0) for n in range(len(rows), n_max + 1)]
    return rows


def fig4(panel="a", g=1.0, kd=2.0, extra_g=(), extra_kd=(), n_max=30, rho0=None, rho0_name="mixed"):
    """F(N), P(N) of the transmission-only protocol at resonance."""
    rho0 = states.mixed() if rho0 is None else rho0
    pairs, echo = _panel_family(panel, g, kd, extra_g, extra_kd)
    table = ResultTable("fig4", {**echo, "N": n_max, "rho0": rho0_name})
    for gi, xi in pairs:
        ops = closed_form_T_R(ScatteringParams.from_caption(gi, xi))
        traj = run(ops.t, ops.r, SchemeKind.TRANSMISSION_ONLY, rho0, n_max)
        table.blocks.append(Block({"g": gi, "kd_over_pi": xi}, ["N", "F", "P"], _trajectory_rows(traj, n_max)))
    return table


def fig5(g=1.0, kd=2.0, n_max=40, rho0=None, rho0_name="updown"):
    """F(N), P(N) under the three post-selection schemes."""
    rho0 = states.updown() if rho0 is None else rho0
    ops = closed_form_T_R(ScatteringParams.from_caption(g, kd))
    table = ResultTable("fig5", {"g": g, "kd_over_pi": kd, "N": n_max, "rho0": rho0_name})
    for scheme in SchemeKind:
        traj = run(ops.t, ops.r, scheme, rho0, n_max)
        table.blocks.append(Block({"scheme": scheme.value}, ["N", "F", "P"], _trajectory_rows(traj, n_max)))
    return table


def fig6(panel="a", g=1.0, kd=2.0, extra_g=(), extra_kd=(), eps_max=0.2, points=40, n_nodes=64, n_panels=16):
    """Limiting fidelity and leading eigenvalue of the averaged population
    matrix vs the momentum width."""
    pairs, echo = _panel_family(panel, g, kd, extra_g, extra_kd)
    eps_grid = np.concatenate([[0.0], grid(eps_max, points)])
    table = ResultTable("fig6", {**echo, "epsilon_max": eps_max, "points": points, "nodes": n_nodes, "panels": n_panels})
    for gi, xi in pairs:
        rows = []
        for e in eps_grid:
            dist = MomentumDistribution(xi * np.pi, e * np.pi, n_nodes=n_nodes, n_panels=n_panels)
            f_inf, lam0 = asymptotic_fidelity(averaged_transition(dist, gi))
            rows.append((e, f_inf, lam0))
        table.blocks.append(Block({"g": gi, "k0d_over_pi": xi}, ["epsilon_over_pi", "F_inf", "lambda0"], rows))
    return table


def fig7(panel="a", g=1.0, kd=2.0, extra_g=(), extra_kd=(), epsilon=0.05, n_max=50, rho0=None,
         rho0_name="mixed", n_nodes=64, n_panels=16):
    """F(N), P(N) under the momentum-averaged map."""
    rho0 = states.mixed() if rho0 is None else rho0
    pairs, echo = _panel_family(panel, g, kd, extra_g, extra_kd)
    table = ResultTable("fig7", {**echo, "epsilon_over_pi": epsilon, "N": n_max, "rho0": rho0_name,
                                 "nodes": n_nodes, "panels": n_panels})
    for gi, xi in pairs:
        dist = MomentumDistribution(xi * np.pi, epsilon * np.pi, n_nodes=n_nodes, n_panels=n_panels)
        traj = averaged_trajectory(averaged_channel(dist, gi), rho0, n_max)
        table.blocks.append(Block({"g": gi, "k0d_over_pi": xi}, ["N", "F", "P"], _trajectory_rows(traj, n_max)))
    return table

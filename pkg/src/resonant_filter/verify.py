"""Self-contained verification suite run by ``resonant-filter verify``.

Each check returns a :class:`CheckResult`; :func:`run_all` runs them in a
fixed order.  The pytest suite exercises the same properties independently.
"""

import time
from dataclasses import dataclass

import numpy as np

from . import figures, states
from .channel import spectrum, superoperator_of, transition_matrix
from .protocol import SchemeKind, closed_form_resonant, run
from .scattering import (
    ScatteringParams,
    closed_form_T_R,
    composed_T_R,
    oracle_T_R,
    transmission_probability,
)
from .spin_algebra import projectors, useful_relations_check
from .wavepacket import MomentumDistribution, asymptotic_fidelity, averaged_channel, averaged_trajectory


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self):
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def acceptance_grid():
    """20 x 20 grid over omega in (0, 3] and kd in (0, 3 pi]."""
    omegas = 3.0 * np.arange(1, 21) / 20
    kds = 3 * np.pi * np.arange(1, 21) / 20
    return [ScatteringParams(w, kd) for w in omegas for kd in kds]


def _maxdiff(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def check_operator_identities():
    pr = projectors()
    one = np.eye(8)
    devs = [
        _maxdiff(pr.p_minus @ pr.p_minus, pr.p_minus),
        _maxdiff(pr.p_plus @ pr.p_plus, pr.p_plus),
        _maxdiff(pr.p_minus + pr.p_plus, one),
        _maxdiff(pr.q_half + pr.q_three_half, one),
        _maxdiff(pr.q_three_half @ pr.p_minus, 0),
    ]
    rel = useful_relations_check()
    ok = max(devs) < 1e-12 and all(rel.values())
    return CheckResult("operator identities", ok, f"max projector deviation {max(devs):.2e}, "
                       f"{sum(rel.values())}/{len(rel)} relations hold")


def check_unitarity():
    t0 = time.perf_counter()
    worst = max(closed_form_T_R(p).unitarity_defect() for p in acceptance_grid())
    dt = time.perf_counter() - t0
    return CheckResult("1 unitarity", worst < 1e-12 and dt < 1.0, f"max defect {worst:.2e} in {dt:.2f}s")


def check_triple_agreement():
    t0 = time.perf_counter()
    worst = 0.0
    for p in acceptance_grid():
        c, m, o = closed_form_T_R(p), composed_T_R(p), oracle_T_R(p)
        worst = max(worst, _maxdiff(c.t, m.t), _maxdiff(c.r, m.r), _maxdiff(c.t, o.t), _maxdiff(c.r, o.r))
    dt = time.perf_counter() - t0
    return CheckResult("2 triple agreement", worst < 1e-10 and dt < 10.0, f"max deviation {worst:.2e} in {dt:.2f}s")


def check_resonant_transmission():
    x_spin = np.eye(2) / 2
    worst = max(
        abs(transmission_probability(ScatteringParams.from_caption(g, n), x_spin, states.singlet()) - 1)
        for n in (1, 2, 3)
        for g in figures.G_PRESETS
    )
    return CheckResult("3 resonant transmission", worst < 1e-12, f"max |1 - T| {worst:.2e}")


def check_spectral_gap():
    ok = True
    notes = []
    for n in (1, 2, 3):
        s = superoperator_of(closed_form_T_R(ScatteringParams.from_caption(1.0, n)).t)
        dense = spectrum(s).eigenvalues
        sub = spectrum(s, "subspace").eigenvalues
        gap_ok = abs(dense[0] - 1) < 1e-10 and abs(dense[1]) < 1 - 1e-3
        agree = max(abs(abs(dense[0]) - abs(sub[0])), abs(abs(dense[1]) - abs(sub[1])))
        ok &= gap_ok and agree < 1e-8
        notes.append(f"kd={n}pi |l1|={abs(dense[1]):.4f}")
    off = spectrum(superoperator_of(closed_form_T_R(ScatteringParams.from_caption(1.0, 1.5)).t)).eigenvalues
    ok &= abs(off[0]) < 1
    notes.append(f"off-resonance |l0|={abs(off[0]):.4f}")
    return CheckResult("4 fixed point and spectral gap", bool(ok), ", ".join(notes))


def check_resonant_transition():
    worst = 0.0
    for w in (0.25, 0.5, 1.0, 2.0):
        tm = transition_matrix(ScatteringParams(w, np.pi))
        worst = max(worst, abs(tm.t_pp - (1 + 12 * w**2) / ((1 + 4 * w**2) * (1 + 16 * w**2))))
    at_one = transition_matrix(ScatteringParams(1.0, np.pi)).t_pp
    worst = max(worst, abs(at_one - 13 / 85))
    return CheckResult("5 resonant transition element", worst < 1e-12, f"max deviation {worst:.2e}")


def check_protocol_convergence():
    ops = closed_form_T_R(ScatteringParams.from_caption(1.0, 1.0))
    traj = run(ops.t, ops.r, SchemeKind.TRANSMISSION_ONLY, states.mixed(), 30)
    f_cf, p_cf = closed_form_resonant(1.0, 0.25, traj.n)
    match = max(_maxdiff(traj.fidelity, f_cf), _maxdiff(traj.probability, p_cf))
    ok = abs(1 - traj.fidelity[30]) < 1e-10 and abs(traj.probability[30] - 0.25) < 1e-10 and match < 1e-12
    return CheckResult("6 protocol convergence", bool(ok),
                       f"1-F(30)={1 - traj.fidelity[30]:.2e}, P(30)-0.25={traj.probability[30] - 0.25:.2e}, "
                       f"closed-form match {match:.2e}")


def check_scheme_comparison():
    ops = closed_form_T_R(ScatteringParams(0.5, 2 * np.pi))
    rho0 = states.updown()
    t = {s: run(ops.t, ops.r, s, rho0, 400) for s in SchemeKind}
    fa = t[SchemeKind.TRANSMISSION_ONLY].fidelity[1:41]
    fb = t[SchemeKind.SPIN_PREPARED_POSTSELECTED].fidelity[1:41]
    fc = t[SchemeKind.TRANSMISSION_AND_SPIN].fidelity[1:41]
    pa = t[SchemeKind.TRANSMISSION_ONLY].probability[-1]
    pb = t[SchemeKind.SPIN_PREPARED_POSTSELECTED].probability[-1]
    ok = np.all(fa >= fb) and np.all(fc >= fa - 1e-12) and abs(pa - 0.5) < 1e-6 and abs(pb - 0.5) < 1e-6
    return CheckResult("7 scheme comparison", bool(ok), f"P_a(400)={pa:.8f}, P_b(400)={pb:.8f}")


def check_robustness():
    g, k0 = 1.0, 2 * np.pi
    f0, l0 = asymptotic_fidelity(averaged_channel(MomentumDistribution(k0, 0.0), g))
    reduction = max(abs(f0 - 1), abs(l0 - 1))
    f_eps = [asymptotic_fidelity(averaged_channel(MomentumDistribution(k0, e * np.pi), g))[0]
             for e in (0.0, 0.05, 0.1, 0.15, 0.2)]
    avg = averaged_channel(MomentumDistribution(k0, 0.05 * np.pi), g)
    f5, l5 = asymptotic_fidelity(avg)
    traj = averaged_trajectory(avg, states.mixed(), 101)
    ratio_dev = abs(traj.decay_ratio(100) - l5)
    ok = (reduction < 1e-6 and l5 < 1 and f5 < 1 and bool(np.all(np.diff(f_eps) < 0)) and ratio_dev < 1e-6)
    return CheckResult("8 robustness", bool(ok),
                       f"lambda0={l5:.6f}, F_inf={f5:.6f}, decay-ratio deviation {ratio_dev:.2e}")


def check_determinism():
    makers = {
        "fig2": lambda: figures.fig2(points=40),
        "fig3": lambda: figures.fig3(points=35),
        "fig4": lambda: figures.fig4(),
        "fig5": lambda: figures.fig5(),
        "fig6": lambda: figures.fig6(points=4),
        "fig7": lambda: figures.fig7(n_max=10),
    }
    bad = [name for name, make in makers.items() if make().to_csv() != make().to_csv()]
    return CheckResult("9 determinism", not bad, "byte-identical" if not bad else f"differs: {bad}")


CHECKS = (
    check_operator_identities,
    check_unitarity,
    check_triple_agreement,
    check_resonant_transmission,
    check_spectral_gap,
    check_resonant_transition,
    check_protocol_convergence,
    check_scheme_comparison,
    check_robustness,
    check_determinism,
)


def run_all():
    return [check() for check in CHECKS]

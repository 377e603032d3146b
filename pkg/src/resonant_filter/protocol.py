"""Repeated-transmission singlet extraction and the comparison schemes."""

import enum
from dataclasses import dataclass, field

import numpy as np

from .channel import (
    Superoperator,
    populations,
    resonant_t_pp,
    spectrum,
    superoperator_from_kraus,
    superoperator_of,
    unvec,
    vec,
)
from .spin_algebra import TOL
from .states import DensityMatrix, as_density, check_density, singlet_projector

UNDERFLOW = 1e-300


class SchemeKind(enum.Enum):
    """Which events are post-selected after each ancilla passes.

    TRANSMISSION_ONLY
        unpolarized X, keep transmitted X, spin not measured.
    SPIN_PREPARED_POSTSELECTED
        X prepared up, keep X found up, transmitted or reflected.
    TRANSMISSION_AND_SPIN
        X prepared up, keep X transmitted and found up.
    """

    TRANSMISSION_ONLY = "transmission_only"
    SPIN_PREPARED_POSTSELECTED = "spin_prepared_postselected"
    TRANSMISSION_AND_SPIN = "transmission_and_spin"


@dataclass
class ProtocolTrajectory:
    """F(N) and cumulative P(N) for N = 0, 1, ..., with the normalized states.

    ``truncated`` is set when P(N) underflowed and the run stopped early.
    ``raw_traces`` holds the one-step trace Tr{map(rho(N-1))} when the
    run was made with ``verbose=True``.
    """

    n: np.ndarray
    fidelity: np.ndarray
    probability: np.ndarray
    states: list = field(repr=False)
    truncated: bool = False
    raw_traces: np.ndarray | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.n)

    @property
    def steps(self):
        return list(zip(self.n, self.fidelity, self.probability, self.states))

    def decay_ratio(self, n):
        """P(n+1) / P(n)."""
        return self.probability[n + 1] / self.probability[n]


def _up_block(op):
    # <up|_X op |up>_X as a 4x4 AB operator
    return np.asarray(op)[:4, :4]


def scheme_superoperator(scheme, t_op, r_op=None):
    """The one-step (unnormalized) map of ``scheme`` as a Superoperator."""
    scheme = SchemeKind(scheme)
    if scheme is SchemeKind.TRANSMISSION_ONLY:
        return superoperator_of(t_op)
    if scheme is SchemeKind.TRANSMISSION_AND_SPIN:
        return superoperator_from_kraus([_up_block(t_op)])
    if r_op is None:
        raise ValueError(f"scheme {scheme.value} needs the reflection operator")
    return superoperator_from_kraus([_up_block(t_op), _up_block(r_op)])


def run_superoperator(s, rho0, n_max, verbose=False):
    """Iterate a trace-nonincreasing superoperator from ``rho0``.

    The state is renormalized after every step and P(N) accumulated as a
    product of one-step traces, so geometric decay of P does not underflow
    the state itself.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max!r}")
    rho = check_density(as_density(rho0), dim=4)
    mat = s.mat if isinstance(s, Superoperator) else np.asarray(s)
    pm = singlet_projector()

    states = [DensityMatrix(rho)]
    fid = [float(np.trace(pm @ rho).real)]
    prob = [1.0]
    raw = []
    truncated = False
    p = 1.0
    for _ in range(n_max):
        nxt = unvec(mat @ vec(rho))
        tr = float(np.trace(nxt).real)
        raw.append(tr)
        if tr <= 0 or p * tr < UNDERFLOW:
            truncated = True
            break
        p *= tr
        rho = nxt / tr
        rho = (rho + rho.conj().T) / 2
        states.append(DensityMatrix(rho))
        fid.append(float(np.trace(pm @ rho).real))
        prob.append(p)

    return ProtocolTrajectory(
        n=np.arange(len(fid)),
        fidelity=np.array(fid),
        probability=np.array(prob),
        states=states,
        truncated=truncated,
        raw_traces=np.array(raw) if verbose else None,
    )


def run(t_op, r_op, scheme, rho0, n_max, verbose=False):
    """Simulate ``n_max`` rounds of ``scheme`` starting from ``rho0``."""
    return run_superoperator(scheme_superoperator(scheme, t_op, r_op), rho0, n_max, verbose)


def closed_form_resonant(omega, rho0_singlet_weight, n):
    """F(N) and P(N) at resonance from the initial singlet weight alone.

    ``n`` may be an integer or an array of integers.
    """
    w = float(rho0_singlet_weight)
    if not 0 <= w <= 1:
        raise ValueError(f"singlet weight must lie in [0, 1], got {w!r}")
    p = w + resonant_t_pp(omega) ** np.asarray(n) * (1 - w)
    with np.errstate(invalid="ignore", divide="ignore"):
        f = np.where(p > 0, w / np.where(p > 0, p, 1), 0.0)
    if np.ndim(f) == 0:
        return float(f), float(p)
    return f, p


@dataclass(frozen=True)
class Asymptotics:
    """Large-N behaviour read off the dominant eigenpair of the map.

    P(N) ~ ``weight`` * ``lambda0`` ** N.  ``probability`` is the N -> oo limit
    of P (``weight`` if lambda0 is 1, else 0) and ``fidelity`` the limiting
    singlet fidelity.  ``resonant`` is False when lambda0 differs from 1.
    """

    fidelity: float
    probability: float
    lambda0: complex
    weight: float
    resonant: bool


def asymptotics(t_op, rho0, tol=1e-10):
    sp = spectrum(superoperator_of(t_op), rho0=rho0)
    limit = sp.projected.mat
    weight = float(np.trace(limit).real)
    resonant = bool(abs(sp.lambda0 - 1) < tol)
    if abs(weight) < TOL:
        fidelity = float("nan")
    else:
        fidelity = float(populations(limit)[0] / weight)
    return Asymptotics(
        fidelity=fidelity,
        probability=weight if resonant else 0.0,
        lambda0=complex(sp.lambda0),
        weight=weight,
        resonant=resonant,
    )

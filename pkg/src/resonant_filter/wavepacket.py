"""Averaging the map over a spread of incident wave vectors.

The incident momentum is Gaussian around ``k0`` with width ``epsilon``,
either as a coherent packet |psi(k)|^2 or as an incoherent fluctuation
f(k); both give the same weighted average of the monochromatic map.
Wave vectors are in units of 1/d.  The coupling is given as the
dimensionless m g d / (hbar^2 pi), so omega(k) = coupling * pi / (k d).
"""

from dataclasses import dataclass

import numpy as np

from .channel import Superoperator, TransitionMatrix, superoperator_of, transition_matrix
from .protocol import run_superoperator
from .scattering import ScatteringParams, closed_form_T_R

DEFAULT_NODES = 64
DEFAULT_PANELS = 16
DEFAULT_HALFWIDTH = 5.0


@dataclass(frozen=True)
class MomentumDistribution:
    k0: float
    epsilon: float
    n_nodes: int = DEFAULT_NODES
    support_halfwidth: float = DEFAULT_HALFWIDTH
    kind: str = "fluctuation"
    n_panels: int = DEFAULT_PANELS

    def __post_init__(self):
        if not self.k0 > 0:
            raise ValueError(f"k0 must be positive, got {self.k0!r}")
        if not self.epsilon >= 0:
            raise ValueError(f"epsilon must be nonnegative, got {self.epsilon!r}")
        if self.epsilon > 0 and (self.n_nodes < 2 or self.n_panels < 1):
            raise ValueError("need at least two quadrature nodes and one panel for a finite width")
        if self.kind not in ("fluctuation", "packet"):
            raise ValueError(f"kind must be 'fluctuation' or 'packet', got {self.kind!r}")

    def density(self, k):
        eps = self.epsilon
        return np.exp(-((k - self.k0) ** 2) / (2 * eps**2)) / np.sqrt(2 * np.pi * eps**2)

    def nodes(self):
        """Quadrature nodes on k0 +- halfwidth*epsilon and normalized weights.

        The support is cut into ``n_panels`` equal panels, each carrying an
        ``n_nodes``-point Gauss-Legendre rule.  A single rule leaves its
        sparsest nodes at the centre, exactly where the transmission
        resonance is sharpest.  Nodes at k <= 0 are dropped and the
        remaining weights renormalized.
        """
        if self.epsilon == 0:
            return np.array([float(self.k0)]), np.array([1.0])
        x, w = np.polynomial.legendre.leggauss(self.n_nodes)
        half = self.support_halfwidth * self.epsilon
        edges = np.linspace(self.k0 - half, self.k0 + half, self.n_panels + 1)
        mid = (edges[:-1] + edges[1:]) / 2
        h = (edges[1:] - edges[:-1]) / 2
        k = (mid[:, None] + h[:, None] * x).ravel()
        wt = (h[:, None] * w).ravel() * self.density(k)
        keep = k > 0
        if not keep.any():
            raise ValueError("distribution has no support at positive k")
        k, wt = k[keep], wt[keep]
        return k, wt / wt.sum()


@dataclass(frozen=True)
class AveragedChannel:
    superop: Superoperator
    transition: TransitionMatrix
    nodes: np.ndarray
    weights: np.ndarray


def _node_params(k, coupling, d):
    return ScatteringParams(omega=coupling * np.pi / (k * d), kd=k * d)


def averaged_transition(dist, coupling, d=1.0):
    """Only the k-averaged 2x2 population matrix (cheaper than the full channel)."""
    k, w = dist.nodes()
    tm = np.zeros((2, 2))
    for ki, wi in zip(k, w):
        tm += wi * transition_matrix(_node_params(ki, coupling, d)).as_array()
    return TransitionMatrix.from_array(tm)


def averaged_channel(dist, coupling, d=1.0):
    """Weighted sums of the superoperator and the 2x2 population matrix.

    Each node k_i carries its own omega_i = coupling * pi / (k_i d) and
    phase k_i d.  Nodes are accumulated in ascending k so the sum is
    reproducible.
    """
    k, w = dist.nodes()
    s = np.zeros((16, 16), dtype=complex)
    tm = np.zeros((2, 2))
    for ki, wi in zip(k, w):
        params = _node_params(ki, coupling, d)
        s += wi * superoperator_of(closed_form_T_R(params).t).mat
        tm += wi * transition_matrix(params).as_array()
    return AveragedChannel(Superoperator(s), TransitionMatrix.from_array(tm), k, w)


class DefectiveMatrixError(ArithmeticError):
    pass


def asymptotic_fidelity(avg):
    """(F(oo), lambda0) from the dominant eigenpair of the averaged 2x2 matrix.

    The limiting fidelity is v_- / (v_- + v_+) for the dominant
    eigenvector v.
    """
    if isinstance(avg, AveragedChannel):
        m = avg.transition.as_array()
    elif isinstance(avg, TransitionMatrix):
        m = avg.as_array()
    else:
        m = np.asarray(avg)
    ev, vecs = np.linalg.eig(m)
    if abs(ev[0] - ev[1]) < 1e-14:
        raise DefectiveMatrixError("averaged transition matrix has a repeated eigenvalue")
    i = int(np.argmax(ev.real))
    v = vecs[:, i].real
    return float(v[0] / v.sum()), float(ev[i].real)


def averaged_trajectory(avg, rho0, n_max, verbose=False):
    return run_superoperator(avg.superop, rho0, n_max, verbose)

"""Spin-dependent scattering of the ancilla X off two delta scatterers A, B.

A sits at x = -d/2 and B at x = +d/2, both coupling to X through
g (sigma^(X) . sigma^(J)) delta(x - x_J).  Everything depends on two
dimensionless numbers: ``omega = m g / (hbar^2 k)`` and ``kd``.

T and R are 8x8 operators on the XAB spin space.  They carry the phase
convention in which free propagation (g = 0) gives ``T = exp(i kd) * 1``,
i.e. the physical plane-wave amplitudes are ``exp(-i kd) T`` and
``exp(-i kd) R`` with the origin midway between the scatterers.

Three constructions are provided and cross-checked in the tests:

* :func:`closed_form_T_R`: explicit projector expansion,
* :func:`composed_T_R`: single-scatterer operators composed over all
  bounces between A and B,
* :func:`oracle_T_R`: direct matching of piecewise plane waves in
  position space.
"""

from dataclasses import dataclass

import numpy as np

from .spin_algebra import DIM, dot_sigma, projectors
from .states import as_density, check_density

DEGENERATE_TOL = 1e-14


class DegenerateParametersError(ArithmeticError):
    """A denominator or linear system in the scattering solution is singular."""


@dataclass(frozen=True)
class ScatteringParams:
    omega: float
    kd: float

    def __post_init__(self):
        if not np.isfinite(self.omega):
            raise ValueError(f"omega must be finite, got {self.omega!r}")
        if not (np.isfinite(self.kd) and self.kd > 0):
            raise ValueError(f"kd must be positive (left incidence), got {self.kd!r}")

    @classmethod
    def from_physical(cls, m, g, d, hbar, k):
        """Build (omega, kd) from mass, coupling, spacing, hbar and wave vector."""
        for name, val in (("m", m), ("d", d), ("hbar", hbar), ("k", k)):
            if not val > 0:
                raise ValueError(f"{name} must be positive, got {val!r}")
        return cls(omega=m * g / (hbar**2 * k), kd=k * d)

    @classmethod
    def from_caption(cls, g, kd_over_pi):
        """Build from the dimensionless pair (m g d / hbar^2 pi, k d / pi)."""
        if not kd_over_pi > 0:
            raise ValueError(f"kd/pi must be positive, got {kd_over_pi!r}")
        return cls(omega=g / kd_over_pi, kd=np.pi * kd_over_pi)

    @property
    def phase(self):
        return np.exp(1j * self.kd)


@dataclass(frozen=True)
class ScatteringOperators:
    t: np.ndarray
    r: np.ndarray
    params: ScatteringParams | None = None

    def unitarity_defect(self):
        """max |T^dag T + R^dag R - 1| elementwise."""
        u = self.t.conj().T @ self.t + self.r.conj().T @ self.r
        return float(np.max(np.abs(u - np.eye(DIM))))


def _check_denominator(den, what):
    if abs(den) < DEGENERATE_TOL:
        raise DegenerateParametersError(f"{what} denominator vanishes ({abs(den):.3g})")


def alpha_beta(params):
    """The two scalar resonance denominators entering the closed form of T, R."""
    w = params.omega
    e = 1 - np.exp(2j * params.kd)
    den_a = (1 - 4j * w) + 2 * w**2 * (1 - 6j * w) * e + 9 * w**4 * e**2
    den_b = (1 + 2j * w) - w**2 * e
    _check_denominator(den_a, "alpha")
    _check_denominator(den_b, "beta")
    return 1 / den_a, 1 / den_b


def closed_form_T_R(params):
    """T and R as explicit combinations of P-, P+, Q_1/2, Q_3/2 and K+-.

    The K-terms enter T as ``+ alpha omega^2 (1 - e^{2ikd}) (K+ - K-)``; this
    is the sign for which T agrees with the bouncing composition and
    T^dag T + R^dag R = 1 holds with K+ mapping singlet to triplet.
    """
    a, b = alpha_beta(params)
    w = params.omega
    e = 1 - np.exp(2j * params.kd)
    pr = projectors()
    one = np.eye(DIM)
    pm, pp, q12, q32 = pr.p_minus, pr.p_plus, pr.q_half, pr.q_three_half
    kp, km = pr.k_plus, pr.k_minus

    bracket = (
        a * (1 - 4j * w) * pm
        + (a * q12 + b * q32) @ pp
        - a * w**2 * e * (pm - 3 * q12 @ pp + km - kp)
    )
    t = params.phase * bracket
    r = (
        bracket
        - one
        - 1j * w * e * (
            6 * a * w**2 * e * pm
            + (2 * a * q12 - b * q32) @ pp
            + 0.5 * a * (kp + km) @ ((1 + 3 * w**2 * e) * one - 4j * w * pm)
        )
    )
    return ScatteringOperators(t, r, params)


def _coupling(slot):
    if slot not in ("A", "B"):
        raise ValueError(f"scatterer slot must be 'A' or 'B', got {slot!r}")
    return dot_sigma("X", slot)


def single_delta_R(slot, params):
    """Reflection operator of the lone scatterer at ``slot``:
    -i omega S (1 + i omega S)^-1 with S = sigma^(X) . sigma^(slot)."""
    s = _coupling(slot)
    m = np.eye(DIM) + 1j * params.omega * s
    if abs(np.linalg.det(m)) < DEGENERATE_TOL:
        raise DegenerateParametersError(f"1 + i omega S_{slot} is singular")
    return np.linalg.solve(m.T, (-1j * params.omega * s).T).T


def single_delta_T(slot, params):
    return np.eye(DIM) + single_delta_R(slot, params)


def _bounce_operator(params):
    """R_A e^{ikd} R_B e^{ikd}: one round trip between the scatterers."""
    ph = params.phase
    return (single_delta_R("A", params) * ph) @ (single_delta_R("B", params) * ph)


def composed_T_R(params):
    """Compose single-scatterer operators, summing all A-B bounces in closed form."""
    ph = params.phase
    r_a, r_b = single_delta_R("A", params), single_delta_R("B", params)
    t_a, t_b = np.eye(DIM) + r_a, np.eye(DIM) + r_b
    loop = np.eye(DIM) - _bounce_operator(params)
    if abs(np.linalg.det(loop)) < DEGENERATE_TOL:
        raise DegenerateParametersError("bouncing inverse 1 - R_A R_B e^{2ikd} is singular")
    resolved = np.linalg.solve(loop, t_a)
    t = t_b * ph @ resolved
    r = r_a + t_a * ph @ r_b * ph @ resolved
    return ScatteringOperators(t, r, params)


def bouncing_series_T_R(params, tol=1e-14, max_terms=200):
    """Partial sums of the bounce expansion of T and R.

    Summation stops once the norm of the next T term drops below ``tol``
    or after ``max_terms`` terms.  Returns ``(operators, n_terms)``.
    """
    loop = _bounce_operator(params)
    radius = np.max(np.abs(np.linalg.eigvals(loop)))
    if radius >= 1:
        raise DegenerateParametersError(f"bounce operator has spectral radius {radius:.6g} >= 1")
    ph = params.phase
    r_a, r_b = single_delta_R("A", params), single_delta_R("B", params)
    t_a, t_b = np.eye(DIM) + r_a, np.eye(DIM) + r_b
    left_t = t_b * ph
    left_r = t_a * ph @ r_b * ph

    t = np.zeros((DIM, DIM), dtype=complex)
    r = r_a.astype(complex)
    power = t_a.astype(complex)
    n = 0
    while n < max_terms:
        term_t = left_t @ power
        t += term_t
        r += left_r @ power
        n += 1
        if np.linalg.norm(term_t) < tol:
            break
        power = loop @ power
    return ScatteringOperators(t, r, params), n


def oracle_T_R(params):
    """Solve the stationary scattering problem directly in position space.

    Units with k = 1 place A at -kd/2 and B at +kd/2.  For incident spin
    chi the 8-component wavefunction is

        x < -kd/2 :  chi e^{ix} + r e^{-ix}
        between   :  a e^{ix} + b e^{-ix}
        x > kd/2  :  t e^{ix}

    with continuity at each scatterer and a derivative jump of
    2 omega (sigma^(X) . sigma^(J)) psi(x_J).  All eight incident spins
    share one 32x32 system and are solved as eight right-hand sides.
    """
    w = params.omega
    xa, xb = -params.kd / 2, params.kd / 2
    one = np.eye(DIM)
    s_a, s_b = dot_sigma("X", "A"), dot_sigma("X", "B")
    ea, ea_ = np.exp(1j * xa), np.exp(-1j * xa)
    eb, eb_ = np.exp(1j * xb), np.exp(-1j * xb)

    r_, a_, b_, t_ = (slice(DIM * i, DIM * (i + 1)) for i in range(4))
    m = np.zeros((4 * DIM, 4 * DIM), dtype=complex)
    rhs = np.zeros((4 * DIM, DIM), dtype=complex)
    rows = [slice(DIM * i, DIM * (i + 1)) for i in range(4)]

    # continuity at A
    m[rows[0], r_] = ea_ * one
    m[rows[0], a_] = -ea * one
    m[rows[0], b_] = -ea_ * one
    rhs[rows[0]] = -ea * one
    # derivative jump at A
    m[rows[1], r_] = 1j * ea_ * one
    m[rows[1], a_] = ea * (1j * one - 2 * w * s_a)
    m[rows[1], b_] = ea_ * (-1j * one - 2 * w * s_a)
    rhs[rows[1]] = 1j * ea * one
    # continuity at B
    m[rows[2], a_] = eb * one
    m[rows[2], b_] = eb_ * one
    m[rows[2], t_] = -eb * one
    # derivative jump at B
    m[rows[3], a_] = -1j * eb * one
    m[rows[3], b_] = 1j * eb_ * one
    m[rows[3], t_] = eb * (1j * one - 2 * w * s_b)

    if np.linalg.cond(m) > 1 / DEGENERATE_TOL:
        raise DegenerateParametersError("matching conditions are singular")
    sol = np.linalg.solve(m, rhs)
    return ScatteringOperators(params.phase * sol[t_], params.phase * sol[r_], params)


def resonant_T_R(n, omega):
    """T and R at the resonance kd = n pi, where the singlet passes unchanged."""
    if int(n) != n or n < 1:
        raise ValueError(f"resonance index must be a positive integer, got {n!r}")
    pr = projectors()
    c_half = 1 / (1 - 4j * omega)
    c_three = 1 / (1 + 2j * omega)
    t = (-1) ** int(n) * (pr.p_minus + (c_half * pr.q_half + c_three * pr.q_three_half) @ pr.p_plus)
    r = (4j * omega * c_half * pr.q_half - 2j * omega * c_three * pr.q_three_half) @ pr.p_plus
    return ScatteringOperators(t, r, ScatteringParams(omega, n * np.pi))


def transmission_probability(params, x_spin, rho_ab, method=closed_form_T_R):
    """Probability that X is transmitted, given X spin and AB density matrices."""
    x_spin = check_density(x_spin, dim=2)
    rho_ab = check_density(as_density(rho_ab), dim=4)
    t = method(params).t
    return float(np.trace(t @ np.kron(x_spin, rho_ab) @ t.conj().T).real)

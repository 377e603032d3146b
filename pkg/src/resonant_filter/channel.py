"""The transmission-conditioned map on AB states and its spectral analysis.

Confirming that an unpolarized ancilla was transmitted maps

    rho -> Tr_X{ T (1_X/2 (x) rho) T^dag }

up to normalization.  The map is represented either directly
(:func:`apply_map`) or as a 16x16 superoperator acting on column-stacked
4x4 matrices.
"""

from dataclasses import dataclass, field

import numpy as np

from .scattering import alpha_beta
from .spin_algebra import TOL, partial_trace_X
from .states import DensityMatrix, as_density, singlet_projector

MAX_ITER = 10_000
EIG_TOL = 1e-12


class ConvergenceError(RuntimeError):
    """An iterative eigen-solver hit its iteration cap."""


def vec(m):
    """Column-stacking vectorization."""
    return np.asarray(m).reshape(-1, order="F")


def unvec(v, dim=4):
    return np.asarray(v).reshape(dim, dim, order="F")


def _check_t(t_op):
    t_op = np.asarray(t_op)
    if t_op.shape != (8, 8):
        raise ValueError(f"expected an 8x8 transmission operator, got shape {t_op.shape}")
    return t_op


def kraus_operators(t_op):
    """Four 4x4 Kraus operators <s_out| T |s_in> / sqrt(2) of the map."""
    t_op = _check_t(t_op)
    return [t_op[4 * s:4 * s + 4, 4 * c:4 * c + 4] / np.sqrt(2) for s in range(2) for c in range(2)]


def apply_map(t_op, rho):
    """Tr_X{T (1/2 (x) rho) T^dag}, returned as an unnormalized DensityMatrix."""
    t_op = _check_t(t_op)
    rho = as_density(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 AB operator, got shape {rho.shape}")
    full = t_op @ np.kron(np.eye(2) / 2, rho) @ t_op.conj().T
    return DensityMatrix(partial_trace_X(full), normalized=False)


@dataclass(frozen=True)
class Superoperator:
    mat: np.ndarray

    def __post_init__(self):
        m = np.array(self.mat, dtype=complex)
        if m.shape != (16, 16):
            raise ValueError(f"expected a 16x16 superoperator, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    def apply(self, rho):
        return DensityMatrix(unvec(self.mat @ vec(as_density(rho))), normalized=False)

    def __add__(self, other):
        return Superoperator(self.mat + other.mat)

    def __rmul__(self, c):
        return Superoperator(c * self.mat)


def superoperator_from_kraus(kraus):
    # vec(K rho K^dag) = (conj(K) (x) K) vec(rho) for column stacking
    return Superoperator(sum(np.kron(k.conj(), k) for k in kraus))


def superoperator_of(t_op):
    return superoperator_from_kraus(kraus_operators(t_op))


def sort_eigenvalues(ev):
    """Order by descending magnitude, ties broken by descending real then
    imaginary part.  Magnitudes are compared after rounding to 12 digits so
    that numerically tied values order deterministically."""
    ev = np.asarray(ev, dtype=complex)
    key = np.lexsort((-np.round(ev.imag, 12), -np.round(ev.real, 12), -np.round(np.abs(ev), 12)))
    return ev[key]


@dataclass(frozen=True)
class SpectrumResult:
    """Eigenvalues of a superoperator and its dominant eigenprojection.

    ``projector`` is the 16x16 spectral projector onto the eigenvalue of
    largest magnitude, built from right and left eigenvectors.  It is
    ``None`` for methods that only return eigenvalues.
    """

    eigenvalues: np.ndarray
    projector: np.ndarray | None = None
    method: str = "dense"
    projected: DensityMatrix | None = field(default=None)

    @property
    def lambda0(self):
        return self.eigenvalues[0]

    @property
    def lambda1(self):
        return self.eigenvalues[1]

    def project(self, rho):
        if self.projector is None:
            raise ValueError("no eigenprojection available for this spectrum")
        return DensityMatrix(unvec(self.projector @ vec(as_density(rho))), normalized=False)


def _dominant_projector(mat, ev):
    lam0 = ev[0]
    w, right = np.linalg.eig(mat)
    i = int(np.argmin(np.abs(w - lam0)))
    wl, left = np.linalg.eig(mat.conj().T)
    j = int(np.argmin(np.abs(wl - np.conj(lam0))))
    r, l = right[:, i], left[:, j]
    overlap = l.conj() @ r
    if abs(overlap) < 1e-10:
        raise ConvergenceError("dominant eigenvalue is defective; no spectral projector")
    return np.outer(r, l.conj()) / overlap


def subspace_iteration(mat, n_eig=2, block=10, tol=EIG_TOL, max_iter=MAX_ITER, seed=0):
    """Leading eigenvalues of a square matrix by block power iteration.

    A block of ``block`` vectors is repeatedly multiplied by ``mat`` and
    re-orthonormalized; Rayleigh-Ritz on the block gives the eigenvalue
    estimates.  Working with a whole block (rather than one vector plus
    deflation) keeps complex-conjugate pairs of equal magnitude, which
    this map has, from stalling the iteration.  Convergence is declared when
    the eigenvector residual of each of the first ``n_eig`` Ritz pairs is
    below ``tol * max(1, |lambda|)``.
    """
    a = np.asarray(mat, dtype=complex)
    n = a.shape[0]
    block = min(block, n)
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.standard_normal((n, block)) + 1j * rng.standard_normal((n, block)))
    for _ in range(max_iter):
        q, _ = np.linalg.qr(a @ q)
        h = q.conj().T @ a @ q
        theta, s = np.linalg.eig(h)
        order = np.argsort(-np.abs(theta), kind="stable")
        theta, s = theta[order], s[:, order]
        y = q @ s
        y /= np.linalg.norm(y, axis=0)
        res = np.linalg.norm(a @ y - y * theta, axis=0)
        if np.all(res[:n_eig] <= tol * np.maximum(1.0, np.abs(theta[:n_eig]))):
            return sort_eigenvalues(theta)[:n_eig]
    raise ConvergenceError(f"subspace iteration did not converge in {max_iter} steps")


def spectrum(s, method="dense", rho0=None):
    """Eigenvalues of a superoperator, sorted by magnitude.

    ``method="dense"`` returns all 16 eigenvalues (LAPACK) and the dominant
    eigenprojection; ``method="subspace"`` returns only the two leading
    eigenvalues from :func:`subspace_iteration`.
    """
    mat = s.mat if isinstance(s, Superoperator) else np.asarray(s, dtype=complex)
    if method == "dense":
        ev = sort_eigenvalues(np.linalg.eigvals(mat))
        proj = _dominant_projector(mat, ev)
        projected = None
        if rho0 is not None:
            projected = DensityMatrix(unvec(proj @ vec(as_density(rho0))), normalized=False)
        return SpectrumResult(ev, proj, "dense", projected)
    if method == "subspace":
        return SpectrumResult(subspace_iteration(mat), None, "subspace")
    raise ValueError(f"unknown eigen-method {method!r}")


@dataclass(frozen=True)
class TransitionMatrix:
    """Population flow between the AB singlet (-) and triplet (+) sectors.

    ``(rho_-, rho_+) -> [[t_mm, t_mp], [t_pm, t_pp]] @ (rho_-, rho_+)`` where
    ``rho_s = Tr{P_s rho}``.
    """

    t_mm: float
    t_mp: float
    t_pm: float
    t_pp: float

    def as_array(self):
        return np.array([[self.t_mm, self.t_mp], [self.t_pm, self.t_pp]])

    @classmethod
    def from_array(cls, m):
        m = np.asarray(m, dtype=float)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    def __add__(self, other):
        return TransitionMatrix.from_array(self.as_array() + other.as_array())

    def __rmul__(self, c):
        return TransitionMatrix.from_array(c * self.as_array())

    def propagate(self, populations, n=1):
        return np.linalg.matrix_power(self.as_array(), n) @ np.asarray(populations, dtype=float)


def transition_matrix(params):
    a, b = alpha_beta(params)
    w = params.omega
    e = 1 - np.exp(2j * params.kd)
    t_mm = abs(a) ** 2 * abs(1 - 4j * w - w**2 * e) ** 2
    t_mp = 4 * abs(a) ** 2 * w**4 * abs(e) ** 2
    t_pp = abs(a + 2 * b + 3 * a * w**2 * e) ** 2 / 9 + 2 / 9 * abs(a - b + 3 * a * w**2 * e) ** 2
    return TransitionMatrix(t_mm, t_mp, 3 * t_mp, t_pp)


def resonant_t_pp(omega):
    """Triplet survival factor of the map at resonance."""
    w2 = omega**2
    return (1 + 12 * w2) / ((1 + 4 * w2) * (1 + 16 * w2))


def populations(rho):
    """(Tr{P- rho}, Tr{P+ rho}) for a 4x4 AB operator."""
    m = as_density(rho)
    minus = float(np.trace(singlet_projector() @ m).real)
    return np.array([minus, float(np.trace(m).real) - minus])


def population_flow(s):
    """Read the 2x2 population transfer off a superoperator numerically by
    feeding it the normalized singlet and triplet projectors."""
    pm = singlet_projector()
    pp = np.eye(4) - pm
    cols = [populations(s.apply(pm)), populations(s.apply(pp / 3))]
    return TransitionMatrix.from_array(np.column_stack(cols))


def trace_decrement(r_op, rho):
    """Tr{(1/2 (x) rho) R^dag R}: the reflection probability for unpolarized X."""
    r_op = np.asarray(r_op)
    return float(np.trace(np.kron(np.eye(2) / 2, as_density(rho)) @ r_op.conj().T @ r_op).real)


def is_fixed_point(t_op, rho, tol=TOL):
    out = apply_map(t_op, rho).mat
    return bool(np.max(np.abs(out - as_density(rho))) < tol)

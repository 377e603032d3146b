"""Two-qubit (AB) density matrices and the standard initial states."""

from dataclasses import dataclass

import numpy as np

from .spin_algebra import TOL


class InvalidStateError(ValueError):
    """Raised for matrices that are not valid density matrices."""


@dataclass(frozen=True)
class DensityMatrix:
    """A 4x4 AB density matrix.

    ``normalized=False`` marks the output of a trace-nonincreasing map
    before renormalization; such objects are not physical states and
    :meth:`normalize` must be called before reading fidelities off them.
    """

    mat: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        m = np.array(self.mat, dtype=complex)
        if m.shape != (4, 4):
            raise InvalidStateError(f"expected a 4x4 matrix, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @classmethod
    def from_array(cls, m, tol=TOL):
        """Validate ``m`` as a normalized density matrix."""
        check_density(m, tol)
        return cls(m)

    @classmethod
    def from_ket(cls, psi):
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    @property
    def trace(self):
        return float(np.trace(self.mat).real)

    def normalize(self):
        tr = self.trace
        if tr <= 0:
            raise InvalidStateError("cannot normalize an operator with nonpositive trace")
        return DensityMatrix(self.mat / tr)

    def expectation(self, op):
        return float(np.trace(np.asarray(op) @ self.mat).real)


def check_density(m, tol=TOL, dim=None):
    """Raise :class:`InvalidStateError` unless ``m`` is Hermitian, positive
    semidefinite and of unit trace (all to ``tol``)."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or (dim is not None and m.shape[0] != dim):
        raise InvalidStateError(f"bad density-matrix shape {m.shape}")
    if np.max(np.abs(m - m.conj().T)) > tol:
        raise InvalidStateError("matrix is not Hermitian")
    if abs(np.trace(m) - 1) > tol:
        raise InvalidStateError(f"trace is {np.trace(m).real!r}, not 1")
    if np.linalg.eigvalsh((m + m.conj().T) / 2).min() < -tol:
        raise InvalidStateError("matrix has a negative eigenvalue")
    return m


def as_density(rho):
    """Accept a DensityMatrix or a raw array; return the raw 4x4 array."""
    if isinstance(rho, DensityMatrix):
        return rho.mat
    return np.asarray(rho, dtype=complex)


SINGLET_KET = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)


def singlet():
    return DensityMatrix.from_ket(SINGLET_KET)


def mixed():
    return DensityMatrix(np.eye(4) / 4)


def updown():
    """The product state with A up and B down."""
    return DensityMatrix.from_ket([0, 1, 0, 0])


def singlet_projector():
    """P- restricted to the AB space."""
    return np.outer(SINGLET_KET, SINGLET_KET.conj())

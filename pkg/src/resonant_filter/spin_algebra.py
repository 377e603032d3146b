"""Three-qubit spin algebra on the ordered product X (ancilla) x A x B.

Basis convention: index 0 is spin up, index 1 is spin down for every qubit,
and ``|s_X s_A s_B>`` sits at index ``4*s_X + 2*s_A + s_B``.  Two-qubit
(AB) states use index ``2*s_A + s_B``.

All matrices handed out by this module are read-only numpy arrays.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

SLOTS = ("X", "A", "B")
AXES = ("x", "y", "z")
DIM = 8
TOL = 1e-12

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _frozen(m):
    m = np.array(m, dtype=complex)
    m.setflags(write=False)
    return m


def pauli(axis):
    """Return the 2x2 Pauli matrix for ``axis`` in {'x', 'y', 'z'}."""
    try:
        return _frozen(_PAULI[axis])
    except KeyError:
        raise ValueError(f"invalid Pauli axis {axis!r}; expected one of {AXES}") from None


def _slot_index(slot):
    try:
        return SLOTS.index(slot)
    except ValueError:
        raise ValueError(f"invalid slot {slot!r}; expected one of {SLOTS}") from None


def embed(op, slot):
    """Embed a single-qubit operator into the 8-dim space at ``slot``.

    The other two factors receive the identity.
    """
    op = np.asarray(op, dtype=complex)
    if op.shape != (2, 2):
        raise ValueError(f"expected a 2x2 operator, got shape {op.shape}")
    factors = [np.eye(2, dtype=complex)] * 3
    factors[_slot_index(slot)] = op
    return _frozen(np.kron(np.kron(factors[0], factors[1]), factors[2]))


@lru_cache(maxsize=None)
def sigma(slot):
    """The Pauli vector (sx, sy, sz) of ``slot`` as three 8x8 matrices."""
    return tuple(embed(pauli(a), slot) for a in AXES)


@lru_cache(maxsize=None)
def dot_sigma(j1, j2):
    """Heisenberg coupling sigma^(j1) . sigma^(j2); eigenvalues are -3 and 1."""
    _slot_index(j1), _slot_index(j2)
    if j1 == j2:
        raise ValueError("dot_sigma needs two distinct slots")
    return _frozen(sum(a @ b for a, b in zip(sigma(j1), sigma(j2))))


@lru_cache(maxsize=None)
def cross_sigma(j1, j2, sign=1):
    """Components of the operator cross product sigma^(j1) x sigma^(j2).

    ``sign=-1`` returns the negated product; only the relation checker
    uses it, as a negative control.
    """
    s1, s2 = sigma(j1), sigma(j2)
    comps = []
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        comps.append(_frozen(sign * (s1[j] @ s2[k] - s1[k] @ s2[j])))
    return tuple(comps)


def identity(dim=DIM):
    return _frozen(np.eye(dim))


@dataclass(frozen=True)
class ProjectorSet:
    """Singlet/triplet projectors of AB, spin-1/2 and spin-3/2 projectors of
    XAB, and the singlet<->triplet transition operators K+ and K-."""

    p_minus: np.ndarray
    p_plus: np.ndarray
    q_half: np.ndarray
    q_three_half: np.ndarray
    k_plus: np.ndarray
    k_minus: np.ndarray


@lru_cache(maxsize=None)
def projectors():
    one = np.eye(DIM)
    ab = dot_sigma("A", "B")
    x_total = dot_sigma("X", "A") + dot_sigma("X", "B")
    p_minus = (one - ab) / 4
    p_plus = (3 * one + ab) / 4
    q_three_half = 2 / 3 * p_plus + x_total / 6
    q_half = p_minus + p_plus / 3 - x_total / 6

    sx = sigma("X")
    diff = [a - b for a, b in zip(sigma("A"), sigma("B"))]
    cross = cross_sigma("A", "B")
    k_plus = sum(sx[i] @ (diff[i] + 1j * cross[i]) for i in range(3)) / 2
    k_minus = sum(sx[i] @ (diff[i] - 1j * cross[i]) for i in range(3)) / 2

    return ProjectorSet(
        *(_frozen(m) for m in (p_minus, p_plus, q_half, q_three_half, k_plus, k_minus))
    )


def useful_relations_check(tol=TOL, cross_sign=1):
    """Check the operator identities linking sigma^(A) - sigma^(B), the cross
    product and the AB projectors, component by component.

    For each sign s = +/- the chain

        P_s (sA - sB) = s P_s i(sA x sB) = (sA - sB) P_-s
                      = s i(sA x sB) P_-s = [(sA - sB) + s i(sA x sB)] / 2

    must hold.  Returns a dict mapping a readable identity label to a bool.
    Passing ``cross_sign=-1`` flips the cross product and must produce
    failures.
    """
    proj = projectors()
    p = {+1: proj.p_plus, -1: proj.p_minus}
    cross = cross_sigma("A", "B", cross_sign)
    report = {}
    for s, label in ((+1, "+"), (-1, "-")):
        for i, axis in enumerate(AXES):
            diff = sigma("A")[i] - sigma("B")[i]
            icross = 1j * cross[i]
            chain = [
                p[s] @ diff,
                s * p[s] @ icross,
                diff @ p[-s],
                s * icross @ p[-s],
                (diff + s * icross) / 2,
            ]
            ok = all(np.max(np.abs(m - chain[0])) < tol for m in chain[1:])
            report[f"P{label} relation, {axis} component"] = bool(ok)
    return report


def partial_trace_X(rho_xab):
    """Trace out the ancilla X from an 8x8 operator, returning a 4x4 AB operator."""
    m = np.asarray(rho_xab)
    if m.shape != (DIM, DIM):
        raise ValueError(f"expected an 8x8 operator, got shape {m.shape}")
    return np.trace(m.reshape(2, 4, 2, 4), axis1=0, axis2=2)


def basis_index(s_x, s_a, s_b):
    return 4 * s_x + 2 * s_a + s_b


def is_hermitian(m, tol=TOL):
    m = np.asarray(m)
    return bool(np.max(np.abs(m - m.conj().T)) < tol)


def is_unitary(m, tol=TOL):
    m = np.asarray(m)
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(len(m)))) < tol)


def is_positive(m, tol=TOL):
    m = np.asarray(m)
    return is_hermitian(m, tol) and bool(np.linalg.eigvalsh((m + m.conj().T) / 2).min() >= -tol)

"""Singlet extraction in two fixed qubits by repeated resonant transmission
of an unpolarized ancilla qubit.

Modules
-------
spin_algebra  three-qubit Pauli algebra, projectors, partial trace
scattering    transmission/reflection spin operators T and R
channel       the transmission-conditioned map, its superoperator and spectrum
protocol      repeated post-selection trajectories and comparison schemes
wavepacket    averaging over a spread of incident wave vectors
cli           figure data, verification and sweeps from the command line
"""

from .channel import (
    Superoperator,
    TransitionMatrix,
    apply_map,
    spectrum,
    superoperator_of,
    transition_matrix,
)
from .protocol import SchemeKind, asymptotics, closed_form_resonant, run
from .scattering import (
    ScatteringParams,
    closed_form_T_R,
    composed_T_R,
    oracle_T_R,
    resonant_T_R,
    transmission_probability,
)
from .states import DensityMatrix
from .wavepacket import (
    MomentumDistribution,
    asymptotic_fidelity,
    averaged_channel,
    averaged_trajectory,
)

__version__ = "0.1.0"

"""qeclab: a quantum error-correction laboratory.

Classical GF(2) codes, symplectic Pauli algebra, a dense state-vector
simulator with a depolarizing noise model, quantum code constructors,
fault-tolerant recovery circuits, and a Monte Carlo experiment harness.
"""

from .gf2codes import BitVector, LinearCode
from .pauli import PauliString, StabilizerGroup
from .statevec import Gate, StateVector
from .noise import FaultEvent, NoiseModel
from .qcodes import CssCode, QuantumCode
from .ftcircuits import Circuit, ExtractionScheme, SHOR_FT, SIMPLE
from .experiments import CurvePoint, ExperimentConfig, FitResult

__all__ = [
    "BitVector",
    "Circuit",
    "CssCode",
    "CurvePoint",
    "ExperimentConfig",
    "ExtractionScheme",
    "FaultEvent",
    "FitResult",
    "Gate",
    "LinearCode",
    "NoiseModel",
    "PauliString",
    "QuantumCode",
    "SHOR_FT",
    "SIMPLE",
    "StabilizerGroup",
    "StateVector",
]

__version__ = "0.1.0"

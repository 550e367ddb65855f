"""Desk-scale simulator of the five-qubit Majorana defect-exchange experiment."""

from .backend import BACKEND_NAME
from .circuit import Circuit, Instruction
from .compiler import QubitAssignment, assign_qubits, build_compiled, compile_circuit
from .device import DeviceModel, GateDurations, example_device, load_device
from .exchange import (EXCHANGE_TARGET_BLOCH, ExperimentDef, ShotTable,
                       TomographyResult, correlation, ideal_circuit, postselect,
                       reconstruct, run_shots, tomography_circuits)
from .lattice import (Lattice, build_lattice, exchange_schedule,
                      minimal_exchange_patch, standard_stabilizers, support,
                      truncate)
from .noise import NoiseConfig
from .parity import ParityBasis, ParityMeasurement, parity_circuit
from .pauli import PauliOperator
from .simulator import exact_outcome_distribution, run_circuit
from .statevec import Gate, GateKind, StateVector, new_state

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "Circuit",
    "DeviceModel",
    "EXCHANGE_TARGET_BLOCH",
    "ExperimentDef",
    "Gate",
    "GateDurations",
    "GateKind",
    "Instruction",
    "Lattice",
    "NoiseConfig",
    "ParityBasis",
    "ParityMeasurement",
    "PauliOperator",
    "QubitAssignment",
    "ShotTable",
    "StateVector",
    "TomographyResult",
    "assign_qubits",
    "build_compiled",
    "build_lattice",
    "compile_circuit",
    "correlation",
    "exact_outcome_distribution",
    "example_device",
    "exchange_schedule",
    "ideal_circuit",
    "load_device",
    "minimal_exchange_patch",
    "new_state",
    "parity_circuit",
    "postselect",
    "reconstruct",
    "run_circuit",
    "run_shots",
    "standard_stabilizers",
    "support",
    "tomography_circuits",
    "truncate",
]

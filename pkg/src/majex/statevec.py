"""Dense state-vector engine.

Holds the amplitude array and the primitive operations every other module
builds on: gate application, projective Z measurement, Pauli expectation
values, and the exact projector (I +/- P)/2 that serves as the brute-force
oracle for parity-measurement circuits.

Conventions: qubit 0 is the least significant bit of the basis-state
index; global phase is unobservable, so state comparisons go through
``fidelity``. Instances are single-threaded; run one per shot for
parallelism.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import CapacityError, ImpossibleOutcomeError, InvalidStateError
from .pauli import PauliOperator

MAX_QUBITS = 24  # dense-vector feasibility cap

_SQRT2_INV = 1.0 / math.sqrt(2.0)


class GateKind(enum.Enum):
    X = "x"
    Y = "y"
    Z = "z"
    H = "h"
    S = "s"
    SDG = "sdg"
    CX = "cx"

    @property
    def num_qubits(self) -> int:
        return 2 if self is GateKind.CX else 1


GATE_MATRICES: dict[GateKind, np.ndarray] = {
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT2_INV,
    GateKind.S: np.array([[1, 0], [0, 1j]], dtype=complex),
    GateKind.SDG: np.array([[1, 0], [0, -1j]], dtype=complex),
}


@dataclass(frozen=True)
class Gate:
    """A gate kind bound to its operand qubits ([control, target] for CX)."""

    kind: GateKind
    qubits: tuple[int, ...]

    def __post_init__(self):
        if len(self.qubits) != self.kind.num_qubits:
            raise ValueError(f"{self.kind.value} takes {self.kind.num_qubits} operand(s)")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError("gate operands must be distinct")


class StateVector:
    """Dense complex amplitudes over ``num_qubits`` qubits, mutated in place."""

    __slots__ = ("num_qubits", "amps")

    def __init__(self, num_qubits: int, amps: np.ndarray | None = None):
        if not 1 <= num_qubits <= MAX_QUBITS:
            raise CapacityError(
                f"num_qubits must be between 1 and {MAX_QUBITS}, got {num_qubits}")
        self.num_qubits = num_qubits
        if amps is None:
            amps = np.zeros(1 << num_qubits, dtype=np.complex128)
            amps[0] = 1.0
        else:
            amps = np.ascontiguousarray(amps, dtype=np.complex128)
            if amps.shape != (1 << num_qubits,):
                raise ValueError("amplitude vector length must be 2**num_qubits")
        self.amps = amps

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amps.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def _check_qubit(self, qubit: int) -> None:
        if not 0 <= qubit < self.num_qubits:
            raise IndexError(f"qubit {qubit} out of range for {self.num_qubits} qubits")

    def apply(self, kind: GateKind, *qubits: int) -> None:
        """Apply one gate in place; norm is preserved to float precision."""
        for q in qubits:
            self._check_qubit(q)
        if kind is GateKind.CX:
            control, target = qubits
            if control == target:
                raise ValueError("CX operands must be distinct")
            backend.apply_cx(self.amps, control, target)
        else:
            (q,) = qubits
            m = GATE_MATRICES[kind]
            backend.apply_1q(self.amps, m[0, 0], m[0, 1], m[1, 0], m[1, 1], q)

    def apply_gate(self, gate: Gate) -> None:
        self.apply(gate.kind, *gate.qubits)

    def prob_one(self, qubit: int) -> float:
        self._check_qubit(qubit)
        return backend.prob_one(self.amps, qubit)

    def measure_z(self, qubit: int, rng: np.random.Generator) -> int:
        """Sample a Z measurement with Born probabilities and collapse."""
        self._check_qubit(qubit)
        nrm2 = float(np.vdot(self.amps, self.amps).real)
        if nrm2 < 1e-12:
            raise InvalidStateError("cannot measure a zero-norm state")
        p1 = backend.prob_one(self.amps, qubit) / nrm2
        outcome = 1 if rng.random() < p1 else 0
        p = p1 if outcome else 1.0 - p1
        backend.collapse(self.amps, qubit, outcome, 1.0 / math.sqrt(p * nrm2))
        return outcome

    def apply_pauli(self, op: PauliOperator) -> None:
        """Multiply the state by a Pauli operator (vectorized, in place)."""
        if op.num_qubits != self.num_qubits:
            raise ValueError("operator width does not match state width")
        n = self.num_qubits
        xmask = 0
        zmask = 0
        n_y = 0
        for q in range(n):
            if op.x[q]:
                xmask |= 1 << q
            if op.z[q]:
                zmask |= 1 << q
            if op.x[q] and op.z[q]:
                n_y += 1
        idx = np.arange(1 << n, dtype=np.int64)
        parity = np.zeros(1 << n, dtype=np.int64)
        for q in range(n):
            if zmask & (1 << q):
                parity ^= (idx >> q) & 1
        signs = np.where(parity, -1.0, 1.0)
        pref = (1j ** (op.phase_pow + n_y))
        out = np.empty_like(self.amps)
        out[idx ^ xmask] = pref * signs * self.amps
        self.amps = out

    def expectation(self, op: PauliOperator) -> float:
        """<state| op |state>; imaginary residue must stay below 1e-10."""
        if op.num_qubits != self.num_qubits:
            raise ValueError("operator width does not match state width")
        phi = self.copy()
        phi.apply_pauli(op)
        val = complex(np.vdot(self.amps, phi.amps))
        if abs(val.imag) > 1e-10:
            raise ValueError(f"expectation has imaginary residue {val.imag:.2e}")
        return float(val.real)

    def project(self, op: PauliOperator, sign: int) -> float:
        """Project onto the (-1)^sign eigenspace of op; returns the branch probability.

        This is the exact (I +/- P)/2 equivalent of an ideal parity
        measurement, kept independent of the circuit-level path so it can
        act as its oracle.
        """
        if op.num_qubits != self.num_qubits:
            raise ValueError("operator width does not match state width")
        if sign not in (0, 1):
            raise ValueError("sign must be the measurement bit 0 or 1")
        phi = self.copy()
        phi.apply_pauli(op)
        factor = 1.0 if sign == 0 else -1.0
        projected = 0.5 * (self.amps + factor * phi.amps)
        prob = float(np.vdot(projected, projected).real)
        if prob <= 1e-12:
            raise ImpossibleOutcomeError(
                f"outcome {sign} of {op.label()} has probability {prob:.3e}")
        self.amps = projected / math.sqrt(prob)
        return prob

    def fidelity(self, other: "StateVector") -> float:
        """|<self|other>|^2, insensitive to global phase."""
        if other.num_qubits != self.num_qubits:
            raise ValueError("state widths differ")
        return float(abs(np.vdot(self.amps, other.amps)) ** 2)


def new_state(num_qubits: int) -> StateVector:
    """All-|0> start state; 1 <= num_qubits <= 24."""
    return StateVector(num_qubits)

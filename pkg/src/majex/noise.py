"""Monte-Carlo trajectory noise.

Amplitude damping and pure dephasing run during idle gaps computed from
the circuit schedule; depolarizing errors follow each gate; readout flips
are classical. Averaging many trajectories reproduces the corresponding
density-matrix channels, which is what the tests check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import backend
from .circuit import Instruction
from .device import DeviceModel, GateDurations
from .statevec import GateKind, StateVector

_PAULI_KINDS = (GateKind.X, GateKind.Y, GateKind.Z)


@dataclass(frozen=True)
class NoiseConfig:
    t1: tuple[float, ...]
    t2: tuple[float, ...]
    readout_err: tuple[float, ...]
    cnot_err: dict[tuple[int, int], float] = field(default_factory=dict)
    default_cnot_err: float = 0.0
    single_err: float = 0.0
    durations: GateDurations = GateDurations(0.0, 0.0, 0.0)
    config_id: str = "custom"

    def __post_init__(self):
        for q, (a, b) in enumerate(zip(self.t1, self.t2)):
            if a <= 0 or b <= 0:
                raise ValueError(f"qubit {q}: T1 and T2 must be positive")
            if b > 2 * a + 1e-15:
                raise ValueError(f"qubit {q}: T2 must not exceed 2*T1")
        for p in (*self.readout_err, self.single_err, self.default_cnot_err,
                  *self.cnot_err.values()):
            if not 0.0 <= p <= 1.0:
                raise ValueError("error probabilities must lie in [0, 1]")

    @classmethod
    def from_device(cls, device: DeviceModel) -> "NoiseConfig":
        default = (sum(device.cnot_err.values()) / len(device.cnot_err)
                   if device.cnot_err else 0.0)
        return cls(
            t1=device.t1,
            t2=device.t2,
            readout_err=device.readout_err,
            cnot_err=dict(device.cnot_err),
            default_cnot_err=default,
            single_err=device.single_qubit_err,
            durations=device.durations,
            config_id=device.config_id or device.name,
        )

    @classmethod
    def depolarizing(cls, num_qubits: int, p: float) -> "NoiseConfig":
        """Gate depolarizing only: no decoherence clock, no readout error."""
        return cls(
            t1=(1.0,) * num_qubits,
            t2=(1.0,) * num_qubits,
            readout_err=(0.0,) * num_qubits,
            default_cnot_err=p,
            single_err=p,
            durations=GateDurations(0.0, 0.0, 0.0),
            config_id=f"depolarizing-{p}",
        )

    def scaled_errors(self, factor: float) -> "NoiseConfig":
        """All error rates multiplied by ``factor`` (decay rates included)."""
        return replace(
            self,
            t1=tuple(t / factor for t in self.t1),
            t2=tuple(t / factor for t in self.t2),
            readout_err=tuple(min(1.0, p * factor) for p in self.readout_err),
            cnot_err={k: min(1.0, v * factor) for k, v in self.cnot_err.items()},
            default_cnot_err=min(1.0, self.default_cnot_err * factor),
            single_err=min(1.0, self.single_err * factor),
            config_id=f"{self.config_id}-x{factor}",
        )

    def duration_of(self, instr: Instruction) -> float:
        return self.durations.of(instr.name)

    def two_qubit_err(self, control: int, target: int) -> float:
        return self.cnot_err.get((control, target), self.default_cnot_err)

    def apply_idle_noise(self, state: StateVector, qubit: int, duration: float,
                         rng: np.random.Generator) -> None:
        """T1 amplitude damping plus pure dephasing for one idle interval."""
        if duration <= 0.0:
            return
        gamma = 1.0 - math.exp(-duration / self.t1[qubit])
        if gamma > 0.0:
            p1 = state.prob_one(qubit)
            p_jump = gamma * p1
            if rng.random() < p_jump:
                # jump operator sqrt(gamma)|0><1|, renormalized
                backend.apply_1q(state.amps, 0.0, 1.0, 0.0, 0.0, qubit)
            else:
                backend.apply_1q(state.amps, 1.0, 0.0, 0.0,
                                 math.sqrt(1.0 - gamma), qubit)
            nrm = float(np.linalg.norm(state.amps))
            if nrm > 0.0:
                state.amps /= nrm
        rate_phi = 1.0 / self.t2[qubit] - 0.5 / self.t1[qubit]
        if rate_phi > 1e-30:
            p_z = 0.5 * (1.0 - math.exp(-duration * rate_phi))
            if rng.random() < p_z:
                state.apply(GateKind.Z, qubit)

    def apply_gate_noise(self, state: StateVector, kind: GateKind,
                         qubits: tuple[int, ...],
                         rng: np.random.Generator) -> None:
        """With the gate's error probability, a uniform non-identity Pauli."""
        if kind is GateKind.CX:
            p = self.two_qubit_err(qubits[0], qubits[1])
        else:
            p = self.single_err
        self.pauli_kick(state, qubits, p, rng)

    def pauli_kick(self, state: StateVector, qubits: tuple[int, ...], p: float,
                   rng: np.random.Generator) -> None:
        if p <= 0.0 or rng.random() >= p:
            return
        r = int(rng.integers(1, 4 ** len(qubits)))
        for q in qubits:
            letter = r % 4
            r //= 4
            if letter:
                state.apply(_PAULI_KINDS[letter - 1], q)

    def flip_readout(self, bit: int, qubit: int, rng: np.random.Generator) -> int:
        p = self.readout_err[qubit]
        if p > 0.0 and rng.random() < p:
            return 1 - bit
        return bit

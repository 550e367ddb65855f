"""Circuit execution.

Two routes, deliberately kept independent of each other:

* ``run_circuit`` samples a single trajectory (optionally with noise
  channels interleaved according to an as-soon-as-possible schedule).
* ``exact_outcome_distribution`` enumerates every measurement branch with
  exact projectors and returns the full classical outcome distribution;
  this is the brute-force oracle the sampled route is tested against.
"""
from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np

from . import backend
from .circuit import Circuit, Instruction
from .errors import ImpossibleOutcomeError, InvalidStateError
from .pauli import PauliOperator
from .statevec import GATE_MATRICES, GateKind, StateVector

if TYPE_CHECKING:
    from .device import GateDurations
    from .noise import NoiseConfig


def run_circuit(circuit: Circuit, rng: np.random.Generator,
                noise: "NoiseConfig | None" = None) -> tuple[StateVector, list[int]]:
    """Run one trajectory; returns the final state and the classical bits."""
    if noise is not None:
        return _run_noisy(circuit, rng, noise)
    state = StateVector(circuit.num_qubits)
    cbits = [0] * circuit.num_cbits
    for instr in circuit.instructions:
        if instr.condition is not None and cbits[instr.condition[0]] != instr.condition[1]:
            continue
        if instr.is_gate:
            state.apply(instr.gate_kind, *instr.qubits)
        elif instr.name == "measure":
            cbits[instr.cbit] = state.measure_z(instr.qubits[0], rng)
        elif instr.name == "reset":
            if state.measure_z(instr.qubits[0], rng):
                state.apply(GateKind.X, instr.qubits[0])
        # barrier: no effect without a clock
    return state, cbits


def _run_noisy(circuit: Circuit, rng: np.random.Generator,
               noise: "NoiseConfig") -> tuple[StateVector, list[int]]:
    """Trajectory with idle decoherence, gate depolarizing and readout flips.

    Each operation starts as soon as its operands are free; the idle gap a
    qubit accumulated before an operation is filled with T1/T2 channels.
    """
    state = StateVector(circuit.num_qubits)
    cbits = [0] * circuit.num_cbits
    t_free = [0.0] * circuit.num_qubits

    def advance(qubits: tuple[int, ...], duration: float) -> None:
        start = max(t_free[q] for q in qubits)
        for q in qubits:
            noise.apply_idle_noise(state, q, start - t_free[q], rng)
            t_free[q] = start + duration

    for instr in circuit.instructions:
        if instr.condition is not None and cbits[instr.condition[0]] != instr.condition[1]:
            continue
        if instr.name == "barrier":
            now = max(t_free)
            for q in range(circuit.num_qubits):
                noise.apply_idle_noise(state, q, now - t_free[q], rng)
                t_free[q] = now
            continue
        duration = noise.duration_of(instr)
        advance(instr.qubits, duration)
        if instr.is_gate:
            state.apply(instr.gate_kind, *instr.qubits)
            noise.apply_gate_noise(state, instr.gate_kind, instr.qubits, rng)
        elif instr.name == "measure":
            bit = state.measure_z(instr.qubits[0], rng)
            cbits[instr.cbit] = noise.flip_readout(bit, instr.qubits[0], rng)
        elif instr.name == "reset":
            if state.measure_z(instr.qubits[0], rng):
                state.apply(GateKind.X, instr.qubits[0])
    return state, cbits


# opcode layout of the precompiled shot program
_OP_1Q, _OP_CX, _OP_MEASURE, _OP_RESET, _OP_BARRIER = range(5)


def compile_program(circuit: Circuit,
                    noise: "NoiseConfig | None") -> list[tuple] | None:
    """Flatten a circuit for the tight shot loop.

    Gate matrices become plain complex scalars and per-gate error rates
    are resolved up front. Returns None when the circuit needs the general
    interpreter (classical conditions).
    """
    prog: list[tuple] = []
    for instr in circuit.instructions:
        if instr.condition is not None:
            return None
        duration = noise.duration_of(instr) if noise is not None else 0.0
        if instr.name == "barrier":
            prog.append((_OP_BARRIER,))
        elif instr.name == "cx":
            p_err = noise.two_qubit_err(*instr.qubits) if noise is not None else 0.0
            prog.append((_OP_CX, instr.qubits, p_err, duration))
        elif instr.is_gate:
            m = GATE_MATRICES[instr.gate_kind]
            p_err = noise.single_err if noise is not None else 0.0
            prog.append((_OP_1Q, instr.qubits,
                         complex(m[0, 0]), complex(m[0, 1]),
                         complex(m[1, 0]), complex(m[1, 1]), p_err, duration))
        elif instr.name == "measure":
            prog.append((_OP_MEASURE, instr.qubits, instr.cbit, duration))
        else:  # reset
            prog.append((_OP_RESET, instr.qubits, duration))
    return prog


def _measure_amps(amps: np.ndarray, q: int, rng: np.random.Generator) -> int:
    """Same arithmetic as StateVector.measure_z, without the wrapper."""
    nrm2 = float(np.vdot(amps, amps).real)
    if nrm2 < 1e-12:
        raise InvalidStateError("cannot measure a zero-norm state")
    p1 = backend.prob_one(amps, q) / nrm2
    outcome = 1 if rng.random() < p1 else 0
    p = p1 if outcome else 1.0 - p1
    backend.collapse(amps, q, outcome, 1.0 / math.sqrt(p * nrm2))
    return outcome


def execute_program(program: list[tuple], state: StateVector, cbits: list[int],
                    rng: np.random.Generator,
                    noise: "NoiseConfig | None") -> None:
    """Run one trajectory of a precompiled program in place.

    Matches run_circuit exactly, including the order of RNG draws, so the
    two routes produce identical records for identical streams.
    """
    amps = state.amps
    has_clock = noise is not None and (noise.durations.single > 0
                                       or noise.durations.cnot > 0
                                       or noise.durations.measure > 0)
    t_free = [0.0] * state.num_qubits if has_clock else None

    for op in program:
        code = op[0]
        if code == _OP_BARRIER:
            if has_clock:
                now = max(t_free)
                for q in range(state.num_qubits):
                    if now > t_free[q]:
                        noise.apply_idle_noise(state, q, now - t_free[q], rng)
                    t_free[q] = now
            continue
        qubits = op[1]
        duration = op[-1]
        if has_clock:
            start = max(t_free[q] for q in qubits)
            for q in qubits:
                if start > t_free[q]:
                    noise.apply_idle_noise(state, q, start - t_free[q], rng)
                t_free[q] = start + duration
        if code == _OP_1Q:
            backend.apply_1q(amps, op[2], op[3], op[4], op[5], qubits[0])
            if op[6] > 0.0:
                noise.pauli_kick(state, qubits, op[6], rng)
        elif code == _OP_CX:
            backend.apply_cx(amps, qubits[0], qubits[1])
            if op[2] > 0.0:
                noise.pauli_kick(state, qubits, op[2], rng)
        elif code == _OP_MEASURE:
            bit = _measure_amps(amps, qubits[0], rng)
            if noise is not None:
                bit = noise.flip_readout(bit, qubits[0], rng)
            cbits[op[2]] = bit
        else:  # _OP_RESET
            if _measure_amps(amps, qubits[0], rng):
                backend.apply_1q(amps, 0.0, 1.0, 1.0, 0.0, qubits[0])


def exact_outcome_distribution(circuit: Circuit) -> dict[tuple[int, ...], float]:
    """Exact probability of every classical bit pattern, via projectors.

    Branches on each measurement with the (I +/- Z)/2 projector instead of
    sampling, so the returned distribution is exact up to float rounding.
    Only practical for circuits with few measurements.
    """
    results: dict[tuple[int, ...], float] = {}
    instrs = circuit.instructions
    n_c = circuit.num_cbits

    def z_op(q: int) -> PauliOperator:
        return PauliOperator.from_terms(circuit.num_qubits, {q: "Z"})

    def walk(state: StateVector, i: int, cbits: tuple[int, ...], prob: float) -> None:
        while i < len(instrs):
            instr = instrs[i]
            i += 1
            if instr.condition is not None and cbits[instr.condition[0]] != instr.condition[1]:
                continue
            if instr.is_gate:
                state.apply(instr.gate_kind, *instr.qubits)
            elif instr.name in ("measure", "reset"):
                q = instr.qubits[0]
                for outcome in (0, 1):
                    branch = state.copy()
                    try:
                        p = branch.project(z_op(q), outcome)
                    except ImpossibleOutcomeError:
                        continue
                    if instr.name == "reset":
                        if outcome == 1:
                            branch.apply(GateKind.X, q)
                        new_bits = cbits
                    else:
                        bits = list(cbits)
                        bits[instr.cbit] = outcome
                        new_bits = tuple(bits)
                    walk(branch, i, new_bits, prob * p)
                return
        results[cbits] = results.get(cbits, 0.0) + prob

    walk(StateVector(circuit.num_qubits), 0, (0,) * n_c, 1.0)
    return results


def total_variation(p: dict, q: dict) -> float:
    """TV distance between two outcome distributions keyed by bit tuples."""
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def asap_schedule(circuit: Circuit,
                  durations: "GateDurations") -> list[tuple[float, Instruction]]:
    """Start time of each instruction when every operation runs as soon as
    its operands are free. Barriers synchronize all qubits."""
    t_free = [0.0] * circuit.num_qubits
    out: list[tuple[float, Instruction]] = []
    for instr in circuit.instructions:
        if instr.name == "barrier":
            now = max(t_free) if t_free else 0.0
            t_free = [now] * circuit.num_qubits
            out.append((now, instr))
            continue
        start = max(t_free[q] for q in instr.qubits)
        duration = durations.of(instr.name)
        for q in instr.qubits:
            t_free[q] = start + duration
        out.append((start, instr))
    return out


def idle_intervals(circuit: Circuit, durations: "GateDurations") -> dict[int, float]:
    """Total idle time per qubit under the ASAP schedule, first op at t=0."""
    t_free = [0.0] * circuit.num_qubits
    idle = {q: 0.0 for q in range(circuit.num_qubits)}
    for instr in circuit.instructions:
        if instr.name == "barrier":
            now = max(t_free) if t_free else 0.0
            for q in range(circuit.num_qubits):
                idle[q] += now - t_free[q]
                t_free[q] = now
            continue
        start = max(t_free[q] for q in instr.qubits)
        duration = durations.of(instr.name)
        for q in instr.qubits:
            idle[q] += start - t_free[q]
            t_free[q] = start + duration
    return idle

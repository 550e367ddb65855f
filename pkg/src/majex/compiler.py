"""Compilation of the exchange circuit onto a constrained five-qubit device.

The device cannot run the ideal circuit directly (on a star topology every
CNOT must target the hub), so a fixed template is used instead: one shared
ancilla mediates both parity measurements; after the YY interaction its Z
value is copied onto a spare qubit with a CNOT, and the ancilla is reused
without reset for XX, so its final readout carries the XX+YY parity sum.
The YY and XX bits are recovered classically:

    yy = bit(e1),   xx = bit(e1) XOR bit(e_shared)

CNOTs in the disallowed orientation are reversed by conjugating both ends
with Hadamards. Role assignment enumerates all placements compatible with
the connectivity and picks the cheapest under a documented additive cost.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Instruction
from .device import DeviceModel
from .errors import RoutingError
from .exchange import CANONICAL_COLUMNS, ExperimentDef, ShotTable, tomography_circuit
from .simulator import asap_schedule, idle_intervals

ROLES = ("v1", "v2", "v3", "e1", "e12")  # e12 is the doubly-used ancilla

COMPILED_COLUMNS = ("yy", "yyxx", "z2", "z1", "z3")


@dataclass(frozen=True)
class QubitAssignment:
    """Bijection from experiment roles to physical qubits, with its cost."""

    mapping: dict[str, int]
    score: float

    def __post_init__(self):
        if sorted(self.mapping) != sorted(ROLES):
            raise ValueError(f"assignment must cover exactly the roles {ROLES}")
        if len(set(self.mapping.values())) != len(ROLES):
            raise ValueError("assignment must be a bijection onto the qubits")

    def physical(self, role: str) -> int:
        return self.mapping[role]

    def key(self) -> tuple[int, ...]:
        return tuple(self.mapping[r] for r in ROLES)


def reverse_cnot(device: DeviceModel, control: int, target: int) -> list[Instruction]:
    """CNOT(control->target) built from the opposite orientation.

    Hadamards on both ends before and after CNOT(target->control) give a
    unitary equal to the requested CNOT.
    """
    if not device.cnot_allowed(target, control):
        raise RoutingError(
            f"neither orientation of CNOT({control}, {target}) is available")
    h = [Instruction("h", (control,)), Instruction("h", (target,))]
    return h + [Instruction("cx", (target, control))] + h


def _emit_cnot(circ: Circuit, device: DeviceModel, control: int, target: int) -> None:
    if device.cnot_allowed(control, target):
        circ.cx(control, target)
    else:
        for instr in reverse_cnot(device, control, target):
            circ.append(instr)


def _asap_sort(circ: Circuit, device: DeviceModel) -> Circuit:
    """Reorder so the listing follows the as-soon-as-possible schedule.

    Ties keep the original order; an operation never precedes anything it
    depends on because dependent starts are strictly later (or tied).
    """
    scheduled = asap_schedule(circ, device.durations)
    order = sorted(range(len(scheduled)), key=lambda i: (scheduled[i][0], i))
    out = Circuit(circ.num_qubits, circ.num_cbits, cbit_names=dict(circ.cbit_names))
    for i in order:
        out.append(scheduled[i][1])
    return out


def build_compiled(device: DeviceModel, assignment: QubitAssignment,
                   setting: str = "z") -> Circuit:
    """The shared-ancilla template on physical qubits, ASAP ordered."""
    if device.num_qubits != len(ROLES):
        raise RoutingError(f"the exchange template needs a {len(ROLES)}-qubit device")
    v1, v2, v3, e1, anc = (assignment.physical(r) for r in ROLES)
    circ = Circuit(device.num_qubits, 5)
    # YY interaction of (v1, v2) through the shared ancilla
    circ.sdg(v1).h(v1).sdg(v2).h(v2)
    _emit_cnot(circ, device, v2, anc)
    _emit_cnot(circ, device, v1, anc)
    circ.h(v1).s(v1).h(v2).s(v2)
    # copy the YY parity out, then reuse the ancilla (no reset) for XX
    _emit_cnot(circ, device, anc, e1)
    circ.measure(e1, ExperimentDef.BIT_YY, name="yy")
    circ.h(v2).h(v3)
    _emit_cnot(circ, device, v2, anc)
    _emit_cnot(circ, device, v3, anc)
    circ.h(v2).h(v3)
    circ.measure(anc, ExperimentDef.BIT_XX, name="yyxx")
    circ.measure(v2, ExperimentDef.BIT_Z2, name="z2")
    if setting == "x":
        circ.sdg(v1).h(v1)
        circ.h(v3)
    elif setting == "y":
        circ.sdg(v1).h(v1)
        circ.sdg(v3).h(v3)
    elif setting != "z":
        raise ValueError(f"unknown tomography setting {setting!r}")
    circ.measure(v1, ExperimentDef.BIT_Z1, name="z1")
    circ.measure(v3, ExperimentDef.BIT_Z3, name="z3")
    return _asap_sort(circ, device)


def _extract_experiment(circuit: Circuit) -> tuple[ExperimentDef, str]:
    """Recover (ExperimentDef, tomography setting) from an ideal circuit.

    The input must be exactly what ``tomography_circuit`` produces for
    some qubit layout; anything else is rejected.
    """
    cx = [i for i in circuit.instructions if i.name == "cx"]
    measures = {i.cbit: i.qubits[0] for i in circuit.instructions if i.name == "measure"}
    if len(cx) != 4 or set(measures) != {0, 1, 2, 3, 4}:
        raise ValueError("circuit is not the exchange template")
    e1 = cx[0].qubits[1]
    e2 = cx[2].qubits[1]
    v2, v1 = cx[0].qubits[0], cx[1].qubits[0]
    v3 = cx[2].qubits[0]
    exp = ExperimentDef(v1=v1, v2=v2, v3=v3, e1=e1, e2=e2)
    for setting in ("z", "x", "y"):
        if circuit == tomography_circuit(exp, setting):
            return exp, setting
    raise ValueError("circuit is not the exchange template")


def compile_circuit(circuit: Circuit, device: DeviceModel,
                    assignment: QubitAssignment | None = None) -> Circuit:
    """Compile the ideal exchange circuit (any tomography setting) for the device."""
    _, setting = _extract_experiment(circuit)
    if assignment is None:
        assignment = assign_qubits(device)
    return build_compiled(device, assignment, setting)


def decode_exchange_table(table: ShotTable) -> ShotTable:
    """Map the compiled readouts onto the canonical (yy, xx, z2, z1, z3) bits."""
    if tuple(table.columns) != COMPILED_COLUMNS:
        raise ValueError(f"expected compiled columns {COMPILED_COLUMNS}")
    bits = table.bits.copy()
    out = np.empty_like(bits)
    out[:, 0] = bits[:, 0]
    out[:, 1] = bits[:, 0] ^ bits[:, 1]  # xx inferred from the parity sum
    out[:, 2:] = bits[:, 2:]
    meta = dict(table.meta)
    meta["decoded"] = True
    return ShotTable(out, CANONICAL_COLUMNS, meta)


def assignment_cost(device: DeviceModel, assignment: QubitAssignment,
                    setting: str = "z") -> float:
    """Documented additive noise figure of one assignment.

    Sum of: the pair error e_g of every executed CNOT, each qubit's total
    scheduled idle time weighted by 1/T1 + 1/T2, and the readout error of
    every measured qubit. Terms are sorted before summing so equal
    multisets of terms give bit-identical scores.
    """
    circ = build_compiled(device, assignment, setting)
    terms: list[float] = []
    for instr in circ.instructions:
        if instr.name == "cx":
            terms.append(device.pair_error(*instr.qubits))
        elif instr.name == "measure":
            terms.append(device.readout_err[instr.qubits[0]])
    for q, idle in idle_intervals(circ, device.durations).items():
        terms.append(idle / device.t1[q])
        terms.append(idle / device.t2[q])
    return math.fsum(sorted(terms))


def assign_qubits(device: DeviceModel) -> QubitAssignment:
    """Cheapest connectivity-compatible role assignment.

    All role permutations are scored with ``assignment_cost``; ties break
    lexicographically on the physical qubits of (v1, v2, v3, e1, e12).
    """
    best: QubitAssignment | None = None
    for perm in itertools.permutations(range(device.num_qubits), len(ROLES)):
        candidate = QubitAssignment(dict(zip(ROLES, perm)), 0.0)
        try:
            score = assignment_cost(device, candidate)
        except RoutingError:
            continue
        candidate = QubitAssignment(candidate.mapping, score)
        if best is None or (candidate.score, candidate.key()) < (best.score, best.key()):
            best = candidate
    if best is None:
        raise RoutingError("no role assignment is compatible with the connectivity")
    return best

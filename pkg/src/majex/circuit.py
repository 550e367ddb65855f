"""Circuit intermediate representation.

An ordered list of instructions over a quantum register and a classical
bit register. Gate names match the text format mnemonics; ``measure``
records into a classical bit, ``reset`` returns a qubit to |0>, and
``barrier`` is a scheduling fence. Instructions may carry a classical
condition (bit, value) and are applied only when the bit matches.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .statevec import GateKind

GATE_NAMES: dict[str, GateKind] = {k.value: k for k in GateKind}

NON_GATE_NAMES = ("measure", "reset", "barrier")


@dataclass(frozen=True)
class Instruction:
    name: str
    qubits: tuple[int, ...] = ()
    cbit: int | None = None
    condition: tuple[int, int] | None = None

    def __post_init__(self):
        if self.name in GATE_NAMES:
            kind = GATE_NAMES[self.name]
            if len(self.qubits) != kind.num_qubits:
                raise ValueError(f"{self.name} takes {kind.num_qubits} qubit(s)")
            if len(set(self.qubits)) != len(self.qubits):
                raise ValueError("instruction operands must be distinct")
        elif self.name == "measure":
            if len(self.qubits) != 1 or self.cbit is None:
                raise ValueError("measure takes one qubit and one classical bit")
        elif self.name == "reset":
            if len(self.qubits) != 1:
                raise ValueError("reset takes one qubit")
        elif self.name != "barrier":
            raise ValueError(f"unknown instruction {self.name!r}")

    @property
    def is_gate(self) -> bool:
        return self.name in GATE_NAMES

    @property
    def gate_kind(self) -> GateKind:
        return GATE_NAMES[self.name]


@dataclass
class Circuit:
    num_qubits: int
    num_cbits: int = 0
    instructions: list[Instruction] = field(default_factory=list)
    cbit_names: dict[int, str] = field(default_factory=dict)

    def _check(self, instr: Instruction) -> Instruction:
        for q in instr.qubits:
            if not 0 <= q < self.num_qubits:
                raise ValueError(f"qubit index {q} out of range (0..{self.num_qubits - 1})")
        for c in (instr.cbit, instr.condition[0] if instr.condition else None):
            if c is not None and not 0 <= c < self.num_cbits:
                raise ValueError(f"classical bit {c} out of range (0..{self.num_cbits - 1})")
        return instr

    def append(self, instr: Instruction) -> "Circuit":
        self.instructions.append(self._check(instr))
        return self

    def add(self, name: str, *qubits: int, cbit: int | None = None,
            condition: tuple[int, int] | None = None) -> "Circuit":
        return self.append(Instruction(name, tuple(qubits), cbit, condition))

    def x(self, q: int) -> "Circuit":
        return self.add("x", q)

    def y(self, q: int) -> "Circuit":
        return self.add("y", q)

    def z(self, q: int) -> "Circuit":
        return self.add("z", q)

    def h(self, q: int) -> "Circuit":
        return self.add("h", q)

    def s(self, q: int) -> "Circuit":
        return self.add("s", q)

    def sdg(self, q: int) -> "Circuit":
        return self.add("sdg", q)

    def cx(self, control: int, target: int) -> "Circuit":
        return self.add("cx", control, target)

    def measure(self, q: int, cbit: int, name: str | None = None) -> "Circuit":
        if name is not None:
            self.cbit_names[cbit] = name
        return self.add("measure", q, cbit=cbit)

    def reset(self, q: int) -> "Circuit":
        return self.add("reset", q)

    def barrier(self) -> "Circuit":
        return self.add("barrier")

    def extend(self, other: "Circuit") -> "Circuit":
        for instr in other.instructions:
            self.append(instr)
        self.cbit_names.update(other.cbit_names)
        return self

    def measured_cbits(self) -> list[int]:
        return [i.cbit for i in self.instructions if i.name == "measure"]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Circuit):
            return NotImplemented
        return (self.num_qubits == other.num_qubits
                and self.num_cbits == other.num_cbits
                and self.instructions == other.instructions)

    def __len__(self) -> int:
        return len(self.instructions)

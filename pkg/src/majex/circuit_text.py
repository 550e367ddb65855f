"""Plain-text circuit format.

One statement per line:

    qubits N            register sizes; must precede any instruction
    cbits M
    h Q | x Q | y Q | z Q | s Q | sdg Q
    cx QC QT
    measure Q -> C
    reset Q
    barrier
    # comment           blank lines are ignored

Parse errors carry the 1-based line and column of the offending token.
``parse_circuit(format_circuit(doc))`` reproduces the statement list.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .circuit import Circuit, Instruction
from .errors import ParseError

_SINGLE_GATES = ("h", "x", "y", "z", "s", "sdg")


@dataclass
class CircuitDocument:
    circuit: Circuit
    comments: list[str] = field(default_factory=list)

    @property
    def statements(self) -> list[Instruction]:
        return self.circuit.instructions


def _tokens(line: str) -> list[tuple[str, int]]:
    out = []
    col = 0
    for tok in line.split():
        col = line.index(tok, col)
        out.append((tok, col + 1))
        col += len(tok)
    return out


def _parse_int(tok: str, lineno: int, col: int, what: str) -> int:
    try:
        value = int(tok)
    except ValueError:
        raise ParseError(f"expected {what}, got {tok!r}", lineno, col) from None
    if value < 0:
        raise ParseError(f"{what} must be non-negative", lineno, col)
    return value


def parse_circuit(text: str) -> CircuitDocument:
    num_qubits: int | None = None
    num_cbits = 0
    comments: list[str] = []
    body: list[tuple[Instruction, int, int]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            comments.append(stripped[1:].strip())
            continue
        toks = _tokens(raw)
        (word, col0), args = toks[0], toks[1:]

        if word == "qubits":
            if body:
                raise ParseError("qubits must be declared before instructions",
                                 lineno, col0)
            if len(args) != 1:
                raise ParseError("usage: qubits N", lineno, col0)
            num_qubits = _parse_int(args[0][0], lineno, args[0][1], "a register size")
        elif word == "cbits":
            if body:
                raise ParseError("cbits must be declared before instructions",
                                 lineno, col0)
            if len(args) != 1:
                raise ParseError("usage: cbits M", lineno, col0)
            num_cbits = _parse_int(args[0][0], lineno, args[0][1], "a register size")
        elif word in _SINGLE_GATES:
            if len(args) != 1:
                raise ParseError(f"usage: {word} Q", lineno, col0)
            q = _parse_int(args[0][0], lineno, args[0][1], "a qubit index")
            body.append((Instruction(word, (q,)), lineno, args[0][1]))
        elif word == "cx":
            if len(args) != 2:
                raise ParseError("usage: cx QC QT", lineno, col0)
            qc = _parse_int(args[0][0], lineno, args[0][1], "a qubit index")
            qt = _parse_int(args[1][0], lineno, args[1][1], "a qubit index")
            if qc == qt:
                raise ParseError("cx operands must be distinct", lineno, args[1][1])
            body.append((Instruction("cx", (qc, qt)), lineno, args[0][1]))
        elif word == "measure":
            if len(args) != 3 or args[1][0] != "->":
                col = args[1][1] if len(args) > 1 else col0
                raise ParseError("usage: measure Q -> C", lineno, col)
            q = _parse_int(args[0][0], lineno, args[0][1], "a qubit index")
            c = _parse_int(args[2][0], lineno, args[2][1], "a classical bit index")
            body.append((Instruction("measure", (q,), cbit=c), lineno, args[0][1]))
        elif word == "reset":
            if len(args) != 1:
                raise ParseError("usage: reset Q", lineno, col0)
            q = _parse_int(args[0][0], lineno, args[0][1], "a qubit index")
            body.append((Instruction("reset", (q,)), lineno, args[0][1]))
        elif word == "barrier":
            if args:
                raise ParseError("barrier takes no arguments", lineno, args[0][1])
            body.append((Instruction("barrier"), lineno, col0))
        else:
            raise ParseError(f"unknown mnemonic {word!r}", lineno, col0)

    if num_qubits is None:
        if body:
            lineno = body[0][1]
            raise ParseError("missing qubits declaration", lineno, 1)
        num_qubits = 0

    circuit = Circuit(num_qubits, num_cbits)
    for instr, lineno, col in body:
        for q in instr.qubits:
            if q >= num_qubits:
                raise ParseError(f"qubit index {q} out of range", lineno, col)
        if instr.cbit is not None and instr.cbit >= num_cbits:
            raise ParseError(f"classical bit {instr.cbit} out of range", lineno, col)
        circuit.instructions.append(instr)
    return CircuitDocument(circuit, comments)


def format_circuit(circuit: Circuit, comments: list[str] | None = None) -> str:
    """Render a circuit in the text format (inverse of parse_circuit)."""
    lines = [f"# {c}" for c in (comments or [])]
    lines.append(f"qubits {circuit.num_qubits}")
    if circuit.num_cbits:
        lines.append(f"cbits {circuit.num_cbits}")
    for instr in circuit.instructions:
        if instr.name == "measure":
            lines.append(f"measure {instr.qubits[0]} -> {instr.cbit}")
        elif instr.name == "barrier":
            lines.append("barrier")
        else:
            lines.append(" ".join([instr.name, *map(str, instr.qubits)]))
    return "\n".join(lines) + "\n"

"""The five-qubit defect-exchange experiment.

Three vertex qubits starting in |000> undergo a YY parity measurement on
(v1, v2), an XX parity measurement on (v2, v3) and a Z measurement of v2;
shots where any of those three stabilizer outcomes is 1 contain a stray
fermion and are discarded. The surviving (v1, v3) readouts are perfectly
correlated in the ideal case, quantified by

    C = P(00) + P(11) - P(01) - P(10).

The same circuit with rotated readouts on v1/v3 measures the logical
operators (YZX, YZY, Z) for single-qubit tomography of the encoded state,
which the exchange leaves in a Y eigenstate.
"""
from __future__ import annotations

import hashlib
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import backend
from .circuit import Circuit
from .errors import UndefinedStatisticError
from .pauli import PauliOperator
from .parity import ParityBasis, ParityMeasurement, append_parity
from .simulator import compile_program, exact_outcome_distribution, execute_program, run_circuit
from .noise import NoiseConfig
from .statevec import StateVector

# Bloch target of the noiseless exchange output, pinned once from the
# projector oracle: <YZX> = 0, <YZY> = +1, <Z(v1)> = 0. The +1 sign selects
# which Y eigenstate the exchange produces.
EXCHANGE_TARGET_BLOCH: tuple[float, float, float] = (0.0, 1.0, 0.0)

CANONICAL_COLUMNS = ("yy", "xx", "z2", "z1", "z3")


@dataclass(frozen=True)
class ExperimentDef:
    """Qubit roles and classical layout of the exchange experiment."""

    v1: int = 0
    v2: int = 1
    v3: int = 2
    e1: int = 3
    e2: int = 4

    def __post_init__(self):
        if len({self.v1, self.v2, self.v3, self.e1, self.e2}) != 5:
            raise ValueError("the five experiment qubits must be distinct")

    @property
    def vertex_qubits(self) -> tuple[int, int, int]:
        return (self.v1, self.v2, self.v3)

    @property
    def edge_qubits(self) -> tuple[int, int]:
        return (self.e1, self.e2)

    @property
    def num_qubits(self) -> int:
        return max(self.v1, self.v2, self.v3, self.e1, self.e2) + 1

    # classical bits, in measurement order
    BIT_YY = 0
    BIT_XX = 1
    BIT_Z2 = 2
    BIT_Z1 = 3
    BIT_Z3 = 4

    @property
    def postselect_bits(self) -> tuple[int, int, int]:
        return (self.BIT_YY, self.BIT_XX, self.BIT_Z2)

    @property
    def readout_bits(self) -> tuple[int, int]:
        return (self.BIT_Z1, self.BIT_Z3)


def ideal_circuit(exp: ExperimentDef | None = None) -> Circuit:
    """YY(v1,v2) via e1, XX(v2,v3) via e2, then Z on v2, v1, v3."""
    return tomography_circuit(exp, "z")


def tomography_circuit(exp: ExperimentDef | None, setting: str) -> Circuit:
    """One tomography setting; "z" is exactly the plain exchange circuit.

    Settings rotate the final v1/v3 readouts into the bases of the logical
    operators: "x" -> YZX, "y" -> YZY, "z" -> Z on v1. Multi-qubit logical
    values are recovered afterwards as products of the single-qubit
    readout eigenvalues.
    """
    if exp is None:
        exp = ExperimentDef()
    if setting not in ("x", "y", "z"):
        raise ValueError(f"unknown tomography setting {setting!r}")
    circ = Circuit(exp.num_qubits, 5)
    append_parity(circ, ParityMeasurement(ParityBasis.YY, (exp.v1, exp.v2),
                                          exp.e1, exp.BIT_YY), bit_name="yy")
    append_parity(circ, ParityMeasurement(ParityBasis.XX, (exp.v2, exp.v3),
                                          exp.e2, exp.BIT_XX), bit_name="xx")
    circ.measure(exp.v2, exp.BIT_Z2, name="z2")
    if setting == "x":
        circ.sdg(exp.v1).h(exp.v1)  # read v1 in the Y basis
        circ.h(exp.v3)              # read v3 in the X basis
    elif setting == "y":
        circ.sdg(exp.v1).h(exp.v1)
        circ.sdg(exp.v3).h(exp.v3)
    circ.measure(exp.v1, exp.BIT_Z1, name="z1")
    circ.measure(exp.v3, exp.BIT_Z3, name="z3")
    return circ


def tomography_circuits(exp: ExperimentDef | None = None) -> dict[str, Circuit]:
    return {s: tomography_circuit(exp, s) for s in ("x", "y", "z")}


def logical_operator(setting: str, exp: ExperimentDef | None = None,
                     num_qubits: int | None = None) -> PauliOperator:
    """The logical X/Y/Z operator on the vertex qubits (YZX / YZY / Z on v1)."""
    if exp is None:
        exp = ExperimentDef()
    if num_qubits is None:
        num_qubits = exp.num_qubits
    letters = {
        "x": {exp.v1: "Y", exp.v2: "Z", exp.v3: "X"},
        "y": {exp.v1: "Y", exp.v2: "Z", exp.v3: "Y"},
        "z": {exp.v1: "Z"},
    }[setting]
    return PauliOperator.from_terms(num_qubits, letters)


@dataclass
class ShotTable:
    """Per-shot classical outcome records plus reproducibility metadata."""

    bits: np.ndarray  # (num_shots, num_columns) of 0/1
    columns: tuple[str, ...]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=np.uint8)
        if self.bits.ndim != 2 or self.bits.shape[1] != len(self.columns):
            raise ValueError("bit array shape does not match the column list")
        self.meta.setdefault("shots", int(self.bits.shape[0]))
        if self.meta["shots"] != self.bits.shape[0]:
            raise ValueError("metadata shot count disagrees with record count")

    @property
    def num_shots(self) -> int:
        return int(self.bits.shape[0])

    def column(self, name: str) -> np.ndarray:
        return self.bits[:, self.columns.index(name)]

    def to_json_dict(self) -> dict:
        return {
            "metadata": self.meta,
            "columns": list(self.columns),
            "shots": ["".join(str(b) for b in row) for row in self.bits],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ShotTable":
        columns = tuple(doc["columns"])
        rows = [[int(ch) for ch in rec] for rec in doc["shots"]]
        bits = np.array(rows, dtype=np.uint8).reshape(len(rows), len(columns))
        return cls(bits, columns, dict(doc["metadata"]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.columns) + "\n")
        for row in self.bits:
            buf.write(",".join(str(int(b)) for b in row) + "\n")
        return buf.getvalue()


def circuit_id(circuit: Circuit) -> str:
    text = ";".join(
        f"{i.name}{list(i.qubits)}{i.cbit}{i.condition}" for i in circuit.instructions)
    payload = f"{circuit.num_qubits}|{circuit.num_cbits}|{text}"
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def run_shots(circuit: Circuit, shots: int, noise: NoiseConfig | None = None,
              seed: int = 0) -> ShotTable:
    """Sample independent trajectories of the circuit.

    Each shot runs on its own RNG stream derived from (seed, shot index),
    so the table is reproducible and order-independent.
    """
    if shots < 1:
        raise ValueError("shots must be a positive integer")
    columns = tuple(circuit.cbit_names.get(i, f"c{i}") for i in range(circuit.num_cbits))
    bits = np.zeros((shots, circuit.num_cbits), dtype=np.uint8)
    streams = np.random.SeedSequence(seed).spawn(shots)
    program = compile_program(circuit, noise)
    if program is None:
        for i in range(shots):
            rng = np.random.Generator(np.random.PCG64(streams[i]))
            _, cbits = run_circuit(circuit, rng, noise)
            bits[i, :] = cbits
    else:
        state = StateVector(circuit.num_qubits)
        cbits = [0] * circuit.num_cbits
        for i in range(shots):
            rng = np.random.Generator(np.random.PCG64(streams[i]))
            state.amps.fill(0.0)
            state.amps[0] = 1.0
            for c in range(circuit.num_cbits):
                cbits[c] = 0
            execute_program(program, state, cbits, rng, noise)
            bits[i, :] = cbits
    meta = {
        "shots": shots,
        "seed": seed,
        "generator": "PCG64",
        "backend": backend.BACKEND_NAME,
        "noise": noise.config_id if noise is not None else None,
        "circuit_id": circuit_id(circuit),
    }
    return ShotTable(bits, columns, meta)


def postselect(table: ShotTable, exp: ExperimentDef | None = None) -> ShotTable:
    """Keep only shots whose stray-fermion flags (yy, xx, z2) are all 0.

    An empty result is returned as a zero-shot table, not an error;
    statistics on it raise UndefinedStatisticError downstream.
    """
    for name in ("yy", "xx", "z2"):
        if name not in table.columns:
            raise ValueError(f"table lacks required column {name!r}")
    mask = ((table.column("yy") == 0)
            & (table.column("xx") == 0)
            & (table.column("z2") == 0))
    kept = table.bits[mask]
    meta = dict(table.meta)
    meta["total"] = table.num_shots
    meta["retained"] = int(kept.shape[0])
    meta["shots"] = int(kept.shape[0])
    return ShotTable(kept, table.columns, meta)


def correlation(table: ShotTable) -> float:
    """C = P(00) + P(11) - P(01) - P(10) over the (z1, z3) readout pairs."""
    if table.num_shots == 0:
        raise UndefinedStatisticError("correlation undefined on an empty table")
    agree = table.column("z1") == table.column("z3")
    return float(np.mean(np.where(agree, 1.0, -1.0)))


def correlation_stderr(table: ShotTable) -> float:
    """Delta-method standard error sqrt((1 - C^2) / N)."""
    c = correlation(table)
    return math.sqrt(max(0.0, 1.0 - c * c) / table.num_shots)


def outcome_counts(table: ShotTable) -> dict[str, int]:
    """Counts of the four (z1, z3) readout patterns."""
    counts = {"00": 0, "01": 0, "10": 0, "11": 0}
    for b1, b3 in zip(table.column("z1"), table.column("z3")):
        counts[f"{b1}{b3}"] += 1
    return counts


def tomography_expectation(table: ShotTable, setting: str) -> float:
    """Mean logical-operator eigenvalue over a (post-selected) table.

    The logical value of a shot is the product of the readout eigenvalues
    on the operator's support: (z1, z2, z3) bits for YZX / YZY, z1 for Z.
    """
    if table.num_shots == 0:
        raise UndefinedStatisticError("expectation undefined on an empty table")
    if setting == "z":
        exponent = table.column("z1").astype(np.int64)
    elif setting in ("x", "y"):
        exponent = (table.column("z1").astype(np.int64)
                    + table.column("z2")
                    + table.column("z3"))
    else:
        raise ValueError(f"unknown tomography setting {setting!r}")
    return float(np.mean(np.where(exponent % 2 == 0, 1.0, -1.0)))


@dataclass(frozen=True)
class TomographyResult:
    bloch: tuple[float, float, float]
    density: np.ndarray  # 2x2
    fidelity_to_target: float
    closest_pure_fidelity: float


_PAULI_2 = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def reconstruct(expectations: dict[str, float],
                target_bloch: tuple[float, float, float] = EXCHANGE_TARGET_BLOCH,
                ) -> TomographyResult:
    """Density matrix (I + x X + y Y + z Z)/2 and its fidelity figures.

    ``fidelity_to_target`` scores the reconstructed mixed state against
    the Y-basis target; ``closest_pure_fidelity`` scores the unit-length
    rescaling of the Bloch vector instead (1/2 when the vector vanishes).
    """
    x, y, z = (float(expectations[k]) for k in ("x", "y", "z"))
    rho = 0.5 * (np.eye(2, dtype=complex)
                 + x * _PAULI_2["x"] + y * _PAULI_2["y"] + z * _PAULI_2["z"])
    t = np.asarray(target_bloch, dtype=float)
    r = np.array([x, y, z])
    fidelity = 0.5 * (1.0 + float(r @ t))
    length = float(np.linalg.norm(r))
    if length == 0.0:
        closest = 0.5
    else:
        closest = 0.5 * (1.0 + float(r @ t) / length)
    return TomographyResult((x, y, z), rho, fidelity, closest)


def postselected_readout_distribution(circuit: Circuit,
                                      exp: ExperimentDef | None = None,
                                      ) -> dict[tuple[int, int], float]:
    """Exact conditional (z1, z3) distribution given all flags 0 (oracle)."""
    if exp is None:
        exp = ExperimentDef()
    dist = exact_outcome_distribution(circuit)
    joint: dict[tuple[int, int], float] = {}
    total = 0.0
    for bits, p in dist.items():
        if all(bits[i] == 0 for i in exp.postselect_bits):
            key = (bits[exp.BIT_Z1], bits[exp.BIT_Z3])
            joint[key] = joint.get(key, 0.0) + p
            total += p
    if total <= 0.0:
        raise UndefinedStatisticError("post-selection removes every branch")
    return {k: v / total for k, v in joint.items()}


def acceptance_probability(circuit: Circuit,
                           exp: ExperimentDef | None = None) -> float:
    """Exact probability that all three stray-fermion flags read 0."""
    if exp is None:
        exp = ExperimentDef()
    dist = exact_outcome_distribution(circuit)
    return sum(p for bits, p in dist.items()
               if all(bits[i] == 0 for i in exp.postselect_bits))


def experiment_from_truncation(truncated) -> ExperimentDef:
    """Map a lattice truncation onto the canonical five-qubit experiment.

    Accepts the lattice module's TruncatedExchange: its measurement
    sequence must be YY(v1,v2), XX(v2,v3), Z(v2), Z(v3) over the
    three-vertex register, which lands on the canonical qubit layout.
    """
    labels = [m.operator.label() for m in truncated.measurements]
    if labels != ["YYI", "IXX", "IZI", "IIZ"]:
        raise ValueError(f"unexpected truncated measurement sequence {labels}")
    return ExperimentDef()

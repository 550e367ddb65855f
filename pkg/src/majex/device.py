"""Device model: connectivity plus per-qubit calibration.

Loaded from a JSON (or, on Python 3.11+, TOML) file:

    {
      "name": "example-5q",
      "synthetic": true,
      "qubits": [{"t1_us": 50.0, "t2_us": 60.0, "readout_err": 0.04}, ...],
      "allowed_cnots": [[0, 2], [1, 2], [3, 2], [4, 2]],
      "cnots": [{"pair": [0, 2], "err": 0.025}, ...],
      "durations": {"cnot_ns": 400, "single_ns": 100, "measure_ns": 1200},
      "single_qubit_err": 0.002
    }

Times are stored internally in seconds. Validation happens at load: all
probabilities in [0, 1], T1/T2 positive with T2 <= 2*T1, CNOT list
nonempty with in-range indices.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class GateDurations:
    single: float  # seconds
    cnot: float
    measure: float

    def of(self, name: str) -> float:
        if name == "cx":
            return self.cnot
        if name in ("measure", "reset"):
            return self.measure
        if name == "barrier":
            return 0.0
        return self.single


@dataclass(frozen=True)
class DeviceModel:
    num_qubits: int
    allowed_cnots: frozenset[tuple[int, int]]
    t1: tuple[float, ...]
    t2: tuple[float, ...]
    readout_err: tuple[float, ...]
    cnot_err: dict[tuple[int, int], float]
    durations: GateDurations
    single_qubit_err: float = 0.0
    name: str = "device"
    config_id: str = ""

    def __post_init__(self):
        if not self.allowed_cnots:
            raise ValueError("allowed_cnots must be nonempty")
        for c, t in self.allowed_cnots:
            if not (0 <= c < self.num_qubits and 0 <= t < self.num_qubits and c != t):
                raise ValueError(f"CNOT pair ({c}, {t}) out of range")
        for q in range(self.num_qubits):
            if self.t1[q] <= 0 or self.t2[q] <= 0:
                raise ValueError(f"T1/T2 of qubit {q} must be positive")
            if self.t2[q] > 2 * self.t1[q] + 1e-15:
                raise ValueError(f"qubit {q}: T2 must not exceed 2*T1")
        for p in (*self.readout_err, self.single_qubit_err, *self.cnot_err.values()):
            if not 0.0 <= p <= 1.0:
                raise ValueError("error probabilities must lie in [0, 1]")

    def cnot_allowed(self, control: int, target: int) -> bool:
        return (control, target) in self.allowed_cnots

    def pair_error(self, control: int, target: int) -> float:
        if (control, target) in self.cnot_err:
            return self.cnot_err[(control, target)]
        if self.cnot_err:
            return sum(self.cnot_err.values()) / len(self.cnot_err)
        return 0.0

    def hub_qubits(self) -> list[int]:
        """Qubits that are the target of every allowed CNOT (star centres)."""
        targets = {t for _, t in self.allowed_cnots}
        return sorted(t for t in targets
                      if all(tt == t for _, tt in self.allowed_cnots))


def _from_dict(doc: dict, config_id: str) -> DeviceModel:
    qubits = doc["qubits"]
    n = len(qubits)
    cnot_err = {}
    for entry in doc.get("cnots", []):
        c, t = entry["pair"]
        cnot_err[(int(c), int(t))] = float(entry["err"])
    dur = doc["durations"]
    return DeviceModel(
        num_qubits=n,
        allowed_cnots=frozenset((int(c), int(t)) for c, t in doc["allowed_cnots"]),
        t1=tuple(float(q["t1_us"]) * 1e-6 for q in qubits),
        t2=tuple(float(q["t2_us"]) * 1e-6 for q in qubits),
        readout_err=tuple(float(q.get("readout_err", 0.0)) for q in qubits),
        cnot_err=cnot_err,
        durations=GateDurations(
            single=float(dur["single_ns"]) * 1e-9,
            cnot=float(dur["cnot_ns"]) * 1e-9,
            measure=float(dur["measure_ns"]) * 1e-9,
        ),
        single_qubit_err=float(doc.get("single_qubit_err", 0.0)),
        name=str(doc.get("name", "device")),
        config_id=config_id,
    )


def load_device(path: str | Path) -> DeviceModel:
    """Read a device file; the format is chosen by the file suffix."""
    path = Path(path)
    raw = path.read_bytes()
    config_id = hashlib.sha256(raw).hexdigest()[:16]
    if path.suffix == ".toml":
        try:
            import tomllib
        except ImportError as exc:  # Python < 3.11
            raise ValueError("TOML device files need Python 3.11+; use JSON") from exc
        doc = tomllib.loads(raw.decode())
    else:
        doc = json.loads(raw.decode())
    return _from_dict(doc, config_id)


def example_device() -> DeviceModel:
    """The bundled synthetic five-qubit star device."""
    return load_device(Path(__file__).parent / "data" / "example_device.json")

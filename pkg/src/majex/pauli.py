"""Symbolic n-qubit Pauli operators.

An operator is a phase (integer power of i) together with per-qubit X/Z
bit pairs: qubit q carries X iff x[q], Z iff z[q], Y iff both. Hermitian
operators (the only ones admitted as stabilizers or observables) have
phase i^0 = +1 or i^2 = -1. Commutation is decided by the symplectic
inner product; multiplication tracks the accumulated power of i.
"""
from __future__ import annotations

from typing import Iterable

import numpy as np

_SINGLE = {
    (0, 0): "I",
    (1, 0): "X",
    (0, 1): "Z",
    (1, 1): "Y",
}

_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class PauliOperator:
    """Phase times a tensor product of I/X/Y/Z factors."""

    __slots__ = ("num_qubits", "x", "z", "phase_pow")

    def __init__(self, num_qubits: int, x: Iterable[int] | None = None,
                 z: Iterable[int] | None = None, phase_pow: int = 0):
        self.num_qubits = num_qubits
        self.x = np.zeros(num_qubits, dtype=bool) if x is None else np.asarray(x, dtype=bool).copy()
        self.z = np.zeros(num_qubits, dtype=bool) if z is None else np.asarray(z, dtype=bool).copy()
        if self.x.shape != (num_qubits,) or self.z.shape != (num_qubits,):
            raise ValueError("x/z bit vectors must have length num_qubits")
        self.phase_pow = phase_pow % 4

    @classmethod
    def identity(cls, num_qubits: int) -> "PauliOperator":
        return cls(num_qubits)

    @classmethod
    def from_label(cls, label: str, sign: int = +1) -> "PauliOperator":
        """Build from a letter string; label[q] acts on qubit q."""
        n = len(label)
        op = cls(n)
        for q, ch in enumerate(label.upper()):
            if ch == "I":
                continue
            if ch in ("X", "Y"):
                op.x[q] = True
            if ch in ("Z", "Y"):
                op.z[q] = True
            if ch not in "IXYZ":
                raise ValueError(f"invalid Pauli letter {ch!r}")
        if sign == -1:
            op.phase_pow = 2
        elif sign != +1:
            raise ValueError("sign must be +1 or -1")
        return op

    @classmethod
    def from_terms(cls, num_qubits: int, terms: dict[int, str], sign: int = +1) -> "PauliOperator":
        """Build from {qubit: letter}, e.g. {0: "Y", 2: "X"}."""
        label = ["I"] * num_qubits
        for q, ch in terms.items():
            label[q] = ch
        return cls.from_label("".join(label), sign)

    @property
    def sign(self) -> int:
        """+1 or -1 for Hermitian operators; raises otherwise."""
        if self.phase_pow == 0:
            return +1
        if self.phase_pow == 2:
            return -1
        raise ValueError("operator has an imaginary phase; not Hermitian")

    @property
    def is_hermitian(self) -> bool:
        return self.phase_pow % 2 == 0

    def letter(self, qubit: int) -> str:
        return _SINGLE[(int(self.x[qubit]), int(self.z[qubit]))]

    def label(self) -> str:
        return "".join(self.letter(q) for q in range(self.num_qubits))

    def support(self) -> tuple[int, ...]:
        return tuple(int(q) for q in np.nonzero(self.x | self.z)[0])

    def weight(self) -> int:
        return int(np.count_nonzero(self.x | self.z))

    def commutes_with(self, other: "PauliOperator") -> bool:
        """Symplectic inner product parity decides commutation exactly."""
        if self.num_qubits != other.num_qubits:
            raise ValueError("operator widths differ")
        crossings = np.count_nonzero(self.x & other.z) + np.count_nonzero(self.z & other.x)
        return crossings % 2 == 0

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        if self.num_qubits != other.num_qubits:
            raise ValueError("operator widths differ")
        x3 = self.x ^ other.x
        z3 = self.z ^ other.z
        # per-site i-power bookkeeping for L(x,z) = i^{xz} X^x Z^z
        g = (
            np.count_nonzero(self.x & self.z)
            + np.count_nonzero(other.x & other.z)
            + 2 * int(np.count_nonzero(self.z & other.x))
            - np.count_nonzero(x3 & z3)
        )
        return PauliOperator(self.num_qubits, x3, z3,
                             self.phase_pow + other.phase_pow + g)

    def same_bits(self, other: "PauliOperator") -> bool:
        """Equality of the letter pattern, ignoring phase."""
        return (self.num_qubits == other.num_qubits
                and bool(np.array_equal(self.x, other.x))
                and bool(np.array_equal(self.z, other.z)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return self.same_bits(other) and self.phase_pow == other.phase_pow

    def __hash__(self) -> int:
        return hash((self.num_qubits, self.x.tobytes(), self.z.tobytes(), self.phase_pow))

    def restrict(self, qubits: Iterable[int]) -> "PauliOperator":
        """Keep only the listed qubits (in the given order); phase preserved."""
        idx = list(qubits)
        return PauliOperator(len(idx), self.x[idx], self.z[idx], self.phase_pow)

    def to_matrix(self) -> np.ndarray:
        """Dense matrix with qubit 0 as the least significant index bit."""
        out = np.array([[1.0 + 0j]])
        for q in range(self.num_qubits):
            # kron(high, low): later qubits go to more significant bits
            out = np.kron(_MATS[self.letter(q)], out)
        return (1j ** self.phase_pow) * out

    def __repr__(self) -> str:
        pre = {0: "+", 1: "+i*", 2: "-", 3: "-i*"}[self.phase_pow]
        return f"PauliOperator({pre}{self.label()})"

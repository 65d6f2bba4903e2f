"""Two-wire gate lists with an optional terminal Z-basis measurement.

Wire 0 is the most significant factor of every Kronecker product, so basis
index ``2*i + j`` corresponds to bitstring ``f"{i}{j}"`` with ``i`` read from
wire 0. Assembled benchmark circuits put the target on wire 0 and the ancilla
on wire 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from math import cos, sin
from typing import Optional

import numpy as np

from . import linalg
from .errors import ValidationError

GATE_KINDS = ("H", "X", "RY", "PHASE", "CNOT", "U1", "U2")


def ry_matrix(theta: float) -> np.ndarray:
    c, s = cos(theta / 2), sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def phase_matrix(phi: float) -> np.ndarray:
    return np.array([[1, 0], [0, np.exp(1j * phi)]], dtype=complex)


def embed_single(matrix: np.ndarray, wire: int) -> np.ndarray:
    return np.kron(matrix, linalg.I2) if wire == 0 else np.kron(linalg.I2, matrix)


def cnot_matrix(control: int, target: int) -> np.ndarray:
    if control == 0:
        return np.kron(linalg.P0, linalg.I2) + np.kron(linalg.P1, linalg.X)
    return np.kron(linalg.I2, linalg.P0) + np.kron(linalg.X, linalg.P1)


@dataclass(frozen=True, eq=False)
class Gate:
    kind: str
    qubits: tuple
    param: Optional[float] = None
    matrix: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValidationError(f"unknown gate kind {self.kind!r}")
        arity = {"CNOT": 2, "U2": 2}.get(self.kind, 1)
        if len(self.qubits) != arity:
            raise ValidationError(f"{self.kind} acts on {arity} qubit(s), got {self.qubits}")
        if any(q not in (0, 1) for q in self.qubits):
            raise ValidationError(f"{self.kind}: qubit indices must be 0 or 1, got {self.qubits}")
        if arity == 2 and self.qubits[0] == self.qubits[1]:
            raise ValidationError(f"{self.kind}: qubits must be distinct, got {self.qubits}")
        if self.kind in ("RY", "PHASE"):
            if self.param is None or not np.isfinite(self.param):
                raise ValidationError(f"{self.kind} needs a finite angle")
        if self.kind in ("U1", "U2"):
            size = 2 if self.kind == "U1" else 4
            m = linalg.as_cmat(self.matrix, f"{self.kind} matrix")
            if m.shape != (size, size):
                raise ValidationError(f"{self.kind} needs a {size}x{size} matrix, got {m.shape}")
            if not linalg.is_unitary(m):
                raise ValidationError(f"{self.kind} matrix is not unitary")
            object.__setattr__(self, "matrix", m)

    def local_matrix(self) -> np.ndarray:
        """Matrix acting on the gate's own qubits."""
        if self.kind == "H":
            return linalg.H
        if self.kind == "X":
            return linalg.X
        if self.kind == "RY":
            return ry_matrix(self.param)
        if self.kind == "PHASE":
            return phase_matrix(self.param)
        if self.kind == "CNOT":
            return cnot_matrix(0, 1)
        return self.matrix

    def full_matrix(self) -> np.ndarray:
        """4x4 matrix of the gate acting on a two-wire register."""
        if self.kind == "CNOT":
            return cnot_matrix(*self.qubits)
        if self.kind == "U2":
            if self.qubits == (0, 1):
                return self.matrix
            swap = cnot_matrix(0, 1) @ cnot_matrix(1, 0) @ cnot_matrix(0, 1)
            return swap @ self.matrix @ swap
        return embed_single(self.local_matrix(), self.qubits[0])

    def remap(self, wires) -> "Gate":
        return replace(self, qubits=tuple(wires[q] for q in self.qubits))

    def __eq__(self, other):
        if not isinstance(other, Gate):
            return NotImplemented
        if (self.kind, self.qubits, self.param) != (other.kind, other.qubits, other.param):
            return False
        if self.matrix is None or other.matrix is None:
            return self.matrix is other.matrix
        return bool(np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash((self.kind, self.qubits, self.param))


@dataclass(frozen=True)
class Circuit:
    """Immutable gate list on ``num_qubits`` wires (1 or 2).

    Builder methods return new circuits::

        bell = Circuit(2).h(0).cnot(0, 1)
    """

    num_qubits: int = 2
    gates: tuple = ()
    measured: bool = False

    def __post_init__(self):
        if self.num_qubits not in (1, 2):
            raise ValidationError(f"circuits have 1 or 2 wires, got {self.num_qubits}")
        for g in self.gates:
            if not isinstance(g, Gate):
                raise ValidationError(f"not a gate: {g!r}")
            if max(g.qubits) >= self.num_qubits:
                raise ValidationError(f"{g.kind} on {g.qubits} exceeds {self.num_qubits}-wire circuit")

    def append(self, gate: Gate) -> "Circuit":
        if self.measured:
            raise ValidationError("cannot append gates after the terminal measurement")
        return replace(self, gates=self.gates + (gate,))

    def h(self, q):
        return self.append(Gate("H", (q,)))

    def x(self, q):
        return self.append(Gate("X", (q,)))

    def ry(self, theta, q):
        return self.append(Gate("RY", (q,), float(theta)))

    def phase(self, phi, q):
        return self.append(Gate("PHASE", (q,), float(phi)))

    def cnot(self, control, target):
        return self.append(Gate("CNOT", (control, target)))

    def u1(self, matrix, q):
        return self.append(Gate("U1", (q,), matrix=matrix))

    def u2(self, matrix):
        return self.append(Gate("U2", (0, 1), matrix=matrix))

    def compose(self, fragment: "Circuit", wires=None) -> "Circuit":
        """Append ``fragment`` with its wire ``k`` mapped onto ``wires[k]``."""
        if fragment.measured:
            raise ValidationError("cannot compose a measured fragment")
        wires = tuple(range(fragment.num_qubits)) if wires is None else tuple(wires)
        if len(wires) != fragment.num_qubits:
            raise ValidationError(f"fragment has {fragment.num_qubits} wire(s), got mapping {wires}")
        out = self
        for g in fragment.gates:
            out = out.append(g.remap(wires))
        return out

    def measure_all(self) -> "Circuit":
        if self.num_qubits != 2:
            raise ValidationError("only two-wire circuits are measured")
        return replace(self, measured=True)

    def unitary(self) -> np.ndarray:
        """Composite matrix of the gate list (gates applied left to right)."""
        dim = 2**self.num_qubits
        u = np.eye(dim, dtype=complex)
        for g in self.gates:
            m = g.local_matrix() if self.num_qubits == 1 else g.full_matrix()
            u = m @ u
        return u

    def __len__(self):
        return len(self.gates)

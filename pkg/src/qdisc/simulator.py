"""Seeded two-qubit statevector backend with classical readout noise."""
from __future__ import annotations

import zlib
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .circuits import Circuit
from .errors import ValidationError

BITSTRINGS = ("00", "01", "10", "11")


@dataclass(frozen=True)
class ReadoutCalibration:
    """Bit-flip probabilities of one qubit's readout."""

    prob_meas1_prep0: float = 0.0
    prob_meas0_prep1: float = 0.0

    def __post_init__(self):
        for name in ("prob_meas1_prep0", "prob_meas0_prep1"):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise ValidationError(f"{name} must lie in [0, 1], got {value}")

    @classmethod
    def from_rows(cls, rows):
        """Build from ``[[P(0|0), P(1|0)], [P(0|1), P(1|1)]]`` (row = prepared bit)."""
        rows = np.asarray(rows, dtype=float)
        if rows.shape != (2, 2) or not np.allclose(rows.sum(axis=1), 1.0, atol=1e-12):
            raise ValidationError("readout rows must be a 2x2 row-stochastic matrix")
        return cls(prob_meas1_prep0=float(rows[0, 1]), prob_meas0_prep1=float(rows[1, 0]))

    @property
    def is_ideal(self) -> bool:
        return self.prob_meas1_prep0 == 0.0 and self.prob_meas0_prep1 == 0.0

    def confusion(self) -> np.ndarray:
        """Column-stochastic ``C[read, true]``."""
        p10, p01 = self.prob_meas1_prep0, self.prob_meas0_prep1
        return np.array([[1 - p10, p01], [p10, 1 - p01]], dtype=float)


@dataclass(frozen=True)
class NoiseModel:
    """Per-wire readout calibrations; ``None`` means ideal readout on that wire."""

    wire0: Optional[ReadoutCalibration] = None
    wire1: Optional[ReadoutCalibration] = None

    def calibration(self, wire: int) -> ReadoutCalibration:
        cal = self.wire0 if wire == 0 else self.wire1
        return cal if cal is not None else ReadoutCalibration()

    def confusion(self) -> np.ndarray:
        return np.kron(self.calibration(0).confusion(), self.calibration(1).confusion())


@dataclass(frozen=True)
class Backend:
    noise: Optional[NoiseModel] = None
    seed: int = 0

    def __post_init__(self):
        if not (0 <= int(self.seed) < 2**64):
            raise ValidationError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def run(self, circuit: Circuit, shots: int) -> dict:
        return run(circuit, shots, self)


def final_state(circuit: Circuit) -> np.ndarray:
    if circuit.num_qubits != 2:
        raise ValidationError("the simulator runs two-wire circuits")
    state = np.zeros(4, dtype=complex)
    state[0] = 1.0
    for gate in circuit.gates:
        state = gate.full_matrix() @ state
    return state


def exact_distribution(circuit: Circuit, noise: Optional[NoiseModel] = None) -> np.ndarray:
    """Outcome probabilities in the order ``BITSTRINGS``."""
    probs = np.abs(final_state(circuit)) ** 2
    if noise is not None:
        probs = noise.confusion() @ probs
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def as_dict(probs) -> dict:
    return {b: float(p) for b, p in zip(BITSTRINGS, probs)}


def derive_seed(master: int, *parts) -> int:
    """Deterministic 64-bit sub-seed for ``parts`` (ints or strings).

    The mixing function is ``SeedSequence([master, *ints]).generate_state(1, uint64)``
    where strings enter as their CRC-32.
    """
    words = [int(master)]
    for p in parts:
        words.append(zlib.crc32(p.encode()) if isinstance(p, str) else int(p))
    return int(np.random.SeedSequence(words).generate_state(1, dtype=np.uint64)[0])


def sample_counts(probs, shots: int, seed: int) -> dict:
    if shots < 1:
        raise ValidationError(f"shots must be a positive integer, got {shots}")
    rng = np.random.Generator(np.random.PCG64(seed))
    counts = rng.multinomial(int(shots), np.asarray(probs, dtype=float))
    return {b: int(c) for b, c in zip(BITSTRINGS, counts) if c > 0}


def run(circuit: Circuit, shots: int, backend: Backend) -> dict:
    """Histogram of ``shots`` samples; identical inputs give identical output."""
    return sample_counts(exact_distribution(circuit, backend.noise), shots, backend.seed)

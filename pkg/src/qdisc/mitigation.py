"""Readout-error mitigation by exact inversion of the two-qubit confusion matrix."""
from __future__ import annotations

from typing import Mapping

import numpy as np

from . import schemes
from .errors import NoValidShots, SingularCalibration, ValidationError
from .simulator import BITSTRINGS, ReadoutCalibration

SINGULARITY_THRESHOLD = 1e-9


def confusion_matrix(cal: ReadoutCalibration) -> np.ndarray:
    """Column-stochastic 2x2 matrix; column ``t`` is the read-bit distribution given true bit ``t``."""
    return cal.confusion()


def _inverse(cal: ReadoutCalibration, name: str) -> np.ndarray:
    c = confusion_matrix(cal)
    det = c[0, 0] * c[1, 1] - c[0, 1] * c[1, 0]
    if abs(det) <= SINGULARITY_THRESHOLD:
        raise SingularCalibration(f"{name} readout calibration is not invertible")
    return np.array([[c[1, 1], -c[0, 1]], [-c[1, 0], c[0, 0]]]) / det


def frequencies(hist: Mapping) -> np.ndarray:
    vec = np.zeros(4)
    for key, count in hist.items():
        if key not in BITSTRINGS:
            raise ValidationError(f"bad bitstring key {key!r}")
        vec[BITSTRINGS.index(key)] = count
    if not np.all(np.isfinite(vec)) or np.any(vec < 0):
        raise ValidationError("histogram weights must be finite and non-negative")
    total = vec.sum()
    if total <= 0:
        raise ValidationError("histogram must contain at least one shot")
    return vec / total


def mitigate(hist: Mapping, cal_target: ReadoutCalibration, cal_ancilla: ReadoutCalibration) -> dict:
    """Quasi-probabilities ``(C_target (x) C_ancilla)^-1 @ freqs`` over all four bitstrings.

    Entries can be negative; they always sum to one.
    """
    inv = np.kron(_inverse(cal_target, "target"), _inverse(cal_ancilla, "ancilla"))
    quasi = inv @ frequencies(hist)
    return {b: float(q) for b, q in zip(BITSTRINGS, quasi)}


def mitigated_probability(histograms: Mapping, clip: bool = True) -> float:
    """Score mitigated histograms keyed by circuit name with the scheme's counting rule.

    Every circuit is weighted equally (mitigated histograms are normalized).
    The result is clamped to [0, 1] unless ``clip`` is False.
    """
    try:
        value = schemes.score(histograms)
    except NoValidShots as exc:
        raise NoValidShots(f"mitigated valid mass is not positive: {exc}") from exc
    return float(min(1.0, max(0.0, value))) if clip else value

"""Circuit assembly and counting estimators for the two discrimination schemes.

Histogram keys are two-character bitstrings: the first character is the
target outcome ``i``, the second the ancilla outcome ``j``. Missing keys count
as zero. Guessing rule: ancilla ``j == 0`` means "the U measurement was
performed", ``j == 1`` means "the identity measurement was performed".
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import linalg
from .circuits import Circuit
from .errors import NoValidShots, ValidationError
from .simulator import BITSTRINGS, Backend, derive_seed, run

POSTSELECTION_KEYS = ("id_v0", "id_v1", "u_v0", "u_v1")
DIRECT_SUM_KEYS = ("id", "u")


@dataclass(frozen=True)
class DiscriminationComponents:
    """User-supplied fragments of a discrimination experiment.

    ``state_prep`` and ``v0_v1_direct_sum_dag`` are two-wire fragments with
    wire 0 = target and wire 1 = ancilla; the direct-sum fragment must be
    controlled by the target. ``u_dag``, ``v0_dag`` and ``v1_dag`` are
    single-wire fragments.
    """

    state_prep: Circuit
    u_dag: Circuit
    v0_dag: Circuit
    v1_dag: Circuit
    v0_v1_direct_sum_dag: Circuit | None = None

    def __post_init__(self):
        expected = {"state_prep": 2, "u_dag": 1, "v0_dag": 1, "v1_dag": 1, "v0_v1_direct_sum_dag": 2}
        for name, wires in expected.items():
            frag = getattr(self, name)
            if frag is None and name == "v0_v1_direct_sum_dag":
                continue
            if not isinstance(frag, Circuit) or frag.num_qubits != wires or frag.measured:
                raise ValidationError(f"{name} must be an unmeasured {wires}-wire circuit")
            if not linalg.is_unitary(frag.unitary(), 1e-10):
                raise ValidationError(f"{name} is not unitary")


def _check_pair(target, ancilla):
    if target == ancilla:
        raise ValidationError(f"target and ancilla must differ, got {target} and {ancilla}")


def assemble_postselection_circuits(components: DiscriminationComponents, target=0, ancilla=1) -> dict:
    """The four circuits ``id_v0``, ``id_v1``, ``u_v0``, ``u_v1`` of the postselection scheme.

    ``target`` and ``ancilla`` are physical labels; in the returned circuits the
    target sits on wire 0 and the ancilla on wire 1.
    """
    _check_pair(target, ancilla)
    prep = Circuit(2).compose(components.state_prep)
    branches = {"id": prep, "u": prep.compose(components.u_dag, (0,))}
    finals = {"v0": components.v0_dag, "v1": components.v1_dag}
    return {
        f"{b}_{v}": branches[b].compose(finals[v], (1,)).measure_all()
        for b in ("id", "u")
        for v in ("v0", "v1")
    }


def assemble_direct_sum_circuits(components: DiscriminationComponents, target=0, ancilla=1) -> dict:
    """The two circuits ``id`` and ``u`` of the direct-sum scheme."""
    _check_pair(target, ancilla)
    if components.v0_v1_direct_sum_dag is None:
        raise ValidationError("direct-sum scheme needs v0_v1_direct_sum_dag")
    prep = Circuit(2).compose(components.state_prep)
    return {
        "id": prep.compose(components.v0_v1_direct_sum_dag).measure_all(),
        "u": prep.compose(components.u_dag, (0,)).compose(components.v0_v1_direct_sum_dag).measure_all(),
    }


def _weights(hist: Mapping, name: str) -> dict:
    out = {}
    for key, value in hist.items():
        if key not in BITSTRINGS:
            raise ValidationError(f"{name}: bad bitstring key {key!r}")
        if not np.isfinite(value):
            raise ValidationError(f"{name}: non-finite weight for {key!r}")
        out[key] = float(value)
    return out


def _check_counts(hist: Mapping, name: str):
    for key, value in hist.items():
        if int(value) != value or value < 0:
            raise ValidationError(f"{name}: counts must be non-negative integers, got {key!r}: {value!r}")


def postselection_score(id_v0, id_v1, u_v0, u_v1) -> float:
    """Postselection estimator on arbitrary real weights (no clamping)."""
    hists = dict(zip(POSTSELECTION_KEYS, (id_v0, id_v1, u_v0, u_v1)))
    w = {k: _weights(h, k) for k, h in hists.items()}
    total = 0.0
    success = 0.0
    for branch, good_j in (("u", "0"), ("id", "1")):
        for k in ("0", "1"):
            h = w[f"{branch}_v{k}"]
            total += h.get(k + "0", 0.0) + h.get(k + "1", 0.0)
            success += h.get(k + good_j, 0.0)
    if total <= 0:
        raise NoValidShots("no shots survive postselection")
    return success / total


def direct_sum_score(id, u) -> float:
    """Direct-sum estimator on arbitrary real weights (no clamping)."""
    w_id, w_u = _weights(id, "id"), _weights(u, "u")
    total = sum(w_id.values()) + sum(w_u.values())
    if total <= 0:
        raise NoValidShots("direct-sum histograms are empty")
    success = w_u.get("00", 0.0) + w_u.get("10", 0.0) + w_id.get("01", 0.0) + w_id.get("11", 0.0)
    return success / total


def postselection_probability(id_v0, id_v1, u_v0, u_v1) -> float:
    """Fraction of postselected shots (target outcome equal to the final-measurement label) guessed correctly."""
    for name, h in zip(POSTSELECTION_KEYS, (id_v0, id_v1, u_v0, u_v1)):
        _check_counts(h, name)
    return postselection_score(id_v0, id_v1, u_v0, u_v1)


def direct_sum_probability(id, u) -> float:
    """Fraction of all direct-sum shots guessed correctly."""
    _check_counts(id, "id")
    _check_counts(u, "u")
    return direct_sum_score(id, u)


def method_for_keys(keys) -> str:
    keys = set(keys)
    if keys == set(POSTSELECTION_KEYS):
        return "postselection"
    if keys == set(DIRECT_SUM_KEYS):
        return "direct_sum"
    raise ValidationError(f"incomplete or unknown circuit set {sorted(keys)}")


def score(histograms: Mapping) -> float:
    """Dispatch on circuit names: four postselection keys or two direct-sum keys."""
    if method_for_keys(histograms) == "postselection":
        return postselection_score(*(histograms[k] for k in POSTSELECTION_KEYS))
    return direct_sum_score(histograms["id"], histograms["u"])


def probability(histograms: Mapping) -> float:
    if method_for_keys(histograms) == "postselection":
        return postselection_probability(*(histograms[k] for k in POSTSELECTION_KEYS))
    return direct_sum_probability(histograms["id"], histograms["u"])


def benchmark_using_postselection(backend: Backend, components, num_shots_per_measurement: int, target=0, ancilla=1):
    circuits = assemble_postselection_circuits(components, target, ancilla)
    return probability(_run_all(backend, circuits, num_shots_per_measurement))


def benchmark_using_direct_sum(backend: Backend, components, num_shots_per_measurement: int, target=0, ancilla=1):
    circuits = assemble_direct_sum_circuits(components, target, ancilla)
    return probability(_run_all(backend, circuits, num_shots_per_measurement))


def _run_all(backend, circuits, shots):
    return {
        name: run(c, shots, Backend(backend.noise, derive_seed(backend.seed, name)))
        for name, c in circuits.items()
    }

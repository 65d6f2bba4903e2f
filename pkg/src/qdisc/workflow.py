"""Fourier-family benchmark workflow: run, submit, query, resolve and tabulate.

Every circuit execution is an independent unit with its own seed,
``derive_seed(master, pair_index, angle_index, circuit_name)``, so the output
does not depend on the order or parallelism of execution.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import yaml

from . import mitigation, schemes
from .config import (
    BackendConfig,
    CircuitResult,
    ExperimentConfig,
    IntermediateDocument,
    JobEntry,
    Metadata,
    MitigationInfo,
    ResultDocument,
    ResultEntry,
)
from .errors import SingularCalibration, ValidationError
from .optimal import fourier_discrimination_components, fourier_p_succ
from .simulator import Backend, NoiseModel, derive_seed, run

log = logging.getLogger(__name__)

PENDING = "PENDING"
DONE = "DONE"


def circuit_names(method: str) -> tuple:
    return schemes.POSTSELECTION_KEYS if method == "postselection" else schemes.DIRECT_SUM_KEYS


def load_yaml(path):
    with open(path) as fh:
        return yaml.safe_load(fh)


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def dump_yaml(model) -> str:
    return yaml.safe_dump(_plain(model.model_dump(exclude_none=True)), sort_keys=False, default_flow_style=None)


def read_document(path):
    raw = load_yaml(path)
    if not isinstance(raw, dict) or not isinstance(raw.get("data"), list):
        raise ValidationError(f"{path}: not a benchmark document")
    if raw["data"] and "job_id" in raw["data"][0]:
        return IntermediateDocument.model_validate(raw)
    return ResultDocument.model_validate(raw)


def _units(experiment: ExperimentConfig):
    """(pair_index, angle_index, pair, phi, name) in canonical order."""
    names = circuit_names(experiment.method)
    for pi_, pair in enumerate(experiment.qubits):
        for ai, phi in enumerate(experiment.angles.grid()):
            for name in names:
                yield pi_, ai, pair, phi, name


def _circuits(method, pair, phi):
    comps = fourier_discrimination_components(phi)
    if method == "postselection":
        return schemes.assemble_postselection_circuits(comps, pair.target, pair.ancilla)
    return schemes.assemble_direct_sum_circuits(comps, pair.target, pair.ancilla)


def _noise(backend: BackendConfig, pair):
    sim = backend.simulator
    if sim.noise is None:
        return None
    return NoiseModel(sim.calibration(pair.target).to_readout(), sim.calibration(pair.ancilla).to_readout())


def execute_unit(experiment, backend, pair_index, angle_index, pair, phi, name) -> dict:
    circuit = _circuits(experiment.method, pair, phi)[name]
    seed = derive_seed(backend.seed, pair_index, angle_index, name)
    return run(circuit, experiment.num_shots, Backend(_noise(backend, pair), seed))


def _execute(experiment, backend, units, workers):
    def work(unit):
        return execute_unit(experiment, backend, *unit)

    if workers <= 1:
        return [work(u) for u in units]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(work, units))


def _circuit_result(backend, pair, name, histogram) -> CircuitResult:
    sim = backend.simulator
    if sim.noise is None:
        return CircuitResult(name=name, histogram=histogram)
    info = MitigationInfo(target=sim.calibration(pair.target), ancilla=sim.calibration(pair.ancilla))
    try:
        mitigated = mitigation.mitigate(histogram, info.target.to_readout(), info.ancilla.to_readout())
    except SingularCalibration as exc:
        log.warning("no mitigated histogram for qubits (%d, %d): %s", pair.target, pair.ancilla, exc)
        mitigated = None
    return CircuitResult(name=name, histogram=histogram, mitigation_info=info, mitigated_histogram=mitigated)


def _assemble(metadata: Metadata, histograms: dict) -> ResultDocument:
    experiment, backend = metadata.experiments, metadata.backend_description
    names = circuit_names(experiment.method)
    data = []
    for pi_, pair in enumerate(experiment.qubits):
        for ai, phi in enumerate(experiment.angles.grid()):
            results = [_circuit_result(backend, pair, n, histograms[pi_, ai, n]) for n in names]
            data.append(ResultEntry(target=pair.target, ancilla=pair.ancilla, phi=phi, results_per_circuit=results))
    return ResultDocument(metadata=metadata, data=data)


def _metadata(experiment: ExperimentConfig, backend: BackendConfig) -> Metadata:
    if experiment.gateset != "generic":
        log.info("gateset %r is advisory; circuits run on the local simulator's native gates", experiment.gateset)
    return Metadata(experiments=experiment, backend_description=backend.with_resolved_seed())


def run_sync(experiment: ExperimentConfig, backend: BackendConfig, workers: int = 1) -> ResultDocument:
    metadata = _metadata(experiment, backend)
    units = list(_units(experiment))
    hists = _execute(experiment, metadata.backend_description, units, workers)
    return _assemble(metadata, {(u[0], u[1], u[4]): h for u, h in zip(units, hists)})


class JobStore:
    """Directory of job records ``<job_id>.yml`` holding status and, once run, histograms."""

    def __init__(self, root):
        self.root = Path(root)

    def path(self, job_id: str) -> Path:
        return self.root / f"{job_id}.yml"

    def load(self, job_id: str) -> dict:
        path = self.path(job_id)
        if not path.exists():
            raise ValidationError(f"unknown job_id {job_id!r} (no record in {self.root})")
        return load_yaml(path)

    def save(self, record: dict):
        self.root.mkdir(parents=True, exist_ok=True)
        self.path(record["job_id"]).write_text(yaml.safe_dump(record, sort_keys=False, default_flow_style=None))

    def submit(self, job: JobEntry):
        path = self.path(job.job_id)
        keys = [list(k) for k in job.keys]
        if path.exists():
            existing = load_yaml(path)
            if existing.get("keys") == keys:
                return
        self.save({"job_id": job.job_id, "status": PENDING, "keys": keys})

    def status(self, job_id: str) -> str:
        return self.load(job_id)["status"]


def _job_id(metadata: Metadata, pair_index: int, angle_index: int) -> str:
    canonical = json.dumps(
        [metadata.model_dump(mode="json"), pair_index, angle_index], sort_keys=True, separators=(",", ":")
    )
    return hashlib.sha256(canonical.encode()).hexdigest()[:24]


def submit_async(experiment: ExperimentConfig, backend: BackendConfig) -> IntermediateDocument:
    """Record one job per (pair, angle) in the job store; nothing runs until resolve."""
    metadata = _metadata(experiment, backend)
    store = JobStore(metadata.backend_description.simulator.job_store)
    names = circuit_names(experiment.method)
    jobs = []
    for pi_, pair in enumerate(experiment.qubits):
        for ai, phi in enumerate(experiment.angles.grid()):
            keys = [(pair.target, pair.ancilla, n, phi) for n in names]
            job = JobEntry(job_id=_job_id(metadata, pi_, ai), keys=keys)
            store.submit(job)
            jobs.append(job)
    return IntermediateDocument(metadata=metadata, data=jobs)


def benchmark(experiment: ExperimentConfig, backend: BackendConfig, workers: int = 1):
    if backend.asynchronous:
        return submit_async(experiment, backend)
    return run_sync(experiment, backend, workers)


def job_statuses(doc: IntermediateDocument) -> dict:
    store = JobStore(doc.metadata.backend_description.simulator.job_store)
    counts = {}
    for job in doc.data:
        status = store.status(job.job_id)
        counts[status] = counts.get(status, 0) + 1
    return counts


def _locate(metadata: Metadata, key):
    target, ancilla, name, phi = key
    experiment = metadata.experiments
    pairs = [(p.target, p.ancilla) for p in experiment.qubits]
    grid = experiment.angles.grid()
    if (target, ancilla) not in pairs or phi not in grid or name not in circuit_names(experiment.method):
        raise ValidationError(f"job key {list(key)} does not match the experiment metadata")
    pi_ = pairs.index((target, ancilla))
    return pi_, grid.index(phi), experiment.qubits[pi_], phi, name


def resolve(doc: IntermediateDocument, workers: int = 1) -> ResultDocument:
    """Run pending jobs, mark them done and assemble the result document."""
    metadata = doc.metadata
    store = JobStore(metadata.backend_description.simulator.job_store)
    records = {job.job_id: store.load(job.job_id) for job in doc.data}
    pending = [job for job in doc.data if records[job.job_id]["status"] != DONE]
    units = [_locate(metadata, k) for job in pending for k in job.keys]
    hists = iter(_execute(metadata.experiments, metadata.backend_description, units, workers))
    for job in pending:
        record = records[job.job_id]
        record["histograms"] = [next(hists) for _ in job.keys]
        record["status"] = DONE
        store.save(record)
    collected = {}
    for job in doc.data:
        record = records[job.job_id]
        for key, hist in zip(job.keys, record["histograms"]):
            pi_, ai, _, _, name = _locate(metadata, key)
            collected[pi_, ai, name] = hist
    expected = {(u[0], u[1], u[4]) for u in _units(metadata.experiments)}
    if set(collected) != expected:
        raise ValidationError("job records do not cover every circuit of the experiment")
    return _assemble(metadata, collected)


TABLE_COLUMNS = ("target", "ancilla", "phi", "ideal_prob", "disc_prob", "mit_disc_prob")


def tabulate(doc: ResultDocument) -> list:
    """One row per (target, ancilla, phi); ``mit_disc_prob`` only when mitigated data exist."""
    names = set(circuit_names(doc.metadata.experiments.method))
    rows = []
    for entry in doc.data:
        by_name = {r.name: r for r in entry.results_per_circuit}
        if set(by_name) != names or len(by_name) != len(entry.results_per_circuit):
            raise ValidationError(
                f"incomplete circuit set {sorted(by_name)} for ({entry.target}, {entry.ancilla}, {entry.phi})"
            )
        row = {
            "target": entry.target,
            "ancilla": entry.ancilla,
            "phi": entry.phi,
            "ideal_prob": fourier_p_succ(entry.phi),
            "disc_prob": schemes.probability({n: r.histogram for n, r in by_name.items()}),
        }
        if all(r.mitigated_histogram is not None for r in by_name.values()):
            row["mit_disc_prob"] = mitigation.mitigated_probability(
                {n: r.mitigated_histogram for n, r in by_name.items()}
            )
        rows.append(row)
    return rows


def format_csv(rows: list) -> str:
    with_mit = any("mit_disc_prob" in r for r in rows)
    columns = TABLE_COLUMNS if with_mit else TABLE_COLUMNS[:-1]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        cells = [r["target"], r["ancilla"], repr(round(r["phi"], 2))]
        cells += [repr(float(r[c])) if c in r else "" for c in columns[3:]]
        writer.writerow(cells)
    return buf.getvalue()


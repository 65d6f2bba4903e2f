"""Schemas of the YAML files read and written by the command-line workflow."""
from __future__ import annotations

import os
from typing import Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, StrictBool, StrictInt, field_validator, model_validator

from .angles import angle_grid, parse_angle_expression
from .simulator import ReadoutCalibration

DEFAULT_SEED = 1234
SEED_ENV_VAR = "QDISC_SEED"
DEFAULT_JOB_STORE = ".qdisc-jobs"


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class QubitPair(_Model):
    target: StrictInt = Field(ge=0)
    ancilla: StrictInt = Field(ge=0)

    @model_validator(mode="after")
    def _distinct(self):
        if self.target == self.ancilla:
            raise ValueError(f"target and ancilla must differ (both are {self.target})")
        return self


class AngleRange(_Model):
    start: float
    stop: float
    num_steps: StrictInt = Field(ge=1)

    @field_validator("start", "stop", mode="before")
    @classmethod
    def _evaluate(cls, value):
        try:
            return parse_angle_expression(value)
        except ValueError as exc:
            raise ValueError(str(exc)) from None

    @model_validator(mode="after")
    def _ordered(self):
        if self.start > self.stop:
            raise ValueError(f"start ({self.start}) must not exceed stop ({self.stop})")
        if self.num_steps == 1 and self.start != self.stop:
            raise ValueError("num_steps = 1 requires start == stop")
        return self

    def grid(self) -> list:
        return angle_grid(self.start, self.stop, self.num_steps)


class ExperimentConfig(_Model):
    type: Literal["discrimination-fourier"]
    qubits: List[QubitPair] = Field(min_length=1)
    angles: AngleRange
    gateset: Literal["ibmq", "lucy", "rigetti", "generic"]
    method: Literal["postselection", "direct_sum"]
    num_shots: StrictInt = Field(ge=1)

    @field_validator("qubits")
    @classmethod
    def _unique_pairs(cls, pairs):
        seen = set()
        for p in pairs:
            if (p.target, p.ancilla) in seen:
                raise ValueError(f"qubit pair ({p.target}, {p.ancilla}) listed twice")
            seen.add((p.target, p.ancilla))
        return pairs


class Calibration(_Model):
    prob_meas0_prep1: float = Field(ge=0.0, le=1.0)
    prob_meas1_prep0: float = Field(ge=0.0, le=1.0)

    def to_readout(self) -> ReadoutCalibration:
        return ReadoutCalibration(self.prob_meas1_prep0, self.prob_meas0_prep1)


IDEAL_CALIBRATION = Calibration(prob_meas0_prep1=0.0, prob_meas1_prep0=0.0)


class SimulatorConfig(_Model):
    seed: Optional[StrictInt] = Field(default=None, ge=0, lt=2**64)
    noise: Optional[Dict[StrictInt, Calibration]] = None
    job_store: str = DEFAULT_JOB_STORE

    def calibration(self, qubit: int) -> Calibration:
        if self.noise is None:
            return IDEAL_CALIBRATION
        return self.noise.get(qubit, IDEAL_CALIBRATION)


class BackendConfig(_Model):
    name: str
    asynchronous: StrictBool = False
    simulator: SimulatorConfig = SimulatorConfig()

    def with_resolved_seed(self) -> "BackendConfig":
        """Fill in the seed: backend file first, then ``QDISC_SEED``, then ``DEFAULT_SEED``."""
        if self.simulator.seed is not None:
            return self
        env = os.environ.get(SEED_ENV_VAR)
        seed = DEFAULT_SEED
        if env is not None and env.strip():
            try:
                seed = int(env)
            except ValueError:
                raise ValueError(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from None
            if not 0 <= seed < 2**64:
                raise ValueError(f"{SEED_ENV_VAR} must be a 64-bit unsigned integer")
        sim = self.simulator.model_copy(update={"seed": seed})
        return self.model_copy(update={"simulator": sim})

    @property
    def seed(self) -> int:
        return self.simulator.seed if self.simulator.seed is not None else DEFAULT_SEED


class Metadata(_Model):
    experiments: ExperimentConfig
    backend_description: BackendConfig


class MitigationInfo(_Model):
    target: Calibration
    ancilla: Calibration


class CircuitResult(_Model):
    name: Literal["id", "u", "id_v0", "id_v1", "u_v0", "u_v1"]
    histogram: Dict[Literal["00", "01", "10", "11"], StrictInt]
    mitigation_info: Optional[MitigationInfo] = None
    mitigated_histogram: Optional[Dict[Literal["00", "01", "10", "11"], float]] = None


class ResultEntry(_Model):
    target: StrictInt
    ancilla: StrictInt
    phi: float
    results_per_circuit: List[CircuitResult]


class ResultDocument(_Model):
    metadata: Metadata
    data: List[ResultEntry]


JobKey = Tuple[StrictInt, StrictInt, str, float]


class JobEntry(_Model):
    job_id: str
    keys: List[JobKey]


class IntermediateDocument(_Model):
    metadata: Metadata
    data: List[JobEntry]


Document = Union[ResultDocument, IntermediateDocument]

"""Experiment configuration and report models."""

from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


class ExperimentKind(str, Enum):
    """Experiment suites the runner knows how to execute.

    Attributes:
        CROSS_ENGINE: Dense vs Heisenberg beta on random Clifford circuits
        TRACE_EST: Hadamard-test beta vs exact scaled trace, plus sampled coverage
        PARITY_L: Compiled CNOT circuits vs the classical bit-vector oracle
        MIXING: Markov mixing beta vs beta_21/3 error bound
        CORNER: Trace gap of corner-pair words vs 2t
        FOURIER: Brute sign sum vs dense trace of the Fourier-permutation word
        WITNESS: Entanglement witness on the entangled example
        SQUARING: Scaled real trace of the squared circuit vs beta
        REDUCTION: Two-partition reduction vs main circuit on derived input
        BOOLEAN: Boolean gadgets vs their truth tables
    """
    CROSS_ENGINE = "cross_engine"
    TRACE_EST = "trace_est"
    PARITY_L = "parity_l"
    MIXING = "mixing"
    CORNER = "corner"
    FOURIER = "fourier"
    WITNESS = "witness"
    SQUARING = "squaring"
    REDUCTION = "reduction"
    BOOLEAN = "boolean"


DEFAULT_TOLERANCES: Dict[ExperimentKind, float] = {
    ExperimentKind.CROSS_ENGINE: 1e-10,
    ExperimentKind.TRACE_EST: 1e-10,
    ExperimentKind.PARITY_L: 1e-12,
    ExperimentKind.MIXING: 1e-9,
    ExperimentKind.CORNER: 1e-9,
    ExperimentKind.FOURIER: 1e-9,
    ExperimentKind.WITNESS: 1e-10,
    ExperimentKind.SQUARING: 1e-10,
    ExperimentKind.REDUCTION: 1e-10,
    ExperimentKind.BOOLEAN: 1e-12,
}


class ExperimentSizes(BaseModel):
    """Corpus sizes shared by all kinds; each kind reads the fields it needs.

    Attributes:
        cases: Number of corpus entries
        min_width: Smallest register width drawn
        max_width: Largest register width drawn
        depth: Gates per random circuit
        input_len: Classical input bits of random circuits
        shots: Shots per sampled estimate (trace_est)
        trials: Seeded sampling trials per case (trace_est)
        s_values: Mixing step counts (mixing)
        max_t: Longest corner word (corner)
    """
    model_config = ConfigDict(frozen=True)

    cases: int = Field(default=20, ge=0)
    min_width: int = Field(default=1, ge=1)
    max_width: int = Field(default=4, ge=1)
    depth: int = Field(default=20, ge=0)
    input_len: int = Field(default=2, ge=0)
    shots: int = Field(default=1000, ge=1)
    trials: int = Field(default=0, ge=0)
    s_values: Tuple[int, ...] = (2, 3)
    max_t: int = Field(default=10, ge=0)

    @model_validator(mode="after")
    def _check_widths(self) -> "ExperimentSizes":
        if self.min_width > self.max_width:
            raise ValueError(f"min_width {self.min_width} exceeds max_width {self.max_width}")
        if any(s < 1 for s in self.s_values):
            raise ValueError("mixing step counts must be positive")
        return self


class ExperimentConfig(BaseModel):
    """One experiment run; fixed seed means a fully deterministic run."""
    model_config = ConfigDict(frozen=True)

    kind: ExperimentKind
    sizes: ExperimentSizes = Field(default_factory=ExperimentSizes)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    tolerance: Optional[float] = Field(default=None, gt=0.0)

    @property
    def effective_tolerance(self) -> float:
        return self.tolerance if self.tolerance is not None else DEFAULT_TOLERANCES[self.kind]


class CaseRecord(BaseModel):
    """Outcome of one corpus entry, carrying both sides of the comparison."""
    model_config = ConfigDict(populate_by_name=True)

    index: int
    input: str = ""
    measured: Optional[float] = None
    oracle: Optional[float] = None
    passed: bool = Field(alias="pass")
    deviation: Optional[float] = None
    error: Optional[str] = None
    details: Dict[str, Any] = Field(default_factory=dict)


class ExperimentSummary(BaseModel):
    total: int
    passed: int
    max_dev: float
    wall_ms: float = 0.0


class ExperimentReport(BaseModel):
    config: ExperimentConfig
    cases: List[CaseRecord] = Field(default_factory=list)
    summary: ExperimentSummary

    @property
    def all_passed(self) -> bool:
        return self.summary.passed == self.summary.total

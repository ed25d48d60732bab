"""Data models for the one-clean-qubit workbench."""

from src.models.pauli import PauliString, PauliSum, PauliKey
from src.models.circuit import (
    GateKind,
    Gate,
    SelectorKind,
    Instruction,
    Circuit,
)
from src.models.states import (
    DenseState,
    HeisenbergState,
    StateDecomposition,
    ShotCounts,
    Decision,
    DecisionPolicy,
)
from src.models.reports import (
    TraceEstimate,
    WitnessReport,
    CornerReport,
    FourierReport,
)
from src.models.experiment import (
    ExperimentKind,
    ExperimentSizes,
    ExperimentConfig,
    CaseRecord,
    ExperimentSummary,
    ExperimentReport,
)

__all__ = [
    # Pauli algebra
    "PauliString",
    "PauliSum",
    "PauliKey",
    # Circuits
    "GateKind",
    "Gate",
    "SelectorKind",
    "Instruction",
    "Circuit",
    # Simulation results
    "DenseState",
    "HeisenbergState",
    "StateDecomposition",
    "ShotCounts",
    "Decision",
    "DecisionPolicy",
    # Gadget reports
    "TraceEstimate",
    "WitnessReport",
    "CornerReport",
    "FourierReport",
    # Experiments
    "ExperimentKind",
    "ExperimentSizes",
    "ExperimentConfig",
    "CaseRecord",
    "ExperimentSummary",
    "ExperimentReport",
]

"""Exception hierarchy shared by the algebra, circuit, engine and gadget layers.

Every error is a ``ValueError`` as well as a ``Dqc1Error`` so callers that only
care about bad input can keep catching ``ValueError``.
"""

from enum import Enum


class Dqc1Error(ValueError):
    """Base class for all workbench errors."""


class WidthMismatchError(Dqc1Error):
    """Operands live in algebras (or registers) of different width."""


class QubitRangeError(Dqc1Error):
    """A qubit index lies outside 1..width."""


class NonCliffordError(Dqc1Error):
    """A gate without a Pauli-to-Pauli conjugation rule was given to the Clifford path."""


class TermBlowupError(Dqc1Error):
    """A Heisenberg expansion outgrew the configured term cap."""


class GateArityError(Dqc1Error):
    """A gate acts on more qubits than the operation supports."""


class ControlDepthError(Dqc1Error):
    """Adding a control would nest controls deeper than two levels."""


class ControlCollisionError(Dqc1Error):
    """The requested control qubit is already used by a gate."""


class NonCnotGateError(Dqc1Error):
    """A CNOT-only construction met some other gate."""


class InputLengthError(Dqc1Error):
    """The classical input string does not match the circuit's input arity."""


class DenseCapError(Dqc1Error):
    """The register is too wide for dense simulation."""


class StateInvariantError(Dqc1Error):
    """A density operator failed a Hermiticity, trace or positivity check."""


class BetaRangeError(Dqc1Error):
    """A beta value outside [-1, 1]."""


class CornerPreconditionError(Dqc1Error):
    """The oracle unitary does not fix the two-dimensional corner subspace."""


class ExperimentConfigError(Dqc1Error):
    """An experiment configuration is inconsistent with the engine caps."""


class ReportIOError(Dqc1Error):
    """A report could not be written or read."""

    def __init__(self, path, detail: str):
        self.path = path
        self.detail = detail
        super().__init__(f"{path}: {detail}")


class SourceErrorKind(str, Enum):
    """Categories of circuit-source problems."""
    SYNTAX = "Syntax"
    UNKNOWN_GATE = "UnknownGate"
    QUBIT_OUT_OF_RANGE = "QubitOutOfRange"
    BIT_OUT_OF_RANGE = "BitOutOfRange"
    DUPLICATE_QUBIT = "DuplicateQubit"
    ARITY_MISMATCH = "ArityMismatch"


class SourceError(Dqc1Error):
    """A problem in circuit DSL text, located by 1-based line and column.

    Attributes:
        line: Line number of the offending statement
        column: Column of the offending token
        kind: SourceErrorKind category
        message: Human-readable description
    """

    def __init__(self, line: int, column: int, kind: SourceErrorKind, message: str):
        self.line = line
        self.column = column
        self.kind = kind
        self.message = message
        super().__init__(f"line {line}, column {column}: {kind.value}: {message}")

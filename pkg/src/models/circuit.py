"""Circuit intermediate representation: gates, classically selected instructions, circuits."""

from enum import Enum
from typing import Callable, Iterator, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


class GateKind(str, Enum):
    """Gate alphabet.

    CTRL wraps an inner gate and adds one control qubit in front of it.
    """
    I = "i"
    H = "h"
    X = "x"
    Y = "y"
    Z = "z"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    CX = "cx"
    CZ = "cz"
    SWAP = "swap"
    CCX = "ccx"
    CTRL = "ctrl"


GATE_ARITY = {
    GateKind.I: 1, GateKind.H: 1, GateKind.X: 1, GateKind.Y: 1, GateKind.Z: 1,
    GateKind.S: 1, GateKind.SDG: 1, GateKind.T: 1, GateKind.TDG: 1,
    GateKind.CX: 2, GateKind.CZ: 2, GateKind.SWAP: 2,
    GateKind.CCX: 3,
    GateKind.CTRL: 1,  # the control; the inner gate brings its own qubits
}

CLIFFORD_KINDS = frozenset({
    GateKind.I, GateKind.H, GateKind.X, GateKind.Y, GateKind.Z,
    GateKind.S, GateKind.SDG, GateKind.CX, GateKind.CZ, GateKind.SWAP,
})

_ADJOINT_KIND = {
    GateKind.S: GateKind.SDG, GateKind.SDG: GateKind.S,
    GateKind.T: GateKind.TDG, GateKind.TDG: GateKind.T,
}

_BUILTIN_CONTROL_DEPTH = {GateKind.CX: 1, GateKind.CZ: 1, GateKind.CCX: 2}

MAX_CONTROL_DEPTH = 2


class Gate(BaseModel):
    """One gate application.

    Attributes:
        kind: Gate kind
        qubits: 1-based qubit indices in gate order (control first for
            CX/CZ/CCX; for CTRL only the added control qubit)
        inner: The wrapped gate when kind is CTRL
    """
    model_config = ConfigDict(frozen=True)

    kind: GateKind
    qubits: Tuple[int, ...]
    inner: Optional["Gate"] = None

    @model_validator(mode="after")
    def _check_shape(self) -> "Gate":
        if len(self.qubits) != GATE_ARITY[self.kind]:
            raise ValueError(
                f"{self.kind.value} takes {GATE_ARITY[self.kind]} qubit(s), got {len(self.qubits)}"
            )
        if (self.kind == GateKind.CTRL) != (self.inner is not None):
            raise ValueError("inner gate is required for ctrl and forbidden otherwise")
        touched = self.all_qubits
        if any(q < 1 for q in touched):
            raise ValueError(f"qubit indices are 1-based, got {touched}")
        if len(set(touched)) != len(touched):
            raise ValueError(f"qubit indices must be distinct, got {touched}")
        if self.control_depth > MAX_CONTROL_DEPTH:
            raise ValueError(f"control depth {self.control_depth} exceeds {MAX_CONTROL_DEPTH}")
        return self

    @classmethod
    def of(cls, kind, *qubits: int) -> "Gate":
        """Build a plain gate, e.g. ``Gate.of("cx", 1, 2)``."""
        return cls(kind=GateKind(kind), qubits=tuple(qubits))

    @classmethod
    def controlled(cls, control: int, inner: "Gate") -> "Gate":
        """CTRL wrapper without canonicalisation (see circuit_transforms.control_on)."""
        return cls(kind=GateKind.CTRL, qubits=(control,), inner=inner)

    @property
    def all_qubits(self) -> Tuple[int, ...]:
        """Every qubit the gate touches, in matrix order (controls first)."""
        if self.inner is not None:
            return self.qubits + self.inner.all_qubits
        return self.qubits

    @property
    def control_depth(self) -> int:
        if self.inner is not None:
            return 1 + self.inner.control_depth
        return _BUILTIN_CONTROL_DEPTH.get(self.kind, 0)

    @property
    def is_clifford(self) -> bool:
        return self.kind in CLIFFORD_KINDS

    @property
    def name(self) -> str:
        """DSL name, e.g. 'cx' or 'ctrl-ctrl-h'."""
        if self.inner is not None:
            return f"ctrl-{self.inner.name}"
        return self.kind.value

    def dagger(self) -> "Gate":
        """The inverse gate (S<->SDG, T<->TDG; everything else is self-inverse)."""
        if self.inner is not None:
            return Gate.controlled(self.qubits[0], self.inner.dagger())
        return Gate(kind=_ADJOINT_KIND.get(self.kind, self.kind), qubits=self.qubits)

    def relabel(self, mapping: Callable[[int], int]) -> "Gate":
        """Same gate on relabelled qubits."""
        inner = self.inner.relabel(mapping) if self.inner is not None else None
        return Gate(kind=self.kind, qubits=tuple(mapping(q) for q in self.qubits), inner=inner)

    def to_text(self) -> str:
        return " ".join([self.name, *(str(q) for q in self.all_qubits)])

    def __str__(self) -> str:
        return self.to_text()


Gate.model_rebuild()

GateList = Tuple[Gate, ...]


class SelectorKind(str, Enum):
    """How an instruction depends on the classical input."""
    ALWAYS = "always"
    IF_BIT = "if"
    PAIR = "pair"


class Instruction(BaseModel):
    """One step of a circuit.

    ``ALWAYS`` applies ``gates``; ``IF_BIT`` applies ``gates`` when input bit
    ``bit`` is 1; ``PAIR`` applies ``branch_zero`` or ``branch_one`` according
    to bit ``bit``.
    """
    model_config = ConfigDict(frozen=True)

    selector: SelectorKind = SelectorKind.ALWAYS
    bit: Optional[int] = None
    gates: GateList = ()
    branch_zero: GateList = ()
    branch_one: GateList = ()

    @model_validator(mode="after")
    def _check_selector(self) -> "Instruction":
        if self.selector == SelectorKind.ALWAYS:
            if self.bit is not None or self.branch_zero or self.branch_one:
                raise ValueError("unconditional instruction takes no bit and no branches")
        else:
            if self.bit is None or self.bit < 1:
                raise ValueError("selector bit must be a 1-based input index")
            if self.selector == SelectorKind.IF_BIT and (self.branch_zero or self.branch_one):
                raise ValueError("'if' instruction has no branches")
            if self.selector == SelectorKind.PAIR and self.gates:
                raise ValueError("'pair' instruction carries its gates in branches")
        return self

    @classmethod
    def always(cls, gates: Sequence[Gate]) -> "Instruction":
        return cls(gates=tuple(gates))

    @classmethod
    def if_bit(cls, bit: int, gates: Sequence[Gate]) -> "Instruction":
        return cls(selector=SelectorKind.IF_BIT, bit=bit, gates=tuple(gates))

    @classmethod
    def pair(cls, bit: int, branch_zero: Sequence[Gate], branch_one: Sequence[Gate]) -> "Instruction":
        return cls(
            selector=SelectorKind.PAIR, bit=bit,
            branch_zero=tuple(branch_zero), branch_one=tuple(branch_one),
        )

    def select(self, bits: str) -> GateList:
        """Gates applied for an already validated input bit-string."""
        if self.selector == SelectorKind.ALWAYS:
            return self.gates
        value = bits[self.bit - 1] == "1"
        if self.selector == SelectorKind.IF_BIT:
            return self.gates if value else ()
        return self.branch_one if value else self.branch_zero

    def all_gates(self) -> Iterator[Gate]:
        yield from self.gates
        yield from self.branch_zero
        yield from self.branch_one

    def map_gate_lists(self, transform: Callable[[GateList], Sequence[Gate]]) -> "Instruction":
        """Apply a gate-list transform to every list, keeping the selector."""
        return Instruction(
            selector=self.selector,
            bit=self.bit,
            gates=tuple(transform(self.gates)) if self.gates else (),
            branch_zero=tuple(transform(self.branch_zero)) if self.branch_zero else (),
            branch_one=tuple(transform(self.branch_one)) if self.branch_one else (),
        )


class Circuit(BaseModel):
    """A width-w circuit over an n-bit classical input.

    Instructions are listed in temporal order: the first one acts first.
    """
    model_config = ConfigDict(frozen=True)

    width: int = Field(ge=1)
    input_len: int = Field(default=0, ge=0)
    instructions: Tuple[Instruction, ...] = ()

    @model_validator(mode="after")
    def _check_ranges(self) -> "Circuit":
        for position, instruction in enumerate(self.instructions):
            if instruction.bit is not None and instruction.bit > self.input_len:
                raise ValueError(
                    f"instruction {position}: bit {instruction.bit} exceeds input arity {self.input_len}"
                )
            for gate in instruction.all_gates():
                if max(gate.all_qubits) > self.width:
                    raise ValueError(
                        f"instruction {position}: gate '{gate}' exceeds width {self.width}"
                    )
        return self

    @classmethod
    def from_gates(cls, width: int, gates: Sequence[Gate], input_len: int = 0) -> "Circuit":
        """Input-free circuit (or one ignoring its input) from a plain gate list."""
        instructions = (Instruction.always(gates),) if gates else ()
        return cls(width=width, input_len=input_len, instructions=instructions)

    def all_gates(self) -> Iterator[Gate]:
        for instruction in self.instructions:
            yield from instruction.all_gates()

    @property
    def gate_count(self) -> int:
        return sum(1 for _ in self.all_gates())

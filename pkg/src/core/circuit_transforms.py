"""Circuit-to-circuit transforms: resolution of classical selectors, control,
adjoints, CNOT reversal, squaring, concatenation and qubit relabelling.

All transforms are pure; they return new immutable circuits or gate lists.
"""

from typing import Callable, Dict, List, Mapping, Optional, Sequence, Union

from src.models.circuit import MAX_CONTROL_DEPTH, Circuit, Gate, GateKind, Instruction
from src.models.errors import (
    ControlCollisionError,
    ControlDepthError,
    InputLengthError,
    NonCnotGateError,
    WidthMismatchError,
)

QubitMapping = Union[Mapping[int, int], Callable[[int], int]]


def check_input(c: Circuit, x: str) -> str:
    """Validate a classical input bit-string against the circuit's arity.

    Raises:
        InputLengthError: If the length differs from ``c.input_len`` or the
            string holds characters other than 0/1
    """
    if len(x) != c.input_len:
        raise InputLengthError(f"circuit takes {c.input_len} input bit(s), got {len(x)}")
    if any(ch not in "01" for ch in x):
        raise InputLengthError(f"input must be a bit-string, got {x!r}")
    return x


def resolve(c: Circuit, x: str = "") -> List[Gate]:
    """Flatten a circuit on input x into the gate list actually applied, in temporal order."""
    check_input(c, x)
    gates: List[Gate] = []
    for instruction in c.instructions:
        gates.extend(instruction.select(x))
    return gates


def control_gate(gate: Gate, control: int) -> Gate:
    """Controlled version of one gate, canonicalised onto CX/CZ/CCX where possible.

    Raises:
        ControlCollisionError: If the gate already uses ``control``
        ControlDepthError: If the result would nest more than two controls
    """
    if control in gate.all_qubits:
        raise ControlCollisionError(f"control qubit {control} is used by '{gate}'")
    if gate.kind == GateKind.I:
        return gate
    if gate.kind == GateKind.X:
        return Gate.of(GateKind.CX, control, gate.qubits[0])
    if gate.kind == GateKind.Z:
        return Gate.of(GateKind.CZ, control, gate.qubits[0])
    if gate.kind == GateKind.CX:
        return Gate.of(GateKind.CCX, control, *gate.qubits)
    if gate.control_depth + 1 > MAX_CONTROL_DEPTH:
        raise ControlDepthError(f"controlling '{gate}' exceeds depth {MAX_CONTROL_DEPTH}")
    return Gate.controlled(control, gate)


def control_on(gates: Sequence[Gate], control: int) -> List[Gate]:
    """Wrap every gate so the list implements Lambda_control(U)."""
    return [control_gate(g, control) for g in gates]


def adjoint_circuit(gates: Sequence[Gate]) -> List[Gate]:
    """Gate list of U†: reversed order, each gate inverted."""
    return [g.dagger() for g in reversed(gates)]


def inverse(c: Circuit) -> Circuit:
    """Circuit whose resolution on every input is the adjoint of c's resolution."""
    instructions = tuple(
        instruction.map_gate_lists(adjoint_circuit) for instruction in reversed(c.instructions)
    )
    return Circuit(width=c.width, input_len=c.input_len, instructions=instructions)


def reverse_cnot_dual(c: Circuit) -> Circuit:
    """Swap control and target of every CNOT, keeping the classical selectors.

    Raises:
        NonCnotGateError: If any branch contains a gate other than CX
    """
    for gate in c.all_gates():
        if gate.kind != GateKind.CX:
            raise NonCnotGateError(f"expected a CNOT-only circuit, found '{gate}'")

    def flip(gates):
        return [Gate.of(GateKind.CX, g.qubits[1], g.qubits[0]) for g in gates]

    return Circuit(
        width=c.width,
        input_len=c.input_len,
        instructions=tuple(i.map_gate_lists(flip) for i in c.instructions),
    )


def square_for_trace(c: Circuit) -> Circuit:
    """Circuit whose resolved product is U·Z1·U†·Z1.

    Temporal order: Z1, then U†, then Z1, then U.
    """
    z_one = Instruction.always([Gate.of(GateKind.Z, 1)])
    instructions = (z_one,) + inverse(c).instructions + (z_one,) + c.instructions
    return Circuit(width=c.width, input_len=c.input_len, instructions=instructions)


def concat(a: Circuit, b: Circuit) -> Circuit:
    """a followed in time by b.

    Raises:
        WidthMismatchError: If the widths differ
        InputLengthError: If the input arities differ
    """
    if a.width != b.width:
        raise WidthMismatchError(f"cannot concatenate width {a.width} with width {b.width}")
    if a.input_len != b.input_len:
        raise InputLengthError(f"cannot concatenate input arity {a.input_len} with {b.input_len}")
    return Circuit(width=a.width, input_len=a.input_len, instructions=a.instructions + b.instructions)


def remap(
    c: Circuit,
    mapping: QubitMapping,
    width: int,
    input_len: Optional[int] = None,
    bit_mapping: Optional[Dict[int, int]] = None,
) -> Circuit:
    """Relabel qubits (and optionally selector bits) into a register of the given width.

    Args:
        c: Source circuit
        mapping: Old qubit -> new qubit, as a mapping or a function
        width: Width of the target register
        input_len: Input arity of the result (defaults to c.input_len)
        bit_mapping: Old selector bit -> new selector bit (defaults to identity)

    Returns:
        The relabelled circuit
    """
    qubit_of = mapping if callable(mapping) else mapping.__getitem__

    def relabel(gates):
        return [g.relabel(qubit_of) for g in gates]

    instructions = []
    for instruction in c.instructions:
        moved = instruction.map_gate_lists(relabel)
        if bit_mapping is not None and moved.bit is not None:
            moved = moved.model_copy(update={"bit": bit_mapping[moved.bit]})
        instructions.append(moved)
    return Circuit(
        width=width,
        input_len=c.input_len if input_len is None else input_len,
        instructions=tuple(instructions),
    )


def shift(c: Circuit, offset: int, width: Optional[int] = None) -> Circuit:
    """Move every qubit q to q + offset; the register grows by ``offset`` by default."""
    return remap(c, lambda q: q + offset, width if width is not None else c.width + offset)

"""Text front end for circuits: parse, print and random generation.

File format (``.dqc1``), one statement per line::

    # comment
    width 3
    inputs 2
    h 1
    if 1 { cx 1 2; t 3 }
    pair 2 { } { z 1 }
    ctrl-h 2 1

The two header lines come first. Gate names are case-insensitive; ``ctrl-``
prefixes add leading control qubits. Consecutive unconditional gate lines
form a single instruction.
"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Union

import numpy as np
from pydantic import ValidationError
from pyparsing import (
    CaselessKeyword,
    Group,
    Optional as Opt,
    ParseBaseException,
    ParserElement,
    StringEnd,
    Suppress,
    Word,
    ZeroOrMore,
    alphanums,
    alphas,
    nums,
    pythonStyleComment,
)

from src.config.logging_config import get_logger
from src.models.circuit import (
    GATE_ARITY,
    MAX_CONTROL_DEPTH,
    Circuit,
    Gate,
    GateKind,
    Instruction,
    SelectorKind,
)
from src.models.errors import SourceError, SourceErrorKind

logger = get_logger(__name__)

CTRL_PREFIX = "ctrl-"


@dataclass(frozen=True)
class _Token:
    value: Union[int, str]
    column: int


# ---------------------------------------------------------------------------
# Grammar (one line at a time; columns are 1-based within the line)
# ---------------------------------------------------------------------------

def _located(expression, convert):
    return expression.set_parse_action(lambda s, loc, toks: _Token(convert(toks[0]), loc + 1))


_INT = _located(Word(nums), int)
_NAME = _located(Word(alphas, alphanums + "-"), str)
_GATE = Group(_NAME + Group(_INT + ZeroOrMore(_INT)))
_BLOCK = Group(Suppress("{") + Opt(_GATE + ZeroOrMore(Suppress(";") + _GATE)) + Suppress("}"))

_IF_STMT = Group(CaselessKeyword("if") + _INT + _BLOCK)
_PAIR_STMT = Group(CaselessKeyword("pair") + _INT + _BLOCK + _BLOCK)
_GATE_STMT = Group(_GATE)
_STATEMENT = (_IF_STMT | _PAIR_STMT | _GATE_STMT) + StringEnd()

_WIDTH_LINE = Suppress(CaselessKeyword("width")) + _INT + StringEnd()
_INPUTS_LINE = Suppress(CaselessKeyword("inputs")) + _INT + StringEnd()

for _element in (_STATEMENT, _WIDTH_LINE, _INPUTS_LINE):
    _element.ignore(pythonStyleComment)
    _element.parse_with_tabs()


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0]


def _parse_line(element: ParserElement, line: str, line_number: int):
    try:
        return element.parse_string(line, parse_all=True)
    except ParseBaseException as e:
        raise SourceError(line_number, e.column, SourceErrorKind.SYNTAX, e.msg) from None


# ---------------------------------------------------------------------------
# Semantic checks
# ---------------------------------------------------------------------------

class _Builder:
    """Turns parsed tokens of one file into validated model objects."""

    def __init__(self, width: int, input_len: int):
        self.width = width
        self.input_len = input_len

    def gate(self, tokens, line_number: int) -> Gate:
        name_token, qubit_tokens = tokens[0], list(tokens[1])
        name = str(name_token.value).lower()
        n_controls = 0
        while name.startswith(CTRL_PREFIX):
            name = name[len(CTRL_PREFIX):]
            n_controls += 1

        try:
            kind = GateKind(name)
        except ValueError:
            kind = None
        if kind is None or kind == GateKind.CTRL:
            raise SourceError(
                line_number, name_token.column, SourceErrorKind.UNKNOWN_GATE,
                f"unknown gate '{name_token.value}'",
            )
        base_depth = Gate.of(kind, *range(1, GATE_ARITY[kind] + 1)).control_depth
        if n_controls + base_depth > MAX_CONTROL_DEPTH:
            raise SourceError(
                line_number, name_token.column, SourceErrorKind.UNKNOWN_GATE,
                f"'{name_token.value}' nests more than {MAX_CONTROL_DEPTH} controls",
            )

        expected = n_controls + GATE_ARITY[kind]
        if len(qubit_tokens) != expected:
            raise SourceError(
                line_number, name_token.column, SourceErrorKind.ARITY_MISMATCH,
                f"'{name_token.value}' takes {expected} qubit(s), got {len(qubit_tokens)}",
            )
        seen = set()
        for token in qubit_tokens:
            if not 1 <= token.value <= self.width:
                raise SourceError(
                    line_number, token.column, SourceErrorKind.QUBIT_OUT_OF_RANGE,
                    f"qubit {token.value} outside 1..{self.width}",
                )
            if token.value in seen:
                raise SourceError(
                    line_number, token.column, SourceErrorKind.DUPLICATE_QUBIT,
                    f"qubit {token.value} repeated",
                )
            seen.add(token.value)

        qubits = [t.value for t in qubit_tokens]
        gate = Gate.of(kind, *qubits[n_controls:])
        for control in reversed(qubits[:n_controls]):
            gate = Gate.controlled(control, gate)
        return gate

    def bit(self, token: _Token, line_number: int) -> int:
        if not 1 <= token.value <= self.input_len:
            raise SourceError(
                line_number, token.column, SourceErrorKind.BIT_OUT_OF_RANGE,
                f"input bit {token.value} outside 1..{self.input_len}",
            )
        return token.value

    def block(self, tokens, line_number: int) -> List[Gate]:
        return [self.gate(g, line_number) for g in tokens]


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------

def normalize(c: Circuit) -> Circuit:
    """Merge consecutive unconditional instructions and drop empty ones."""
    merged: List[Instruction] = []
    for instruction in c.instructions:
        if instruction.selector == SelectorKind.ALWAYS:
            if not instruction.gates:
                continue
            if merged and merged[-1].selector == SelectorKind.ALWAYS:
                merged[-1] = Instruction.always(merged[-1].gates + instruction.gates)
                continue
        merged.append(instruction)
    return Circuit(width=c.width, input_len=c.input_len, instructions=tuple(merged))


def parse(text: Union[str, bytes]) -> Circuit:
    """Parse circuit DSL text.

    Args:
        text: Source text, or raw bytes (decoded as UTF-8)

    Returns:
        The validated circuit

    Raises:
        SourceError: On the first problem, with its 1-based line and column
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise SourceError(1, 1, SourceErrorKind.SYNTAX, f"not UTF-8: {e.reason}") from None

    # Only "\n" (or "\r\n") ends a line; other Unicode separators stay inside it
    lines = text.replace("\r\n", "\n").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    header: List[int] = []
    builder: Optional[_Builder] = None
    instructions: List[Instruction] = []

    for line_number, line in enumerate(lines, start=1):
        if not _strip_comment(line).strip():
            continue
        if len(header) < 2:
            element = _WIDTH_LINE if not header else _INPUTS_LINE
            (token,) = _parse_line(element, line, line_number)
            if not header and token.value < 1:
                raise SourceError(line_number, token.column, SourceErrorKind.SYNTAX, "width must be positive")
            header.append(token.value)
            if len(header) == 2:
                builder = _Builder(*header)
            continue

        (statement,) = _parse_line(_STATEMENT, line, line_number)
        head = statement[0]
        if isinstance(head, str) and head.lower() == "if":
            bit = builder.bit(statement[1], line_number)
            instructions.append(Instruction.if_bit(bit, builder.block(statement[2], line_number)))
        elif isinstance(head, str) and head.lower() == "pair":
            bit = builder.bit(statement[1], line_number)
            instructions.append(Instruction.pair(
                bit,
                builder.block(statement[2], line_number),
                builder.block(statement[3], line_number),
            ))
        else:
            instructions.append(Instruction.always([builder.gate(head, line_number)]))

    if builder is None:
        missing = "width" if not header else "inputs"
        raise SourceError(max(len(lines), 1), 1, SourceErrorKind.SYNTAX, f"missing '{missing}' header line")

    try:
        circuit = Circuit(width=builder.width, input_len=builder.input_len, instructions=tuple(instructions))
    except ValidationError as e:
        raise SourceError(1, 1, SourceErrorKind.SYNTAX, str(e)) from None
    logger.debug(f"Parsed circuit: width={circuit.width}, inputs={circuit.input_len}, {len(circuit.instructions)} instruction(s)")
    return normalize(circuit)


def _block_text(gates: Sequence[Gate]) -> str:
    if not gates:
        return "{ }"
    return "{ " + "; ".join(g.to_text() for g in gates) + " }"


def print_circuit(c: Circuit) -> str:
    """Canonical DSL text; parse(print_circuit(c)) equals normalize(c)."""
    lines = [f"width {c.width}", f"inputs {c.input_len}"]
    for instruction in c.instructions:
        if instruction.selector == SelectorKind.ALWAYS:
            lines.extend(g.to_text() for g in instruction.gates)
        elif instruction.selector == SelectorKind.IF_BIT:
            lines.append(f"if {instruction.bit} {_block_text(instruction.gates)}")
        else:
            lines.append(
                f"pair {instruction.bit} {_block_text(instruction.branch_zero)} "
                f"{_block_text(instruction.branch_one)}"
            )
    return "\n".join(lines) + "\n"


class Alphabet(str, Enum):
    """Gate sets for random circuit generation."""
    CLIFFORD = "clifford"
    CLIFFORD_T = "clifford+t"
    CNOT_ONLY = "cnot-only"


_SINGLE_CLIFFORD = (GateKind.H, GateKind.X, GateKind.Y, GateKind.Z, GateKind.S, GateKind.SDG)
_TWO_CLIFFORD = (GateKind.CX, GateKind.CZ, GateKind.SWAP)

_ALPHABETS = {
    Alphabet.CLIFFORD: _SINGLE_CLIFFORD + _TWO_CLIFFORD,
    Alphabet.CLIFFORD_T: _SINGLE_CLIFFORD + _TWO_CLIFFORD + (GateKind.T, GateKind.TDG),
    Alphabet.CNOT_ONLY: (GateKind.CX,),
}


def _random_gate(rng: np.random.Generator, kinds: Sequence[GateKind], width: int) -> Gate:
    kind = kinds[rng.integers(len(kinds))]
    qubits = rng.choice(width, size=GATE_ARITY[kind], replace=False) + 1
    return Gate.of(kind, *(int(q) for q in qubits))


def random_circuit(
    width: int,
    input_len: int,
    depth: int,
    alphabet: Union[Alphabet, str] = Alphabet.CLIFFORD,
    seed: Optional[Union[int, np.random.SeedSequence, np.random.Generator]] = None,
) -> Circuit:
    """Random circuit of ``depth`` instructions, deterministic for a fixed seed.

    With ``input_len`` > 0 each instruction is unconditional, ``if`` or
    ``pair`` with equal probability; pair branches hold zero or one gate.

    Raises:
        ValueError: On non-positive width, or a two-qubit-only alphabet at width 1
    """
    alphabet = Alphabet(alphabet)
    if width < 1 or input_len < 0 or depth < 0:
        raise ValueError(f"invalid sizes width={width} input_len={input_len} depth={depth}")
    kinds = [k for k in _ALPHABETS[alphabet] if GATE_ARITY[k] <= width]
    if not kinds:
        raise ValueError(f"alphabet {alphabet.value} needs at least two qubits")
    rng = np.random.default_rng(seed)

    instructions = []
    for _ in range(depth):
        selector = rng.integers(3) if input_len else 0
        if selector == 0:
            instructions.append(Instruction.always([_random_gate(rng, kinds, width)]))
            continue
        bit = int(rng.integers(input_len)) + 1
        if selector == 1:
            instructions.append(Instruction.if_bit(bit, [_random_gate(rng, kinds, width)]))
        else:
            branches = [
                [_random_gate(rng, kinds, width)] if rng.integers(2) else []
                for _ in range(2)
            ]
            instructions.append(Instruction.pair(bit, branches[0], branches[1]))
    return normalize(Circuit(width=width, input_len=input_len, instructions=tuple(instructions)))

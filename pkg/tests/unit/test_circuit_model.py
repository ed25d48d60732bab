"""Unit tests for the circuit model and circuit transforms."""

import numpy as np
import pytest

from src.core.circuit_transforms import (
    check_input,
    concat,
    control_gate,
    control_on,
    inverse,
    remap,
    resolve,
    reverse_cnot_dual,
    shift,
    square_for_trace,
)
from src.core.circuit_parser import parse
from src.core.engines import circuit_unitary, unitary_of
from src.models.circuit import Circuit, Gate, Instruction
from src.models.errors import (
    ControlCollisionError,
    ControlDepthError,
    InputLengthError,
    NonCnotGateError,
    WidthMismatchError,
)
from tests.test_fixtures import all_inputs, gates_circuit, random_unitary_gates


class TestGate:
    """Test Gate validation and helpers."""

    def test_arity_checked(self):
        """Gate kinds take a fixed number of qubits."""
        with pytest.raises(ValueError):
            Gate.of("h", 1, 2)
        with pytest.raises(ValueError):
            Gate.of("ccx", 1, 2)

    def test_qubits_one_based_and_distinct(self):
        """Qubits start at 1 and may not repeat."""
        with pytest.raises(ValueError):
            Gate.of("x", 0)
        with pytest.raises(ValueError):
            Gate.of("cx", 2, 2)
        with pytest.raises(ValueError):
            Gate.controlled(1, Gate.of("h", 1))

    def test_control_depth_limit(self):
        """At most two controls in total."""
        assert Gate.controlled(1, Gate.of("cx", 2, 3)).control_depth == 2
        with pytest.raises(ValueError):
            Gate.controlled(1, Gate.of("ccx", 2, 3, 4))

    def test_names_and_qubits(self):
        """Nested controls render as ctrl- prefixes, controls first."""
        gate = Gate.controlled(3, Gate.controlled(2, Gate.of("h", 1)))
        assert gate.name == "ctrl-ctrl-h"
        assert gate.all_qubits == (3, 2, 1)
        assert gate.to_text() == "ctrl-ctrl-h 3 2 1"

    def test_dagger(self):
        """S and T swap with their adjoints, inside controls too."""
        assert Gate.of("s", 1).dagger() == Gate.of("sdg", 1)
        assert Gate.of("tdg", 2).dagger() == Gate.of("t", 2)
        assert Gate.of("h", 1).dagger() == Gate.of("h", 1)
        controlled = Gate.controlled(2, Gate.of("t", 1)).dagger()
        assert controlled.inner == Gate.of("tdg", 1)

    def test_clifford_flag(self):
        """T and controlled gates are not Clifford."""
        assert Gate.of("cz", 1, 2).is_clifford
        assert not Gate.of("t", 1).is_clifford
        assert not Gate.of("ccx", 1, 2, 3).is_clifford
        assert not Gate.controlled(2, Gate.of("h", 1)).is_clifford


class TestInstructionAndCircuit:
    """Test selectors and circuit-level validation."""

    def test_select(self):
        """Selectors pick gates by input bit."""
        h, z = Gate.of("h", 1), Gate.of("z", 1)
        assert Instruction.always([h]).select("0") == (h,)
        assert Instruction.if_bit(1, [h]).select("0") == ()
        assert Instruction.if_bit(1, [h]).select("1") == (h,)
        assert Instruction.pair(2, [h], [z]).select("10") == (h,)
        assert Instruction.pair(2, [h], [z]).select("01") == (z,)

    def test_selector_shape(self):
        """ALWAYS has no bit; pair has no plain gates."""
        with pytest.raises(ValueError):
            Instruction(bit=1, gates=(Gate.of("h", 1),))
        with pytest.raises(ValueError):
            Instruction(selector="pair", bit=1, gates=(Gate.of("h", 1),))
        with pytest.raises(ValueError):
            Instruction(selector="if", bit=0)

    def test_circuit_ranges(self):
        """Gates must fit the width and bits the input arity."""
        with pytest.raises(ValueError):
            Circuit.from_gates(1, [Gate.of("cx", 1, 2)])
        with pytest.raises(ValueError):
            Circuit(width=1, input_len=1, instructions=(Instruction.if_bit(2, []),))

    def test_gate_count(self, mixed_selector_text):
        """gate_count includes both pair branches."""
        circuit = parse(mixed_selector_text)
        assert circuit.gate_count == 6


class TestResolve:
    """Test input checks and resolution."""

    def test_check_input(self):
        """Input must have the right length and only 0/1."""
        circuit = gates_circuit(1, input_len=2)
        assert check_input(circuit, "01") == "01"
        with pytest.raises(InputLengthError):
            check_input(circuit, "0")
        with pytest.raises(InputLengthError):
            check_input(circuit, "0a")

    def test_resolve_and_gadget(self, and_text):
        """The AND gadget resolves to H Z H only on input 11."""
        circuit = parse(and_text)
        assert resolve(circuit, "00") == []
        assert resolve(circuit, "10") == [Gate.of("h", 1), Gate.of("h", 1)]
        assert resolve(circuit, "11") == [Gate.of("h", 1), Gate.of("z", 1), Gate.of("h", 1)]


class TestControl:
    """Test adding control qubits."""

    def test_canonical_forms(self):
        """X, Z and CX become CX, CZ and CCX; I stays put."""
        assert control_gate(Gate.of("x", 2), 1) == Gate.of("cx", 1, 2)
        assert control_gate(Gate.of("z", 2), 1) == Gate.of("cz", 1, 2)
        assert control_gate(Gate.of("cx", 2, 3), 1) == Gate.of("ccx", 1, 2, 3)
        assert control_gate(Gate.of("i", 2), 1) == Gate.of("i", 2)
        assert control_gate(Gate.of("h", 2), 1) == Gate.controlled(1, Gate.of("h", 2))

    def test_collision(self):
        """The control may not be a qubit of the gate."""
        with pytest.raises(ControlCollisionError):
            control_gate(Gate.of("h", 1), 1)

    def test_depth(self):
        """A third control is refused."""
        with pytest.raises(ControlDepthError):
            control_gate(Gate.of("ccx", 2, 3, 4), 1)
        with pytest.raises(ControlDepthError):
            control_gate(Gate.controlled(2, Gate.of("cz", 3, 4)), 1)

    def test_control_on_matches_block_matrix(self, rng):
        """control_on(U, 1) is |0><0| (x) I + |1><1| (x) U."""
        gates = random_unitary_gates(2, 8, rng)
        u = unitary_of(gates, 2)
        shifted = [g.relabel(lambda q: q + 1) for g in gates]
        controlled = unitary_of(control_on(shifted, 1), 3)
        expected = np.block([[np.eye(4), np.zeros((4, 4))], [np.zeros((4, 4)), u]])
        np.testing.assert_allclose(controlled, expected, atol=1e-12)


class TestInverseAndDual:
    """Test adjoint and CNOT-reversal transforms."""

    def test_inverse(self, mixed_selector_text):
        """inverse resolves to U† on every input."""
        circuit = parse(mixed_selector_text)
        inv = inverse(circuit)
        for x in all_inputs(2):
            np.testing.assert_allclose(
                circuit_unitary(inv, x), circuit_unitary(circuit, x).conj().T, atol=1e-12
            )

    def test_reverse_cnot_dual(self):
        """Every CNOT swaps control and target; selectors are kept."""
        circuit = Circuit(width=3, input_len=1, instructions=(
            Instruction.always([Gate.of("cx", 1, 2)]),
            Instruction.pair(1, [Gate.of("cx", 3, 1)], []),
        ))
        dual = reverse_cnot_dual(circuit)
        assert dual.instructions[0].gates == (Gate.of("cx", 2, 1),)
        assert dual.instructions[1].branch_zero == (Gate.of("cx", 1, 3),)
        assert dual.instructions[1].bit == 1

    def test_dual_is_hadamard_conjugate(self):
        """The reversed circuit equals H^w U H^w."""
        circuit = gates_circuit(2, Gate.of("cx", 1, 2), Gate.of("cx", 2, 1))
        h2 = np.kron(*[np.array([[1, 1], [1, -1]]) / np.sqrt(2)] * 2)
        np.testing.assert_allclose(
            circuit_unitary(reverse_cnot_dual(circuit)), h2 @ circuit_unitary(circuit) @ h2, atol=1e-12
        )

    def test_dual_rejects_other_gates(self):
        """Only CNOT-only circuits have a dual."""
        with pytest.raises(NonCnotGateError):
            reverse_cnot_dual(gates_circuit(2, Gate.of("h", 1)))


class TestComposition:
    """Test square, concat and relabelling."""

    def test_square_for_trace(self, rng):
        """Resolved product is U Z1 U† Z1."""
        circuit = gates_circuit(2, *random_unitary_gates(2, 10, rng))
        u = circuit_unitary(circuit)
        z1 = np.kron(np.diag([1, -1]), np.eye(2))
        np.testing.assert_allclose(
            circuit_unitary(square_for_trace(circuit)), u @ z1 @ u.conj().T @ z1, atol=1e-12
        )

    def test_concat(self):
        """a then b; widths and arities must agree."""
        a = gates_circuit(2, Gate.of("h", 1))
        b = gates_circuit(2, Gate.of("cx", 1, 2))
        assert resolve(concat(a, b)) == [Gate.of("h", 1), Gate.of("cx", 1, 2)]
        with pytest.raises(WidthMismatchError):
            concat(a, gates_circuit(3))
        with pytest.raises(InputLengthError):
            concat(a, gates_circuit(2, input_len=1))

    def test_shift(self):
        """shift moves every qubit and grows the register."""
        moved = shift(gates_circuit(2, Gate.of("cx", 1, 2)), 1)
        assert moved.width == 3
        assert resolve(moved) == [Gate.of("cx", 2, 3)]

    def test_remap_with_bits(self):
        """remap relabels qubits and selector bits."""
        circuit = Circuit(width=2, input_len=1, instructions=(
            Instruction.if_bit(1, [Gate.of("cx", 1, 2)]),
        ))
        moved = remap(circuit, {1: 4, 2: 1}, width=4, input_len=3, bit_mapping={1: 3})
        assert moved.input_len == 3
        assert moved.instructions[0].bit == 3
        assert resolve(moved, "001") == [Gate.of("cx", 4, 1)]

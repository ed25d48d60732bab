"""Unit tests for trace estimation, boolean gadgets, the entangled example,
parity-L compilation, the two-partition reduction and Markov mixing."""

import numpy as np
import pytest
from pydantic import ValidationError

from src.core.circuit_parser import parse, random_circuit
from src.core.engines import EngineKind, beta21_terms, beta_cd, dense_run, expectation, run_beta
from src.core.gadgets import (
    and_gadget,
    derived_input,
    entangled_example,
    estimate_trace,
    imag_measurement_circuit,
    imag_trace_circuit,
    markov_mixing_circuit,
    mixing_bound,
    mixing_distribution,
    not_gadget,
    parity_bit,
    parity_l_compile,
    reduction_compose,
    scaled_trace,
    simulate_cnot_classical,
    trace_estimation_circuit,
    witness_check,
    xor_gadget,
)
from src.core.pauli_algebra import to_dense
from src.core.statistics import hoeffding_half_width
from src.models.circuit import Gate, Instruction, SelectorKind
from src.models.errors import (
    ControlDepthError,
    InputLengthError,
    NonCnotGateError,
    QubitRangeError,
    WidthMismatchError,
)
from tests.test_fixtures import (
    all_inputs,
    gates_circuit,
    identity_on_bit_circuit,
    random_unitary_gates,
    xor_parity_circuit,
)


def _dense_beta(circuit, x=""):
    return run_beta(circuit, x, EngineKind.DENSE)


class TestTraceEstimationCircuit:
    """Test the Hadamard-test construction."""

    def test_layout(self):
        """One extra qubit; u moves up and is controlled on qubit 1."""
        circuit = trace_estimation_circuit(gates_circuit(2, Gate.of("h", 1), Gate.of("x", 2)))
        assert circuit.width == 3
        assert circuit.instructions[0].gates == (Gate.of("h", 1),)
        assert circuit.instructions[1].gates == (
            Gate.controlled(1, Gate.of("h", 2)), Gate.of("cx", 1, 3),
        )
        assert circuit.instructions[-1].gates == (Gate.of("h", 1),)

    @pytest.mark.parametrize("gates, expected", [
        ((), 1.0),
        ((Gate.of("z", 1),), 0.0),
        ((Gate.of("t", 1),), (1 + np.cos(np.pi / 4)) / 2),
        ((Gate.of("s", 1),), 0.5),
    ])
    def test_known_traces(self, gates, expected):
        """beta is Re Tr[U]/2^w for single-qubit examples."""
        assert _dense_beta(trace_estimation_circuit(gates_circuit(1, *gates))) == pytest.approx(expected)

    def test_random_unitaries(self, rng):
        """beta matches the dense scaled trace on random circuits."""
        for _ in range(5):
            u = gates_circuit(2, *random_unitary_gates(2, 12, rng))
            assert _dense_beta(trace_estimation_circuit(u)) == pytest.approx(scaled_trace(u).real, abs=1e-10)

    def test_selectors_are_kept(self, and_text):
        """Classical selectors survive, so the input still picks U."""
        u = parse(and_text)
        circuit = trace_estimation_circuit(u)
        assert circuit.input_len == 2
        assert circuit.instructions[1].selector == SelectorKind.PAIR
        for x in all_inputs(2):
            assert _dense_beta(circuit, x) == pytest.approx(scaled_trace(u, x).real, abs=1e-10)

    def test_imaginary_part(self, rng):
        """<Y1> after the test, and beta after S†H, are -Im Tr[U]/2^w."""
        u = gates_circuit(1, Gate.of("s", 1))
        circuit, observable = imag_trace_circuit(u)
        assert expectation(dense_run(circuit), observable).real == pytest.approx(-0.5)
        assert _dense_beta(imag_measurement_circuit(u)) == pytest.approx(-0.5)
        for _ in range(3):
            u = gates_circuit(2, *random_unitary_gates(2, 10, rng))
            assert _dense_beta(imag_measurement_circuit(u)) == pytest.approx(-scaled_trace(u).imag, abs=1e-10)

    def test_doubly_controlled_rejected(self):
        """A Toffoli in u cannot take another control."""
        with pytest.raises(ControlDepthError):
            trace_estimation_circuit(gates_circuit(3, Gate.of("ccx", 1, 2, 3)))


class TestEstimateTrace:
    """Test the sampled estimator."""

    def test_identity(self):
        """The identity gives re_hat 1 exactly."""
        estimate = estimate_trace(gates_circuit(2), shots=100, seed=1)
        assert estimate.re_hat == 1.0
        assert estimate.exact == pytest.approx(1.0)
        assert estimate.half_width == pytest.approx(hoeffding_half_width(100, 0.99))
        assert estimate.im_hat is None

    def test_real_and_imaginary(self):
        """Both parts land within the half-width of the exact values."""
        u = gates_circuit(1, Gate.of("t", 1))
        estimate = estimate_trace(u, shots=4000, seed=7, confidence=0.999, imaginary=True)
        exact = scaled_trace(u)
        assert estimate.exact == pytest.approx(exact.real)
        assert estimate.exact_imag == pytest.approx(exact.imag)
        assert estimate.covers_exact()
        assert abs(estimate.im_hat - exact.imag) <= estimate.half_width

    def test_exact_imag_is_y1_expectation(self, and_text, rng):
        """exact_imag is minus the Y1 expectation on the Hadamard-test state."""
        cases = [(parse(and_text), "11"), (gates_circuit(2, *random_unitary_gates(2, 10, rng)), "")]
        for u, x in cases:
            circuit, observable = imag_trace_circuit(u)
            estimate = estimate_trace(u, shots=200, seed=5, x=x, imaginary=True)
            expected = -expectation(dense_run(circuit, x), observable).real
            assert estimate.exact_imag == pytest.approx(expected, abs=1e-12)
            assert estimate.exact_imag == pytest.approx(scaled_trace(u, x).imag, abs=1e-10)

    def test_seeded(self):
        """The real estimate depends on the seed only, not on the imaginary flag."""
        u = gates_circuit(1, Gate.of("h", 1))
        first = estimate_trace(u, shots=500, seed=3)
        again = estimate_trace(u, shots=500, seed=3, imaginary=True, partitions=1)
        assert first.re_hat == again.re_hat

    def test_no_exact_above_dense_cap(self, monkeypatch):
        """Without a dense oracle the exact fields stay empty."""
        monkeypatch.setenv("DQC1_DENSE_CAP", "2")
        estimate = estimate_trace(gates_circuit(2, Gate.of("s", 1)), shots=50, seed=0, imaginary=True)
        assert estimate.exact is None and estimate.exact_imag is None


class TestBooleanGadgets:
    """Test AND, XOR and NOT truth tables."""

    @pytest.mark.parametrize("width", [1, 3])
    def test_truth_tables(self, width):
        """beta = (-1)^f(x) for each gadget."""
        for x in all_inputs(2):
            a, b = int(x[0]), int(x[1])
            assert _dense_beta(and_gadget(width), x) == pytest.approx((-1) ** (a & b))
            assert _dense_beta(xor_gadget(width), x) == pytest.approx((-1) ** (a ^ b))
        for x in all_inputs(1):
            assert _dense_beta(not_gadget(width), x) == pytest.approx((-1) ** (1 - int(x)))

    def test_input_arity(self):
        """Gadgets declare their input arity."""
        assert and_gadget().input_len == 2
        assert not_gadget().input_len == 1


class TestEntangledExample:
    """Test the entangled example and the witness."""

    @pytest.mark.parametrize("width", [2, 3])
    def test_state(self, width):
        """The dense state equals the closed form."""
        circuit, expected = entangled_example(width)
        np.testing.assert_allclose(dense_run(circuit).matrix, to_dense(expected), atol=1e-12)

    def test_witness_flags_example(self):
        """v1 vanishes and v2 is 1."""
        circuit, _ = entangled_example()
        report = witness_check(dense_run(circuit))
        assert abs(report.v1) == pytest.approx(0.0, abs=1e-12)
        assert report.v2 == pytest.approx(1.0)
        assert report.entangled_flag

    def test_witness_ignores_product_state(self):
        """The start state has no coherence."""
        report = witness_check(dense_run(gates_circuit(2)))
        assert not report.entangled_flag
        assert abs(report.v2) == pytest.approx(0.0, abs=1e-12)

    def test_witness_report_is_frozen(self):
        """The witness report is an immutable model with complex values."""
        circuit, _ = entangled_example()
        report = witness_check(dense_run(circuit))
        assert isinstance(report.v2, complex)
        with pytest.raises(ValidationError):
            report.entangled_flag = False

    def test_needs_two_qubits(self):
        """Width 1 has no second qubit."""
        with pytest.raises(QubitRangeError):
            entangled_example(1)
        with pytest.raises(QubitRangeError):
            witness_check(dense_run(gates_circuit(1)))


class TestParityL:
    """Test classical CNOT simulation and parity-L compilation."""

    def test_classical_simulation(self):
        """Bits follow the CNOTs from |10...0>."""
        assert simulate_cnot_classical(gates_circuit(3, Gate.of("cx", 1, 3))) == [1, 0, 1]
        assert simulate_cnot_classical(gates_circuit(2, Gate.of("cx", 2, 1)), initial=[0, 1]) == [1, 1]
        for x in all_inputs(1):
            assert parity_bit(identity_on_bit_circuit(), x) == int(x)
        for x in all_inputs(2):
            assert parity_bit(xor_parity_circuit(), x) == 1 - (int(x[0]) ^ int(x[1]))

    def test_classical_errors(self):
        """Only CNOTs, and a matching initial state."""
        with pytest.raises(NonCnotGateError):
            simulate_cnot_classical(gates_circuit(2, Gate.of("h", 1)))
        with pytest.raises(WidthMismatchError):
            simulate_cnot_classical(gates_circuit(2), initial=[1])

    def test_simple_circuits(self):
        """Empty and single-CNOT circuits keep qubit 1 at 1, so beta is -1."""
        assert _dense_beta(parity_l_compile(gates_circuit(2))) == pytest.approx(-1.0)
        assert _dense_beta(parity_l_compile(gates_circuit(2, Gate.of("cx", 1, 2)))) == pytest.approx(-1.0)

    @pytest.mark.parametrize("factory, n", [(identity_on_bit_circuit, 1), (xor_parity_circuit, 2)])
    def test_beta_is_parity_sign(self, factory, n):
        """beta = (-1)^parity_bit on every input."""
        circuit = factory()
        compiled = parity_l_compile(circuit)
        for x in all_inputs(n):
            assert _dense_beta(compiled, x) == pytest.approx((-1) ** parity_bit(circuit, x))

    def test_random_cnot_circuits(self):
        """Random CNOT-only circuits with selectors compile correctly."""
        for seed in range(5):
            circuit = random_circuit(3, 2, 12, "cnot-only", seed=seed)
            compiled = parity_l_compile(circuit)
            for x in all_inputs(2):
                assert run_beta(compiled, x) == pytest.approx((-1) ** parity_bit(circuit, x))

    def test_rejects_other_gates(self):
        """Only CNOT circuits compile."""
        with pytest.raises(NonCnotGateError):
            parity_l_compile(gates_circuit(2, Gate.of("x", 1)))


class TestReduction:
    """Test the two-partition reduction."""

    def test_derived_input(self):
        """One parity bit per derived circuit."""
        assert derived_input([identity_on_bit_circuit(), identity_on_bit_circuit()], "1") == "11"
        assert derived_input([xor_parity_circuit()], "10") == "0"
        assert derived_input([], "01") == ""

    def test_and_of_copied_bit(self):
        """AND on (x1, x1) is x1, and beta_{2,1} on x matches main on R(x)."""
        r_circuits = [identity_on_bit_circuit(), identity_on_bit_circuit()]
        main = and_gadget()
        composed = reduction_compose(r_circuits, main)
        assert composed.input_len == 1
        assert composed.width == main.width + 2
        for x in all_inputs(1):
            expected = _dense_beta(main, derived_input(r_circuits, x))
            assert beta_cd(composed, x, 2, 1) == pytest.approx(expected, abs=1e-10)
            assert sum(beta21_terms(composed, x)) == pytest.approx(expected, abs=1e-10)

    def test_not_of_parity(self):
        """NOT applied to NOT(x1 XOR x2) gives the XOR sign."""
        r_circuits = [xor_parity_circuit()]
        composed = reduction_compose(r_circuits, not_gadget(2))
        for x in all_inputs(2):
            assert beta_cd(composed, x, 2, 1) == pytest.approx((-1) ** (int(x[0]) ^ int(x[1])), abs=1e-10)

    def test_if_selector_main(self):
        """if-selected main gates are applied only on derived bit 1."""
        main = gates_circuit(2, Gate.of("h", 1), input_len=1)
        main = main.model_copy(update={"instructions": main.instructions + (
            Instruction.if_bit(1, [Gate.controlled(2, Gate.of("t", 1)), Gate.of("s", 2)]),
        )})
        r_circuits = [identity_on_bit_circuit()]
        composed = reduction_compose(r_circuits, main)
        for x in all_inputs(1):
            assert beta_cd(composed, x, 2, 1) == pytest.approx(_dense_beta(main, x), abs=1e-10)

    def test_no_derived_bits(self):
        """With no derived bits main runs unchanged over the raw input."""
        main = gates_circuit(2, Gate.of("h", 1), Gate.of("t", 1), Gate.of("h", 1))
        composed = reduction_compose([], main, raw_input_len=2)
        assert composed.input_len == 2
        assert composed.width == 3
        assert beta_cd(composed, "01", 2, 1) == pytest.approx(_dense_beta(main), abs=1e-10)

    def test_arity_errors(self):
        """Derived bits must match main's arity and share one raw arity."""
        with pytest.raises(InputLengthError):
            reduction_compose([identity_on_bit_circuit()], and_gadget())
        with pytest.raises(InputLengthError):
            reduction_compose([identity_on_bit_circuit(), xor_parity_circuit()], and_gadget())
        with pytest.raises(InputLengthError):
            reduction_compose([identity_on_bit_circuit()], not_gadget(), raw_input_len=3)

    def test_non_cnot_derived_circuit(self):
        """Derived-bit circuits must be CNOT-only."""
        bad = gates_circuit(2, Gate.of("h", 1), input_len=1)
        with pytest.raises(NonCnotGateError):
            reduction_compose([bad], not_gadget())


class TestMarkovMixing:
    """Test the mixing prefix and its exact distribution."""

    def test_bound(self):
        """1/(3·4^(s-1))."""
        assert mixing_bound(1) == pytest.approx(1 / 3)
        assert mixing_bound(2) == pytest.approx(1 / 12)
        assert mixing_bound(3) == pytest.approx(1 / 48)

    def test_distribution(self):
        """Weights after one and two rounds."""
        assert mixing_distribution(1) == pytest.approx((0.5, 0.25, 0.25))
        assert mixing_distribution(2) == pytest.approx((3 / 8, 5 / 16, 5 / 16))
        assert sum(mixing_distribution(4)) == pytest.approx(1.0)

    def test_layout(self):
        """2s Toffolis on fresh ancillas, then u."""
        u = gates_circuit(2, Gate.of("h", 1))
        circuit = markov_mixing_circuit(u, 1)
        assert circuit.width == 4
        assert circuit.instructions[0].gates == (Gate.of("ccx", 2, 3, 1), Gate.of("ccx", 1, 4, 2))
        assert circuit.instructions[-1].gates == (Gate.of("h", 1),)

    @pytest.mark.parametrize("s", [1, 2])
    def test_beta_is_weighted_terms(self, s, rng):
        """beta after mixing is the distribution-weighted beta_{2,1} split, within the bound."""
        u = gates_circuit(2, *random_unitary_gates(2, 12, rng))
        beta = _dense_beta(markov_mixing_circuit(u, s))
        terms = beta21_terms(u)
        assert beta == pytest.approx(float(np.dot(mixing_distribution(s), terms)), abs=1e-10)
        assert abs(beta - sum(terms) / 3) <= mixing_bound(s) + 1e-12

    def test_errors(self):
        """s must be positive and u needs two qubits."""
        with pytest.raises(ValueError):
            markov_mixing_circuit(gates_circuit(2), 0)
        with pytest.raises(QubitRangeError):
            markov_mixing_circuit(gates_circuit(1), 1)

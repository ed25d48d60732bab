"""Circuit constructions for the one-clean-qubit model and their verifiers.

Trace estimation (Hadamard test), boolean gadgets, the entangled two-qubit
example and its witness, CNOT-circuit compilation for parity languages, the
two-partition reduction and the Markov mixing circuit.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.config.logging_config import get_logger
from src.config.settings import get_settings
from src.core.circuit_transforms import (
    concat,
    control_on,
    inverse,
    remap,
    resolve,
    reverse_cnot_dual,
    shift,
)
from src.core.engines import (
    EngineKind,
    circuit_unitary,
    dense_run,
    expectation,
    run_beta,
    sample_beta,
)
from src.core.statistics import hoeffding_half_width
from src.models.circuit import Circuit, Gate, GateKind, Instruction, SelectorKind
from src.models.errors import (
    InputLengthError,
    NonCnotGateError,
    QubitRangeError,
    WidthMismatchError,
)
from src.models.pauli import PauliSum
from src.models.reports import TraceEstimate, WitnessReport
from src.models.states import DenseState

logger = get_logger(__name__)


def _pad(label: str, width: int) -> str:
    return label + "I" * (width - len(label))


# ---------------------------------------------------------------------------
# Trace estimation
# ---------------------------------------------------------------------------

def trace_estimation_circuit(u: Circuit) -> Circuit:
    """Hadamard test H1·Lambda_1(U)·H1 on a fresh clean qubit.

    The result has width w+1; u moves to qubits 2..w+1 and every gate of every
    branch is controlled on qubit 1. Its beta is Re Tr[U]/2^w.

    Raises:
        ControlDepthError: If u already contains doubly controlled gates
    """
    hadamard = Instruction.always([Gate.of(GateKind.H, 1)])
    shifted = shift(u, 1)
    controlled = tuple(
        instruction.map_gate_lists(lambda gates: control_on(gates, 1))
        for instruction in shifted.instructions
    )
    return Circuit(
        width=u.width + 1,
        input_len=u.input_len,
        instructions=(hadamard,) + controlled + (hadamard,),
    )


def imag_trace_circuit(u: Circuit) -> Tuple[Circuit, PauliSum]:
    """Hadamard test plus the observable whose expectation is -Im Tr[U]/2^w.

    Returns:
        (circuit, Y1 observable on the width-(w+1) register)
    """
    circuit = trace_estimation_circuit(u)
    return circuit, PauliSum.from_label(_pad("Y", circuit.width))


def _measure_y1(circuit: Circuit) -> Circuit:
    basis_change = Circuit.from_gates(
        circuit.width,
        [Gate.of(GateKind.SDG, 1), Gate.of(GateKind.H, 1)],
        input_len=circuit.input_len,
    )
    return concat(circuit, basis_change)


def imag_measurement_circuit(u: Circuit) -> Circuit:
    """Hadamard test followed by S†1, H1, turning the Y1 expectation into beta."""
    circuit, _ = imag_trace_circuit(u)
    return _measure_y1(circuit)


def scaled_trace(u: Circuit, x: str = "", dense_cap: Optional[int] = None) -> complex:
    """Tr[U]/2^w of the resolved circuit, by dense evaluation."""
    unitary = circuit_unitary(u, x, dense_cap)
    return complex(np.trace(unitary)) / unitary.shape[0]


def estimate_trace(
    u: Circuit,
    shots: int,
    seed: int,
    confidence: Optional[float] = None,
    x: str = "",
    imaginary: bool = False,
    partitions: int = 1,
) -> TraceEstimate:
    """Sample the Hadamard test and estimate Re Tr[U]/2^w (and Im with ``imaginary``).

    Args:
        u: Circuit of the unitary
        shots: Shots per estimated part
        seed: Seed of the real-part shot stream; the imaginary part uses a
            child stream so the real estimate does not depend on ``imaginary``
        confidence: Confidence of the Hoeffding half-width (defaults to settings)
        x: Classical input of u
        imaginary: Also estimate the imaginary part
        partitions: Independent shot partitions per part

    Returns:
        TraceEstimate with exact values filled when the test circuit fits the dense cap
    """
    settings = get_settings()
    confidence = confidence if confidence is not None else settings.default_confidence
    circuit, y1 = imag_trace_circuit(u)
    fits_dense = circuit.width <= settings.dense_cap

    beta = run_beta(circuit, x, EngineKind.AUTO)
    re_counts = sample_beta(beta, shots, seed, partitions)
    fields = {
        "re_hat": re_counts.beta_hat,
        "shots": shots,
        "half_width": hoeffding_half_width(shots, confidence),
        "confidence": confidence,
        "exact": beta if fits_dense else None,
    }

    if imaginary:
        imag_beta = run_beta(_measure_y1(circuit), x, EngineKind.AUTO)
        child = np.random.SeedSequence(seed).spawn(1)[0]
        im_counts = sample_beta(imag_beta, shots, child, partitions)
        # the measured beta is <Y1> = -Im Tr[U]/2^w
        fields["im_hat"] = -im_counts.beta_hat
        if fits_dense:
            fields["exact_imag"] = -expectation(dense_run(circuit, x), y1).real

    logger.info(f"Trace estimate: re_hat={fields['re_hat']:.6f} over {shots} shots (seed {seed})")
    return TraceEstimate(**fields)


# ---------------------------------------------------------------------------
# Boolean gadgets
# ---------------------------------------------------------------------------

def and_gadget(width: int = 1) -> Circuit:
    """beta = (-1)^(x1 AND x2): H1 on x1, Z1 on x2, H1 on x1."""
    h, z = Gate.of(GateKind.H, 1), Gate.of(GateKind.Z, 1)
    return Circuit(width=width, input_len=2, instructions=(
        Instruction.pair(1, [], [h]),
        Instruction.pair(2, [], [z]),
        Instruction.pair(1, [], [h]),
    ))


def xor_gadget(width: int = 1) -> Circuit:
    """beta = (-1)^(x1 XOR x2): one X1 per set bit."""
    x = Gate.of(GateKind.X, 1)
    return Circuit(width=width, input_len=2, instructions=(
        Instruction.pair(1, [], [x]),
        Instruction.pair(2, [], [x]),
    ))


def not_gadget(width: int = 1) -> Circuit:
    """beta = (-1)^(NOT x1): X1 when the bit is 0."""
    return Circuit(width=width, input_len=1, instructions=(
        Instruction.pair(1, [Gate.of(GateKind.X, 1)], []),
    ))


# ---------------------------------------------------------------------------
# Entanglement example
# ---------------------------------------------------------------------------

def entangled_example(width: int = 2) -> Tuple[Circuit, PauliSum]:
    """Circuit preparing an entangled one-clean-qubit state, and that state.

    Temporal order: Hadamard on qubit 1 controlled on qubit 2 being 0
    (X2 · Lambda_2(H1) · X2), then CX(1, 2). The resulting state is
    (2 + X1X2 - Y1Y2 + Z1 - Z2) / 2^(w+1).

    Raises:
        QubitRangeError: If width < 2
    """
    if width < 2:
        raise QubitRangeError(f"the entangled example needs two qubits, got width {width}")
    x2 = Gate.of(GateKind.X, 2)
    gates = [x2, Gate.controlled(2, Gate.of(GateKind.H, 1)), x2, Gate.of(GateKind.CX, 1, 2)]
    scale = 1.0 / (1 << (width + 1))
    expected = PauliSum.from_labels({
        _pad("", width): 2 * scale,
        _pad("XX", width): scale,
        _pad("YY", width): -scale,
        _pad("Z", width): scale,
        _pad("IZ", width): -scale,
    })
    return Circuit.from_gates(width, gates), expected


def witness_check(state: DenseState) -> WitnessReport:
    """Evaluate v1 = Tr[rho(1 - Z1)(1 + Z2)] and v2 = Tr[rho(X1 + iY1)(X2 + iY2)].

    The state is flagged entangled when v1 vanishes while v2 does not.
    """
    width = state.width
    if width < 2:
        raise QubitRangeError(f"the witness needs two qubits, got width {width}")
    settings = get_settings()
    first = PauliSum.from_labels({_pad("", width): 1, _pad("IZ", width): 1,
                                  _pad("Z", width): -1, _pad("ZZ", width): -1})
    second = PauliSum.from_labels({_pad("XX", width): 1, _pad("XY", width): 1j,
                                   _pad("YX", width): 1j, _pad("YY", width): -1})
    v1 = expectation(state, first)
    v2 = expectation(state, second)
    entangled = abs(v1) <= settings.witness_zero_tolerance and abs(v2) >= settings.witness_coherence_threshold
    return WitnessReport(v1=complex(v1), v2=complex(v2), entangled_flag=bool(entangled))


# ---------------------------------------------------------------------------
# Parity languages
# ---------------------------------------------------------------------------

def simulate_cnot_classical(c: Circuit, x: str = "", initial: Optional[Sequence[int]] = None) -> List[int]:
    """Bit-vector run of a CNOT-only circuit; entry q-1 is the final value of qubit q.

    Args:
        c: CNOT-only circuit
        x: Classical input
        initial: Starting basis state, default 1 on qubit 1 and 0 elsewhere

    Raises:
        NonCnotGateError: If a resolved gate is not a CNOT
    """
    bits = list(initial) if initial is not None else [1] + [0] * (c.width - 1)
    if len(bits) != c.width:
        raise WidthMismatchError(f"initial state has {len(bits)} bits, circuit width is {c.width}")
    for gate in resolve(c, x):
        if gate.kind != GateKind.CX:
            raise NonCnotGateError(f"expected a CNOT-only circuit, found '{gate}'")
        control, target = gate.qubits
        bits[target - 1] ^= bits[control - 1]
    return bits


def parity_bit(c: Circuit, x: str = "") -> int:
    """Final value of qubit 1 when the circuit runs on |10...0>."""
    return simulate_cnot_classical(c, x)[0]


def parity_l_compile(c: Circuit) -> Circuit:
    """Compile a CNOT-only circuit into one whose beta is (-1)^parity_bit(c, x).

    The result resolves to dual, X1, dual† in temporal order, where dual is c
    with every CNOT reversed; its product is dual†·X1·dual.

    Raises:
        NonCnotGateError: If c contains anything but CNOTs
    """
    dual = reverse_cnot_dual(c)
    flip = Circuit.from_gates(c.width, [Gate.of(GateKind.X, 1)], input_len=c.input_len)
    return concat(concat(dual, flip), inverse(dual))


# ---------------------------------------------------------------------------
# Two-partition reduction
# ---------------------------------------------------------------------------

def derived_input(r_circuits: Sequence[Circuit], x: str) -> str:
    """The derived bit-string R(x), one parity bit per CNOT circuit."""
    return "".join(str(parity_bit(r, x)) for r in r_circuits)


def reduction_compose(
    r_circuits: Sequence[Circuit],
    main: Circuit,
    raw_input_len: Optional[int] = None,
) -> Circuit:
    """Run ``main`` on the derived input R(x) inside one circuit over the raw input x.

    Register layout: qubit 1 is main's clean qubit, qubit 2 the clean qubit of
    the derived-bit partition, main qubits 2..w_m sit at 3..w_m+1 and derived
    qubits 2..w_r at w_m+2..w_m+w_r. Each classically selected main instruction
    on derived bit k becomes: compute R_k into qubit 2, apply the branch gates
    controlled on qubit 2 (branch zero conjugated by X2), uncompute R_k.
    The result's beta_{2,1} on x equals main's beta on R(x).

    Args:
        r_circuits: One CNOT-only circuit per derived bit, all over the raw input
        main: Circuit whose selectors read derived bits
        raw_input_len: Raw input arity when ``r_circuits`` is empty

    Raises:
        NonCnotGateError: If a derived-bit circuit has non-CNOT gates
        InputLengthError: If arities disagree
    """
    if main.input_len != len(r_circuits):
        raise InputLengthError(f"main reads {main.input_len} bit(s) but {len(r_circuits)} derived bit(s) given")
    raw_lengths = {r.input_len for r in r_circuits}
    if raw_input_len is not None:
        raw_lengths.add(raw_input_len)
    if len(raw_lengths) > 1:
        raise InputLengthError(f"derived-bit circuits disagree on the raw input arity: {sorted(raw_lengths)}")
    n_raw = raw_lengths.pop() if raw_lengths else 0

    main_width = main.width
    r_width = max([r.width for r in r_circuits], default=1)
    width = main_width + r_width

    def main_qubit(q: int) -> int:
        return 1 if q == 1 else q + 1

    def r_qubit(q: int) -> int:
        return 2 if q == 1 else main_width + q

    compiled = [
        remap(parity_l_compile(r), r_qubit, width, input_len=n_raw).instructions
        for r in r_circuits
    ]

    def moved(gates: Sequence[Gate]) -> List[Gate]:
        return [g.relabel(main_qubit) for g in gates]

    flip = Gate.of(GateKind.X, 2)
    instructions: List[Instruction] = []
    for instruction in main.instructions:
        if instruction.selector == SelectorKind.ALWAYS:
            instructions.append(Instruction.always(moved(instruction.gates)))
            continue
        compute = compiled[instruction.bit - 1]
        if instruction.selector == SelectorKind.IF_BIT:
            branch_one, branch_zero = instruction.gates, ()
        else:
            branch_one, branch_zero = instruction.branch_one, instruction.branch_zero
        body = control_on(moved(branch_one), 2)
        if branch_zero:
            body += [flip] + control_on(moved(branch_zero), 2) + [flip]
        instructions.extend(compute)
        instructions.append(Instruction.always(body))
        instructions.extend(compute)

    return Circuit(width=width, input_len=n_raw, instructions=tuple(instructions))


# ---------------------------------------------------------------------------
# Markov mixing
# ---------------------------------------------------------------------------

def markov_mixing_circuit(u: Circuit, s: int) -> Circuit:
    """Prefix u with 2s Toffolis that mix the pure Z1 over {Z1, Z2, Z1Z2}.

    Step k uses fresh ancilla w+k: odd steps flip qubit 1 controlled on
    qubits 2 and w+k, even steps flip qubit 2 controlled on 1 and w+k.
    Then u acts on qubits 1..w. Total width w + 2s.

    Raises:
        QubitRangeError: If u has fewer than two qubits
    """
    if s < 1:
        raise ValueError(f"s must be positive, got {s}")
    w = u.width
    if w < 2:
        raise QubitRangeError(f"the mixing circuit needs two qubits, got width {w}")
    width = w + 2 * s
    steps = [
        Gate.of(GateKind.CCX, 2, w + k, 1) if k % 2 else Gate.of(GateKind.CCX, 1, w + k, 2)
        for k in range(1, 2 * s + 1)
    ]
    prefix = Circuit.from_gates(width, steps, input_len=u.input_len)
    return concat(prefix, remap(u, lambda q: q, width))


def mixing_distribution(s: int) -> Tuple[float, float, float]:
    """Exact weights of (Z1, Z2, Z1Z2) in the state after the 2s mixing steps.

    Each Toffoli with a maximally mixed ancilla applies its CNOT with
    probability 1/2, averaging the two Pauli terms it exchanges.
    """
    p1, p2, p12 = 1.0, 0.0, 0.0
    for k in range(1, 2 * s + 1):
        if k % 2:
            p1 = p12 = (p1 + p12) / 2
        else:
            p2 = p12 = (p2 + p12) / 2
    return p1, p2, p12


def mixing_bound(s: int) -> float:
    """Allowed gap between the mixed beta and beta_{2,1}/3."""
    return 1.0 / (3.0 * 4.0 ** (s - 1))

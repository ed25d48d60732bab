"""Simulation engines for the one-clean-qubit model.

Two engines evolve the start state (1 + Z1)/2^w:

- the dense engine conjugates the full 2^w x 2^w density matrix, gate by gate;
- the Heisenberg engine tracks U·Z1·U† as a Pauli sum, exact for Clifford
  circuits and term-capped otherwise.

Both report beta, the coefficient of Z1, from which P(qubit 1 reads 0) = (1 + beta)/2.
"""

from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from src.config.logging_config import get_logger
from src.config.messages import STATUS_FALLBACK_DENSE
from src.config.settings import get_settings
from src.core.circuit_transforms import resolve
from src.core.gate_library import gate_matrix
from src.core.pauli_algebra import conjugate, pauli_expectation
from src.models.circuit import Circuit, Gate
from src.models.errors import (
    BetaRangeError,
    DenseCapError,
    GateArityError,
    NonCliffordError,
    QubitRangeError,
    TermBlowupError,
)
from src.models.pauli import PauliSum, qubit_bit
from src.models.states import (
    Decision,
    DecisionPolicy,
    DenseState,
    HeisenbergState,
    ShotCounts,
    StateDecomposition,
)

logger = get_logger(__name__)

BETA_RANGE_SLACK = 1e-10


class EngineKind(str, Enum):
    """Which engine computes beta."""
    DENSE = "dense"
    PAULI = "pauli"
    AUTO = "auto"


# ---------------------------------------------------------------------------
# Dense tensor plumbing
# ---------------------------------------------------------------------------

def _check_dense_width(width: int, dense_cap: Optional[int]) -> None:
    cap = dense_cap if dense_cap is not None else get_settings().dense_cap
    if width > cap:
        raise DenseCapError(f"width {width} exceeds dense cap {cap}")


def _apply_on_axes(tensor: np.ndarray, matrix: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """Contract a 2^k x 2^k matrix into the k given binary axes of a tensor."""
    k = len(axes)
    local = matrix.reshape([2] * (2 * k))
    result = np.tensordot(local, tensor, axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(result, list(range(k)), list(axes))


def _conjugate_matrix(matrix: np.ndarray, gates: Sequence[Gate], width: int) -> np.ndarray:
    """G_t ... G_1 · M · G_1† ... G_t† for a 2^w x 2^w matrix M."""
    tensor = matrix.reshape([2] * (2 * width))
    for gate in gates:
        if max(gate.all_qubits) > width:
            raise QubitRangeError(f"gate '{gate}' does not fit width {width}")
        g = gate_matrix(gate)
        rows = [q - 1 for q in gate.all_qubits]
        columns = [width + q - 1 for q in gate.all_qubits]
        tensor = _apply_on_axes(tensor, g, rows)
        tensor = _apply_on_axes(tensor, g.conj(), columns)
    dim = 1 << width
    return tensor.reshape(dim, dim)


def _start_matrix(width: int, c_pure: int = 1) -> np.ndarray:
    """|0^c><0^c| tensor 1/2^(w-c): the first c qubits pure, the rest maximally mixed."""
    dim = 1 << width
    diagonal = np.zeros(dim)
    diagonal[: dim >> c_pure] = 1.0 / (1 << (width - c_pure))
    return np.diag(diagonal).astype(complex)


def _z_one(width: int) -> PauliSum:
    return PauliSum(width, {(0, qubit_bit(width, 1)): 1.0})


def _z1_signs(width: int) -> np.ndarray:
    dim = 1 << width
    signs = np.ones(dim)
    signs[dim >> 1:] = -1.0
    return signs


def unitary_of(gates: Sequence[Gate], width: int, dense_cap: Optional[int] = None) -> np.ndarray:
    """Dense unitary G_t ... G_1 of a gate list (first gate acts first)."""
    _check_dense_width(width, dense_cap)
    dim = 1 << width
    tensor = np.eye(dim, dtype=complex).reshape([2] * width + [dim])
    for gate in gates:
        if max(gate.all_qubits) > width:
            raise QubitRangeError(f"gate '{gate}' does not fit width {width}")
        tensor = _apply_on_axes(tensor, gate_matrix(gate), [q - 1 for q in gate.all_qubits])
    return tensor.reshape(dim, dim)


def circuit_unitary(c: Circuit, x: str = "", dense_cap: Optional[int] = None) -> np.ndarray:
    """Dense unitary of a circuit resolved on input x."""
    return unitary_of(resolve(c, x), c.width, dense_cap)


# ---------------------------------------------------------------------------
# Engines
# ---------------------------------------------------------------------------

def dense_run(
    c: Circuit,
    x: str = "",
    dense_cap: Optional[int] = None,
    c_pure: int = 1,
) -> DenseState:
    """Evolve the start state through the resolved circuit with dense matrices.

    Args:
        c: Circuit to run
        x: Classical input bit-string
        dense_cap: Width cap (defaults to settings)
        c_pure: Number of leading pure qubits in the start state

    Returns:
        DenseState U·rho_start·U†

    Raises:
        DenseCapError: If the width exceeds the cap
        InputLengthError: If x does not match the circuit's input arity
    """
    _check_dense_width(c.width, dense_cap)
    gates = resolve(c, x)
    matrix = _conjugate_matrix(_start_matrix(c.width, c_pure), gates, c.width)
    state = DenseState(c.width, matrix)
    settings = get_settings()
    state.check(settings.state_tolerance, settings.psd_check, settings.psd_tolerance)
    return state


def pauli_run(c: Circuit, x: str = "", term_cap: Optional[int] = None) -> HeisenbergState:
    """Track U·Z1·U† through the resolved circuit as a Pauli sum.

    Raises:
        TermBlowupError: If a non-Clifford expansion outgrows the term cap
        GateArityError: If a non-Clifford gate touches more than three qubits
    """
    observable = _z_one(c.width)
    for gate in resolve(c, x):
        observable = conjugate(observable, gate, term_cap)
    return HeisenbergState(c.width, observable)


def beta_of(state: Union[DenseState, HeisenbergState]) -> float:
    """Coefficient of Z1 in the evolved state: Tr[rho Z1], or read off the observable."""
    if isinstance(state, HeisenbergState):
        return float(state.observable.coefficient((0, qubit_bit(state.width, 1))).real)
    return float(np.real(np.diagonal(state.matrix) @ _z1_signs(state.width)))


def run_beta(
    c: Circuit,
    x: str = "",
    engine: EngineKind = EngineKind.AUTO,
    dense_cap: Optional[int] = None,
) -> float:
    """beta of a circuit on one input using the requested engine.

    AUTO tries the Heisenberg engine first and falls back to dense simulation
    when the circuit is outside what the Pauli path can carry.
    """
    engine = EngineKind(engine)
    if engine == EngineKind.DENSE:
        return beta_of(dense_run(c, x, dense_cap))
    try:
        return beta_of(pauli_run(c, x))
    except (NonCliffordError, TermBlowupError, GateArityError) as e:
        if engine == EngineKind.PAULI:
            raise
        logger.warning(STATUS_FALLBACK_DENSE.format(reason=e))
        return beta_of(dense_run(c, x, dense_cap))


def decompose(state: Union[DenseState, HeisenbergState]) -> StateDecomposition:
    """Split the evolved state into beta·Z1 and the traceless workspace part R.

    R = (U Z1 U† - beta Z1)/sqrt(1 - beta^2); left undefined when beta^2 is 1
    within ``beta_undefined_r_tolerance``.
    """
    beta = beta_of(state)
    if beta * beta > 1.0 - get_settings().beta_undefined_r_tolerance:
        return StateDecomposition(beta=beta, r_part=None, defined_r=False)
    scale = np.sqrt(1.0 - beta * beta)
    width = state.width
    if isinstance(state, HeisenbergState):
        z_one = _z_one(width)
        r_part = (state.observable - z_one * beta) / scale
    else:
        dim = 1 << width
        evolved_z = dim * state.matrix - np.eye(dim)
        r_part = (evolved_z - beta * np.diag(_z1_signs(width))) / scale
    return StateDecomposition(beta=beta, r_part=r_part, defined_r=True)


def probability_zero(beta: float) -> float:
    """P(qubit 1 reads 0) = (1 + beta)/2.

    Raises:
        BetaRangeError: If |beta| > 1 beyond rounding slack
    """
    if abs(beta) > 1.0 + BETA_RANGE_SLACK:
        raise BetaRangeError(f"beta {beta} outside [-1, 1]")
    return min(1.0, max(0.0, (1.0 + beta) / 2.0))


def _split_shots(shots: int, partitions: int) -> List[int]:
    base, extra = divmod(shots, partitions)
    return [base + (1 if i < extra else 0) for i in range(partitions)]


def sample_beta(
    beta: float,
    shots: int,
    seed: Union[int, np.random.SeedSequence],
    partitions: int = 1,
) -> ShotCounts:
    """Draw qubit-1 outcomes for a known beta.

    With ``partitions`` > 1 the shots are split across child streams spawned
    from ``seed`` and the counts are added; the result depends only on
    (seed, partitions).
    """
    if shots < 1:
        raise ValueError(f"shots must be positive, got {shots}")
    if partitions < 1:
        raise ValueError(f"partitions must be positive, got {partitions}")
    p_zero = probability_zero(beta)
    sequence = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    if partitions == 1:
        zeros = int(np.random.default_rng(sequence).binomial(shots, p_zero))
    else:
        children = sequence.spawn(partitions)
        zeros = sum(
            int(np.random.default_rng(child).binomial(n, p_zero))
            for child, n in zip(children, _split_shots(shots, partitions))
            if n > 0
        )
    return ShotCounts(zeros=zeros, ones=shots - zeros)


def sample(
    c: Circuit,
    x: str,
    shots: int,
    seed: int,
    partitions: int = 1,
    engine: EngineKind = EngineKind.AUTO,
) -> ShotCounts:
    """Measure qubit 1 ``shots`` times after running the circuit on input x."""
    return sample_beta(run_beta(c, x, engine), shots, seed, partitions)


def beta_cd(c: Circuit, x: str, c_pure: int, d_meas: int, dense_cap: Optional[int] = None) -> float:
    """Generalised output with c pure input qubits and a d-qubit all-zeros test.

    beta_{c,d} = 2·P(first d qubits all read 0) - 1.
    """
    for label, value in (("c_pure", c_pure), ("d_meas", d_meas)):
        if not 1 <= value <= c.width:
            raise QubitRangeError(f"{label}={value} outside 1..{c.width}")
    state = dense_run(c, x, dense_cap, c_pure=c_pure)
    dim = 1 << c.width
    p_all_zero = float(np.real(np.trace(state.matrix[: dim >> d_meas, : dim >> d_meas])))
    return 2.0 * p_all_zero - 1.0


def beta21_terms(c: Circuit, x: str = "", dense_cap: Optional[int] = None) -> Tuple[float, float, float]:
    """The three scaled traces Tr[U P U† Z1]/2^w for P in (Z1, Z2, Z1Z2).

    Their sum is beta_{2,1}.
    """
    _check_dense_width(c.width, dense_cap)
    if c.width < 2:
        raise QubitRangeError("beta_{2,1} needs at least two qubits")
    gates = resolve(c, x)
    width = c.width
    dim = 1 << width
    z1 = _z1_signs(width)
    z2 = np.tile(np.repeat([1.0, -1.0], dim >> 2), 2)
    terms = []
    for signs in (z1, z2, z1 * z2):
        evolved = _conjugate_matrix(np.diag(signs).astype(complex), gates, width)
        terms.append(float(np.real(np.diagonal(evolved) @ z1)) / dim)
    return terms[0], terms[1], terms[2]


def expectation(state: DenseState, observable: PauliSum) -> complex:
    """Tr[rho·O] for a Pauli-sum observable."""
    return pauli_expectation(state.matrix, observable)


# ---------------------------------------------------------------------------
# Decision rule
# ---------------------------------------------------------------------------

def decide(beta_hat: float, policy: DecisionPolicy) -> Decision:
    """Accept when beta_hat >= 1/q, reject when beta_hat <= -1/q, else Undetermined."""
    threshold = 1.0 / policy.q_bound
    if beta_hat >= threshold:
        return Decision.ACCEPT
    if beta_hat <= -threshold:
        return Decision.REJECT
    return Decision.UNDETERMINED


def promise_holds(beta: float, policy: DecisionPolicy) -> bool:
    """Whether |beta| >= 1/p; always true when no promise bound is set."""
    if policy.p_bound is None:
        return True
    return abs(beta) >= 1.0 / policy.p_bound

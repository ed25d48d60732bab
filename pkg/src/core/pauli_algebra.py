"""Arithmetic in the Pauli basis: products, traces, adjoints and gate conjugation.

Clifford gates map Pauli strings to Pauli strings and are handled with exact
integer phase bookkeeping. Every other gate acts on at most three qubits and
is pushed through its dense matrix, one local Pauli factor at a time.
"""

from functools import lru_cache
from typing import Dict, Optional, Tuple

import numpy as np

from src.config.logging_config import get_logger
from src.config.settings import get_settings
from src.core.gate_library import matrix_for_name
from src.models.circuit import Gate, GateKind
from src.models.errors import (
    DenseCapError,
    GateArityError,
    NonCliffordError,
    QubitRangeError,
    TermBlowupError,
    WidthMismatchError,
)
from src.models.pauli import PauliKey, PauliString, PauliSum, qubit_bit

logger = get_logger(__name__)

MAX_DENSE_GATE_ARITY = 3


# ---------------------------------------------------------------------------
# Bit helpers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=32)
def parity_table(width: int) -> np.ndarray:
    """parity_table(w)[v] is the parity of the bits of v, for v < 2^w."""
    values = np.arange(1 << width)
    parity = np.zeros(1 << width, dtype=np.int64)
    for shift in range(width):
        parity ^= (values >> shift) & 1
    parity.setflags(write=False)
    return parity


def _popcount(value: int) -> int:
    return bin(value).count("1")


def _prune(terms: Dict[PauliKey, complex], tolerance: Optional[float]) -> Dict[PauliKey, complex]:
    if tolerance is None:
        tolerance = get_settings().prune_tolerance
    return {key: c for key, c in terms.items() if abs(c) >= tolerance}


def _require_same_width(a, b) -> None:
    if a.width != b.width:
        raise WidthMismatchError(f"width {a.width} vs {b.width}")


def _check_qubits(gate: Gate, width: int) -> None:
    if max(gate.all_qubits) > width:
        raise QubitRangeError(f"gate '{gate}' does not fit width {width}")


# ---------------------------------------------------------------------------
# Products, adjoints, traces
# ---------------------------------------------------------------------------

def pauli_multiply(a: PauliString, b: PauliString) -> PauliString:
    """Canonical-form product a·b.

    Moving each Z of ``a`` past an X of ``b`` on the same qubit costs a sign,
    so the phase exponent grows by 2·|a.z & b.x|.

    Raises:
        WidthMismatchError: If the widths differ
    """
    _require_same_width(a, b)
    phase = a.phase + b.phase + 2 * _popcount(a.z_mask & b.x_mask)
    return PauliString(a.width, phase, a.x_mask ^ b.x_mask, a.z_mask ^ b.z_mask)


def string_adjoint(p: PauliString) -> PauliString:
    """(i^k X^x Z^z)† = i^-k Z^z X^x = (-1)^|x&z| i^-k X^x Z^z."""
    return PauliString(p.width, -p.phase + 2 * _popcount(p.x_mask & p.z_mask), p.x_mask, p.z_mask)


def _key_adjoint_sign(key: PauliKey) -> int:
    return -1 if _popcount(key[0] & key[1]) % 2 else 1


def adjoint(s: PauliSum) -> PauliSum:
    """Conjugate-transpose of a Pauli sum."""
    return PauliSum(s.width, {key: c.conjugate() * _key_adjoint_sign(key) for key, c in s.items()})


def is_hermitian(s: PauliSum, atol: float = 0.0) -> bool:
    """True when every coefficient matches its adjoint image within ``atol``."""
    return all(abs(c - c.conjugate() * _key_adjoint_sign(key)) <= atol for key, c in s.items())


def sum_multiply(a: PauliSum, b: PauliSum, prune_tolerance: Optional[float] = None) -> PauliSum:
    """Product of two Pauli sums, term by term."""
    _require_same_width(a, b)
    product: Dict[PauliKey, complex] = {}
    for (ax, az), ac in a.items():
        for (bx, bz), bc in b.items():
            key = (ax ^ bx, az ^ bz)
            sign = -1 if _popcount(az & bx) % 2 else 1
            product[key] = product.get(key, 0j) + sign * ac * bc
    return PauliSum(a.width, _prune(product, prune_tolerance))


def trace(s: PauliSum) -> complex:
    """Matrix trace: only the identity key contributes, with weight 2^w."""
    return (1 << s.width) * s.coefficient((0, 0))


# ---------------------------------------------------------------------------
# Clifford conjugation
# ---------------------------------------------------------------------------

def _string(width: int, phase: int = 0, xs=(), zs=()) -> PauliString:
    x_mask = 0
    z_mask = 0
    for q in xs:
        x_mask |= qubit_bit(width, q)
    for q in zs:
        z_mask |= qubit_bit(width, q)
    return PauliString(width, phase, x_mask, z_mask)


def _clifford_images(gate: Gate, width: int) -> Dict[int, Tuple[PauliString, PauliString]]:
    """Images of X_q and Z_q under g·(.)·g† for each qubit q the gate touches."""
    kind = gate.kind
    if kind in (GateKind.CX, GateKind.CZ, GateKind.SWAP):
        a, b = gate.qubits
        if kind == GateKind.CX:
            return {
                a: (_string(width, xs=(a, b)), _string(width, zs=(a,))),
                b: (_string(width, xs=(b,)), _string(width, zs=(a, b))),
            }
        if kind == GateKind.CZ:
            return {
                a: (_string(width, xs=(a,), zs=(b,)), _string(width, zs=(a,))),
                b: (_string(width, xs=(b,), zs=(a,)), _string(width, zs=(b,))),
            }
        return {
            a: (_string(width, xs=(b,)), _string(width, zs=(b,))),
            b: (_string(width, xs=(a,)), _string(width, zs=(a,))),
        }

    (q,) = gate.qubits
    x_image, z_image = {
        GateKind.I: ((0, (q,), ()), (0, (), (q,))),
        GateKind.H: ((0, (), (q,)), (0, (q,), ())),
        GateKind.X: ((0, (q,), ()), (2, (), (q,))),
        GateKind.Y: ((2, (q,), ()), (2, (), (q,))),
        GateKind.Z: ((2, (q,), ()), (0, (), (q,))),
        GateKind.S: ((1, (q,), (q,)), (0, (), (q,))),
        GateKind.SDG: ((3, (q,), (q,)), (0, (), (q,))),
    }[kind]
    return {q: (_string(width, *x_image), _string(width, *z_image))}


def conjugate_clifford(p: PauliString, gate: Gate) -> PauliString:
    """Exact g·p·g† for a Clifford gate.

    Raises:
        NonCliffordError: If the gate has no Pauli-to-Pauli rule
        QubitRangeError: If the gate does not fit the string's width
    """
    if not gate.is_clifford:
        raise NonCliffordError(f"gate '{gate}' is not Clifford")
    width = p.width
    _check_qubits(gate, width)
    images = _clifford_images(gate, width)

    touched = 0
    for q in images:
        touched |= qubit_bit(width, q)

    # Conjugation is multiplicative; factors on untouched qubits are fixed and
    # commute with the images, so they can be appended without a phase change.
    local = PauliString(width, p.phase, 0, 0)
    for q in sorted(images):
        bit = qubit_bit(width, q)
        if p.x_mask & bit:
            local = pauli_multiply(local, images[q][0])
        if p.z_mask & bit:
            local = pauli_multiply(local, images[q][1])
    rest = PauliString(width, 0, p.x_mask & ~touched, p.z_mask & ~touched)
    return pauli_multiply(local, rest)


# ---------------------------------------------------------------------------
# Dense bridge
# ---------------------------------------------------------------------------

def to_dense(s: PauliSum, dense_cap: Optional[int] = None) -> np.ndarray:
    """The 2^w x 2^w matrix of a Pauli sum.

    Raises:
        DenseCapError: If the width exceeds the dense cap
    """
    cap = dense_cap if dense_cap is not None else get_settings().dense_cap
    if s.width > cap:
        raise DenseCapError(f"width {s.width} exceeds dense cap {cap}")
    dim = 1 << s.width
    index = np.arange(dim)
    parity = parity_table(s.width)
    matrix = np.zeros((dim, dim), dtype=complex)
    for (x_mask, z_mask), coefficient in s.items():
        # X^x Z^z |b> = (-1)^{z.b} |b xor x>
        matrix[index ^ x_mask, index] += coefficient * (1 - 2 * parity[index & z_mask])
    return matrix


def from_dense(matrix: np.ndarray, prune_tolerance: Optional[float] = None) -> PauliSum:
    """Pauli decomposition of a 2^w x 2^w matrix: c_K = Tr[K† M] / 2^w."""
    dim = matrix.shape[0]
    width = dim.bit_length() - 1
    if matrix.shape != (dim, dim) or (1 << width) != dim or width < 1:
        raise ValueError(f"expected a 2^w x 2^w matrix, got shape {matrix.shape}")
    tolerance = prune_tolerance if prune_tolerance is not None else get_settings().prune_tolerance
    index = np.arange(dim)
    parity = parity_table(width)
    signs = 1 - 2 * parity[np.bitwise_and.outer(index, index)]
    terms: Dict[PauliKey, complex] = {}
    for x_mask in range(dim):
        column = matrix[index ^ x_mask, index]
        coefficients = signs @ column / dim
        for z_mask in np.flatnonzero(np.abs(coefficients) >= tolerance):
            terms[(x_mask, int(z_mask))] = complex(coefficients[z_mask])
    return PauliSum(width, terms)


@lru_cache(maxsize=256)
def _local_image(name: str, k: int, local_key: PauliKey) -> Tuple[Tuple[PauliKey, complex], ...]:
    """Decomposition of G·K·G† for a k-qubit gate matrix and local key K."""
    matrix = matrix_for_name(name)
    local = to_dense(PauliSum(k, {local_key: 1.0}), dense_cap=MAX_DENSE_GATE_ARITY)
    image = from_dense(matrix @ local @ matrix.conj().T)
    return tuple(image.items())


def conjugate_dense_gate(s: PauliSum, gate: Gate, term_cap: Optional[int] = None) -> PauliSum:
    """g·s·g† for any gate on at most three qubits, via its dense matrix.

    Raises:
        GateArityError: If the gate touches more than three qubits
        QubitRangeError: If the gate does not fit the sum's width
        TermBlowupError: If the result has more terms than ``term_cap``
    """
    qubits = gate.all_qubits
    k = len(qubits)
    if k > MAX_DENSE_GATE_ARITY:
        raise GateArityError(f"gate '{gate}' acts on {k} qubits; at most {MAX_DENSE_GATE_ARITY} supported")
    width = s.width
    _check_qubits(gate, width)
    cap = term_cap if term_cap is not None else get_settings().pauli_term_cap

    global_bits = [qubit_bit(width, q) for q in qubits]
    local_bits = [1 << (k - 1 - i) for i in range(k)]
    gate_mask = sum(global_bits)

    def to_local(mask: int) -> int:
        return sum(lb for gb, lb in zip(global_bits, local_bits) if mask & gb)

    def to_global(mask: int) -> int:
        return sum(gb for gb, lb in zip(global_bits, local_bits) if mask & lb)

    result: Dict[PauliKey, complex] = {}
    for (x_mask, z_mask), coefficient in s.items():
        rest_x, rest_z = x_mask & ~gate_mask, z_mask & ~gate_mask
        for (lx, lz), local_coefficient in _local_image(gate.name, k, (to_local(x_mask), to_local(z_mask))):
            key = (rest_x | to_global(lx), rest_z | to_global(lz))
            result[key] = result.get(key, 0j) + coefficient * local_coefficient

    pruned = _prune(result, None)
    if len(pruned) > cap:
        logger.debug(f"Pauli expansion hit the term cap at gate '{gate}' ({len(pruned)} > {cap})")
        raise TermBlowupError(f"{len(pruned)} terms after '{gate}' exceed cap {cap}")
    return PauliSum(width, pruned)


def conjugate(s: PauliSum, gate: Gate, term_cap: Optional[int] = None) -> PauliSum:
    """g·s·g†, taking the exact Clifford path whenever the gate allows it."""
    if not gate.is_clifford:
        return conjugate_dense_gate(s, gate, term_cap)
    result: Dict[PauliKey, complex] = {}
    for (x_mask, z_mask), coefficient in s.items():
        image = conjugate_clifford(PauliString(s.width, 0, x_mask, z_mask), gate)
        result[image.key] = result.get(image.key, 0j) + coefficient * image.phase_value
    return PauliSum(s.width, result)


def pauli_expectation(matrix: np.ndarray, s: PauliSum) -> complex:
    """Tr[rho·S] for a dense rho, without building S densely."""
    dim = matrix.shape[0]
    if dim != 1 << s.width:
        raise WidthMismatchError(f"matrix of dimension {dim} vs width {s.width}")
    index = np.arange(dim)
    parity = parity_table(s.width)
    total = 0j
    for (x_mask, z_mask), coefficient in s.items():
        total += coefficient * np.sum(matrix[index, index ^ x_mask] * (1 - 2 * parity[index & z_mask]))
    return complex(total)

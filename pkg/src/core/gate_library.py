"""Dense matrices of the gate alphabet.

Matrices are in the gate's own qubit order (``Gate.all_qubits``), with the
first listed qubit as the most significant tensor factor. A CTRL gate is
``block_diag(1, inner)``: the added control comes first.
"""

from functools import lru_cache

import numpy as np
from scipy.linalg import block_diag

from src.models.circuit import Gate, GateKind

_SQRT_HALF = 1.0 / np.sqrt(2.0)

# T := diag(1, e^{-i pi/4}); equal to exp(iZ pi/8) up to the global phase e^{-i pi/8}
_BASE_MATRICES = {
    GateKind.I: np.eye(2, dtype=complex),
    GateKind.H: _SQRT_HALF * np.array([[1, 1], [1, -1]], dtype=complex),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.diag([1, -1]).astype(complex),
    GateKind.S: np.diag([1, 1j]),
    GateKind.SDG: np.diag([1, -1j]),
    GateKind.T: np.diag([1, np.exp(-1j * np.pi / 4)]),
    GateKind.TDG: np.diag([1, np.exp(1j * np.pi / 4)]),
    GateKind.CX: np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
    GateKind.CZ: np.diag([1, 1, 1, -1]).astype(complex),
    GateKind.SWAP: np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
    ),
}

_ccx = np.eye(8, dtype=complex)
_ccx[6:, 6:] = _BASE_MATRICES[GateKind.X]
_BASE_MATRICES[GateKind.CCX] = _ccx


@lru_cache(maxsize=None)
def matrix_for_name(name: str) -> np.ndarray:
    """Read-only matrix for a DSL gate name such as 'ctrl-h'."""
    if name.startswith("ctrl-"):
        inner = matrix_for_name(name[len("ctrl-"):])
        matrix = block_diag(np.eye(inner.shape[0], dtype=complex), inner)
    else:
        matrix = _BASE_MATRICES[GateKind(name)].copy()
    matrix.setflags(write=False)
    return matrix


def gate_matrix(gate: Gate) -> np.ndarray:
    """Read-only 2^k x 2^k unitary of a gate on its k qubits."""
    return matrix_for_name(gate.name)

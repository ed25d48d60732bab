"""Simulation results: dense and Heisenberg states, the (beta, R) split, decision policy."""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.models.errors import StateInvariantError
from src.models.pauli import PauliSum


@dataclass(frozen=True)
class DenseState:
    """Density operator of a width-w register as a 2^w x 2^w complex matrix."""
    width: int
    matrix: np.ndarray

    def __post_init__(self):
        dim = 1 << self.width
        if self.matrix.shape != (dim, dim):
            raise StateInvariantError(
                f"matrix shape {self.matrix.shape} does not match width {self.width}"
            )

    def check(self, tolerance: float = 1e-10, psd: bool = False, psd_tolerance: float = 1e-8) -> None:
        """Raise StateInvariantError unless the matrix is a valid density operator.

        Args:
            tolerance: Allowed deviation from Hermiticity and from unit trace
            psd: Also check positive semidefiniteness (eigenvalue computation)
            psd_tolerance: Most negative eigenvalue accepted by the PSD check
        """
        if not np.allclose(self.matrix, self.matrix.conj().T, atol=tolerance, rtol=0.0):
            raise StateInvariantError("density operator is not Hermitian")
        trace = np.trace(self.matrix)
        if abs(trace - 1.0) > tolerance:
            raise StateInvariantError(f"density operator trace is {trace}, expected 1")
        if psd:
            smallest = float(np.linalg.eigvalsh(self.matrix).min())
            if smallest < -psd_tolerance:
                raise StateInvariantError(f"density operator has eigenvalue {smallest}")


@dataclass(frozen=True)
class HeisenbergState:
    """The evolved observable U Z1 U† tracked as a Pauli sum.

    The state itself is (1 + observable) / 2^w.
    """
    width: int
    observable: PauliSum


@dataclass(frozen=True)
class StateDecomposition:
    """rho = (1 + beta Z1 + sqrt(1 - beta^2) R) / 2^w.

    ``r_part`` is None when beta^2 is 1 (R undefined).
    """
    beta: float
    r_part: Optional[Union[np.ndarray, PauliSum]]
    defined_r: bool


@dataclass(frozen=True)
class ShotCounts:
    """Outcomes of measuring qubit 1 ``zeros + ones`` times."""
    zeros: int
    ones: int

    @property
    def shots(self) -> int:
        return self.zeros + self.ones

    @property
    def beta_hat(self) -> float:
        return 2.0 * self.zeros / self.shots - 1.0


class Decision(str, Enum):
    """Outcome of the accept/reject rule."""
    ACCEPT = "Accept"
    REJECT = "Reject"
    UNDETERMINED = "Undetermined"


class DecisionPolicy(BaseModel):
    """Evaluated bounds of the decision rule.

    Attributes:
        q_bound: Accept when beta >= 1/q, reject when beta <= -1/q
        p_bound: Promise bound: |beta| must be at least 1/p (None: no promise)
    """
    model_config = ConfigDict(frozen=True)

    q_bound: float = Field(ge=1.0)
    p_bound: Optional[float] = Field(default=None, gt=0.0)

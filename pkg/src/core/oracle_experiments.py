"""Numerical checks of the oracle-separation identities.

- Corner pair: replacing a corner-fixing U by U' = U - 2|-><-| moves the
  trace of any word with t copies of U by at most 2t.
- Fourier permutation: the trace of (H^w·P)^3 over 2^w equals a signed
  sum over triples of basis indices.
"""

from typing import Optional, Sequence, Union

import numpy as np
from scipy.linalg import hadamard
from scipy.stats import unitary_group

from src.config.logging_config import get_logger
from src.config.settings import get_settings
from src.core.engines import circuit_unitary
from src.core.pauli_algebra import parity_table
from src.models.circuit import Circuit
from src.models.errors import (
    CornerPreconditionError,
    ExperimentConfigError,
    WidthMismatchError,
)
from src.models.reports import CornerReport, FourierReport

logger = get_logger(__name__)

MINUS_STATE_SPAN = 2


def _minus_projector(dim: int) -> np.ndarray:
    """|-><-| with |-> = (|0...00> - |0...01>)/sqrt(2)."""
    projector = np.zeros((dim, dim), dtype=complex)
    projector[:2, :2] = np.array([[1.0, -1.0], [-1.0, 1.0]]) / 2.0
    return projector


def check_corner_fixing(u: np.ndarray, tolerance: Optional[float] = None) -> None:
    """Raise CornerPreconditionError unless U acts as identity on span{|0...00>, |0...01>}."""
    tolerance = tolerance if tolerance is not None else get_settings().corner_tolerance
    span = MINUS_STATE_SPAN
    if u.shape[0] < span:
        raise CornerPreconditionError(f"unitary of dimension {u.shape[0]} has no corner block")
    if not np.allclose(u[:, :span], np.eye(u.shape[0], span), atol=tolerance, rtol=0.0):
        raise CornerPreconditionError("unitary does not fix the corner subspace")


def random_corner_unitary(width: int, rng: np.random.Generator) -> np.ndarray:
    """identity on the corner block, Haar-random unitary on its complement."""
    dim = 1 << width
    u = np.eye(dim, dtype=complex)
    if dim > MINUS_STATE_SPAN:
        u[MINUS_STATE_SPAN:, MINUS_STATE_SPAN:] = unitary_group.rvs(dim - MINUS_STATE_SPAN, random_state=rng)
    return u


def random_permutation(width: int, rng: np.random.Generator) -> np.ndarray:
    return rng.permutation(1 << width)


def corner_pair_experiment(
    word: Sequence[Circuit],
    u: Optional[Union[Circuit, np.ndarray]] = None,
    seed: Optional[int] = None,
    width: Optional[int] = None,
) -> CornerReport:
    """Compare Tr[V_U] with Tr[V_U'] for the word A_1..A_t.

    V_U = A_t·U·A_(t-1)·U ... A_1·U, so the word holds t copies of U; the
    empty word gives V = 1 for both.

    Args:
        word: Input-free circuits A_1..A_t, all of one width
        u: Corner-fixing unitary as a circuit or a dense matrix; drawn with
            random_corner_unitary from ``seed`` when omitted
        seed: Seed for the random U
        width: Register width when neither ``word`` nor ``u`` fixes it

    Raises:
        CornerPreconditionError: If U does not fix the corner subspace
        WidthMismatchError: If the word and U disagree on width
    """
    widths = {a.width for a in word}
    if isinstance(u, Circuit):
        widths.add(u.width)
    elif u is not None:
        widths.add(int(np.log2(u.shape[0])))
    if width is not None:
        widths.add(width)
    if len(widths) != 1:
        raise WidthMismatchError(f"word and unitary disagree on width: {sorted(widths)}")
    w = widths.pop()
    dim = 1 << w

    if u is None:
        u_matrix = random_corner_unitary(w, np.random.default_rng(seed))
    elif isinstance(u, Circuit):
        u_matrix = circuit_unitary(u)
    else:
        u_matrix = np.asarray(u, dtype=complex)
    check_corner_fixing(u_matrix)
    u_prime = u_matrix - 2.0 * _minus_projector(dim)

    v_u = np.eye(dim, dtype=complex)
    v_prime = np.eye(dim, dtype=complex)
    for a in word:
        a_matrix = circuit_unitary(a)
        v_u = a_matrix @ u_matrix @ v_u
        v_prime = a_matrix @ u_prime @ v_prime

    trace_u = complex(np.trace(v_u))
    trace_prime = complex(np.trace(v_prime))
    t = len(word)
    report = CornerReport(
        t=t,
        trace_u=trace_u,
        trace_uprime=trace_prime,
        diff=abs(trace_u - trace_prime),
        bound=2.0 * t,
    )
    logger.debug(f"Corner pair: t={t}, diff={report.diff:.6g}")
    return report


def fourier_sign_sum(pi: Sequence[int], width: int) -> float:
    """2^(-5w/2) · sum over (i, k, m) of (-1)^(i.pi(k) + k.pi(m) + m.pi(i))."""
    dim = 1 << width
    perm = np.asarray(pi)
    parity = parity_table(width)
    signs = 1.0 - 2.0 * parity[np.bitwise_and.outer(np.arange(dim), perm)]
    # signs[i, k] * signs[k, m] * signs[m, i], summed over all triples
    total = np.sum(signs[:, :, None] * signs[None, :, :] * signs.T[:, None, :])
    return float(total) * 2.0 ** (-2.5 * width)


def fourier_permutation_experiment(pi: Sequence[int], width: int) -> FourierReport:
    """Brute-force sign sum against Tr[(H^w·P)^3]/2^w from dense matrices.

    Raises:
        ExperimentConfigError: If width exceeds ``fourier_brute_cap``
        ValueError: If pi is not a permutation of range(2^width)
    """
    cap = get_settings().fourier_brute_cap
    if width > cap:
        raise ExperimentConfigError(f"width {width} exceeds the brute-force cap {cap}")
    dim = 1 << width
    perm = np.asarray(pi)
    if perm.shape != (dim,) or not np.array_equal(np.sort(perm), np.arange(dim)):
        raise ValueError(f"pi must be a permutation of range({dim})")

    permutation_matrix = np.zeros((dim, dim))
    permutation_matrix[perm, np.arange(dim)] = 1.0
    h = hadamard(dim) / np.sqrt(dim)
    step = h @ permutation_matrix
    rhs = float(np.real(np.trace(step @ step @ step))) / dim

    return FourierReport(width=width, lhs=fourier_sign_sum(perm, width), rhs=rhs)

"""Shot budgeting for +-1 valued measurements (two-sided Hoeffding bound)."""

import numpy as np


def _check_probability(name: str, value: float) -> None:
    if not 0.0 < value <= 1.0:
        raise ValueError(f"{name} must lie in (0, 1], got {value}")


def shots_required(epsilon: float, delta: float) -> int:
    """Smallest N with 2·exp(-N·epsilon²/2) <= delta.

    Args:
        epsilon: Target half-width for an estimate of beta
        delta: Allowed failure probability

    Returns:
        ceil((2/epsilon²)·ln(2/delta))
    """
    _check_probability("epsilon", epsilon)
    _check_probability("delta", delta)
    return int(np.ceil(2.0 / epsilon ** 2 * np.log(2.0 / delta)))


def hoeffding_half_width(shots: int, confidence: float) -> float:
    """Half-width of a two-sided interval for the mean of ``shots`` +-1 outcomes."""
    if shots < 1:
        raise ValueError(f"shots must be positive, got {shots}")
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence must lie in (0, 1), got {confidence}")
    delta = 1.0 - confidence
    return float(np.sqrt(2.0 * np.log(2.0 / delta) / shots))

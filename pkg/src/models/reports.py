"""Result records returned by the gadget verifiers and oracle experiments."""

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class TraceEstimate(BaseModel):
    """Sampled estimate of Re Tr[U]/2^w (and optionally Im Tr[U]/2^w).

    Attributes:
        re_hat: Estimate of the scaled real trace, 2*(zeros/shots) - 1
        shots: Shots spent on the real part
        half_width: Two-sided Hoeffding half-width at ``confidence``
        confidence: Confidence level of the half-width
        exact: Dense-oracle value of the scaled real trace, when the width allows
        im_hat: Estimate of the scaled imaginary trace (imaginary run only)
        exact_imag: Dense-oracle value of the scaled imaginary trace
    """
    model_config = ConfigDict(frozen=True)

    re_hat: float
    shots: int = Field(ge=1)
    half_width: float = Field(gt=0.0)
    confidence: float = Field(gt=0.0, lt=1.0)
    exact: Optional[float] = None
    im_hat: Optional[float] = None
    exact_imag: Optional[float] = None

    @model_validator(mode="after")
    def _check_range(self) -> "TraceEstimate":
        if abs(self.re_hat) > 1.0 + self.half_width:
            raise ValueError(f"re_hat {self.re_hat} outside [-1, 1] +- half_width")
        return self

    def covers_exact(self) -> bool:
        """Whether the exact value lies inside re_hat +- half_width."""
        return self.exact is not None and abs(self.re_hat - self.exact) <= self.half_width


class WitnessReport(BaseModel):
    """Values of the two entanglement-witness forms.

    v1 = Tr[rho (1 - Z1)(1 + Z2)], v2 = Tr[rho (X1 + iY1)(X2 + iY2)].
    """
    model_config = ConfigDict(frozen=True)

    v1: complex
    v2: complex
    entangled_flag: bool


class CornerReport(BaseModel):
    """Trace gap between words built from U and from U' = U - 2|-><-|."""
    model_config = ConfigDict(frozen=True)

    t: int = Field(ge=0)
    trace_u: complex
    trace_uprime: complex
    diff: float = Field(ge=0.0)
    bound: float = Field(ge=0.0)

    @property
    def within_bound(self) -> bool:
        return self.diff <= self.bound + 1e-9


class FourierReport(BaseModel):
    """Brute-force sign sum against the dense trace of H.P.H.P.H.P (scaled)."""
    model_config = ConfigDict(frozen=True)

    width: int
    lhs: float
    rhs: float

    @property
    def deviation(self) -> float:
        return abs(self.lhs - self.rhs)

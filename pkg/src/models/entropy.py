from typing import Callable, List, Literal, Optional, Tuple
from mpmath import mp, mpf
from pydantic import BaseModel, Field, model_validator
from src.models.approx import ApproxReal
from src.models.graph import SpectrumPoint

EntropyMethod = Literal["argcosh-sum", "bessel-integral", "riemann-limit", "symbol-integral"]
Verdict = Literal["greater", "less", "inconclusive", "invalid"]


class EntropyReport(BaseModel):
    """Tree entropy in nats per vertex with the method that produced it."""

    value: ApproxReal
    method: EntropyMethod
    error_bound: float = Field(..., ge=0)

    class Config:
        frozen = True

    @model_validator(mode="before")
    @classmethod
    def cover_enclosure(cls, data):
        if isinstance(data, dict) and isinstance(data.get("value"), ApproxReal):
            radius = float(data["value"].rad)
            data = {**data, "error_bound": max(float(data.get("error_bound", 0.0)), radius)}
        return data


class ThetaFunction(BaseModel):
    """theta(t) = sum over k of e^{-mu_k t} for the Laplacian spectrum of a small circulant."""

    eigenvalues: List[SpectrumPoint]

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    @property
    def size(self) -> int:
        return len(self.eigenvalues)

    @property
    def zero_count(self) -> int:
        return sum(1 for point in self.eigenvalues if point.is_zero)

    def midpoints(self) -> List[mpf]:
        return [mp.zero if p.is_zero else p.value.mid for p in self.eigenvalues]

    def midpoint_error(self) -> mpf:
        """
        Bound on the entropy-integral shift from using midpoints instead of enclosures.

        Each rate mu enters as (e^{-t} - e^{-mu t} k(t)) / t with 0 < k <= 1, and moving mu
        by r moves that term by at most ln(mu / (mu - r)) <= r / (mu - r).
        """
        return (
            mp.fsum(p.value.rad / p.value.lower for p in self.eigenvalues if not p.is_zero)
            / self.size
        )

    def evaluate(self, t) -> mpf:
        t = mp.mpf(t)
        return mp.fsum(mp.exp(-mu * t) for mu in self.midpoints())


class EntropyKernel(BaseModel):
    """
    Kernel k(t) of an entropy integral over (e^{-t} - k(t)) dt / t.

    Every kernel here is a mean of e^{-tX} over some X in [0, support_max], so
    k(t) = 1 - a1 t + a2 t^2 - ... near zero. For large t,
    k(t) = C t^{-p} (1 + q / t) + O(C t^{-p-2}) + O(e^{-decay t}).
    """

    evaluate: Callable
    a1: float
    a2: float
    support_max: float
    tail_scale: float = 0.0
    tail_power: float = 0.0
    tail_correction: float = 0.0
    decay_rate: float = 1.0
    evaluation_error: float = 0.0
    taylor_cutoff: float = 1e-6
    dps: Optional[int] = None

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    def times(self, other: "EntropyKernel") -> "EntropyKernel":
        """Pointwise product of two kernels (independent means multiply)."""
        first, second = self.evaluate, other.evaluate
        dps_values = [d for d in (self.dps, other.dps) if d is not None]
        return EntropyKernel(
            evaluate=lambda t: first(t) * second(t),
            a1=self.a1 + other.a1,
            a2=self.a2 + other.a2 + self.a1 * other.a1,
            support_max=self.support_max + other.support_max,
            tail_scale=self.tail_scale * other.tail_scale,
            tail_power=self.tail_power + other.tail_power,
            tail_correction=self.tail_correction + other.tail_correction,
            decay_rate=min(self.decay_rate, other.decay_rate),
            evaluation_error=self.evaluation_error + other.evaluation_error,
            taylor_cutoff=min(self.taylor_cutoff, other.taylor_cutoff),
            dps=min(dps_values) if dps_values else None,
        )


class ComparisonRow(BaseModel):
    """One beta of the non-fixed versus fixed generator entropy table."""

    beta: int
    z_nf: Optional[ApproxReal] = None
    z_f: ApproxReal
    verdict: Verdict

    class Config:
        arbitrary_types_allowed = True
        frozen = True


class ComparisonTable(BaseModel):
    """Comparison table with the smallest beta beyond which z_NF > z_F held throughout."""

    gammas: Tuple[int, ...]
    gamma_d: int
    rows: List[ComparisonRow]
    observed_b: Optional[int] = None
    label: Literal["observed"] = "observed"

    class Config:
        arbitrary_types_allowed = True


class ConvergenceRow(BaseModel):
    """ln tau / (beta n) at one n and its distance to the entropy."""

    n: int
    per_vertex: ApproxReal
    gap: float

    class Config:
        arbitrary_types_allowed = True
        frozen = True

from fractions import Fraction
from typing import List, Optional
from pydantic import BaseModel, Field, model_validator
from src.models.approx import ApproxReal


class BigCount(BaseModel):
    """Exact nonnegative spanning-tree count."""

    value: int = Field(..., ge=0)
    engine: str = "closed-form"
    precision_bits: Optional[int] = None

    class Config:
        frozen = True

    @property
    def bit_length(self) -> int:
        return self.value.bit_length()

    def __int__(self) -> int:
        return self.value

    def __eq__(self, other) -> bool:
        if isinstance(other, BigCount):
            return self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.value)


class IntegerMatrix(BaseModel):
    """Square matrix of arbitrary-precision integers."""

    dimension: int = Field(..., ge=0)
    entries: List[List[int]]

    @model_validator(mode="after")
    def check_square(self) -> "IntegerMatrix":
        if len(self.entries) != self.dimension or any(
            len(row) != self.dimension for row in self.entries
        ):
            raise ValueError("entries must form a dimension x dimension array")
        return self

    def is_symmetric(self) -> bool:
        return all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.dimension)
            for j in range(i)
        )


class PrecisionPolicy(BaseModel):
    """Interval precision escalation: start at initial_bits, double up to max_bits."""

    initial_bits: int = Field(128, ge=53)
    max_bits: int = 1 << 20
    escalation: int = Field(2, ge=2)

    class Config:
        frozen = True

    @model_validator(mode="after")
    def check_bounds(self) -> "PrecisionPolicy":
        if self.max_bits < self.initial_bits:
            raise ValueError("max_bits must be at least initial_bits")
        return self


class FactorTerm(BaseModel):
    """One factor 2cosh(n theta) - 2cos(omega) of the telescoped product."""

    index: int
    multiplicity: int = 1
    mu: ApproxReal
    theta: ApproxReal
    omega: Fraction
    factor: Optional[ApproxReal] = None

    class Config:
        arbitrary_types_allowed = True
        frozen = True

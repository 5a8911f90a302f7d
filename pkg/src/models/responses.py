from typing import Dict, List, Optional
from pydantic import BaseModel
from src.utils.errors import VerificationMismatch

Enclosure = Dict[str, str]


class FactorRow(BaseModel):
    index: int
    multiplicity: int
    omega: str
    mu: Enclosure
    theta: Enclosure
    factor: Optional[Enclosure] = None


class CountResponse(BaseModel):
    """Spanning-tree count of one instance (exact decimal string or ln enclosure)."""

    subject: str
    instance: str
    mode: str
    engine: str
    value: Optional[str] = None
    log_value: Optional[Enclosure] = None
    bit_length: Optional[int] = None
    precision_bits: Optional[int] = None
    factors: Optional[List[FactorRow]] = None

    def table_rows(self) -> List[dict]:
        if not self.factors:
            return [self.model_dump(exclude_none=True)]
        return [row.model_dump(exclude_none=True) for row in self.factors]


class EntropyResponse(BaseModel):
    """Entropy value, optionally with a second representation and the gap between them."""

    subject: str
    parameters: Dict[str, str]
    method: str
    value: Enclosure
    error_bound: str
    alternative_method: Optional[str] = None
    alternative_value: Optional[Enclosure] = None
    agreement_gap: Optional[str] = None


class ComparisonRowResponse(BaseModel):
    beta: int
    z_nf: Optional[Enclosure] = None
    z_f: Enclosure
    verdict: str


class ComparisonResponse(BaseModel):
    """z_NF against z_F over a beta range with the observed threshold."""

    subject: str
    gammas: List[int]
    gamma_d: int
    z_f_method: str
    observed_b: Optional[int] = None
    label: str = "observed"
    rows: List[ComparisonRowResponse]

    def table_rows(self) -> List[dict]:
        return [row.model_dump(exclude_none=True) for row in self.rows]


class VerificationRow(BaseModel):
    instance: str
    vertex_count: int
    closed_form: Optional[str] = None
    oracle: Optional[str] = None
    equal: bool
    error: Optional[str] = None


class VerificationReport(BaseModel):
    """Closed form against the matrix-tree oracle over a sweep."""

    subject: str
    total: int
    mismatches: int
    passed: bool
    first_failure: Optional[VerificationRow] = None
    rows: List[VerificationRow]

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else VerificationMismatch.exit_code

    def table_rows(self) -> List[dict]:
        return [row.model_dump(exclude_none=True) for row in self.rows]


class BenchResponse(BaseModel):
    """Wall times of exact and log mode for one scaled instance."""

    instance: str
    exact_seconds: float
    bit_length: int
    precision_bits: Optional[int] = None
    log_instance: str
    log_seconds: float
    log_value: Enclosure
    log_relative_radius: str


class ErrorDetail(BaseModel):
    type: str
    detail: str
    exit_code: int


class ErrorResponse(BaseModel):
    error: ErrorDetail

from typing import List, Literal, Optional, Tuple
from pydantic import BaseModel, Field, model_validator
from src.models.count import PrecisionPolicy

Command = Literal["count", "entropy", "verify", "bench"]
Subject = Literal["circulant-scaled", "circulant-fixed", "torus", "compare", "limit"]
OutputFormat = Literal["json", "csv", "plain"]
Mode = Literal["exact", "log"]

SUBJECTS = {
    "count": ("circulant-scaled", "circulant-fixed", "torus"),
    "entropy": ("circulant-scaled", "circulant-fixed", "compare", "limit"),
    "verify": ("circulant-scaled", "torus"),
    "bench": ("circulant-scaled",),
}


class RunConfig(BaseModel):
    """Validated parameters of one command-line invocation."""

    command: Command
    subject: Subject
    beta: Optional[int] = Field(None, ge=1)
    gammas: Tuple[int, ...] = ()
    n: Optional[int] = Field(None, ge=1)
    alphas: Tuple[int, ...] = ()
    generators: Tuple[int, ...] = ()
    gamma_d: Optional[int] = Field(None, ge=1)
    beta_range: List[int] = Field(default_factory=list)
    n_range: List[int] = Field(default_factory=list)
    alpha_values: List[int] = Field(default_factory=list)
    max_gammas: int = Field(2, ge=0)
    max_alphas: int = Field(2, ge=1)
    policy: PrecisionPolicy = Field(default_factory=PrecisionPolicy)
    format: OutputFormat = "json"
    mode: Mode = "exact"
    method: Optional[str] = None
    tolerance: Optional[float] = Field(None, gt=0)
    workers: int = Field(1, ge=1)

    @model_validator(mode="after")
    def check_subject(self) -> "RunConfig":
        if self.subject not in SUBJECTS[self.command]:
            raise ValueError(f"'{self.command}' does not accept subject '{self.subject}'")
        return self

    @model_validator(mode="after")
    def check_ranges(self) -> "RunConfig":
        if self.command == "verify":
            if not self.n_range:
                raise ValueError("n range must not be empty")
            if self.subject == "circulant-scaled" and not self.beta_range:
                raise ValueError("beta range must not be empty")
            if self.subject == "torus" and not self.alpha_values:
                raise ValueError("alpha values must not be empty")
        if self.subject == "compare" and not self.beta_range:
            raise ValueError("beta range must not be empty")
        if any(value < 1 for value in self.beta_range + self.n_range + self.alpha_values):
            raise ValueError("ranges must contain positive integers only")
        return self

    @model_validator(mode="after")
    def check_engine(self) -> "RunConfig":
        if self.command == "count" and self.mode == "log" and self.method == "oracle":
            raise ValueError("the oracle engine is exact only; use --mode exact with it")
        return self

    @model_validator(mode="after")
    def check_exact_cap(self) -> "RunConfig":
        if self.command != "count" or self.mode != "exact" or self.n is None:
            return self

        from src.config.settings import settings
        from src.models.graph import ScaledCirculantFamily, TorusSpec
        from src.services.closed_form_service import ClosedFormService

        if self.subject == "circulant-scaled" and self.beta is not None:
            subject = ScaledCirculantFamily(
                beta=self.beta, base_generators=self.gammas, scale=self.n
            )
        elif self.subject == "torus":
            subject = TorusSpec(alphas=self.alphas, last=self.n)
        else:
            return self

        bits = ClosedFormService.estimate_log_tau(subject) / 0.6931471805599453
        if bits > settings.exact_bits_cap:
            raise ValueError(
                f"exact mode refused: about {int(bits)} bits exceeds the cap of "
                f"{settings.exact_bits_cap}; use --mode log"
            )
        return self

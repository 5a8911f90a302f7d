import logging
from typing import List, Optional
from src.config.precision import PrecisionConfig
from src.middleware.error_middleware import handle_errors
from src.models.approx import ApproxReal
from src.models.count import BigCount, FactorTerm
from src.models.graph import CirculantSpec, ScaledCirculantFamily, TorusSpec
from src.models.responses import CountResponse, FactorRow
from src.models.run_config import RunConfig
from src.services.closed_form_service import ClosedFormService
from src.services.oracle_service import OracleService
from src.services.spectrum_service import SpectrumService
from src.utils.validators import Validators

logger = logging.getLogger(__name__)


def _factor_rows(terms: List[FactorTerm]) -> List[FactorRow]:
    return [
        FactorRow(
            index=term.index,
            multiplicity=term.multiplicity,
            omega=f"{term.omega.numerator}/{term.omega.denominator}",
            mu=term.mu.to_json(),
            theta=term.theta.to_json(),
            factor=term.factor.to_json() if term.factor is not None else None,
        )
        for term in terms
    ]


def _exact_response(
    config: RunConfig, instance: str, count: BigCount, factors: Optional[List[FactorRow]]
) -> CountResponse:
    return CountResponse(
        subject=config.subject,
        instance=instance,
        mode="exact",
        engine=count.engine,
        value=str(count.value),
        bit_length=count.bit_length,
        precision_bits=count.precision_bits,
        factors=factors,
    )


def _log_response(
    config: RunConfig, instance: str, engine: str, log_value: ApproxReal, factors=None
) -> CountResponse:
    return CountResponse(
        subject=config.subject,
        instance=instance,
        mode="log",
        engine=engine,
        log_value=log_value.to_json(),
        factors=factors,
    )


def _config(args, subject: str) -> RunConfig:
    return RunConfig(
        command="count",
        subject=subject,
        beta=getattr(args, "beta", None),
        gammas=tuple(Validators.parse_int_list(getattr(args, "gammas", "") or "")),
        n=args.n,
        alphas=tuple(Validators.parse_int_list(getattr(args, "alphas", "") or "")),
        generators=tuple(Validators.parse_int_list(getattr(args, "generators", "") or "")),
        policy=PrecisionConfig.get_policy(),
        format=args.format,
        mode=args.mode,
        method=getattr(args, "engine", None),
    )


def _count_closed_form_subject(config: RunConfig, subject, args) -> CountResponse:
    factors = None
    if args.factors:
        factors = _factor_rows(ClosedFormService.factor_terms(subject))

    if config.mode == "log":
        log_value = ClosedFormService.log_tau_estimate(subject)
        return _log_response(config, subject.key(), "closed-form", log_value, factors)

    if config.method == "oracle":
        if isinstance(subject, TorusSpec):
            graph = SpectrumService.build_torus_multigraph(subject)
        else:
            graph = SpectrumService.build_multigraph(subject.instantiate())
        count = OracleService.count_spanning_trees_oracle(graph)
    elif isinstance(subject, TorusSpec):
        count = ClosedFormService.tau_torus(subject, config.policy)
    else:
        count = ClosedFormService.tau_scaled_circulant(subject, config.policy)

    return _exact_response(config, subject.key(), count, factors)


@handle_errors
def count_circulant_scaled(args) -> CountResponse:
    """Count spanning trees of C^{1, g_1 n, ...}_{beta n}."""
    config = _config(args, "circulant-scaled")
    family = ScaledCirculantFamily(beta=config.beta, base_generators=config.gammas, scale=config.n)
    return _count_closed_form_subject(config, family, args)


@handle_errors
def count_torus(args) -> CountResponse:
    """Count spanning trees of the torus diag(alphas, n)."""
    config = _config(args, "torus")
    spec = TorusSpec(alphas=config.alphas, last=config.n)
    return _count_closed_form_subject(config, spec, args)


@handle_errors
def count_circulant_fixed(args) -> CountResponse:
    """
    Count spanning trees of a fixed-generator circulant C^{generators}_n.

    Exact mode runs the matrix-tree oracle, log mode the eigenvalue log-sum.
    """
    config = _config(args, "circulant-fixed")
    spec = CirculantSpec(vertex_count=config.n, generators=config.generators)

    if config.mode == "log":
        spectrum = SpectrumService.circulant_spectrum(spec)
        log_value = OracleService.log_eigenproduct(spectrum, spec.vertex_count)
        return _log_response(config, spec.key(), "eigenvalue-log-sum", log_value)

    count = OracleService.count_spanning_trees_oracle(SpectrumService.build_multigraph(spec))
    return _exact_response(config, spec.key(), count, None)


def _add_mode_flags(parser, with_engine: bool = True) -> None:
    parser.add_argument("--mode", choices=["exact", "log"], default="exact")
    if with_engine:
        parser.add_argument("--engine", choices=["closed-form", "oracle"], default="closed-form")
        parser.add_argument(
            "--factors", action="store_true", help="Include per-factor enclosures"
        )


def register(subparsers) -> None:
    """Register `count` and its subjects."""
    parser = subparsers.add_parser("count", help="Count spanning trees")
    subjects = parser.add_subparsers(dest="subject", required=True)

    scaled = subjects.add_parser("circulant-scaled", help="C^{1, g_1 n, ...}_{beta n}")
    scaled.add_argument("--beta", type=int, required=True)
    scaled.add_argument("--gammas", default="", help="Base generators, e.g. 1,2")
    scaled.add_argument("--n", type=int, required=True)
    _add_mode_flags(scaled)
    scaled.set_defaults(handler=count_circulant_scaled)

    fixed = subjects.add_parser("circulant-fixed", help="C^{generators}_n")
    fixed.add_argument("--generators", required=True, help="Generators, e.g. 1,2")
    fixed.add_argument("--n", type=int, required=True)
    _add_mode_flags(fixed, with_engine=False)
    fixed.set_defaults(handler=count_circulant_fixed)

    torus = subjects.add_parser("torus", help="Z^d / diag(alphas, n) Z^d")
    torus.add_argument("--alphas", default="", help="Leading periods, e.g. 2,3")
    torus.add_argument("--n", type=int, required=True)
    _add_mode_flags(torus)
    torus.set_defaults(handler=count_torus)

from mpmath import mp
from src.config.precision import PrecisionConfig
from src.middleware.error_middleware import handle_errors
from src.models.responses import ComparisonResponse, ComparisonRowResponse, EntropyResponse
from src.models.run_config import RunConfig
from src.services.entropy_service import EntropyService
from src.utils.validators import Validators


def _config(args, subject: str) -> RunConfig:
    return RunConfig(
        command="entropy",
        subject=subject,
        beta=getattr(args, "beta", None),
        gammas=tuple(Validators.parse_int_list(getattr(args, "gammas", "") or "")),
        generators=tuple(Validators.parse_int_list(getattr(args, "generators", "") or "")),
        gamma_d=getattr(args, "gamma_d", None),
        beta_range=Validators.parse_range(getattr(args, "beta_range", "1") or "1"),
        policy=PrecisionConfig.get_policy(),
        format=args.format,
        method=getattr(args, "method", None),
        tolerance=getattr(args, "tolerance", None),
    )


def _parameters(**values) -> dict:
    return {key: str(value) for key, value in values.items()}


@handle_errors
def entropy_circulant_scaled(args) -> EntropyResponse:
    """z_NF(beta; gammas) as the argcosh sum and, unless skipped, the Bessel integral."""
    config = _config(args, "circulant-scaled")
    summed = EntropyService.z_nf_sum(config.beta, config.gammas)
    parameters = _parameters(beta=config.beta, gammas=list(config.gammas))

    if args.sum_only:
        return EntropyResponse(
            subject=config.subject,
            parameters=parameters,
            method=summed.method,
            value=summed.value.to_json(),
            error_bound=mp.nstr(summed.error_bound, 6),
        )

    integrated = EntropyService.z_nf_integral(config.beta, config.gammas, config.tolerance)
    gap = abs(summed.value.mid - integrated.value.mid)
    return EntropyResponse(
        subject=config.subject,
        parameters=parameters,
        method=summed.method,
        value=summed.value.to_json(),
        error_bound=mp.nstr(summed.error_bound, 6),
        alternative_method=integrated.method,
        alternative_value=integrated.value.to_json(),
        agreement_gap=mp.nstr(gap, 6),
    )


@handle_errors
def entropy_circulant_fixed(args) -> EntropyResponse:
    """z_F(generators) for the fixed-generator family."""
    config = _config(args, "circulant-fixed")
    report = EntropyService.z_f(config.generators, config.method, config.tolerance)
    return EntropyResponse(
        subject=config.subject,
        parameters=_parameters(generators=list(config.generators)),
        method=report.method,
        value=report.value.to_json(),
        error_bound=mp.nstr(report.error_bound, 6),
    )


@handle_errors
def entropy_limit(args) -> EntropyResponse:
    """Limit of z_NF(beta; 1, gammas) as beta grows."""
    config = _config(args, "limit")
    report = EntropyService.riemann_limit(config.gammas, config.method, config.tolerance)
    return EntropyResponse(
        subject=config.subject,
        parameters=_parameters(gammas=list(config.gammas), route=config.method),
        method=report.method,
        value=report.value.to_json(),
        error_bound=mp.nstr(report.error_bound, 6),
    )


@handle_errors
def entropy_compare(args) -> ComparisonResponse:
    """Table of z_NF(beta; 1, gammas) against z_F(1, gammas, gamma_d)."""
    config = _config(args, "compare")
    table = EntropyService.compare_nf_vs_f(
        config.gammas, config.gamma_d, config.beta_range, z_f_method=config.method
    )
    return ComparisonResponse(
        subject=config.subject,
        gammas=list(table.gammas),
        gamma_d=table.gamma_d,
        z_f_method=config.method,
        observed_b=table.observed_b,
        label=table.label,
        rows=[
            ComparisonRowResponse(
                beta=row.beta,
                z_nf=row.z_nf.to_json() if row.z_nf is not None else None,
                z_f=row.z_f.to_json(),
                verdict=row.verdict,
            )
            for row in table.rows
        ],
    )


def register(subparsers) -> None:
    """Register `entropy` and its subjects."""
    parser = subparsers.add_parser("entropy", help="Tree entropies")
    subjects = parser.add_subparsers(dest="subject", required=True)

    scaled = subjects.add_parser("circulant-scaled", help="z_NF(beta; gammas)")
    scaled.add_argument("--beta", type=int, required=True)
    scaled.add_argument("--gammas", default="")
    scaled.add_argument("--tolerance", type=float, default=None)
    scaled.add_argument("--sum-only", action="store_true", help="Skip the Bessel integral")
    scaled.set_defaults(handler=entropy_circulant_scaled)

    fixed = subjects.add_parser("circulant-fixed", help="z_F(1, g_1, ...)")
    fixed.add_argument("--generators", required=True, help="Full generator list starting with 1")
    fixed.add_argument(
        "--method", choices=["bessel-integral", "symbol-integral"], default="bessel-integral"
    )
    fixed.add_argument("--tolerance", type=float, default=None)
    fixed.set_defaults(handler=entropy_circulant_fixed)

    compare = subjects.add_parser(
        "compare", help="z_NF(beta; 1, gammas) against z_F(1, gammas, gamma_d)"
    )
    compare.add_argument("--gammas", default="")
    compare.add_argument("--gamma-d", dest="gamma_d", type=int, required=True)
    compare.add_argument("--beta-range", dest="beta_range", default="2..64")
    compare.add_argument(
        "--method", choices=["bessel-integral", "symbol-integral"], default="symbol-integral"
    )
    compare.set_defaults(handler=entropy_compare)

    limit = subjects.add_parser("limit", help="Limit of z_NF(beta; 1, gammas) in beta")
    limit.add_argument("--gammas", default="")
    limit.add_argument("--method", choices=["angular", "bessel-integral"], default="angular")
    limit.add_argument("--tolerance", type=float, default=None)
    limit.set_defaults(handler=entropy_limit)

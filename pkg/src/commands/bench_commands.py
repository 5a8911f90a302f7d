import time
from mpmath import mp
from src.config.precision import PrecisionConfig
from src.middleware.error_middleware import handle_errors
from src.models.graph import ScaledCirculantFamily
from src.models.responses import BenchResponse
from src.models.run_config import RunConfig
from src.services.closed_form_service import ClosedFormService
from src.utils.validators import Validators


@handle_errors
def bench_circulant_scaled(args) -> BenchResponse:
    """Time exact mode at --n and log mode at --log-n for one scaled family."""
    config = RunConfig(
        command="bench",
        subject="circulant-scaled",
        beta=args.beta,
        gammas=tuple(Validators.parse_int_list(args.gammas or "")),
        n=args.n,
        policy=PrecisionConfig.get_policy(),
        format=args.format,
    )
    family = ScaledCirculantFamily(beta=config.beta, base_generators=config.gammas, scale=config.n)

    started = time.perf_counter()
    count = ClosedFormService.tau_scaled_circulant(family, config.policy)
    exact_seconds = time.perf_counter() - started

    large = family.with_scale(args.log_n)
    started = time.perf_counter()
    log_value = ClosedFormService.log_tau_estimate(large)
    log_seconds = time.perf_counter() - started

    return BenchResponse(
        instance=family.key(),
        exact_seconds=round(exact_seconds, 6),
        bit_length=count.bit_length,
        precision_bits=count.precision_bits,
        log_instance=large.key(),
        log_seconds=round(log_seconds, 6),
        log_value=log_value.to_json(),
        log_relative_radius=mp.nstr(log_value.relative_radius(), 6),
    )


def register(subparsers) -> None:
    """Register `bench`."""
    parser = subparsers.add_parser("bench", help="Time exact and log mode")
    subjects = parser.add_subparsers(dest="subject", required=True)

    scaled = subjects.add_parser("circulant-scaled")
    scaled.add_argument("--beta", type=int, default=12)
    scaled.add_argument("--gammas", default="2,3")
    scaled.add_argument("--n", type=int, default=5000)
    scaled.add_argument("--log-n", dest="log_n", type=int, default=10**9)
    scaled.set_defaults(handler=bench_circulant_scaled)

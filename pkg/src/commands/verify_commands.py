from src.config.precision import PrecisionConfig
from src.middleware.error_middleware import handle_errors
from src.models.responses import VerificationReport
from src.models.run_config import RunConfig
from src.services.verification_service import VerificationService
from src.utils.validators import Validators


def _config(args, subject: str) -> RunConfig:
    return RunConfig(
        command="verify",
        subject=subject,
        beta_range=Validators.parse_range(getattr(args, "beta_range", "1") or "1"),
        n_range=Validators.parse_range(args.n_range),
        alpha_values=Validators.parse_range(getattr(args, "alpha_values", "1") or "1"),
        max_gammas=getattr(args, "max_gammas", 2),
        max_alphas=getattr(args, "max_alphas", 2),
        policy=PrecisionConfig.get_policy(),
        format=args.format,
        workers=args.workers,
    )


@handle_errors
def verify_circulant_scaled(args) -> VerificationReport:
    """Closed form against the oracle over scaled circulant families."""
    config = _config(args, "circulant-scaled")
    instances = VerificationService.scaled_instances(
        config.beta_range, config.max_gammas, config.n_range
    )
    return VerificationService.run(
        config.subject, instances, config.workers, config.policy, corrupt=args.corrupt_factor
    )


@handle_errors
def verify_torus(args) -> VerificationReport:
    """Closed form against the oracle over diagonal tori."""
    config = _config(args, "torus")
    instances = VerificationService.torus_instances(
        config.alpha_values, config.max_alphas, config.n_range
    )
    return VerificationService.run(
        config.subject, instances, config.workers, config.policy, corrupt=args.corrupt_factor
    )


def _add_sweep_flags(parser) -> None:
    parser.add_argument("--workers", type=int, default=1, help="Worker processes")
    parser.add_argument(
        "--corrupt-factor",
        dest="corrupt_factor",
        action="store_true",
        help="Self-test: perturb the first factor so every check must fail",
    )


def register(subparsers) -> None:
    """Register `verify` and its subjects."""
    parser = subparsers.add_parser("verify", help="Closed form against the matrix-tree oracle")
    subjects = parser.add_subparsers(dest="subject", required=True)

    scaled = subjects.add_parser("circulant-scaled")
    scaled.add_argument("--beta-range", dest="beta_range", default="2..6")
    scaled.add_argument("--max-gammas", dest="max_gammas", type=int, default=2)
    scaled.add_argument("--n-range", dest="n_range", default="1..8")
    _add_sweep_flags(scaled)
    scaled.set_defaults(handler=verify_circulant_scaled)

    torus = subjects.add_parser("torus")
    torus.add_argument("--alpha-values", dest="alpha_values", default="1,2,3")
    torus.add_argument("--max-alphas", dest="max_alphas", type=int, default=2)
    torus.add_argument("--n-range", dest="n_range", default="1..6")
    _add_sweep_flags(torus)
    torus.set_defaults(handler=verify_torus)

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, List, Optional, Sequence, Union
from mpmath import iv
from src.config.settings import settings
from src.models.count import PrecisionPolicy
from src.models.graph import ScaledCirculantFamily, TorusSpec
from src.models.responses import VerificationReport, VerificationRow
from src.services.closed_form_service import ClosedFormService
from src.services.oracle_service import OracleService
from src.services.spectrum_service import SpectrumService
from src.utils.errors import TreeCountError

logger = logging.getLogger(__name__)

Instance = Union[ScaledCirculantFamily, TorusSpec]


def corrupt_first_factor(index: int, factor):
    """Self-test hook: shifts the first factor so the closed form must disagree."""
    if index == 1:
        return factor + iv.mpf(1)
    return factor


def _vertex_count(instance: Instance) -> int:
    if isinstance(instance, TorusSpec):
        return instance.det
    return instance.vertex_count


def check_instance(
    instance: Instance, policy: Optional[PrecisionPolicy] = None, corrupt: bool = False
) -> VerificationRow:
    """
    Compare the closed form with the oracle on one instance.

    Module-level so that process pools can pickle it.

    Args:
        instance: Scaled circulant family member or torus
        policy: Precision policy for the closed form
        corrupt: Apply the corrupted-factor hook

    Returns:
        Verification row; closed-form failures count as mismatches
    """
    hook = corrupt_first_factor if corrupt else None
    if isinstance(instance, TorusSpec):
        graph = SpectrumService.build_torus_multigraph(instance)
    else:
        graph = SpectrumService.build_multigraph(instance.instantiate())
    oracle = OracleService.count_spanning_trees_oracle(graph)

    try:
        if isinstance(instance, TorusSpec):
            closed = ClosedFormService.tau_torus(instance, policy, factor_hook=hook)
        else:
            closed = ClosedFormService.tau_scaled_circulant(instance, policy, factor_hook=hook)
    except TreeCountError as exc:
        return VerificationRow(
            instance=instance.key(),
            vertex_count=_vertex_count(instance),
            oracle=str(oracle.value),
            equal=False,
            error=f"{type(exc).__name__}: {exc}",
        )

    return VerificationRow(
        instance=instance.key(),
        vertex_count=_vertex_count(instance),
        closed_form=str(closed.value),
        oracle=str(oracle.value),
        equal=closed.value == oracle.value,
    )


class VerificationService:
    """Service class for closed-form versus oracle sweeps."""

    @staticmethod
    def scaled_instances(
        beta_range: Iterable[int],
        max_gammas: int,
        n_range: Iterable[int],
        vertex_limit: Optional[int] = None,
    ) -> List[ScaledCirculantFamily]:
        """
        Every family member with nondecreasing generators in 1..beta//2.

        Args:
            beta_range: Betas to sweep
            max_gammas: Longest generator list
            n_range: Scales to sweep
            vertex_limit: Largest beta * n handed to the oracle (default from settings)

        Returns:
            Instances sorted by key
        """
        vertex_limit = vertex_limit or settings.oracle_vertex_limit
        instances = []
        for beta in sorted(set(beta_range)):
            choices = range(1, beta // 2 + 1)
            for length in range(0, max_gammas + 1):
                for gammas in itertools.combinations_with_replacement(choices, length):
                    for n in sorted(set(n_range)):
                        if beta * n > vertex_limit:
                            continue
                        instances.append(
                            ScaledCirculantFamily(beta=beta, base_generators=gammas, scale=n)
                        )
        return sorted(instances, key=lambda family: family.key())

    @staticmethod
    def torus_instances(
        alpha_values: Sequence[int],
        max_alphas: int,
        n_range: Iterable[int],
        vertex_limit: Optional[int] = None,
    ) -> List[TorusSpec]:
        """Every torus diag(alphas, n) with 1..max_alphas periods drawn from alpha_values."""
        vertex_limit = vertex_limit or settings.oracle_vertex_limit
        instances = []
        for length in range(1, max_alphas + 1):
            for alphas in itertools.product(sorted(set(alpha_values)), repeat=length):
                for n in sorted(set(n_range)):
                    spec = TorusSpec(alphas=alphas, last=n)
                    if spec.det <= vertex_limit:
                        instances.append(spec)
        return sorted(instances, key=lambda spec: spec.key())

    @staticmethod
    def run(
        subject: str,
        instances: Sequence[Instance],
        workers: int = 1,
        policy: Optional[PrecisionPolicy] = None,
        corrupt: bool = False,
    ) -> VerificationReport:
        """
        Check every instance and assemble the report.

        Args:
            subject: Subject label for the report
            instances: Instances to check
            workers: Process count (1 runs in-process)
            policy: Precision policy forwarded to the closed form
            corrupt: Apply the corrupted-factor hook everywhere

        Returns:
            Report with rows sorted by instance key
        """
        count = len(instances)
        logger.info("verifying %d %s instances with %d worker(s)", count, subject, workers)

        if workers > 1 and count > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                rows = list(
                    pool.map(
                        check_instance,
                        instances,
                        itertools.repeat(policy, count),
                        itertools.repeat(corrupt, count),
                    )
                )
        else:
            rows = [check_instance(instance, policy, corrupt) for instance in instances]

        rows.sort(key=lambda row: row.instance)
        failures = [row for row in rows if not row.equal]
        first_failure = min(
            failures, key=lambda row: (row.vertex_count, row.instance), default=None
        )
        if first_failure is not None:
            logger.warning("%d mismatches; smallest at %s", len(failures), first_failure.instance)

        return VerificationReport(
            subject=subject,
            total=count,
            mismatches=len(failures),
            passed=not failures,
            first_failure=first_failure,
            rows=rows,
        )

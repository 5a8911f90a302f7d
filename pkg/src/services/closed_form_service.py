import itertools
import logging
import math
from collections import OrderedDict
from fractions import Fraction
from typing import Callable, List, NamedTuple, Optional, Tuple, Union
from mpmath import iv, mp
from src.config.precision import PrecisionConfig
from src.config.settings import settings
from src.models.approx import ApproxReal
from src.models.count import BigCount, FactorTerm, PrecisionPolicy
from src.models.graph import ScaledCirculantFamily, TorusSpec
from src.services.oracle_service import OracleService
from src.services.spectrum_service import SpectrumService
from src.utils.errors import (
    IntegralityError,
    NeedsMorePrecision,
    PrecisionExhaustedError,
    ResultTooLargeError,
)

logger = logging.getLogger(__name__)

Subject = Union[ScaledCirculantFamily, TorusSpec]
FactorHook = Callable[[int, object], object]


class FactorClass(NamedTuple):
    """Factors sharing the same folded angles; evaluated once, raised to `multiplicity`."""

    index: int
    multiplicity: int
    angles: Tuple[Fraction, ...]
    omega: Fraction

    @property
    def mu_is_zero(self) -> bool:
        return all(angle.denominator == 1 for angle in self.angles)


class ClosedFormService:
    """Service class for the telescoped closed formulas (scaled circulants and tori)."""

    @staticmethod
    def factor_classes(subject: Subject) -> List[FactorClass]:
        """
        Group the k-indexed factors by their folded exact angles.

        Args:
            subject: Scaled circulant family or torus

        Returns:
            Distinct factor classes with multiplicities, in first-index order
        """
        classes: "OrderedDict[tuple, List]" = OrderedDict()
        fold = SpectrumService.fold_turn

        if isinstance(subject, ScaledCirculantFamily):
            beta = subject.beta
            for k in range(1, beta):
                angles = tuple(
                    sorted(fold(Fraction(k * g % beta, beta)) for g in subject.base_generators)
                )
                key = (angles, fold(Fraction(k, beta)))
                classes.setdefault(key, [k, 0])[1] += 1
        else:
            for position, index in enumerate(
                itertools.product(*(range(a) for a in subject.alphas))
            ):
                if position == 0:
                    continue
                angles = tuple(
                    sorted(fold(Fraction(k, a)) for k, a in zip(index, subject.alphas))
                )
                key = (angles, Fraction(0))
                classes.setdefault(key, [position, 0])[1] += 1

        return [
            FactorClass(index=k, multiplicity=m, angles=angles, omega=omega)
            for (angles, omega), (k, m) in classes.items()
        ]

    @staticmethod
    def _prefactor(subject: Subject) -> Tuple[int, int]:
        """(n, divisor) of the leading n/beta or n/det(A)."""
        if isinstance(subject, ScaledCirculantFamily):
            return subject.scale, subject.beta
        return subject.last, subject.det_a

    @staticmethod
    def theta_from_mu(mu, mu_is_zero: bool):
        """
        argcosh(1 + mu/2) = log(1 + mu/2 + sqrt(mu^2/4 + mu)) on intervals.

        Args:
            mu: Nonnegative interval
            mu_is_zero: Exact-angle verdict that mu vanishes

        Returns:
            Nonnegative interval, exactly 0 when mu_is_zero
        """
        if mu_is_zero:
            return iv.mpf(0)
        mu = SpectrumService.clamp_nonnegative(mu)
        root = iv.sqrt(SpectrumService.clamp_nonnegative(mu * mu / 4 + mu))
        return SpectrumService.clamp_nonnegative(iv.log(1 + mu / 2 + root))

    @staticmethod
    def _telescoped(theta, theta_is_zero: bool, omega: Fraction, n: int):
        cos_omega = SpectrumService.cos_turn(omega)
        if theta_is_zero:
            return SpectrumService.clamp_nonnegative(2 - 2 * cos_omega)
        scaled = theta * n
        return iv.exp(scaled) + iv.exp(-scaled) - 2 * cos_omega

    @staticmethod
    def telescoped_factor(theta: ApproxReal, omega_angle: Fraction, n: int) -> ApproxReal:
        """
        Enclose 2cosh(n theta) - 2cos(omega), the product over l of
        2cosh(theta) - 2cos((omega + 2 pi l)/n).

        Args:
            theta: Nonnegative ball
            omega_angle: omega as a rational number of turns
            n: Number of telescoped factors

        Returns:
            Enclosure at the current interval precision
        """
        theta_is_zero = theta.mid == 0 and theta.rad == 0
        value = ClosedFormService._telescoped(theta.to_interval(), theta_is_zero, omega_angle, n)
        return ApproxReal.from_interval(value)

    @staticmethod
    def direct_factor_product(theta: ApproxReal, omega_angle: Fraction, n: int) -> ApproxReal:
        """Left-hand side of the telescoping identity, multiplied out term by term."""
        theta_iv = theta.to_interval()
        two_cosh = iv.exp(theta_iv) + iv.exp(-theta_iv)
        product = iv.mpf(1)
        for l in range(n):
            product *= two_cosh - 2 * SpectrumService.cos_turn((omega_angle + l) / n)
        return ApproxReal.from_interval(product)

    @staticmethod
    def certified_round(enclosure: ApproxReal) -> BigCount:
        """
        Return the unique integer inside an enclosure narrower than 1/2.

        Args:
            enclosure: Ball around an integer-valued quantity

        Returns:
            The isolated integer

        Raises:
            NeedsMorePrecision: If the enclosure is 1/2 wide or wider
            IntegralityError: If a narrow enclosure contains no integer
        """
        lower, upper = enclosure.lower, enclosure.upper
        if not (mp.isfinite(lower) and mp.isfinite(upper)):
            raise NeedsMorePrecision("enclosure is unbounded")
        if upper - lower >= mp.mpf(0.5):
            raise NeedsMorePrecision("enclosure wider than 1/2")

        low = int(mp.ceil(lower))
        high = int(mp.floor(upper))
        if low != high:
            raise IntegralityError(
                f"enclosure [{mp.nstr(lower, 15)}, {mp.nstr(upper, 15)}] contains no integer"
            )
        return BigCount(value=low)

    @staticmethod
    def estimate_log_tau(subject: Subject) -> float:
        """Double-precision estimate of ln tau, used to size the working precision."""
        n, divisor = ClosedFormService._prefactor(subject)
        total = math.log(n) - math.log(divisor)
        for factor_class in ClosedFormService.factor_classes(subject):
            mu = sum(2 - 2 * math.cos(2 * math.pi * a) for a in factor_class.angles)
            scaled = n * math.acosh(1 + mu / 2)
            if scaled > 30:
                log_factor = scaled
            else:
                value = 2 * math.cosh(scaled) - 2 * math.cos(2 * math.pi * factor_class.omega)
                log_factor = math.log(max(value, 1e-300))
            total += factor_class.multiplicity * log_factor
        return total

    @staticmethod
    def _product(subject: Subject, hook: Optional[FactorHook] = None):
        n, _ = ClosedFormService._prefactor(subject)
        product = iv.mpf(1)
        for factor_class in ClosedFormService.factor_classes(subject):
            mu = SpectrumService.laplacian_weight(factor_class.angles)
            theta = ClosedFormService.theta_from_mu(mu, factor_class.mu_is_zero)
            factor = ClosedFormService._telescoped(
                theta, factor_class.mu_is_zero, factor_class.omega, n
            )

            low, high = (mp.make_mpf(end) for end in factor._mpi_)
            if high <= 0:
                raise IntegralityError(f"factor k={factor_class.index} is not positive")
            if low <= 0:
                raise NeedsMorePrecision(f"factor k={factor_class.index} not certified positive")

            if hook is not None:
                factor = hook(factor_class.index, factor)
            product *= factor ** factor_class.multiplicity
        return product

    @staticmethod
    def _exact_count(
        subject: Subject,
        policy: Optional[PrecisionPolicy] = None,
        factor_hook: Optional[FactorHook] = None,
    ) -> BigCount:
        policy = policy or PrecisionConfig.get_policy()
        n, divisor = ClosedFormService._prefactor(subject)

        estimated_bits = max(0.0, ClosedFormService.estimate_log_tau(subject) / math.log(2))
        if estimated_bits > settings.exact_bits_cap:
            raise ResultTooLargeError(
                f"tau has about {int(estimated_bits)} bits, above the exact-mode cap of "
                f"{settings.exact_bits_cap}; use log mode"
            )

        integer_bits = int(math.ceil(estimated_bits)) + divisor.bit_length()
        bits = policy.initial_bits + integer_bits
        ceiling = policy.max_bits + integer_bits

        while True:
            logger.debug("closed form for %s at %d bits", subject.key(), bits)
            try:
                with PrecisionConfig.working_precision(bits):
                    product = ClosedFormService._product(subject, factor_hook)
                    rounded = ClosedFormService.certified_round(ApproxReal.from_interval(product))
                break
            except NeedsMorePrecision as exc:
                if bits >= ceiling:
                    raise PrecisionExhaustedError(
                        f"no certified integer for {subject.key()} at {bits} bits: {exc}"
                    )
                bits = min(bits * policy.escalation, ceiling)

        numerator = n * rounded.value
        if numerator % divisor:
            raise IntegralityError(
                f"{n} * {rounded.value} is not divisible by {divisor} for {subject.key()}"
            )
        return BigCount(value=numerator // divisor, engine="closed-form", precision_bits=bits)

    @staticmethod
    def tau_scaled_circulant(
        family: ScaledCirculantFamily,
        policy: Optional[PrecisionPolicy] = None,
        factor_hook: Optional[FactorHook] = None,
    ) -> BigCount:
        """
        Spanning trees of C^{1, g_1 n, ..., g_{d-1} n}_{beta n} from the beta - 1 factor formula.

        Args:
            family: Scaled circulant family member
            policy: Precision escalation policy (default from settings)
            factor_hook: Optional per-factor perturbation (verification self-test)

        Returns:
            Exact count

        Raises:
            ResultTooLargeError: If the count exceeds the exact-mode bit cap
            PrecisionExhaustedError: If rounding cannot be certified
        """
        if family.d == 1:
            return OracleService.tau_cycle(family.vertex_count)
        return ClosedFormService._exact_count(family, policy, factor_hook)

    @staticmethod
    def tau_torus(
        spec: TorusSpec,
        policy: Optional[PrecisionPolicy] = None,
        factor_hook: Optional[FactorHook] = None,
    ) -> BigCount:
        """
        Spanning trees of Z^d / diag(alpha, n) Z^d from the det(A) - 1 factor formula.

        Args:
            spec: Torus specification
            policy: Precision escalation policy (default from settings)
            factor_hook: Optional per-factor perturbation (verification self-test)

        Returns:
            Exact count
        """
        if spec.dimension == 1:
            return OracleService.tau_cycle(spec.last)
        return ClosedFormService._exact_count(spec, policy, factor_hook)

    @staticmethod
    def log_tau_estimate(subject: Subject, bits: Optional[int] = None) -> ApproxReal:
        """
        Enclose ln tau without forming the integer.

        Args:
            subject: Scaled circulant family or torus
            bits: Working precision (default: policy initial bits plus the bits of n)

        Returns:
            Enclosure of ln tau
        """
        n, divisor = ClosedFormService._prefactor(subject)
        bits = bits or PrecisionConfig.get_policy().initial_bits + n.bit_length()

        with PrecisionConfig.working_precision(bits):
            if isinstance(subject, ScaledCirculantFamily) and subject.d == 1:
                return ApproxReal.from_interval(iv.log(subject.vertex_count))
            if isinstance(subject, TorusSpec) and subject.dimension == 1:
                return ApproxReal.from_interval(iv.log(subject.last))

            total = iv.log(n) - iv.log(divisor)
            for factor_class in ClosedFormService.factor_classes(subject):
                mu = SpectrumService.laplacian_weight(factor_class.angles)
                theta = ClosedFormService.theta_from_mu(mu, factor_class.mu_is_zero)
                factor = ClosedFormService._telescoped(
                    theta, factor_class.mu_is_zero, factor_class.omega, n
                )
                total += factor_class.multiplicity * iv.log(factor)
            return ApproxReal.from_interval(total)

    @staticmethod
    def factor_terms(subject: Subject, bits: Optional[int] = None) -> List[FactorTerm]:
        """
        Per-factor diagnostics: mu, theta, omega and the telescoped factor enclosure.

        Args:
            subject: Scaled circulant family or torus
            bits: Working precision (default: policy initial bits)

        Returns:
            One FactorTerm per distinct factor class
        """
        n, _ = ClosedFormService._prefactor(subject)
        bits = bits or PrecisionConfig.get_policy().initial_bits
        terms = []
        with PrecisionConfig.working_precision(bits):
            for factor_class in ClosedFormService.factor_classes(subject):
                mu = SpectrumService.laplacian_weight(factor_class.angles)
                theta = ClosedFormService.theta_from_mu(mu, factor_class.mu_is_zero)
                factor = ClosedFormService._telescoped(
                    theta, factor_class.mu_is_zero, factor_class.omega, n
                )
                terms.append(
                    FactorTerm(
                        index=factor_class.index,
                        multiplicity=factor_class.multiplicity,
                        mu=ApproxReal.from_interval(mu),
                        theta=ApproxReal.from_interval(theta),
                        omega=factor_class.omega,
                        factor=ApproxReal.from_interval(factor),
                    )
                )
        return terms

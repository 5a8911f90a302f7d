import logging
import math
from typing import Iterable, List, Optional, Sequence
from mpmath import iv, mp
from src.config.precision import PrecisionConfig
from src.models.approx import ApproxReal
from src.models.entropy import (
    ComparisonRow,
    ComparisonTable,
    ConvergenceRow,
    EntropyKernel,
    EntropyReport,
    ThetaFunction,
)
from src.models.graph import CirculantSpec, ScaledCirculantFamily
from src.services.bessel_service import BesselService
from src.services.closed_form_service import ClosedFormService
from src.services.quadrature_service import QuadratureService
from src.services.spectrum_service import SpectrumService
from src.utils.errors import ValidationError
from src.utils.validators import Validators

logger = logging.getLogger(__name__)

# e^{-x} I_0(x) ~ (2 pi x)^{-1/2} (1 + 1/(8x)) at x = 2t
_BESSEL_TAIL_SCALE = 1.0 / math.sqrt(4.0 * math.pi)
_BESSEL_TAIL_CORRECTION = 1.0 / 16.0


class EntropyService:
    """Service class for tree entropies of scaled and fixed-generator circulants."""

    @staticmethod
    def _family(beta: int, gammas: Sequence[int]) -> ScaledCirculantFamily:
        is_valid, error_msg = Validators.validate_scaled_generators(beta, list(gammas))
        if not is_valid:
            raise ValidationError(error_msg)
        return ScaledCirculantFamily(beta=beta, base_generators=tuple(gammas), scale=1)

    @staticmethod
    def _check_full_generators(gammas_full: Sequence[int]) -> tuple:
        gammas_full = tuple(gammas_full)
        if not gammas_full or gammas_full[0] != 1:
            raise ValidationError("fixed generator list must start with 1")
        if any(g < 1 for g in gammas_full):
            raise ValidationError("generators must be positive integers")
        return gammas_full

    # Kernels

    @staticmethod
    def bessel_kernel() -> EntropyKernel:
        """k(t) = e^{-2t} I_0(2t)."""

        def evaluate(t):
            value, _ = BesselService.scaled_bessel(0, 2 * t)
            return value

        return EntropyKernel(
            evaluate=evaluate,
            a1=2.0,
            a2=3.0,
            support_max=4.0,
            tail_scale=_BESSEL_TAIL_SCALE,
            tail_power=0.5,
            tail_correction=_BESSEL_TAIL_CORRECTION,
            decay_rate=1.0,
        )

    @staticmethod
    def exponential_kernel(rates: Sequence, weight: int = 1) -> EntropyKernel:
        """
        k(t) = (1/weight) * sum of e^{-r t} over the rates.

        Args:
            rates: Nonnegative decay rates (zeros allowed)
            weight: Normalising count, usually len(rates)

        Returns:
            Kernel whose zero rates form a constant tail
        """
        rates = [mp.mpf(r) for r in rates]
        zeros = sum(1 for r in rates if r == 0)
        positive = [float(r) for r in rates if r > 0]

        def evaluate(t):
            return mp.fsum(mp.exp(-r * t) for r in rates) / weight

        return EntropyKernel(
            evaluate=evaluate,
            a1=float(mp.fsum(rates) / weight),
            a2=float(mp.fsum(r * r for r in rates) / (2 * weight)),
            support_max=max([0.0] + positive),
            tail_scale=zeros / weight,
            tail_power=0.0,
            decay_rate=min(positive) if positive else 1.0,
        )

    @staticmethod
    def multidim_kernel(generators: Sequence[int]) -> EntropyKernel:
        """
        k(t) = mean over w of e^{-2t S(w)}, S(w) = sum of 1 - cos(g w).

        Args:
            generators: Generator list containing 1

        Returns:
            Double-precision kernel evaluated by the periodic trapezoid rule
        """
        generators = tuple(generators)
        count = len(generators)
        coincident = sum(1 for g in generators for h in generators if g == h)
        sigma2 = float(sum(g * g for g in generators))
        sigma4 = float(sum(g ** 4 for g in generators))

        def evaluate(t):
            value, _ = BesselService.scaled_multidim_integral(generators, float(t))
            return mp.mpf(value)

        return EntropyKernel(
            evaluate=evaluate,
            a1=2.0 * count,
            a2=2.0 * (count * count + coincident / 2.0),
            support_max=4.0 * count,
            tail_scale=1.0 / math.sqrt(4.0 * math.pi * sigma2),
            tail_power=0.5,
            tail_correction=sigma4 / (16.0 * sigma2 * sigma2),
            decay_rate=2.0 * (1.0 - math.cos(math.pi / max(generators))),
            evaluation_error=1e-13,
            taylor_cutoff=1e-5,
            dps=15,
        )

    @staticmethod
    def _integral_report(
        kernel: EntropyKernel, tol: Optional[float], rate_error=0
    ) -> EntropyReport:
        value, error = QuadratureService.entropy_integral(kernel, tol)
        error += rate_error
        return EntropyReport(
            value=ApproxReal.from_mid_rad(value, error),
            method="bessel-integral",
            error_bound=float(error),
        )

    # Operations

    @staticmethod
    def theta_function(beta: int, gammas: Sequence[int]) -> ThetaFunction:
        """
        Theta function of C^{gammas}_beta.

        Args:
            beta: Vertex count of the small circulant
            gammas: Generators, each in 1..beta//2

        Returns:
            ThetaFunction over the beta Laplacian eigenvalues
        """
        EntropyService._family(beta, gammas)
        spec = CirculantSpec(vertex_count=beta, generators=tuple(gammas))
        return ThetaFunction(eigenvalues=SpectrumService.circulant_spectrum(spec))

    @staticmethod
    def z_nf_sum(beta: int, gammas: Sequence[int]) -> EntropyReport:
        """
        Tree entropy of the scaled family as (1/beta) * sum over k of argcosh(d - sum cos).

        Args:
            beta: Scale factor
            gammas: Base generators

        Returns:
            Enclosure of the finite sum (exactly 0 for beta = 1)
        """
        family = EntropyService._family(beta, gammas)
        with PrecisionConfig.working_precision(PrecisionConfig.get_policy().initial_bits):
            total = iv.mpf(0)
            for factor_class in ClosedFormService.factor_classes(family):
                mu = SpectrumService.laplacian_weight(factor_class.angles)
                theta = ClosedFormService.theta_from_mu(mu, factor_class.mu_is_zero)
                total += factor_class.multiplicity * theta
            value = ApproxReal.from_interval(total / beta)
        return EntropyReport(value=value, method="argcosh-sum", error_bound=float(value.rad))

    @staticmethod
    def z_nf_integral(
        beta: int, gammas: Sequence[int], tol: Optional[float] = None
    ) -> EntropyReport:
        """
        Tree entropy of the scaled family as the theta-weighted Bessel integral.

        Args:
            beta: Scale factor
            gammas: Base generators
            tol: Absolute tolerance

        Returns:
            Enclosure covering the quadrature error and the eigenvalue radii

        Raises:
            QuadratureBudgetError: If tol is not reached
        """
        theta = EntropyService.theta_function(beta, gammas)
        kernel = EntropyService.exponential_kernel(theta.midpoints(), theta.size).times(
            EntropyService.bessel_kernel()
        )
        return EntropyService._integral_report(kernel, tol, rate_error=theta.midpoint_error())

    @staticmethod
    def argcosh_integral(x, tol: Optional[float] = None) -> EntropyReport:
        """
        Integral of (e^{-t} - e^{-xt} I_0(2t)) dt / t, equal to argcosh(x/2).

        Args:
            x: Real number >= 2
            tol: Absolute tolerance

        Returns:
            Quadrature enclosure
        """
        x = mp.mpf(x)
        if x < 2:
            raise ValidationError("argcosh integral needs x >= 2")
        kernel = EntropyService.exponential_kernel([x - 2]).times(EntropyService.bessel_kernel())
        return EntropyService._integral_report(kernel, tol)

    @staticmethod
    def z_f(
        gammas_full: Sequence[int], method: str = "bessel-integral", tol: Optional[float] = None
    ) -> EntropyReport:
        """
        Tree entropy of the fixed-generator circulants C^{gammas_full}_n as n grows.

        Args:
            gammas_full: Generators (1, g_1, ..., g_d)
            method: "bessel-integral" or "symbol-integral"
            tol: Absolute tolerance

        Returns:
            Entropy enclosure

        Raises:
            ValidationError: If the list does not start with 1 or the method is unknown
            QuadratureBudgetError: If tol is not reached
        """
        gammas_full = EntropyService._check_full_generators(gammas_full)

        if method == "bessel-integral":
            return EntropyService._integral_report(
                EntropyService.multidim_kernel(gammas_full), tol
            )

        if method == "symbol-integral":

            def log_symbol(x):
                return mp.log(2 * EntropyService._symbol(gammas_full, x))

            value, error = QuadratureService.periodic_log_integral(
                log_symbol, EntropyService._breakpoints(gammas_full), tol
            )
            return EntropyReport(
                value=ApproxReal.from_mid_rad(value, error),
                method="symbol-integral",
                error_bound=float(error),
            )

        raise ValidationError(f"unknown z_F method: {method!r}")

    @staticmethod
    def _symbol(generators: Sequence[int], x):
        """sum of 1 - cos(2 pi g x), written as 2 sin^2(pi g x) to keep digits near x = 0."""
        return 2 * mp.fsum(mp.sin(mp.pi * g * x) ** 2 for g in generators)

    @staticmethod
    def _breakpoints(generators: Iterable[int]) -> List:
        points = set()
        for g in generators:
            for k in range(1, g // 2 + 1):
                points.add(mp.mpf(k) / g)
        return sorted(points)

    @staticmethod
    def riemann_limit(
        gammas: Sequence[int], method: str = "angular", tol: Optional[float] = None
    ) -> EntropyReport:
        """
        Limit of z_NF(beta; 1, gammas) as beta grows.

        Args:
            gammas: Generators besides the leading 1
            method: "angular" (integral of argcosh over [0, 1]) or "bessel-integral"
            tol: Absolute tolerance

        Returns:
            Entropy enclosure
        """
        generators = (1,) + tuple(gammas)
        if any(g < 1 for g in generators):
            raise ValidationError("generators must be positive integers")

        if method == "bessel-integral":
            kernel = EntropyService.bessel_kernel().times(
                EntropyService.multidim_kernel(generators)
            )
            value, error = QuadratureService.entropy_integral(kernel, tol)
        elif method == "angular":

            def integrand(x):
                return mp.acosh(1 + EntropyService._symbol(generators, x))

            value, error = QuadratureService.periodic_log_integral(
                integrand, EntropyService._breakpoints(generators), tol
            )
        else:
            raise ValidationError(f"unknown limit method: {method!r}")

        return EntropyReport(
            value=ApproxReal.from_mid_rad(value, error),
            method="riemann-limit",
            error_bound=float(error),
        )

    @staticmethod
    def compare_nf_vs_f(
        gammas: Sequence[int],
        gamma_d: int,
        beta_range: Iterable[int],
        z_f_method: str = "symbol-integral",
    ) -> ComparisonTable:
        """
        Tabulate z_NF(beta; 1, gammas) against z_F(1, gammas, gamma_d).

        Args:
            gammas: Shared generators besides the leading 1
            gamma_d: Extra fixed generator of the fixed family
            beta_range: Betas to tabulate
            z_f_method: Method for the single z_F value

        Returns:
            Table with per-beta verdicts and the observed B
        """
        gammas = tuple(sorted(gammas))
        fixed = EntropyService.z_f((1,) + gammas + (gamma_d,), method=z_f_method)

        rows = []
        for beta in sorted(set(beta_range)):
            base = (1,) + gammas
            is_valid, _ = Validators.validate_scaled_generators(beta, list(base))
            if not is_valid:
                rows.append(ComparisonRow(beta=beta, z_f=fixed.value, verdict="invalid"))
                continue

            scaled = EntropyService.z_nf_sum(beta, base)
            if scaled.value.certainly_greater(fixed.value):
                verdict = "greater"
            elif fixed.value.certainly_greater(scaled.value):
                verdict = "less"
            else:
                verdict = "inconclusive"
                logger.warning("beta=%d: z_NF and z_F enclosures overlap", beta)
            rows.append(
                ComparisonRow(beta=beta, z_nf=scaled.value, z_f=fixed.value, verdict=verdict)
            )

        observed_b = None
        for row in reversed(rows):
            if row.verdict != "greater":
                break
            observed_b = row.beta

        return ComparisonTable(gammas=gammas, gamma_d=gamma_d, rows=rows, observed_b=observed_b)

    @staticmethod
    def count_convergence(
        beta: int, gammas: Sequence[int], ns: Iterable[int]
    ) -> List[ConvergenceRow]:
        """
        Compare ln tau / (beta n) from the closed form with z_NF(beta; gammas).

        Args:
            beta: Scale factor
            gammas: Base generators
            ns: Scales to evaluate

        Returns:
            One row per n, in increasing n
        """
        family = EntropyService._family(beta, gammas)
        entropy = EntropyService.z_nf_sum(beta, gammas).value
        rows = []
        for n in sorted(set(ns)):
            member = family.with_scale(n)
            log_tau = ClosedFormService.log_tau_estimate(member)
            with PrecisionConfig.working_precision(PrecisionConfig.get_policy().initial_bits):
                per_vertex = ApproxReal.from_interval(log_tau.to_interval() / member.vertex_count)
                gap = abs(per_vertex.mid - entropy.mid)
            rows.append(ConvergenceRow(n=n, per_vertex=per_vertex, gap=float(gap)))
        return rows

    @staticmethod
    def representation_gap(beta: int, gammas: Sequence[int], tol: Optional[float] = None) -> float:
        """Distance between the argcosh-sum and Bessel-integral values of z_NF."""
        summed = EntropyService.z_nf_sum(beta, gammas)
        integrated = EntropyService.z_nf_integral(beta, gammas, tol)
        return float(abs(summed.value.mid - integrated.value.mid))

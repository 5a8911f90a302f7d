import logging
import math
from typing import Callable, List, Optional, Sequence, Tuple
from mpmath import mp, mpf
from src.config.precision import PrecisionConfig
from src.config.settings import settings
from src.models.entropy import EntropyKernel
from src.utils.errors import QuadratureBudgetError, ValidationError

logger = logging.getLogger(__name__)

MIN_CUTOFF_TIME = 1e4
MAX_CUTOFF_TIME = 1e8


class QuadratureService:
    """Service class for the heavy-tailed entropy integrals."""

    @staticmethod
    def cutoff_time(kernel: EntropyKernel, tol: float) -> float:
        """
        Time beyond which the integrand is replaced by its large-t expansion.

        Args:
            kernel: Entropy kernel
            tol: Absolute tolerance

        Returns:
            Cutoff T

        Raises:
            QuadratureBudgetError: If the kernel decays too slowly for tol
        """
        rate = max(kernel.decay_rate, 0.0)
        needed = (math.log(1.0 / tol) + 5.0) / rate if rate > 0 else math.inf
        cutoff = max(MIN_CUTOFF_TIME, needed)
        if cutoff > MAX_CUTOFF_TIME:
            raise QuadratureBudgetError(
                f"kernel decay rate {rate:.3g} needs a cutoff beyond {MAX_CUTOFF_TIME:.0e}"
            )
        return cutoff

    @staticmethod
    def _tail(kernel: EntropyKernel, cutoff: mpf) -> Tuple[mpf, mpf]:
        """Integral of -k(t)/t beyond the cutoff from the power tail, with its error bound."""
        scale, power, correction = (
            mp.mpf(kernel.tail_scale),
            mp.mpf(kernel.tail_power),
            mp.mpf(kernel.tail_correction),
        )
        value = mp.zero
        error = mp.exp(-cutoff) / cutoff
        if scale:
            value = -scale * (
                cutoff ** -power / power + correction * cutoff ** (-power - 1) / (power + 1)
            )
            error += scale * (1 + correction ** 2) * cutoff ** (-power - 2)
        rate = mp.mpf(kernel.decay_rate)
        error += mp.exp(-rate * cutoff) / (rate * cutoff)
        return value, error

    @staticmethod
    def integrate(
        function: Callable, points: Sequence, max_degree: Optional[int] = None
    ) -> Tuple[mpf, mpf]:
        """
        Tanh-sinh quadrature over consecutive segments.

        Args:
            function: Integrand on mpf
            points: Segment endpoints
            max_degree: Refinement budget (default from settings)

        Returns:
            (value, error estimate)
        """
        max_degree = max_degree or settings.quadrature_max_degree
        value, error = mp.quad(function, list(points), error=True, maxdegree=max_degree)
        return value, abs(error)

    @staticmethod
    def entropy_integral(kernel: EntropyKernel, tol: Optional[float] = None) -> Tuple[mpf, mpf]:
        """
        Evaluate the integral over (0, inf) of (e^{-t} - k(t)) dt / t.

        Near zero the integrand is replaced by its first-order expansion
        (a1 - 1) + t (1/2 - a2). On [cutoff, 1] it is integrated directly, on [1, T]
        after the substitution t = e^u, and beyond T from the kernel's power tail.

        Args:
            kernel: Entropy kernel
            tol: Absolute tolerance (default from settings)

        Returns:
            (value, error bound)

        Raises:
            ValidationError: If the tail is not integrable
            QuadratureBudgetError: If the error bound exceeds tol
        """
        tol = tol or settings.entropy_tolerance
        if kernel.tail_scale and kernel.tail_power <= 0:
            raise ValidationError("kernel tail is not integrable against dt/t")

        with PrecisionConfig.working_dps(kernel.dps or settings.quadrature_dps):
            small = mp.mpf(kernel.taylor_cutoff)
            constant = mp.mpf(kernel.a1) - 1
            slope = mp.mpf(0.5) - mp.mpf(kernel.a2)

            def integrand(t):
                if t < small:
                    return constant + t * slope
                return (mp.exp(-t) - kernel.evaluate(t)) / t

            def log_integrand(u):
                t = mp.exp(u)
                return mp.exp(-t) - kernel.evaluate(t)

            head, head_error = QuadratureService.integrate(integrand, [0, small, 1])

            cutoff = mp.mpf(QuadratureService.cutoff_time(kernel, tol))
            upper = mp.log(cutoff)
            nodes: List = list(range(0, int(mp.floor(upper)) + 1)) + [upper]
            body, body_error = QuadratureService.integrate(log_integrand, nodes)

            tail, tail_error = QuadratureService._tail(kernel, cutoff)

            taylor_error = small ** 3 * (mp.mpf(kernel.support_max) ** 3 + 1) / 18
            noise = mp.mpf(kernel.evaluation_error) * (upper - mp.log(small))
            error = head_error + body_error + tail_error + taylor_error + noise
            value = head + body + tail

            logger.debug(
                "entropy integral: head err %s, body err %s, tail err %s, T=%s",
                mp.nstr(head_error, 3),
                mp.nstr(body_error, 3),
                mp.nstr(tail_error, 3),
                mp.nstr(cutoff, 6),
            )

        if error > tol:
            raise QuadratureBudgetError(
                f"entropy integral reached error {mp.nstr(error, 3)} above tolerance {tol:g}"
            )
        return value, error

    @staticmethod
    def periodic_log_integral(
        function: Callable, breakpoints: Sequence, tol: Optional[float] = None
    ) -> Tuple[mpf, mpf]:
        """
        Integral over [0, 1] of a function symmetric about 1/2 with endpoint singularities.

        Args:
            function: Integrand on mpf, f(x) == f(1 - x)
            breakpoints: Interior points of [0, 1/2] where the integrand is rough
            tol: Absolute tolerance (default from settings)

        Returns:
            (value, error estimate)

        Raises:
            QuadratureBudgetError: If the estimate exceeds tol
        """
        tol = tol or settings.entropy_tolerance
        with PrecisionConfig.working_dps(settings.quadrature_dps):
            half = mp.mpf(1) / 2
            inner = sorted({mp.mpf(b) for b in breakpoints if 0 < b < half})
            value, error = QuadratureService.integrate(function, [mp.zero] + inner + [half])
            value, error = 2 * value, 2 * error

        if error > tol:
            raise QuadratureBudgetError(
                f"angular integral reached error {mp.nstr(error, 3)} above tolerance {tol:g}"
            )
        return value, error

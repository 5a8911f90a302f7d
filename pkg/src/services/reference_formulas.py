import logging
import math
from typing import Callable, Optional
from mpmath import iv
from src.config.precision import PrecisionConfig
from src.models.approx import ApproxReal
from src.models.count import BigCount, PrecisionPolicy
from src.services.closed_form_service import ClosedFormService
from src.utils.errors import NeedsMorePrecision, PrecisionExhaustedError, ValidationError

logger = logging.getLogger(__name__)


def _conjugate_sum(a, b, power: int):
    """(sqrt(a) + sqrt(b))^power + (sqrt(a) - sqrt(b))^power on intervals."""
    root_a, root_b = iv.sqrt(a), iv.sqrt(b)
    return (root_a + root_b) ** power + (root_a - root_b) ** power


class ReferenceFormulas:
    """
    Independent evaluators of two factored closed forms, written in the
    (a + sqrt(b))^n + (a - sqrt(b))^n surface form.

    They share no code path with ClosedFormService beyond certified rounding and serve as
    its cross-check.
    """

    @staticmethod
    def _round_with_escalation(
        n: int,
        evaluate: Callable[[int], object],
        growth_per_n: float,
        policy: Optional[PrecisionPolicy] = None,
    ) -> BigCount:
        if n < 1:
            raise ValidationError("n must be a positive integer")

        policy = policy or PrecisionConfig.get_policy()
        integer_bits = int(math.ceil(growth_per_n * n / math.log(2))) + n.bit_length() + 8
        bits = policy.initial_bits + integer_bits
        ceiling = policy.max_bits + integer_bits

        while True:
            try:
                with PrecisionConfig.working_precision(bits):
                    enclosure = ApproxReal.from_interval(evaluate(n))
                    rounded = ClosedFormService.certified_round(enclosure)
                return BigCount(value=rounded.value, engine="reference", precision_bits=bits)
            except NeedsMorePrecision:
                if bits >= ceiling:
                    raise PrecisionExhaustedError(f"reference formula not isolated at {bits} bits")
                logger.debug("reference formula escalating from %d bits", bits)
                bits = min(bits * policy.escalation, ceiling)

    @staticmethod
    def tau_c1n_3n(n: int, policy: Optional[PrecisionPolicy] = None) -> BigCount:
        """
        tau(C^{1,n}_{3n}) = (n/3) [s^{2n} + t^{2n} + 1]^2, s, t = sqrt(7/4) +- sqrt(3/4).

        Args:
            n: Scale, n >= 1
            policy: Precision escalation policy

        Returns:
            Certified integer count
        """

        def evaluate(scale: int):
            inner = _conjugate_sum(iv.mpf(7) / 4, iv.mpf(3) / 4, 2 * scale) + 1
            return inner ** 2 * scale / 3

        return ReferenceFormulas._round_with_escalation(n, evaluate, 4 * 0.79, policy)

    @staticmethod
    def tau_c1_2n_3n_6n(n: int, policy: Optional[PrecisionPolicy] = None) -> BigCount:
        """
        tau(C^{1,2n,3n}_{6n}) as the product of three squared conjugate sums.

        Args:
            n: Scale, n >= 1
            policy: Precision escalation policy

        Returns:
            Certified integer count
        """

        def evaluate(scale: int):
            first = _conjugate_sum(iv.mpf(11) / 4, iv.mpf(7) / 4, 2 * scale) - 1
            second = _conjugate_sum(iv.mpf(2), iv.mpf(1), scale)
            third = _conjugate_sum(iv.mpf(7) / 4, iv.mpf(3) / 4, 2 * scale) + 1
            return (first * second * third) ** 2 * scale / 6

        # ln of the dominant terms per unit n
        growth = 4 * 1.1 + 2 * 0.89 + 4 * 0.79
        return ReferenceFormulas._round_with_escalation(n, evaluate, growth, policy)

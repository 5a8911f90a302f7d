import itertools
import logging
import math
from functools import lru_cache
from typing import Sequence, Tuple
import numpy as np
from mpmath import mp, mpf
from src.models.approx import ApproxReal
from src.utils.errors import TruncationBudgetError, ValidationError

logger = logging.getLogger(__name__)

# Largest index box the series form of the multidimensional Bessel function may visit
SERIES_BOX_LIMIT = 2_000_000


def _asymptotic_seam(order: int, prec: int) -> float:
    """Argument above which the asymptotic expansion reaches full working precision."""
    return 0.35 * prec + order * order + 10


@lru_cache(maxsize=8192)
def _scaled_series(order: int, x: mpf, prec: int) -> Tuple[mpf, mpf]:
    with mp.workprec(prec + 20):
        eps = mp.ldexp(mp.one, -prec)
        half = x / 2
        half_sq = half * half
        term = half ** order / mp.factorial(order)
        total = term
        j = 0
        while True:
            ratio = half_sq / ((j + 1) * (j + 1 + order))
            if ratio < mp.mpf(0.5) and term <= eps * total:
                tail = term * ratio / (1 - ratio)
                break
            term *= ratio
            total += term
            j += 1

        damping = mp.exp(-x)
        value = total * damping
        error = (tail + (j + 2) * eps * total) * damping + 4 * eps * value
        return +value, +error


@lru_cache(maxsize=8192)
def _scaled_asymptotic(order: int, x: mpf, prec: int) -> Tuple[mpf, mpf]:
    with mp.workprec(prec + 20):
        eps = mp.ldexp(mp.one, -prec)
        four_nu_sq = 4 * order * order
        term = mp.one
        total = mp.one
        k = 1
        while True:
            following = term * (-(four_nu_sq - (2 * k - 1) ** 2)) / (8 * k * x)
            if abs(following) <= eps or abs(following) >= abs(term):
                break
            total += following
            term = following
            k += 1

        prefactor = 1 / mp.sqrt(2 * mp.pi * x)
        value = prefactor * total
        error = prefactor * (2 * abs(following) + mp.exp(-2 * x)) + (k + 4) * eps * abs(value)
        return +value, +error


class BesselService:
    """Service class for modified I-Bessel functions, one- and multidimensional."""

    @staticmethod
    def scaled_bessel(order: int, x) -> Tuple[mpf, mpf]:
        """
        Exponentially scaled e^{-x} I_order(x) at the current mp precision.

        Power series for small x, the large-argument expansion above the seam.

        Args:
            order: Nonnegative integer order
            x: Nonnegative argument

        Returns:
            (value, error bound)
        """
        order = abs(int(order))
        x = mp.mpf(x)
        if x < 0:
            raise ValidationError("Bessel argument must be nonnegative")

        prec = mp.prec
        if x > _asymptotic_seam(order, prec):
            return _scaled_asymptotic(order, x, prec)
        return _scaled_series(order, x, prec)

    @staticmethod
    def bessel_i(order: int, x) -> ApproxReal:
        """
        Enclose I_order(x).

        Args:
            order: Nonnegative integer order
            x: Nonnegative finite argument

        Returns:
            Ball around I_order(x)

        Raises:
            ValidationError: If the order or argument is negative
        """
        if order < 0:
            raise ValidationError("Bessel order must be nonnegative")

        value, error = BesselService.scaled_bessel(order, x)
        with mp.workprec(mp.prec + 20):
            growth = mp.exp(mp.mpf(x))
            mid = value * growth
            rad = error * growth * (1 + mp.ldexp(mp.one, -mp.prec + 4)) + abs(mid) * mp.ldexp(
                mp.one, -mp.prec + 4
            )
        return ApproxReal.from_mid_rad(mid, rad)

    @staticmethod
    def symbol(generators: Sequence[int], w: np.ndarray) -> np.ndarray:
        """sum over generators of 1 - cos(g w)."""
        total = np.zeros_like(w)
        for generator in generators:
            total += 1.0 - np.cos(generator * w)
        return total

    @staticmethod
    def scaled_multidim_integral(
        generators: Sequence[int], t: float, tol: float = 1e-13
    ) -> Tuple[float, float]:
        """
        (1/2 pi) * integral of e^{-2t S(w)} dw by the periodic trapezoid rule.

        S(w) is the sum of 1 - cos(g w) over the generators, so the result equals
        e^{-2t |generators|} times the multidimensional I-Bessel function at 2t.
        The rule converges geometrically for this analytic periodic integrand;
        the grid is doubled until two successive sums agree.

        Args:
            generators: Positive integer generators (repeats allowed)
            t: Nonnegative time
            tol: Absolute agreement target between successive grids

        Returns:
            (value, error estimate) in double precision
        """
        t = float(t)
        if not generators or t == 0.0:
            return 1.0, 0.0

        width = 1.0 / math.sqrt(1.0 + t * sum(g * g for g in generators))
        points = max(64, 8 * int(max(max(generators), 1.0 / width)))
        previous = None
        while True:
            w = np.arange(points) * (2.0 * np.pi / points)
            current = float(np.mean(np.exp(-2.0 * t * BesselService.symbol(generators, w))))
            if previous is not None and abs(current - previous) <= tol:
                return current, abs(current - previous) + 1e-15
            if points > 1 << 24:
                raise TruncationBudgetError(f"trapezoid grid exhausted at t={t}")
            previous = current
            points *= 2

    @staticmethod
    def series_truncation(depth: int, t) -> mpf:
        """Upper bound on the sum over k > depth of t^k / k!."""
        t = mp.mpf(t)
        if depth + 2 <= t:
            return mp.inf
        first = t ** (depth + 1) / mp.factorial(depth + 1)
        return first / (1 - t / (depth + 2))

    @staticmethod
    def scaled_multidim_series(
        gammas: Sequence[int], t, tol: float = 1e-13
    ) -> Tuple[mpf, mpf]:
        """
        e^{-2t(1 + |gammas|)} I_0^{1, gammas}(2t) as a truncated Bessel series.

        The series runs over k in Z^{|gammas|} of
        e^{-2t} I_{sum g_i k_i}(2t) * product of e^{-2t} I_{k_i}(2t). Every term is
        positive and e^{-2t} I_k(2t) <= t^k / k!, so cutting the box at |k_i| <= K leaves
        at most 2 |gammas| sum_{k > K} t^k / k!.

        Args:
            gammas: Generators besides the leading 1
            t: Nonnegative time
            tol: Truncation budget

        Returns:
            (value, error bound)

        Raises:
            TruncationBudgetError: If the index box needed for tol is too large
        """
        t = mp.mpf(t)
        x = 2 * t
        if not gammas:
            return BesselService.scaled_bessel(0, x)

        dims = len(gammas)
        depth = 0
        while 2 * dims * BesselService.series_truncation(depth, t) > tol:
            depth += 1
            if (2 * depth + 1) ** dims > SERIES_BOX_LIMIT:
                raise TruncationBudgetError(
                    f"Bessel series at t={mp.nstr(t, 8)} needs a box beyond {SERIES_BOX_LIMIT}"
                )
        truncation = 2 * dims * BesselService.series_truncation(depth, t)
        logger.debug("multidim series t=%s depth=%d", mp.nstr(t, 8), depth)

        values = {}

        def scaled(order: int) -> Tuple[mpf, mpf]:
            order = abs(order)
            if order not in values:
                values[order] = BesselService.scaled_bessel(order, x)
            return values[order]

        total = mp.zero
        rounding = mp.zero
        for index in itertools.product(range(-depth, depth + 1), repeat=dims):
            lead, lead_err = scaled(sum(g * k for g, k in zip(gammas, index)))
            term = lead
            relative = lead_err / lead if lead else mp.zero
            for k in index:
                value, err = scaled(k)
                term *= value
                relative += err / value if value else mp.zero
            total += term
            rounding += term * relative
        rounding += (2 * depth + 1) ** dims * mp.ldexp(mp.one, -mp.prec + 2) * total
        return total, truncation + rounding

    @staticmethod
    def multidim_bessel(gammas: Sequence[int], t, form: str = "integral") -> ApproxReal:
        """
        Enclose I_0^{1, gammas}(2t) = (1/2 pi) * integral of e^{2t(cos w + sum cos(g w))} dw.

        Args:
            gammas: Generators besides the leading 1
            t: Nonnegative time
            form: "integral" (trapezoid rule) or "series" (truncated Bessel products)

        Returns:
            Ball around the unscaled value

        Raises:
            ValidationError: On a negative time or unknown form
        """
        if mp.mpf(t) < 0:
            raise ValidationError("t must be nonnegative")

        generators = (1,) + tuple(gammas)
        if form == "integral":
            value, error = BesselService.scaled_multidim_integral(generators, float(t))
            value, error = mp.mpf(value), mp.mpf(error)
        elif form == "series":
            value, error = BesselService.scaled_multidim_series(tuple(gammas), t)
        else:
            raise ValidationError(f"unknown multidim Bessel form: {form!r}")

        growth = mp.exp(2 * mp.mpf(t) * len(generators))
        return ApproxReal.from_mid_rad(value * growth, error * growth)

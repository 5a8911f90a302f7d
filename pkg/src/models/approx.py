from fractions import Fraction
from typing import Dict, Union
from mpmath import iv, mp, mpf
from pydantic import BaseModel

Number = Union[int, Fraction, mpf]


class ApproxReal(BaseModel):
    """
    Real value carried as a ball (midpoint, radius).

    The true value is guaranteed to lie in [mid - rad, mid + rad]. Both fields are
    exact binary floats; lower/upper are formed without rounding.
    """

    mid: mpf
    rad: mpf

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    @classmethod
    def from_interval(cls, value) -> "ApproxReal":
        """
        Convert an mpmath interval into a ball that contains it.

        Args:
            value: iv.mpf interval

        Returns:
            ApproxReal with the same endpoints
        """
        low, high = (mp.make_mpf(end) for end in iv.mpf(value)._mpi_)
        mid = mp.ldexp(mp.fadd(low, high, exact=True), -1)
        rad = mp.ldexp(mp.fsub(high, low, exact=True), -1)
        return cls(mid=mid, rad=rad)

    @classmethod
    def from_value(cls, value: Number) -> "ApproxReal":
        """Enclose an exact int, Fraction or mpf at the current interval precision."""
        if isinstance(value, Fraction):
            return cls.from_interval(iv.mpf(value.numerator) / value.denominator)
        return cls.from_interval(iv.mpf(value))

    @classmethod
    def from_mid_rad(cls, mid, rad) -> "ApproxReal":
        """Build a ball from an mp value and a nonnegative error bound."""
        return cls(mid=mp.mpf(mid), rad=abs(mp.mpf(rad)))

    @property
    def lower(self) -> mpf:
        return mp.fsub(self.mid, self.rad, exact=True)

    @property
    def upper(self) -> mpf:
        return mp.fadd(self.mid, self.rad, exact=True)

    def to_interval(self):
        """Interval at the current iv precision, rounded outward."""
        return iv.mpf([self.lower, self.upper])

    def contains(self, value: Number) -> bool:
        """
        Check enclosure of an exact value without rounding.

        Args:
            value: int, Fraction or mpf

        Returns:
            True if lower <= value <= upper
        """
        if isinstance(value, Fraction):
            scaled_low = mp.fmul(self.lower, value.denominator, exact=True)
            scaled_high = mp.fmul(self.upper, value.denominator, exact=True)
            return scaled_low <= value.numerator <= scaled_high
        return self.lower <= value <= self.upper

    def is_disjoint(self, other: "ApproxReal") -> bool:
        return self.upper < other.lower or other.upper < self.lower

    def certainly_greater(self, other: "ApproxReal") -> bool:
        return self.lower > other.upper

    def __add__(self, other: "ApproxReal") -> "ApproxReal":
        return ApproxReal.from_interval(self.to_interval() + other.to_interval())

    def __sub__(self, other: "ApproxReal") -> "ApproxReal":
        return ApproxReal.from_interval(self.to_interval() - other.to_interval())

    def __mul__(self, other: "ApproxReal") -> "ApproxReal":
        return ApproxReal.from_interval(self.to_interval() * other.to_interval())

    def __float__(self) -> float:
        return float(self.mid)

    def relative_radius(self) -> mpf:
        if self.mid == 0:
            return self.rad
        return self.rad / abs(self.mid)

    def to_json(self, digits: int = 30) -> Dict[str, str]:
        """
        Render as decimal strings.

        The printed radius is widened by the decimal rounding of the midpoint so the
        printed ball still contains the value.

        Args:
            digits: Significant digits for the midpoint

        Returns:
            {"mid": ..., "rad": ...}
        """
        with mp.workprec(max(mp.prec, 64)):
            widened = self.rad + abs(self.mid) * mp.mpf(10) ** (1 - digits)
            widened = widened * (1 + mp.mpf(2) ** -40)
            return {
                "mid": mp.nstr(self.mid, digits, strip_zeros=False),
                "rad": mp.nstr(widened, 6),
            }

from contextlib import contextmanager
from typing import Iterator, Optional
from mpmath import iv, mp
from src.config.settings import settings
from src.models.count import PrecisionPolicy


class PrecisionConfig:
    """Owns mpmath's process-global working precision."""

    _policy: Optional[PrecisionPolicy] = None

    @classmethod
    def get_policy(cls) -> PrecisionPolicy:
        """Get the default precision policy (singleton built from settings)."""
        if cls._policy is None:
            cls._policy = PrecisionPolicy(
                initial_bits=settings.precision_bits,
                max_bits=max(settings.max_precision_bits, settings.precision_bits),
            )
        return cls._policy

    @classmethod
    def reset(cls, initial_bits: Optional[int] = None) -> None:
        """Drop the cached policy, optionally overriding the initial precision."""
        cls._policy = None
        if initial_bits is not None:
            policy = cls.get_policy()
            cls._policy = PrecisionPolicy(
                initial_bits=initial_bits,
                max_bits=max(policy.max_bits, initial_bits),
            )

    @classmethod
    @contextmanager
    def working_precision(cls, bits: int) -> Iterator[None]:
        """
        Run a block with both the real and the interval context at `bits`.

        Args:
            bits: Binary working precision

        Yields:
            None; previous precisions are restored on exit
        """
        saved_mp, saved_iv = mp.prec, iv.prec
        mp.prec = bits
        iv.prec = bits
        try:
            yield
        finally:
            mp.prec = saved_mp
            iv.prec = saved_iv

    @classmethod
    @contextmanager
    def working_dps(cls, dps: int) -> Iterator[None]:
        """Decimal-digit variant of working_precision for the quadrature paths."""
        saved_mp, saved_iv = mp.prec, iv.prec
        mp.dps = dps
        iv.dps = dps
        try:
            yield
        finally:
            mp.prec = saved_mp
            iv.prec = saved_iv

import re
from typing import Optional
from src.utils.errors import ValidationError


class Validators:
    """Utility class for input validation."""

    @staticmethod
    def canonical_generator(generator: int, vertex_count: int) -> int:
        """
        Reduce a generator to its representative in [0, n/2].

        Args:
            generator: Positive integer generator
            vertex_count: Number of vertices n

        Returns:
            min(g mod n, n - g mod n)
        """
        residue = generator % vertex_count
        return min(residue, vertex_count - residue)

    @staticmethod
    def validate_scaled_generators(beta: int, gammas: list[int]) -> tuple[bool, Optional[str]]:
        """
        Validate the base generators of a scaled circulant family.

        Args:
            beta: Scale factor of the vertex count
            gammas: Base generators

        Returns:
            Tuple of (is_valid, error_message)
        """
        if beta < 1:
            return False, "beta must be a positive integer"

        for gamma in gammas:
            if gamma < 1 or gamma > beta // 2:
                return False, f"generator {gamma} outside 1..{beta // 2} for beta={beta}"

        if list(gammas) != sorted(gammas):
            return False, "generators must be listed in nondecreasing order"

        return True, None

    @staticmethod
    def parse_int_list(text: str) -> list[int]:
        """
        Parse a comma or space separated integer list ("1,2" or "1 2").

        Args:
            text: Raw list text; empty string gives an empty list

        Returns:
            Parsed integers

        Raises:
            ValidationError: If an item is not an integer
        """
        items = [item for item in re.split(r"[,\s]+", text.strip()) if item]
        try:
            return [int(item) for item in items]
        except ValueError:
            raise ValidationError(f"not an integer list: {text!r}")

    @staticmethod
    def parse_range(text: str) -> list[int]:
        """
        Parse an inclusive range "a..b", a list "a,b,c" or a single integer.

        Args:
            text: Range text

        Returns:
            Sorted list of integers in the range

        Raises:
            ValidationError: If the range is malformed or empty
        """
        match = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", text)
        if match:
            low, high = int(match.group(1)), int(match.group(2))
            values = list(range(low, high + 1))
        else:
            values = sorted(set(Validators.parse_int_list(text)))

        if not values:
            raise ValidationError(f"empty range: {text!r}")

        return values

import itertools
import logging
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple
import numpy as np
from mpmath import iv, mp
from src.config.precision import PrecisionConfig
from src.models.approx import ApproxReal
from src.models.count import IntegerMatrix
from src.models.graph import CirculantSpec, EdgeMultiset, SpectrumPoint, TorusSpec

logger = logging.getLogger(__name__)

# cos(2 pi r) for the folded turns r in [0, 1/2] whose cosine is rational
_RATIONAL_COSINES = {
    Fraction(0): Fraction(1),
    Fraction(1, 6): Fraction(1, 2),
    Fraction(1, 4): Fraction(0),
    Fraction(1, 3): Fraction(-1, 2),
    Fraction(1, 2): Fraction(-1),
}


class SpectrumService:
    """Service class for multigraph construction and exact-angle Laplacian spectra."""

    @staticmethod
    def fold_turn(angle: Fraction) -> Fraction:
        """
        Reduce a turn (angle / 2 pi) to [0, 1/2] without changing its cosine.

        Args:
            angle: Rational number of turns

        Returns:
            Folded turn r with cos(2 pi r) == cos(2 pi angle)
        """
        reduced = angle - (angle.numerator // angle.denominator)
        return min(reduced, 1 - reduced)

    @staticmethod
    def cos_turn(angle: Fraction):
        """
        Enclose cos(2 pi angle) at the current interval precision.

        Args:
            angle: Rational number of turns

        Returns:
            iv.mpf enclosure (exact for rational cosines)
        """
        folded = SpectrumService.fold_turn(angle)
        rational = _RATIONAL_COSINES.get(folded)
        if rational is not None:
            return iv.mpf(rational.numerator) / rational.denominator
        return iv.cos(iv.pi * (2 * folded.numerator) / folded.denominator)

    @staticmethod
    def clamp_nonnegative(value):
        """Intersect an interval with [0, inf)."""
        low, high = (mp.make_mpf(end) for end in value._mpi_)
        if low >= 0:
            return value
        return iv.mpf([0, max(high, mp.zero)])

    @staticmethod
    def laplacian_weight(angles: Iterable[Fraction]):
        """
        Enclose sum over angles of 2 - 2cos(2 pi angle), a nonnegative interval.

        Args:
            angles: Rational turns, one per generator slot or torus direction

        Returns:
            iv.mpf enclosure, exactly zero when every angle is an integer
        """
        total = iv.mpf(0)
        for angle in angles:
            if angle.denominator == 1:
                continue
            total += SpectrumService.clamp_nonnegative(2 - 2 * SpectrumService.cos_turn(angle))
        return SpectrumService.clamp_nonnegative(total)

    @staticmethod
    def build_multigraph(spec: CirculantSpec) -> EdgeMultiset:
        """
        Build the circulant multigraph: vertex v is joined to v + g for every generator slot.

        A generator with 2g = 0 (mod n) is reached from both ends and so carries two
        parallel edges; a generator reducing to 0 is a loop.

        Args:
            spec: Circulant specification

        Returns:
            Edge multiset with every vertex of degree 2 * |generators|
        """
        n = spec.vertex_count
        pairs = [(v, (v + g) % n) for v in range(n) for g in spec.generators]
        return EdgeMultiset.from_pairs(n, pairs)

    @staticmethod
    def build_torus_multigraph(spec: TorusSpec) -> EdgeMultiset:
        """
        Build the nearest-neighbour multigraph of Z^d / Lambda Z^d.

        Args:
            spec: Torus specification

        Returns:
            Edge multiset on det(Lambda) vertices in mixed-radix order
        """
        periods = spec.periods
        strides = []
        stride = 1
        for period in reversed(periods):
            strides.append(stride)
            stride *= period
        strides.reverse()

        pairs = []
        for index in itertools.product(*(range(p) for p in periods)):
            vertex = sum(k * s for k, s in zip(index, strides))
            for axis, period in enumerate(periods):
                shifted = list(index)
                shifted[axis] = (shifted[axis] + 1) % period
                neighbour = sum(k * s for k, s in zip(shifted, strides))
                pairs.append((vertex, neighbour))

        return EdgeMultiset.from_pairs(spec.det, pairs)

    @staticmethod
    def dense_laplacian(graph: EdgeMultiset) -> IntegerMatrix:
        """
        Assemble the full Laplacian; loops are stripped, parallel edges add up.

        Args:
            graph: Edge multiset

        Returns:
            n x n integer Laplacian
        """
        n = graph.vertex_count
        entries = [[0] * n for _ in range(n)]
        for (u, v), multiplicity in graph.edges.items():
            if u == v:
                continue
            entries[u][u] += multiplicity
            entries[v][v] += multiplicity
            entries[u][v] -= multiplicity
            entries[v][u] -= multiplicity
        return IntegerMatrix(dimension=n, entries=entries)

    @staticmethod
    def numeric_spectrum(graph: EdgeMultiset) -> List[float]:
        """Sorted floating-point Laplacian eigenvalues (dense symmetric solver)."""
        laplacian = SpectrumService.dense_laplacian(graph)
        matrix = np.array(laplacian.entries, dtype=float)
        return sorted(float(x) for x in np.linalg.eigvalsh(matrix))

    @staticmethod
    def circulant_angles(spec: CirculantSpec, k: int) -> Tuple[Fraction, ...]:
        n = spec.vertex_count
        return tuple(Fraction((k * g) % n, n) for g in spec.generators)

    @staticmethod
    def circulant_spectrum(
        spec: CirculantSpec, bits: Optional[int] = None
    ) -> List[SpectrumPoint]:
        """
        Laplacian spectrum 2d - 2 sum cos(2 pi k g_i / n), k = 0..n-1.

        Args:
            spec: Circulant specification
            bits: Working precision (default: policy initial bits)

        Returns:
            n spectrum points in index order
        """
        bits = bits or PrecisionConfig.get_policy().initial_bits
        points = []
        with PrecisionConfig.working_precision(bits):
            for k in range(spec.vertex_count):
                angles = SpectrumService.circulant_angles(spec, k)
                value = SpectrumService.laplacian_weight(angles)
                points.append(
                    SpectrumPoint(
                        index=k,
                        value=ApproxReal.from_interval(value),
                        exact_angle_args=angles,
                    )
                )
        logger.debug("circulant spectrum %s at %d bits", spec.key(), bits)
        return points

    @staticmethod
    def torus_spectrum(spec: TorusSpec, bits: Optional[int] = None) -> List[SpectrumPoint]:
        """
        Laplacian spectrum of the torus over the full index box.

        Args:
            spec: Torus specification
            bits: Working precision (default: policy initial bits)

        Returns:
            det(Lambda) spectrum points, indexed by the box multi-index
        """
        bits = bits or PrecisionConfig.get_policy().initial_bits
        periods = spec.periods
        points = []
        with PrecisionConfig.working_precision(bits):
            for index in itertools.product(*(range(p) for p in periods)):
                angles = tuple(Fraction(k, p) for k, p in zip(index, periods))
                value = SpectrumService.laplacian_weight(angles)
                points.append(
                    SpectrumPoint(
                        index=index,
                        value=ApproxReal.from_interval(value),
                        exact_angle_args=angles,
                    )
                )
        return points

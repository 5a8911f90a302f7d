import logging
from typing import List, Optional
import gmpy2
from mpmath import iv
from src.config.precision import PrecisionConfig
from src.models.approx import ApproxReal
from src.models.count import BigCount, IntegerMatrix
from src.models.graph import EdgeMultiset, SpectrumPoint
from src.services.spectrum_service import SpectrumService
from src.utils.errors import DisconnectedGraphError, ValidationError

logger = logging.getLogger(__name__)


class OracleService:
    """Service class for the exact matrix-tree spanning-tree counter."""

    @staticmethod
    def reduced_laplacian(graph: EdgeMultiset, removed_vertex: int = 0) -> IntegerMatrix:
        """
        Laplacian with one row and column deleted.

        Args:
            graph: Edge multiset (loops ignored)
            removed_vertex: Vertex whose row and column are dropped

        Returns:
            (n-1) x (n-1) integer minor
        """
        full = SpectrumService.dense_laplacian(graph).entries
        keep = [v for v in range(graph.vertex_count) if v != removed_vertex]
        entries = [[full[i][j] for j in keep] for i in keep]
        return IntegerMatrix(dimension=len(keep), entries=entries)

    @staticmethod
    def bareiss_determinant(matrix: IntegerMatrix) -> int:
        """
        Fraction-free Gaussian elimination over the integers.

        Every division is exact (Sylvester's identity), so no rational or floating
        arithmetic is involved. Entries are gmpy2 integers; rows are swapped when a pivot
        vanishes.

        Args:
            matrix: Square integer matrix

        Returns:
            Exact determinant (1 for the empty matrix)
        """
        size = matrix.dimension
        if size == 0:
            return 1

        rows = [[gmpy2.mpz(x) for x in row] for row in matrix.entries]
        sign = 1
        previous = gmpy2.mpz(1)
        for k in range(size - 1):
            if rows[k][k] == 0:
                swap = next((i for i in range(k + 1, size) if rows[i][k] != 0), None)
                if swap is None:
                    return 0
                rows[k], rows[swap] = rows[swap], rows[k]
                sign = -sign

            pivot = rows[k][k]
            pivot_row = rows[k]
            for i in range(k + 1, size):
                row = rows[i]
                factor = row[k]
                if factor == 0:
                    for j in range(k + 1, size):
                        row[j] = row[j] * pivot // previous
                else:
                    for j in range(k + 1, size):
                        row[j] = (row[j] * pivot - factor * pivot_row[j]) // previous
                row[k] = 0
            previous = pivot

        return int(sign * rows[size - 1][size - 1])

    @staticmethod
    def count_spanning_trees_oracle(graph: EdgeMultiset) -> BigCount:
        """
        Count spanning trees as the determinant of the Laplacian minor at vertex 0.

        Args:
            graph: Edge multiset on n >= 1 vertices; loops permitted

        Returns:
            Exact count, 0 for a disconnected graph
        """
        if graph.vertex_count < 1:
            raise ValidationError("the oracle needs at least one vertex")

        minor = OracleService.reduced_laplacian(graph, removed_vertex=0)
        if not minor.is_symmetric():
            raise ValidationError("edge multiset is not symmetric; the Laplacian minor is not")
        value = OracleService.bareiss_determinant(minor)
        logger.debug("oracle on %d vertices -> %d bits", graph.vertex_count, value.bit_length())
        return BigCount(value=value, engine="oracle")

    @staticmethod
    def tau_cycle(n: int) -> BigCount:
        """Spanning trees of the n-cycle (one vertex counts as a single tree)."""
        if n < 1:
            raise ValidationError("cycle length must be positive")
        return BigCount(value=n, engine="cycle-identity")

    @staticmethod
    def _nonzero_values(spectrum: List[SpectrumPoint]) -> List[SpectrumPoint]:
        zeros = sum(1 for point in spectrum if point.is_zero)
        if zeros != 1:
            raise DisconnectedGraphError(
                f"spectrum has {zeros} zero eigenvalues; the graph is disconnected"
            )
        return [point for point in spectrum if not point.is_zero]

    @staticmethod
    def eigenproduct_estimate(
        spectrum: List[SpectrumPoint], n: int, bits: Optional[int] = None
    ) -> ApproxReal:
        """
        Enclose (1/n) * product of the nonzero eigenvalues (floating cross-check only).

        Args:
            spectrum: Spectrum with exactly one zero eigenvalue
            n: Vertex count
            bits: Interval precision (default 64)

        Returns:
            Enclosure of the spanning-tree count

        Raises:
            DisconnectedGraphError: If the zero eigenvalue is not simple
        """
        nonzero = OracleService._nonzero_values(spectrum)
        with PrecisionConfig.working_precision(bits or 64):
            product = iv.mpf(1)
            for point in nonzero:
                product *= point.value.to_interval()
            return ApproxReal.from_interval(product / n)

    @staticmethod
    def log_eigenproduct(
        spectrum: List[SpectrumPoint], n: int, bits: Optional[int] = None
    ) -> ApproxReal:
        """
        Enclose ln of (1/n) * product of the nonzero eigenvalues.

        Args:
            spectrum: Spectrum with exactly one zero eigenvalue
            n: Vertex count
            bits: Interval precision (default 64)

        Returns:
            Enclosure of ln tau
        """
        nonzero = OracleService._nonzero_values(spectrum)
        with PrecisionConfig.working_precision(bits or 64):
            total = -iv.log(n)
            for point in nonzero:
                total += iv.log(point.value.to_interval())
            return ApproxReal.from_interval(total)

import random
from fractions import Fraction
import pytest
from src.models.count import IntegerMatrix
from src.models.graph import CirculantSpec, EdgeMultiset, TorusSpec
from src.services.oracle_service import OracleService
from src.services.spectrum_service import SpectrumService
from src.utils.errors import DisconnectedGraphError, ValidationError


def _circulant(vertex_count, generators):
    return SpectrumService.build_multigraph(
        CirculantSpec(vertex_count=vertex_count, generators=generators)
    )


def _fraction_determinant(entries):
    rows = [[Fraction(x) for x in row] for row in entries]
    size = len(rows)
    determinant = Fraction(1)
    for k in range(size):
        pivot = next((i for i in range(k, size) if rows[i][k] != 0), None)
        if pivot is None:
            return 0
        if pivot != k:
            rows[k], rows[pivot] = rows[pivot], rows[k]
            determinant = -determinant
        determinant *= rows[k][k]
        for i in range(k + 1, size):
            ratio = rows[i][k] / rows[k][k]
            for j in range(k, size):
                rows[i][j] -= ratio * rows[k][j]
    return int(determinant)


@pytest.mark.parametrize(
    "entries, expected",
    [
        ([], 1),
        ([[7]], 7),
        ([[2, -1], [-1, 2]], 3),
        ([[0, 1], [1, 0]], -1),
        ([[1, 2], [2, 4]], 0),
        ([[0, 0, 1], [0, 2, 0], [3, 0, 0]], -6),
    ],
)
def test_bareiss_small_matrices(entries, expected):
    matrix = IntegerMatrix(dimension=len(entries), entries=entries)
    determinant = OracleService.bareiss_determinant(matrix)
    assert determinant == expected
    assert type(determinant) is int


def test_bareiss_matches_rational_elimination():
    rng = random.Random(2024)
    for size in range(1, 9):
        for _ in range(5):
            entries = [[rng.randint(-9, 9) for _ in range(size)] for _ in range(size)]
            matrix = IntegerMatrix(dimension=size, entries=entries)
            assert OracleService.bareiss_determinant(matrix) == _fraction_determinant(entries)


@pytest.mark.parametrize(
    "vertex_count, generators, expected",
    [
        (5, (1, 2), 125),
        (3, (1, 1), 12),
        (2, (1, 1), 4),
        (6, (1, 2), 384),
        (6, (1, 2, 3), 3072),
    ],
)
def test_oracle_known_counts(vertex_count, generators, expected):
    count = OracleService.count_spanning_trees_oracle(_circulant(vertex_count, generators))
    assert count.value == expected
    assert count.engine == "oracle"


@pytest.mark.parametrize("n", range(3, 13))
def test_oracle_cycle(n):
    assert OracleService.count_spanning_trees_oracle(_circulant(n, (1,))).value == n


@pytest.mark.parametrize("n", [1, 2, 57, 200])
def test_cycle_identity_against_oracle(n):
    if n == 1:
        graph = EdgeMultiset(vertex_count=1)
    else:
        graph = _circulant(n, (1,))
    assert OracleService.count_spanning_trees_oracle(graph) == OracleService.tau_cycle(n)


@pytest.mark.slow
def test_cycle_identity_full_range():
    for n in range(2, 201):
        assert OracleService.count_spanning_trees_oracle(_circulant(n, (1,))).value == n


def test_tau_cycle_rejects_empty_cycle():
    with pytest.raises(ValidationError):
        OracleService.tau_cycle(0)


def test_oracle_torus_2x2():
    graph = SpectrumService.build_torus_multigraph(TorusSpec(alphas=(2,), last=2))
    assert OracleService.count_spanning_trees_oracle(graph).value == 32


def test_oracle_disconnected_is_zero():
    assert OracleService.count_spanning_trees_oracle(_circulant(4, (2,))).value == 0


def test_oracle_ignores_loops():
    graph = EdgeMultiset.from_pairs(3, [(0, 1), (1, 2), (2, 0), (1, 1), (2, 2)])
    assert OracleService.count_spanning_trees_oracle(graph).value == 3


@pytest.mark.parametrize(
    "vertex_count, generators",
    [(4, (1, 2)), (5, (1, 1)), (6, (1, 3)), (6, (2, 3)), (7, (1, 2)), (4, (1, 1, 2))],
)
def test_oracle_matches_deletion_contraction(
    vertex_count, generators, count_by_deletion_contraction
):
    graph = _circulant(vertex_count, generators)
    expected = count_by_deletion_contraction(graph)
    assert OracleService.count_spanning_trees_oracle(graph).value == expected


def test_oracle_matches_deletion_contraction_on_random_multigraphs(count_by_deletion_contraction):
    rng = random.Random(11)
    for _ in range(20):
        vertex_count = rng.randint(2, 6)
        pairs = [
            (rng.randrange(vertex_count), rng.randrange(vertex_count))
            for _ in range(rng.randint(1, 9))
        ]
        graph = EdgeMultiset.from_pairs(vertex_count, pairs)
        expected = count_by_deletion_contraction(graph)
        assert OracleService.count_spanning_trees_oracle(graph).value == expected


def test_reduced_laplacian_is_a_symmetric_dominant_minor():
    rng = random.Random(5)
    for _ in range(10):
        vertex_count = rng.randint(2, 8)
        pairs = [
            (rng.randrange(vertex_count), rng.randrange(vertex_count))
            for _ in range(rng.randint(1, 12))
        ]
        graph = EdgeMultiset.from_pairs(vertex_count, pairs)
        minor = OracleService.reduced_laplacian(graph, rng.randrange(vertex_count))
        assert minor.dimension == vertex_count - 1
        assert minor.is_symmetric()
        for i, row in enumerate(minor.entries):
            assert row[i] >= sum(abs(x) for j, x in enumerate(row) if j != i)


def test_integer_matrix_symmetry_check():
    assert IntegerMatrix(dimension=2, entries=[[2, -1], [-1, 2]]).is_symmetric()
    assert not IntegerMatrix(dimension=2, entries=[[1, 2], [3, 4]]).is_symmetric()


def test_oracle_invariant_under_relabelling():
    rng = random.Random(3)
    graph = _circulant(10, (1, 3, 5))
    expected = OracleService.count_spanning_trees_oracle(graph).value
    for _ in range(5):
        permutation = list(range(10))
        rng.shuffle(permutation)
        relabelled = graph.relabel(permutation)
        assert OracleService.count_spanning_trees_oracle(relabelled).value == expected


@pytest.mark.parametrize(
    "vertex_count, generators", [(5, (1,)), (3, (1, 1)), (12, (1, 5)), (20, (1, 4, 10))]
)
def test_eigenproduct_encloses_oracle(vertex_count, generators):
    spec = CirculantSpec(vertex_count=vertex_count, generators=generators)
    estimate = OracleService.eigenproduct_estimate(
        SpectrumService.circulant_spectrum(spec), vertex_count
    )
    exact = OracleService.count_spanning_trees_oracle(SpectrumService.build_multigraph(spec))
    assert estimate.contains(exact.value)


def test_eigenproduct_cycle_radius():
    spectrum = SpectrumService.circulant_spectrum(CirculantSpec(vertex_count=5, generators=(1,)))
    estimate = OracleService.eigenproduct_estimate(spectrum, 5)
    assert estimate.contains(5)
    assert estimate.rad < 1e-9


def test_eigenproduct_rejects_disconnected_spectrum():
    spectrum = SpectrumService.circulant_spectrum(CirculantSpec(vertex_count=4, generators=(2, 2)))
    with pytest.raises(DisconnectedGraphError):
        OracleService.eigenproduct_estimate(spectrum, 4)


def test_log_eigenproduct_matches_count():
    spec = CirculantSpec(vertex_count=6, generators=(1, 2))
    log_value = OracleService.log_eigenproduct(SpectrumService.circulant_spectrum(spec), 6)
    assert abs(float(log_value.mid) - 5.950642552587727) < 1e-12

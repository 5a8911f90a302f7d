import random
from fractions import Fraction
import pytest
from mpmath import mp
from src.models.graph import CirculantSpec, TorusSpec
from src.services.spectrum_service import SpectrumService


def _values(points):
    return [float(point.value.mid) for point in points]


def test_fold_turn():
    assert SpectrumService.fold_turn(Fraction(5, 6)) == Fraction(1, 6)
    assert SpectrumService.fold_turn(Fraction(7, 4)) == Fraction(1, 4)
    assert SpectrumService.fold_turn(Fraction(-1, 3)) == Fraction(1, 3)
    assert SpectrumService.fold_turn(Fraction(3)) == 0


def test_cycle_multigraph():
    graph = SpectrumService.build_multigraph(CirculantSpec(vertex_count=4, generators=(1,)))
    assert graph.edge_count() == 4
    assert all(graph.degree(v) == 2 for v in range(4))


def test_half_turn_generator_gives_parallel_edges():
    graph = SpectrumService.build_multigraph(CirculantSpec(vertex_count=2, generators=(1, 1)))
    assert graph.edges == {(0, 1): 4}


def test_k5_multigraph():
    graph = SpectrumService.build_multigraph(CirculantSpec(vertex_count=5, generators=(1, 2)))
    assert graph.edge_count() == 10
    assert set(graph.edges.values()) == {1}


@pytest.mark.parametrize(
    "vertex_count, generators",
    [(4, (1,)), (6, (1, 2)), (8, (1, 4)), (12, (1, 3, 6)), (10, (2, 5)), (7, (1, 1, 3))],
)
def test_degree_is_twice_generator_count(vertex_count, generators):
    spec = CirculantSpec(vertex_count=vertex_count, generators=generators)
    graph = SpectrumService.build_multigraph(spec)
    assert all(graph.degree(v) == spec.degree for v in range(vertex_count))
    assert graph.edge_count() == vertex_count * len(generators)


def test_cycle_spectrum():
    points = SpectrumService.circulant_spectrum(CirculantSpec(vertex_count=4, generators=(1,)))
    assert _values(points) == [0.0, 2.0, 4.0, 2.0]
    assert points[0].is_zero
    assert not any(point.is_zero for point in points[1:])


def test_c113_spectrum():
    points = SpectrumService.circulant_spectrum(CirculantSpec(vertex_count=3, generators=(1, 1)))
    assert points[1].value.contains(6)
    assert points[2].value.contains(6)


def test_c23_6_spectrum():
    points = SpectrumService.circulant_spectrum(CirculantSpec(vertex_count=6, generators=(2, 3)))
    for k, point in enumerate(points):
        third = 1 if k % 3 == 0 else Fraction(-1, 2)
        assert point.value.contains(4 - 2 * third - 2 * (-1) ** k)


@pytest.mark.parametrize(
    "vertex_count, generators",
    [(7, (1, 2)), (16, (1, 3)), (24, (1, 8, 12)), (33, (1, 4, 11)), (64, (1, 2, 32))],
)
def test_spectrum_matches_dense_laplacian(vertex_count, generators):
    spec = CirculantSpec(vertex_count=vertex_count, generators=generators)
    exact = sorted(_values(SpectrumService.circulant_spectrum(spec)))
    numeric = SpectrumService.numeric_spectrum(SpectrumService.build_multigraph(spec))
    assert max(abs(a - b) for a, b in zip(exact, numeric)) < 1e-9


@pytest.mark.parametrize("vertex_count, generators", [(9, (1, 2)), (20, (1, 5, 10)), (13, (2, 6))])
def test_trace_and_conjugate_symmetry(vertex_count, generators):
    spec = CirculantSpec(vertex_count=vertex_count, generators=generators)
    points = SpectrumService.circulant_spectrum(spec)
    edges = SpectrumService.build_multigraph(spec).edge_count()

    trace = mp.fsum(point.value.mid for point in points)
    assert abs(trace - 2 * edges) < 1e-12 * edges

    for k in range(1, vertex_count):
        assert abs(points[k].value.mid - points[vertex_count - k].value.mid) < 1e-30


def test_disconnected_circulant_has_two_zero_eigenvalues():
    points = SpectrumService.circulant_spectrum(CirculantSpec(vertex_count=4, generators=(2, 2)))
    assert sum(1 for point in points if point.is_zero) == 2


def test_spectrum_values_are_nonnegative():
    spec = CirculantSpec(vertex_count=30, generators=(1, 10, 15))
    assert all(point.value.lower >= 0 for point in SpectrumService.circulant_spectrum(spec))


def test_torus_spectrum_2x2():
    points = SpectrumService.torus_spectrum(TorusSpec(alphas=(2,), last=2))
    assert sorted(_values(points)) == [0.0, 4.0, 4.0, 8.0]
    assert sum(1 for point in points if point.is_zero) == 1


def test_torus_one_dimensional_is_cycle():
    torus = SpectrumService.torus_spectrum(TorusSpec(last=7))
    cycle = SpectrumService.circulant_spectrum(CirculantSpec(vertex_count=7, generators=(1,)))
    assert _values(torus) == _values(cycle)


def test_trivial_period_is_inert():
    torus = SpectrumService.torus_spectrum(TorusSpec(alphas=(1,), last=6))
    cycle = SpectrumService.circulant_spectrum(CirculantSpec(vertex_count=6, generators=(1,)))
    assert _values(torus) == _values(cycle)


@pytest.mark.parametrize("alphas, last", [((2,), 3), ((3,), 4), ((2, 3), 2), ((1, 2), 5)])
def test_torus_spectrum_matches_dense_laplacian(alphas, last):
    spec = TorusSpec(alphas=alphas, last=last)
    exact = sorted(_values(SpectrumService.torus_spectrum(spec)))
    graph = SpectrumService.build_torus_multigraph(spec)
    assert all(graph.degree(v) == 2 * spec.dimension for v in range(spec.det))
    numeric = SpectrumService.numeric_spectrum(graph)
    assert max(abs(a - b) for a, b in zip(exact, numeric)) < 1e-9


@pytest.mark.parametrize("alphas", [(), (1,), (2,), (1, 3)])
@pytest.mark.parametrize("last", range(1, 7))
def test_torus_trace_identity(alphas, last):
    spec = TorusSpec(alphas=alphas, last=last)
    graph = SpectrumService.build_torus_multigraph(spec)
    active = sum(1 for period in spec.periods if period >= 2)
    expected = 2 * active * spec.det
    assert expected == 2 * (graph.edge_count() - graph.loop_count())

    trace = mp.fsum(point.value.mid for point in SpectrumService.torus_spectrum(spec))
    assert abs(trace - expected) <= 1e-12 * max(expected, 1)


def test_torus_short_periods():
    graph = SpectrumService.build_torus_multigraph(TorusSpec(alphas=(1,), last=2))
    assert graph.loop_count() == 2
    assert graph.edges[(0, 1)] == 2


def test_relabelled_multigraph_keeps_spectrum():
    rng = random.Random(7)
    graph = SpectrumService.build_multigraph(CirculantSpec(vertex_count=12, generators=(1, 4)))
    permutation = list(range(12))
    rng.shuffle(permutation)

    before = SpectrumService.numeric_spectrum(graph)
    after = SpectrumService.numeric_spectrum(graph.relabel(permutation))
    assert max(abs(a - b) for a, b in zip(before, after)) < 1e-9

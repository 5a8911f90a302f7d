from collections import Counter
from typing import Dict, Tuple
import pytest
from mpmath import iv, mp
from src.config.precision import PrecisionConfig
from src.models.graph import EdgeMultiset


def deletion_contraction(vertex_count: int, edges: Dict[Tuple[int, int], int]) -> int:
    """
    Spanning trees by deletion-contraction, exponential time, for graphs of a few vertices.

    A bundle of m parallel uv edges gives tau(G) = tau(G - uv) + m * tau(G / uv).
    """
    edges = {key: m for key, m in edges.items() if key[0] != key[1] and m > 0}
    if vertex_count == 1:
        return 1
    if not edges:
        return 0

    (u, v), multiplicity = min(edges.items())
    deleted = {key: m for key, m in edges.items() if key != (u, v)}

    def merge(x: int) -> int:
        x = u if x == v else x
        return x - 1 if x > v else x

    contracted: Counter = Counter()
    for (a, b), m in deleted.items():
        a, b = merge(a), merge(b)
        contracted[(min(a, b), max(a, b))] += m

    return deletion_contraction(vertex_count, deleted) + multiplicity * deletion_contraction(
        vertex_count - 1, dict(contracted)
    )


@pytest.fixture
def count_by_deletion_contraction():
    def count(graph: EdgeMultiset) -> int:
        return deletion_contraction(graph.vertex_count, dict(graph.edges))

    return count


@pytest.fixture(autouse=True)
def default_precision():
    """Every test starts from the settings-derived policy and default mpmath precision."""
    PrecisionConfig.reset()
    saved_mp, saved_iv = mp.prec, iv.prec
    yield
    mp.prec, iv.prec = saved_mp, saved_iv
    PrecisionConfig.reset()

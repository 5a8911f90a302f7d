import pytest
from fractions import Fraction
from mpmath import mp
from pydantic import ValidationError as PydanticValidationError
from src.models.approx import ApproxReal
from src.models.count import PrecisionPolicy
from src.models.graph import CirculantSpec, EdgeMultiset, ScaledCirculantFamily, TorusSpec
from src.utils.errors import ValidationError
from src.utils.validators import Validators


@pytest.mark.parametrize(
    "generator, vertex_count, expected",
    [(1, 6, 1), (5, 6, 1), (4, 6, 2), (3, 6, 3), (6, 6, 0), (13, 6, 1), (7, 2, 1)],
)
def test_canonical_generator(generator, vertex_count, expected):
    assert Validators.canonical_generator(generator, vertex_count) == expected


def test_validate_scaled_generators():
    assert Validators.validate_scaled_generators(6, [2, 3]) == (True, None)
    assert Validators.validate_scaled_generators(1, []) == (True, None)

    is_valid, message = Validators.validate_scaled_generators(3, [2])
    assert not is_valid
    assert "1..1" in message

    assert not Validators.validate_scaled_generators(6, [3, 2])[0]
    assert not Validators.validate_scaled_generators(0, [])[0]


def test_parse_int_list():
    assert Validators.parse_int_list("1,2, 3") == [1, 2, 3]
    assert Validators.parse_int_list("4 5") == [4, 5]
    assert Validators.parse_int_list("") == []
    with pytest.raises(ValidationError):
        Validators.parse_int_list("1,x")


def test_parse_range():
    assert Validators.parse_range("2..5") == [2, 3, 4, 5]
    assert Validators.parse_range("3,1,3") == [1, 3]
    assert Validators.parse_range("7") == [7]
    with pytest.raises(ValidationError):
        Validators.parse_range("5..2")


def test_circulant_spec_canonicalizes():
    spec = CirculantSpec(vertex_count=6, generators=(5, 4))
    assert spec.generators == (1, 2)
    assert spec.degree == 4
    assert spec.key() == "C[1,2]_6"


def test_circulant_spec_rejects_loops_unless_allowed():
    with pytest.raises(PydanticValidationError):
        CirculantSpec(vertex_count=3, generators=(3,))

    spec = CirculantSpec(vertex_count=3, generators=(3,), allow_loops=True)
    assert spec.generators == (0,)


def test_scaled_family_instantiates_with_collisions():
    family = ScaledCirculantFamily(beta=2, base_generators=(1,), scale=1)
    assert family.instantiate().generators == (1, 1)
    assert family.d == 2

    family = ScaledCirculantFamily(beta=6, base_generators=(2, 3), scale=4)
    assert family.vertex_count == 24
    assert family.instantiate().generators == (1, 8, 12)


def test_scaled_family_rejects_large_generator():
    with pytest.raises(PydanticValidationError):
        ScaledCirculantFamily(beta=3, base_generators=(2,), scale=1)


def test_torus_spec():
    spec = TorusSpec(alphas=(2, 3), last=5)
    assert spec.dimension == 3
    assert spec.periods == (2, 3, 5)
    assert spec.det_a == 6
    assert spec.det == 30

    with pytest.raises(PydanticValidationError):
        TorusSpec(alphas=(0,), last=2)


def test_precision_policy_bounds():
    with pytest.raises(PydanticValidationError):
        PrecisionPolicy(initial_bits=256, max_bits=128)


def test_edge_multiset_degree_and_relabel():
    graph = EdgeMultiset.from_pairs(3, [(0, 1), (1, 0), (1, 2), (2, 2)])
    assert graph.edges[(0, 1)] == 2
    assert graph.degree(1) == 3
    assert graph.degree(2) == 3
    assert graph.loop_count() == 1
    assert graph.without_loops().edge_count() == 3

    relabelled = graph.relabel([2, 0, 1])
    assert relabelled.edges[(0, 2)] == 2
    with pytest.raises(ValueError):
        graph.relabel([0, 0, 1])


def test_approx_real_enclosure():
    ball = ApproxReal.from_value(Fraction(1, 3))
    assert ball.contains(Fraction(1, 3))
    assert not ball.contains(Fraction(1, 2))
    assert ball.rad > 0

    twelve = ApproxReal.from_mid_rad(12, mp.mpf("0.25"))
    assert twelve.contains(12)
    assert twelve.certainly_greater(ApproxReal.from_value(11))
    assert twelve.is_disjoint(ApproxReal.from_value(13))

    total = twelve + ApproxReal.from_value(1)
    assert total.contains(13)


def test_approx_real_json_widens_radius():
    ball = ApproxReal.from_value(Fraction(2, 3))
    rendered = ball.to_json(digits=10)
    assert rendered["mid"].startswith("0.666666666")
    assert mp.mpf(rendered["rad"]) >= abs(mp.mpf(rendered["mid"]) - mp.mpf(2) / 3)

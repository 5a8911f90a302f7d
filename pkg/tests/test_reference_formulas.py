import pytest
from src.models.graph import ScaledCirculantFamily
from src.services.closed_form_service import ClosedFormService
from src.services.reference_formulas import ReferenceFormulas
from src.utils.errors import ValidationError


def _closed_form(beta, gammas, n):
    family = ScaledCirculantFamily(beta=beta, base_generators=gammas, scale=n)
    return ClosedFormService.tau_scaled_circulant(family).value


def test_first_members():
    assert ReferenceFormulas.tau_c1n_3n(1).value == 12
    assert ReferenceFormulas.tau_c1n_3n(2).value == 384
    assert ReferenceFormulas.tau_c1_2n_3n_6n(1).value == 3072


@pytest.mark.parametrize("n", range(1, 9))
def test_c1n_3n_matches_closed_form(n):
    reference = ReferenceFormulas.tau_c1n_3n(n)
    assert reference.engine == "reference"
    assert reference.value == _closed_form(3, (1,), n)


@pytest.mark.parametrize("n", range(1, 9))
def test_c1_2n_3n_6n_matches_closed_form(n):
    assert ReferenceFormulas.tau_c1_2n_3n_6n(n).value == _closed_form(6, (2, 3), n)


@pytest.mark.slow
def test_reference_formulas_up_to_twenty():
    for n in range(9, 21):
        assert ReferenceFormulas.tau_c1n_3n(n).value == _closed_form(3, (1,), n)
        assert ReferenceFormulas.tau_c1_2n_3n_6n(n).value == _closed_form(6, (2, 3), n)


def test_reference_rejects_non_positive_scale():
    with pytest.raises(ValidationError):
        ReferenceFormulas.tau_c1n_3n(0)

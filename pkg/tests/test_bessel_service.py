import numpy as np
import pytest
from mpmath import mp
from src.config.precision import PrecisionConfig
from src.services.bessel_service import (
    BesselService,
    _asymptotic_seam,
    _scaled_asymptotic,
    _scaled_series,
)
from src.utils.errors import TruncationBudgetError, ValidationError


def test_bessel_at_zero():
    assert BesselService.bessel_i(0, 0).contains(1)
    assert BesselService.bessel_i(1, 0).contains(0)
    assert BesselService.bessel_i(3, 0).rad < 1e-30


@pytest.mark.parametrize("order", [0, 1, 2, 5])
@pytest.mark.parametrize("x", ["0.5", "3", "40", "80", "200"])
def test_bessel_matches_mpmath(order, x):
    with PrecisionConfig.working_precision(128):
        x = mp.mpf(x)
        ball = BesselService.bessel_i(order, x)
        expected = mp.besseli(order, x)
        assert abs(ball.mid - expected) <= ball.rad + abs(expected) * mp.mpf(10) ** -35
        assert ball.relative_radius() < 1e-30


@pytest.mark.parametrize("order", [0, 3])
def test_series_and_asymptotic_agree_past_the_seam(order):
    prec = 100
    x = mp.mpf(int(_asymptotic_seam(order, prec)) + 2)
    series, series_error = _scaled_series(order, x, prec)
    asymptotic, asymptotic_error = _scaled_asymptotic(order, x, prec)
    with mp.workprec(prec):
        assert abs(series - asymptotic) <= series_error + asymptotic_error
        assert asymptotic_error < series * mp.mpf(2) ** -90


def test_addition_identity():
    with PrecisionConfig.working_precision(128):
        t = mp.mpf("0.7")
        total = mp.zero
        for k in range(-30, 31):
            total += BesselService.bessel_i(abs(k), 2 * t).mid ** 2
        expected = BesselService.bessel_i(0, 4 * t)
        assert abs(total - expected.mid) < 1e-30


def test_bessel_rejects_negative_input():
    with pytest.raises(ValidationError):
        BesselService.bessel_i(-1, 1)
    with pytest.raises(ValidationError):
        BesselService.bessel_i(0, -1)


def test_multidim_at_zero_time():
    for form in ("integral", "series"):
        assert BesselService.multidim_bessel((1, 2), 0, form=form).contains(1)


def test_multidim_without_extra_generators_is_i0():
    t = mp.mpf("1.25")
    expected = mp.besseli(0, 2 * t)
    for form in ("integral", "series"):
        ball = BesselService.multidim_bessel((), t, form=form)
        assert abs(ball.mid - expected) < 1e-12 * expected


@pytest.mark.parametrize("t", [0.1, 0.5, 1.0, 2.0, 5.0])
@pytest.mark.parametrize("gammas", [(), (1,), (2,), (1, 2)])
def test_multidim_integral_and_series_agree(t, gammas):
    integral, _ = BesselService.scaled_multidim_integral((1,) + gammas, t)
    series, series_error = BesselService.scaled_multidim_series(gammas, t)
    assert series_error < 1e-12
    assert abs(integral - float(series)) < 1e-9 * float(series)


def test_multidim_unknown_form():
    with pytest.raises(ValidationError):
        BesselService.multidim_bessel((1,), 1, form="table")


def test_series_truncation_budget():
    with pytest.raises(TruncationBudgetError):
        BesselService.scaled_multidim_series((1, 2, 3), 200)


def test_series_truncation_bound():
    assert BesselService.series_truncation(2, 5) == mp.inf
    bound = BesselService.series_truncation(20, 1)
    exact_tail = mp.nsum(lambda k: 1 / mp.factorial(k), [21, mp.inf])
    assert exact_tail <= bound < 2 * exact_tail


def test_symbol_values():
    w = np.array([0.0, np.pi / 2, np.pi])
    np.testing.assert_allclose(BesselService.symbol((1, 2), w), [0.0, 3.0, 2.0], atol=1e-15)

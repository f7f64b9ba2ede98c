import math

import pytest

import dvcv


def test_coefficients_and_factors():
    assert dvcv.matrix_element(1, 1, 0.5) == pytest.approx(0.75)
    s2 = 1 / math.sqrt(2)
    assert dvcv.amp_factor_dual(0, 1, 0, 2, s2, s2) == pytest.approx(-1 / 3)


def test_probabilities():
    alpha, value = dvcv.maximize_direct_success(0, 1)
    assert alpha == pytest.approx(0.628482, abs=5e-3)
    assert value == pytest.approx(0.2637, abs=5e-4)
    total = dvcv.direct_success_probability(1, 2, 0.6) + dvcv.am_probability(1, 2, 0.6)
    assert total == pytest.approx(1.0, abs=1e-10)


def test_negativity():
    n = dvcv.negativity(1.0)
    assert n["closed_form"] == pytest.approx(0.990799, abs=1e-6)
    assert abs(n["numeric"] - n["closed_form"]) < 1e-6


def test_demodulation():
    assert dvcv.swap_probability(3.0) == pytest.approx(0.9)
    res = dvcv.demod_displacement(0.6, 0.8j, -1 / 3, 0)
    assert res["success"]
    assert abs(res["gamma"]) == pytest.approx(1 / 3)
    overall = dvcv.overall_success(0, 1, 1 / math.sqrt(2))
    assert abs(overall["total"] - 0.522765) < 0.02


def test_errors_map_to_python():
    with pytest.raises(dvcv.SingularFactorError):
        dvcv.amp_factor_dual(0, 1, 0, 1, 1.0, 1.0)
    with pytest.raises(ValueError):
        dvcv.demod_swap(1.0, 0.0, 0.0)

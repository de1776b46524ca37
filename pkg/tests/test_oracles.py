import math

import numpy as np
import pytest
from numpy.polynomial import legendre as npleg
from scipy.integrate import quad
from scipy.special import eval_legendre

from taupade.exceptions import ConfigurationError
from taupade.oracles import Y0, example1_oracle, example2_oracle
from taupade.orthopoly import CoeffSeries, make_basis


def test_example1_exact_coefficients():
    o = example1_oracle(10)
    assert o.exact_coeffs[0] == 1.0
    assert o.exact_coeffs[1] == pytest.approx(2 / 3)
    assert o.exact_coeffs[2] == pytest.approx(-2 / 15)


def test_example1_coefficients_match_projection():
    o = example1_oracle(40)
    for k in (0, 1, 2, 7, 40):
        val, _ = quad(lambda th: float(o.y(math.cos(th))) * math.cos(k * th), 0, math.pi, epsabs=1e-14, limit=200)
        ck = val / math.pi * (1 if k == 0 else 2)
        assert ck == pytest.approx(o.exact_coeffs[k], rel=1e-10)


def test_example1_y():
    o = example1_oracle(5)
    assert float(o.y(0.0)) == pytest.approx(1.1107207345, abs=1e-10)
    assert Y0 == pytest.approx(math.pi * math.sqrt(2) / 4)
    assert float(o.y(-1.0)) == 0.0


@pytest.mark.parametrize("n", [2, 10, 151])
def test_example1_delta(n):
    o = example1_oracle(n)
    k = np.arange(n)
    assert np.allclose(o.delta_coeffs[k], (1 - o.y0 / o.S_n) * o.exact_coeffs[k], rtol=1e-12)
    assert np.allclose(o.exact_coeffs - o.tau_coeffs, o.delta_coeffs)


def test_example1_tail_matches_direct_sum():
    o = example1_oracle(30)
    k = np.arange(31, 200000, dtype=float)
    direct = math.pi / 2 * np.sum((2 / (4 * k * k - 1)) ** 2)
    assert o.tail_norm_sq(30) == pytest.approx(direct, rel=1e-9)


def test_example1_needs_n_at_least_2():
    with pytest.raises(ConfigurationError):
        example1_oracle(1)


def test_example2_values():
    o = example2_oracle(0.5)
    assert np.allclose(o.legendre_coeffs(2), [1.0, 1.5, 1.25])
    assert o.zeta == pytest.approx(1.25)
    o = example2_oracle(0.9)
    assert o.y_right == pytest.approx(190.0)
    assert o.y_left == pytest.approx(0.1 / 3.61)
    assert float(o.y(1.0)) == pytest.approx(190.0)


@pytest.mark.parametrize("alpha", [0.1, -0.4, 0.7])
def test_example2_series_sums_to_y(alpha):
    o = example2_oracle(alpha)
    t = np.linspace(-1, 1, 9)
    c = o.exact_coeffs_upto(400)
    assert np.allclose(npleg.legval(t, c), o.y(t), rtol=1e-10)
    assert np.allclose(c[:6], (2 * np.arange(6) + 1) * alpha ** np.arange(6))


def test_example2_tail():
    o = example2_oracle(0.8)
    k = np.arange(21, 2000)
    direct = np.sum(2 / (2 * k + 1) * ((2 * k + 1) * 0.8**k) ** 2)
    assert o.tail_norm_sq(20) == pytest.approx(direct, rel=1e-12)


def test_example2_error_norm_of_truncation():
    o = example2_oracle(0.3)
    s = CoeffSeries(make_basis("legendre"), o.exact_coeffs_upto(10))
    assert o.error_norm(s) == pytest.approx(math.sqrt(o.tail_norm_sq(10)))


def test_example2_satisfies_ode():
    a = 0.6
    o = example2_oracle(a)
    t = np.linspace(-0.9, 0.9, 7)
    h = 1e-4
    ypp = (o.y(t + h) - 2 * o.y(t) + o.y(t - h)) / h**2
    lhs = (1 + a * a - 2 * a * t) ** 2 * ypp - 15 * a * a * o.y(t)
    assert np.allclose(lhs, 0.0, atol=1e-5 * np.max(np.abs(ypp)))
    # generating-function identity at one point
    k = np.arange(200)
    assert np.sum((2 * k + 1) * a**k * eval_legendre(k, 0.3)) == pytest.approx(float(o.y(0.3)))


@pytest.mark.parametrize("alpha", [0.0, 1.0, -1.0, 1.5])
def test_example2_domain(alpha):
    with pytest.raises(ConfigurationError):
        example2_oracle(alpha)

import numpy as np
import pytest
from pytest import approx

from solwave.errors import ConfigError, ExponentWindow, UnsupportedRegularity
from solwave.functionals import Problem
from solwave.nonlinearity import (Kind, Nonlinearity, nonlinearity_from_name,
                                  odd_power, polynomial, quadratic,
                                  signed_modulus)
from solwave.symbols import whitham


def test_quadratic_values():
    nl = quadratic()
    assert nl.n(0.5) == approx(0.25)
    assert nl.primitive(0.5) == approx(0.5**3 / 3.0)
    assert nl.leading_primitive(0.5) == approx(0.5**3 / 3.0)
    assert nl.n(0.0) == 0.0
    assert nl.n_prime(0.0) == 0.0


def test_quadratic_chain_rule_identity():
    # 2 u u_x = (n(u))_x for n(u) = u^2: n'(u) = 2u
    nl = quadratic()
    xs = np.linspace(-1, 1, 11)
    assert nl.n_prime(xs) == approx(2 * xs)


def test_signed_modulus_negative_coefficient():
    nl = signed_modulus(2.0, -1.0)
    assert nl.n(-0.5) == approx(-0.25)
    assert nl.leading_primitive(-0.5) == approx(+0.5**3 / 3.0)
    assert nl.n(0.5) == approx(-0.25)


def test_polynomial_with_remainder():
    nl = polynomial({2: 1.0, 4: 1.0})
    assert nl.p == 2.0
    assert nl.remainder is not None and nl.remainder.delta == 2.0
    assert nl.n(0.3) == approx(0.3**2 + 0.3**4)
    assert nl.primitive(0.3) == approx(0.3**3 / 3 + 0.3**5 / 5)


def test_remainder_quadrature_primitive():
    # primitive omitted: Gauss-Legendre fallback must match the closed form
    from solwave.nonlinearity import Remainder
    rem = Remainder(func=lambda x: x**4, delta=2.0)
    xs = np.linspace(-1.0, 1.0, 17)
    assert rem.antiderivative(xs) == approx(xs**5 / 5, abs=1e-14)


@pytest.mark.parametrize("nl", [quadratic(), polynomial({2: 1.0, 3: -0.5}),
                                signed_modulus(2.5, 1.0), odd_power(3, 2.0)])
def test_primitive_consistent_with_derivative(nl):
    h = 1e-5
    xs = np.linspace(-1.0, 1.0, 41)
    fd = (nl.primitive(xs + h) - nl.primitive(xs - h)) / (2 * h)
    # relative to the derivative scale on the window (pointwise-relative is
    # ill-posed at the double zero of n)
    scale = max(np.max(np.abs(nl.n(xs))), 1.0) * 1e-2
    denom = np.maximum(np.abs(nl.n(xs)), scale)
    assert np.max(np.abs(fd - nl.n(xs)) / denom) < 1e-8


def test_exponent_window_checked_at_assembly():
    with pytest.raises(ExponentWindow):
        Problem(whitham(), odd_power(5, 1.0))
    Problem(whitham(), odd_power(3, 1.0))  # p = 3 < 5 is fine


def test_construction_rejections():
    with pytest.raises(ValueError):
        Nonlinearity("x", 2.0, 0.0, Kind.PURE_POWER)
    with pytest.raises(ValueError):
        Nonlinearity("x", 3.0, -1.0, Kind.ODD_POWER)  # odd power needs cp > 0
    with pytest.raises(ValueError):
        Nonlinearity("x", 3.0, 1.0, Kind.PURE_POWER)  # even integer only
    with pytest.raises(ValueError):
        Nonlinearity("x", 1.5, 1.0, Kind.SIGNED_MODULUS)  # p >= 2
    with pytest.raises(ValueError):
        polynomial({1: 1.0, 2: 1.0})


def test_euler_identity_homogeneous():
    # (p+1) N(x) = x n(x) exactly for a homogeneous leading part
    nl = quadratic()
    xs = np.linspace(-1, 1, 21)
    assert 3.0 * nl.primitive(xs) == approx(xs * nl.n(xs), abs=1e-15)


def test_euler_identity_with_remainder():
    # (p+1) N(x) - x n(x) = O(|x|^(p+delta+1)) for n = x^2 + x^4
    nl = polynomial({2: 1.0, 4: 1.0})
    xs = np.linspace(1e-3, 1.0, 100)
    lhs = np.abs(3.0 * nl.primitive(xs) - xs * nl.n(xs))
    ratio = lhs / xs ** (nl.p + nl.remainder.delta + 1.0)
    assert np.all(np.isfinite(ratio))
    assert ratio.max() < 1.0  # exact value 2/5 x^5 over x^5


def test_remainder_growth_bound():
    nl = polynomial({2: 1.0, 4: 1.0})
    xs = np.linspace(1e-3, 1.0, 200)
    assert np.max(np.abs(nl.remainder.func(xs)) / xs ** (nl.p + nl.remainder.delta)) <= 1.0 + 1e-12


def test_regularity_requests():
    nl = quadratic()
    d2 = nl.derivative(2)
    assert d2(0.3) == approx(2.0)
    assert nl.derivative(3)(0.3) == 0.0
    frac = signed_modulus(2.5, 1.0)
    with pytest.raises(UnsupportedRegularity):
        frac.derivative(3)

    from solwave.nonlinearity import Remainder
    opaque = Nonlinearity("x", 2.0, 1.0, Kind.PURE_POWER,
                          Remainder(func=lambda x: x**4, delta=2.0))
    with pytest.raises(UnsupportedRegularity):
        opaque.n_prime(0.1)


def test_names_roundtrip():
    assert nonlinearity_from_name("quadratic").name == "quadratic"
    nl = nonlinearity_from_name("modulus:2.5,-1.0")
    assert nl.kind is Kind.SIGNED_MODULUS and nl.p == 2.5 and nl.cp == -1.0
    nl = nonlinearity_from_name("oddpower:3,2.0")
    assert nl.kind is Kind.ODD_POWER
    nl = nonlinearity_from_name("poly:1,0,1")
    assert nl.n(0.3) == approx(0.3**2 + 0.3**4)
    with pytest.raises(ConfigError):
        nonlinearity_from_name("nosuch")
    with pytest.raises(ConfigError):
        nonlinearity_from_name("modulus:a,b")

"""Energy/momentum closed forms, gradient exactness, penalization, reduced energy.

Frozen constant: the reduced energy of the unit-momentum KdV ground state is
-(4/15) (3/2)^(5/3) = -0.5241482788417793 (40-digit quadrature agrees).
"""

import numpy as np
import pytest
from pytest import approx

from solwave.errors import OutOfDomain
from solwave.functionals import (Penalization, Problem, energy,
                                 energy_gradient, inner_l2, momentum,
                                 nonlinear_part, penalized_energy,
                                 penalized_gradient, quadratic_part,
                                 reduced_energy, reduced_gradient,
                                 weighted_norm)
from solwave.grid import (PeriodicGrid, SpectralField, band_noise, roll,
                          sobolev_norm)
from solwave.longwave import kdv_soliton
from solwave.nonlinearity import quadratic, signed_modulus
from solwave.symbols import whitham

KDV_REDUCED_ENERGY = -0.5241482788417793

PROB = Problem(whitham(), quadratic())


def field(seed, grid=None, scale=1.0):
    g = grid or PeriodicGrid(30.0, 128)
    rng = np.random.Generator(np.random.Philox(seed))
    return band_noise(g, g.n // 4, rng) * scale


def test_momentum_closed_forms():
    g = PeriodicGrid(18.0, 64)
    assert momentum(SpectralField.zero(g)) == 0.0
    a = 0.7
    u = SpectralField.from_values(g, a * np.cos(2 * np.pi * g.nodes / g.period))
    assert momentum(u) == approx(a**2 * g.period / 4, rel=1e-13)


def test_momentum_of_kdv_soliton():
    w = kdv_soliton(PeriodicGrid(80.0, 1024))
    assert momentum(w) == approx(1.0, abs=1e-10)


def test_energy_zero_field():
    assert energy(PROB, SpectralField.zero(PeriodicGrid(10.0, 32))) == 0.0


def test_energy_of_cosine():
    # quadratic nonlinearity integrates to zero over a period for a pure mode
    g = PeriodicGrid(22.0, 128)
    a, k1 = 0.3, 2 * np.pi / 22.0
    u = SpectralField.from_values(g, a * np.cos(k1 * g.nodes))
    expected = -PROB.symbol.eval(k1) * a**2 * g.period / 4
    assert energy(PROB, u) == approx(expected, rel=1e-12)


def test_quadratic_part_lower_bound():
    for seed in range(5):
        u = field(seed)
        assert quadratic_part(PROB, u) >= -PROB.symbol.m_zero * momentum(u) - 1e-12


def test_energy_translation_invariant():
    u = field(12)
    e0 = energy(PROB, u)
    for j in (1, 7, 50):
        assert energy(PROB, roll(u, j)) == approx(e0, abs=1e-10)


def test_gradient_matches_finite_differences():
    h = 1e-5
    for seed in range(5):
        u, v = field(seed, scale=0.5), field(seed + 100)
        g = energy_gradient(PROB, u)
        fd = (energy(PROB, u + h * v) - energy(PROB, u - h * v)) / (2 * h)
        assert fd == approx(inner_l2(g, v), rel=1e-6)


def test_gradient_constant_field():
    g = PeriodicGrid(10.0, 64)
    c = 0.35
    u = SpectralField.from_values(g, np.full(g.n, c))
    grad = energy_gradient(PROB, u)
    assert grad.values == approx(np.full(g.n, -PROB.symbol.m_zero * c - c**2), abs=1e-13)


def test_penalization_shape():
    pen = Penalization(1.0)
    assert pen.rho(0.5) == 0.0
    assert pen.rho(1.0) == 0.0
    ts = np.linspace(1.01, 3.9, 40)
    vals = [pen.rho(t) for t in ts]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert pen.rho(3.999) > 1e2
    with pytest.raises(OutOfDomain):
        pen.rho(4.0)
    with pytest.raises(OutOfDomain):
        pen.rho_prime(4.2)


def test_penalized_equals_plain_inside_ball():
    pen = Penalization(1.0)
    u = field(3, scale=0.2)
    assert sobolev_norm(u, 1.0) ** 2 < 1.0
    assert penalized_energy(PROB, pen, u) == energy(PROB, u)
    gp = penalized_gradient(PROB, pen, u)
    g = energy_gradient(PROB, u)
    assert np.array_equal(gp.coeffs, g.coeffs)


def test_penalized_gradient_finite_differences():
    pen = Penalization(0.25)  # small radius so rho is active at test scale
    h = 1e-6
    u = field(8)
    u = u * np.sqrt(0.15 / sobolev_norm(u, 1.0) ** 2)
    t = sobolev_norm(u, 1.0) ** 2
    assert 0.0625 < t < 0.25  # inside the active band (R^2, (2R)^2)
    v = field(9)
    gp = penalized_gradient(PROB, pen, u)
    fd = (penalized_energy(PROB, pen, u + h * v)
          - penalized_energy(PROB, pen, u - h * v)) / (2 * h)
    assert fd == approx(inner_l2(gp, v), rel=1e-5)


def test_reduced_energy_closed_form():
    assert reduced_energy(1, -1.0 / 3.0, quadratic(),
                          SpectralField.zero(PeriodicGrid(10.0, 32))) == 0.0
    w = kdv_soliton(PeriodicGrid(80.0, 1024))
    assert reduced_energy(1, -1.0 / 3.0, quadratic(), w) == approx(
        KDV_REDUCED_ENERGY, abs=1e-12)


def test_reduced_energy_matches_direct_integrand():
    # same value as int( w'^2/12 - w^3/3 ) evaluated by spectral derivative
    # plus node quadrature
    g = PeriodicGrid(60.0, 512)
    w = field(5, g, scale=0.8)
    from solwave.operators import ddx
    from solwave.grid import dealias
    wp = ddx(w)
    direct = (inner_l2(wp, wp) / 12.0
              - (g.period / g.n) * float(np.sum(dealias(w).values ** 3)) / 3.0)
    assert reduced_energy(1, -1.0 / 3.0, quadratic(), w) == approx(direct, rel=1e-10)


def test_reduced_gradient_finite_differences():
    h = 1e-5
    u, v = field(21, scale=0.5), field(22)
    g = reduced_gradient(1, -1.0 / 3.0, quadratic(), u)
    e = lambda w: reduced_energy(1, -1.0 / 3.0, quadratic(), w)
    fd = (e(u + h * v) - e(u - h * v)) / (2 * h)
    assert fd == approx(inner_l2(g, v), rel=1e-6)


def test_weighted_norm_tau_zero():
    u = field(30)
    k = u.grid.wavenumbers
    direct = np.sqrt(np.sum((1.0 + k**4) * np.abs(u.coeffs) ** 2))
    assert weighted_norm(u, 0.0, 0.5, 1, 1.0 / 3.0) == approx(direct, rel=1e-13)


def test_weighted_norm_monotone_in_tau():
    u = field(31)
    mu = 1e-3
    taus = [0.0, 0.3, 0.6, 0.9]
    vals = [weighted_norm(u, t, mu, 1, 1.0 / 3.0) for t in taus]
    assert all(a <= b * (1 + 1e-14) for a, b in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        weighted_norm(u, 1.0, mu, 1, 1.0 / 3.0)


def test_amplitude_scaling_of_energy_parts():
    # under u -> sqrt(a) u the multiplier part scales by a, the cubic part
    # by a^(3/2) (quadratic nonlinearity)
    u = field(40, scale=0.5)
    a = 2.7
    v = np.sqrt(a) * u
    assert quadratic_part(PROB, v) == approx(a * quadratic_part(PROB, u), rel=1e-12)
    assert nonlinear_part(PROB, v) == approx(a**1.5 * nonlinear_part(PROB, u), rel=1e-10)


def test_modulus_problem_assembles():
    Problem(whitham(), signed_modulus(2.5, -1.0))

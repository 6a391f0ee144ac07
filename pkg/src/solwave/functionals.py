"""Energy, momentum, gradients, penalization, and the reduced long-wave energy.

Sign conventions: E(u) = -1/2 <u, Lu> - int N(u) and Q(u) = 1/2 int u^2, so
the constrained stationarity condition E'(u) + nu u = 0 is the travelling-wave
equation nu u = Lu + n(u) with the speed nu as multiplier.

The nonlinear integrand is evaluated nodewise on the dealiased field and the
result of n(.) is dealiased again, which makes the discrete gradient exact for
the discrete energy (quadratic and cubic products alias at high modes
otherwise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ExponentWindow, OutOfDomain
from .grid import PeriodicGrid, SpectralField, inner_l2
from .nonlinearity import Nonlinearity
from .operators import multiplier_values
from .symbols import DispersionSymbol


@dataclass(frozen=True)
class Problem:
    """A dispersive model: multiplier, nonlinearity, and admissible ball radius."""

    symbol: DispersionSymbol
    nonlinearity: Nonlinearity
    ball_radius: float = 1.0

    def __post_init__(self):
        if self.ball_radius <= 0:
            raise ValueError("ball radius must be positive")
        p, j = self.nonlinearity.p, self.symbol.j_star
        if not 2.0 <= p < 4.0 * j + 1.0:
            raise ExponentWindow(
                f"p = {p:g} outside [2, {4 * j + 1}) for j_star = {j}")


@dataclass(frozen=True)
class Penalization:
    """Barrier rho on t = ||u||_{H^1}^2: zero for t <= R^2, smooth, increasing,
    divergent as t -> (2R)^2.  Shape: s -> exp(-1/s)/(1-s) on the rescaled
    coordinate s = (t - R^2)/(3 R^2)."""

    radius: float = 1.0

    def _s(self, t: float) -> float:
        r2 = self.radius**2
        return (t - r2) / (3.0 * r2)

    def rho(self, t: float) -> float:
        if t >= (2.0 * self.radius) ** 2:
            raise OutOfDomain(f"||u||_H1^2 = {t:g} outside [0, (2R)^2)")
        s = self._s(t)
        if s <= 0.0:
            return 0.0
        return math.exp(-1.0 / s) / (1.0 - s)

    def rho_prime(self, t: float) -> float:
        if t >= (2.0 * self.radius) ** 2:
            raise OutOfDomain(f"||u||_H1^2 = {t:g} outside [0, (2R)^2)")
        s = self._s(t)
        if s <= 0.0:
            return 0.0
        g = math.exp(-1.0 / s)
        return (g / s**2 / (1.0 - s) + g / (1.0 - s) ** 2) / (3.0 * self.radius**2)


class DiscreteFunctional:
    """Energy/gradient engine for one (multiplier values, nonlinearity, grid)
    triple, working directly on coefficient arrays.  Shared by the public
    functional evaluations, the minimizer, and the fixed-point iteration."""

    def __init__(self, grid: PeriodicGrid, mvals: np.ndarray, nl: Nonlinearity,
                 penalization: Penalization | None = None,
                 precond: np.ndarray | None = None):
        self.grid = grid
        self.mvals = np.asarray(mvals, dtype=float)
        self.nl = nl
        self.pen = penalization
        self.precond = precond
        self.mask = grid.dealias_mask
        self.h1_weight = 1.0 + grid.wavenumbers**2
        self.quad_weight = grid.period / grid.n

    def values_dealiased(self, c: np.ndarray) -> np.ndarray:
        return self.grid.to_values(c * self.mask)

    def h1_sq(self, c: np.ndarray) -> float:
        return float(np.sum(self.h1_weight * np.abs(c) ** 2))

    def energy(self, c: np.ndarray, infinite_outside: bool = False) -> float:
        quad = -0.5 * float(np.sum(self.mvals * np.abs(c) ** 2))
        v = self.values_dealiased(c)
        e = quad - self.quad_weight * float(np.sum(self.nl.primitive(v)))
        if self.pen is not None:
            t = self.h1_sq(c)
            if infinite_outside and t >= (2.0 * self.pen.radius) ** 2:
                return math.inf
            e += self.pen.rho(t)
        return e

    def gradient(self, c: np.ndarray) -> np.ndarray:
        v = self.values_dealiased(c)
        g = -self.mvals * c - self.mask * self.grid.to_coeffs(self.nl.n(v))
        if self.pen is not None:
            g = g + (2.0 * self.pen.rho_prime(self.h1_sq(c))) * self.h1_weight * c
        return g

    def nonlinear_coeffs(self, c: np.ndarray) -> np.ndarray:
        """Dealiased coefficients of n(u); the discrete travelling-wave
        equation solved here is nu*c = m*c + nonlinear_coeffs(c)."""
        return self.mask * self.grid.to_coeffs(self.nl.n(self.values_dealiased(c)))

    def residual(self, c: np.ndarray, nu: float) -> float:
        r = (nu - self.mvals) * c - self.nonlinear_coeffs(c)
        return float(np.sqrt(np.sum(np.abs(r) ** 2)))


def discretize(prob: Problem, grid: PeriodicGrid,
               penalization: Penalization | None = None) -> DiscreteFunctional:
    return DiscreteFunctional(grid, multiplier_values(prob.symbol, grid),
                              prob.nonlinearity, penalization)


def reduced_multiplier(j_star: int, d2j_star: float, grid: PeriodicGrid) -> np.ndarray:
    """Polynomial stand-in d2j_star k^(2 j_star)/(2 j_star)! whose energy is the
    reduced long-wave functional."""
    k = grid.wavenumbers
    return d2j_star * k ** (2 * j_star) / math.factorial(2 * j_star)


def discretize_reduced(j_star: int, d2j_star: float, nl: Nonlinearity,
                       grid: PeriodicGrid) -> DiscreteFunctional:
    """Engine for the reduced problem; the gradient direction is preconditioned
    by (1 + k^(2 j_star))^-1 since the polynomial multiplier is unbounded."""
    lead = Nonlinearity(nl.name + ":leading", nl.p, nl.cp, nl.kind)
    mvals = reduced_multiplier(j_star, d2j_star, grid)
    precond = 1.0 / (1.0 + grid.wavenumbers ** (2 * j_star))
    return DiscreteFunctional(grid, mvals, lead, precond=precond)


# public evaluations ----------------------------------------------------------


def momentum(u: SpectralField) -> float:
    """Q(u) = 1/2 int u^2 over one period."""
    return 0.5 * float(np.sum(np.abs(u.coeffs) ** 2))


def energy(prob: Problem, u: SpectralField) -> float:
    return discretize(prob, u.grid).energy(u.coeffs)


def energy_gradient(prob: Problem, u: SpectralField) -> SpectralField:
    return SpectralField.from_coeffs(u.grid, discretize(prob, u.grid).gradient(u.coeffs))


def penalized_energy(prob: Problem, pen: Penalization, u: SpectralField) -> float:
    return discretize(prob, u.grid, pen).energy(u.coeffs)


def penalized_gradient(prob: Problem, pen: Penalization, u: SpectralField) -> SpectralField:
    return SpectralField.from_coeffs(u.grid, discretize(prob, u.grid, pen).gradient(u.coeffs))


def reduced_energy(j_star: int, d2j_star: float, nl: Nonlinearity,
                   w: SpectralField) -> float:
    """-int( m^(2j*)(0)/(2 (2j*)!) (w^(j*))^2 + N_(p+1)(w) ), evaluated spectrally."""
    return discretize_reduced(j_star, d2j_star, nl, w.grid).energy(w.coeffs)


def reduced_gradient(j_star: int, d2j_star: float, nl: Nonlinearity,
                     w: SpectralField) -> SpectralField:
    eng = discretize_reduced(j_star, d2j_star, nl, w.grid)
    return SpectralField.from_coeffs(w.grid, eng.gradient(w.coeffs))


def weighted_norm(u: SpectralField, tau: float, mu: float, j_star: int,
                  beta: float) -> float:
    """sqrt( int u^2 + mu^(-4 j_star tau beta) int (u^(2 j_star))^2 )."""
    if tau >= 1:
        raise ValueError("tau must be below 1")
    if mu <= 0:
        raise ValueError("mu must be positive")
    k = u.grid.wavenumbers
    c2 = np.abs(u.coeffs) ** 2
    deriv = float(np.sum(k ** (4 * j_star) * c2))
    return float(np.sqrt(np.sum(c2) + mu ** (-4.0 * j_star * tau * beta) * deriv))


def quadratic_part(prob: Problem, u: SpectralField) -> float:
    """-1/2 <u, Lu>, the multiplier half of the energy."""
    mvals = multiplier_values(prob.symbol, u.grid)
    return -0.5 * float(np.sum(mvals * np.abs(u.coeffs) ** 2))


def nonlinear_part(prob: Problem, u: SpectralField) -> float:
    """-int N(u) with dealiased nodewise quadrature."""
    return energy(prob, u) - quadratic_part(prob, u)


__all__ = [
    "Problem", "Penalization", "DiscreteFunctional", "discretize",
    "discretize_reduced", "reduced_multiplier", "momentum", "energy",
    "energy_gradient", "penalized_energy", "penalized_gradient",
    "reduced_energy", "reduced_gradient", "weighted_norm",
    "quadratic_part", "nonlinear_part", "inner_l2",
]

"""Nonlinearities n = n_p + n_r with primitives.

The leading part n_p is c_p |x|^p (SIGNED_MODULUS), c_p x^p for odd
integer p > 0 with c_p > 0 (ODD_POWER), or c_p x^p for even integer p
(PURE_POWER; the quadratic case n(u) = u^2 lives here).  The optional
remainder must vanish faster, n_r = O(|x|^(p+delta)) near zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .errors import ConfigError, UnsupportedRegularity

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(48)


class Kind(Enum):
    SIGNED_MODULUS = "modulus"
    ODD_POWER = "oddpower"
    PURE_POWER = "power"


@dataclass(frozen=True)
class Remainder:
    """Higher-order part n_r with growth exponent delta.

    ``primitive`` may be omitted; it is then computed by fixed Gauss-Legendre
    quadrature on [0, x], which is accurate for smooth remainders at the
    amplitudes this package works at (|x| of order one).
    ``derivatives`` holds n_r', n_r'', ... as far as the caller can supply.
    """

    func: Callable
    delta: float
    primitive: Callable | None = None
    derivatives: tuple[Callable, ...] = ()

    def antiderivative(self, x):
        if self.primitive is not None:
            return self.primitive(x)
        x = np.asarray(x, dtype=float)
        # int_0^x f = (x/2) sum w_i f(x (t_i + 1)/2), vectorized over x
        pts = 0.5 * np.multiply.outer(x, _GL_NODES + 1.0)
        return 0.5 * x * np.sum(_GL_WEIGHTS * self.func(pts), axis=-1)


@dataclass(frozen=True)
class Nonlinearity:
    name: str
    p: float
    cp: float
    kind: Kind
    remainder: Remainder | None = None

    def __post_init__(self):
        if self.cp == 0:
            raise ValueError("leading coefficient must be nonzero")
        if self.p < 2:
            raise ValueError("leading exponent must be at least 2")
        if self.kind is Kind.ODD_POWER:
            if self.p != int(self.p) or int(self.p) % 2 == 0:
                raise ValueError("ODD_POWER needs an odd integer exponent")
            if self.cp <= 0:
                raise ValueError("ODD_POWER needs a positive leading coefficient")
        if self.kind is Kind.PURE_POWER and (self.p != int(self.p) or int(self.p) % 2):
            raise ValueError("PURE_POWER needs an even integer exponent")

    # leading part ----------------------------------------------------------

    def leading(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind is Kind.SIGNED_MODULUS:
            return self.cp * np.abs(x) ** self.p
        return self.cp * x ** self.p

    def leading_prime(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind is Kind.SIGNED_MODULUS:
            return self.cp * self.p * x * np.abs(x) ** (self.p - 2.0)
        return self.cp * self.p * x ** (self.p - 1.0)

    def leading_primitive(self, x):
        """N_(p+1): the primitive of the leading part vanishing at 0."""
        x = np.asarray(x, dtype=float)
        if self.kind is Kind.SIGNED_MODULUS:
            return self.cp * x * np.abs(x) ** self.p / (self.p + 1.0)
        return self.cp * x ** (self.p + 1.0) / (self.p + 1.0)

    # full nonlinearity ------------------------------------------------------

    def n(self, x):
        out = self.leading(x)
        if self.remainder is not None:
            out = out + self.remainder.func(np.asarray(x, dtype=float))
        return out

    def n_prime(self, x):
        out = self.leading_prime(x)
        if self.remainder is not None:
            if not self.remainder.derivatives:
                raise UnsupportedRegularity("remainder derivative not supplied")
            out = out + self.remainder.derivatives[0](np.asarray(x, dtype=float))
        return out

    def derivative(self, order: int) -> Callable:
        """n^(order) as a callable; raises if the remainder lacks regularity data."""
        if order < 1:
            raise ValueError("order must be positive")
        if self.kind is Kind.SIGNED_MODULUS and self.p != int(self.p) and self.p - order < 0:
            raise UnsupportedRegularity(
                f"|x|^{self.p:g} admits only {int(self.p)} derivatives at 0")
        if self.remainder is None:
            return lambda x: self._leading_derivative(order, x)
        if len(self.remainder.derivatives) < order:
            raise UnsupportedRegularity(
                f"remainder supplies {len(self.remainder.derivatives)} derivatives, "
                f"order {order} requested")
        rd = self.remainder.derivatives[order - 1]
        return lambda x: self._leading_derivative(order, x) + rd(np.asarray(x, dtype=float))

    def _leading_derivative(self, order: int, x):
        x = np.asarray(x, dtype=float)
        q = self.p - order
        fac = self.cp * math.prod(self.p - i for i in range(order))
        if self.kind is Kind.SIGNED_MODULUS:
            if q < 0:
                raise UnsupportedRegularity("derivative order exceeds modulus smoothness")
            return fac * np.sign(x) ** order * np.abs(x) ** q
        if q < 0:
            return np.zeros_like(x)
        return fac * x ** q

    def primitive(self, x):
        """N(x) = int_0^x n, vanishing at the origin."""
        out = self.leading_primitive(x)
        if self.remainder is not None:
            out = out + self.remainder.antiderivative(x)
        return out


# bundled constructors -------------------------------------------------------


def quadratic() -> Nonlinearity:
    """n(u) = u^2, matching the advective form 2 u u_x = (u^2)_x."""
    return Nonlinearity("quadratic", 2.0, 1.0, Kind.PURE_POWER)


def signed_modulus(p: float, cp: float) -> Nonlinearity:
    return Nonlinearity(f"modulus:{p:g},{cp:g}", float(p), float(cp), Kind.SIGNED_MODULUS)


def odd_power(p: int, cp: float) -> Nonlinearity:
    return Nonlinearity(f"oddpower:{p:g},{cp:g}", float(p), float(cp), Kind.ODD_POWER)


def polynomial(coeffs: dict[int, float]) -> Nonlinearity:
    """n(x) = sum_d coeffs[d] x^d with the lowest degree as the leading part.

    Degrees below 2 are rejected (n must vanish to second order at 0).
    """
    degs = sorted(d for d, c in coeffs.items() if c != 0.0)
    if not degs:
        raise ValueError("all coefficients vanish")
    if degs[0] < 2:
        raise ValueError("polynomial nonlinearity needs degree >= 2 terms only")
    p = degs[0]
    cp = coeffs[p]
    kind = Kind.PURE_POWER if p % 2 == 0 else Kind.ODD_POWER
    rest = {d: coeffs[d] for d in degs[1:]}
    remainder = None
    if rest:
        delta = float(degs[1] - p)

        def rem(x, rest=rest):
            return sum(c * x**d for d, c in rest.items())

        def rem_prime(x, rest=rest):
            return sum(c * d * x ** (d - 1) for d, c in rest.items())

        def rem_primitive(x, rest=rest):
            return sum(c * x ** (d + 1) / (d + 1) for d, c in rest.items())

        derivs = []
        for order in range(1, 9):
            def dk(x, rest=rest, order=order):
                return sum(c * math.prod(d - i for i in range(order)) * x ** (d - order)
                           for d, c in rest.items() if d >= order)
            derivs.append(dk)
        remainder = Remainder(rem, delta, rem_primitive, tuple(derivs))
    name = "poly:" + ",".join(f"{coeffs.get(d, 0.0):g}" for d in range(2, degs[-1] + 1))
    return Nonlinearity(name, float(p), float(cp), kind, remainder)


def nonlinearity_from_name(name: str) -> Nonlinearity:
    if name == "quadratic":
        return quadratic()
    try:
        if name.startswith("modulus:"):
            p, cp = (float(v) for v in name.split(":", 1)[1].split(","))
            return signed_modulus(p, cp)
        if name.startswith("oddpower:"):
            p, cp = (float(v) for v in name.split(":", 1)[1].split(","))
            return odd_power(int(p), cp)
        if name.startswith("poly:"):
            cs = [float(v) for v in name.split(":", 1)[1].split(",")]
            return polynomial({d + 2: c for d, c in enumerate(cs)})
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad nonlinearity spec {name!r}: {exc}", field="nonlinearity")
    raise ConfigError(f"unknown nonlinearity {name!r}", field="nonlinearity")

"""Long-wave scaling, KdV reference objects, and translation-invariant distance.

The substitution u(x) = mu^alpha w(mu^beta x) with 2 alpha - beta = 1 maps the
unit-momentum frame onto momentum mu.  On matched grids (same point count,
periods in ratio mu^-beta) the map is an exact relabeling of samples, so the
constraint transforms without quadrature error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ExponentWindow, TailTooLarge
from .grid import PeriodicGrid, SpectralField, require_same_grid, tail_max

KDV_AMPLITUDE = 1.5 ** (2.0 / 3.0)
KDV_DECAY = 1.5 ** (1.0 / 3.0)


@dataclass(frozen=True)
class ScalingExponents:
    """alpha (amplitude), beta (stretch), gamma (speed correction) with
    2 alpha - beta = 1 and (p - 1) alpha = 2 j_star beta = gamma."""

    alpha: float
    beta: float
    gamma: float


def exponents(j_star: int, p: float) -> ScalingExponents:
    if not 2.0 <= p < 4.0 * j_star + 1.0:
        raise ExponentWindow(f"p = {p:g} outside [2, {4 * j_star + 1}) for j_star = {j_star}")
    denom = 4.0 * j_star + 1.0 - p
    alpha = 2.0 * j_star / denom
    beta = (p - 1.0) / denom
    return ScalingExponents(alpha, beta, 2.0 * j_star * beta)


def scale_up(mu: float, exps: ScalingExponents, w: SpectralField,
             period_hint: float | None = None) -> SpectralField:
    """mu^alpha w(mu^beta x) on the stretched grid (period P/mu^beta, same N).

    Q(scale_up(w)) = mu Q(w) exactly.  ``period_hint`` snaps the target period
    when a separately computed value is known to agree to round-off.
    """
    if mu <= 0:
        raise ValueError("mu must be positive")
    period = w.grid.period * mu ** (-exps.beta)
    period = _snap(period, period_hint)
    grid = PeriodicGrid(period, w.grid.n)
    return SpectralField.from_values(grid, mu**exps.alpha * w.values)


def scale_down(mu: float, exps: ScalingExponents, u: SpectralField,
               period_hint: float | None = None) -> SpectralField:
    """Inverse of scale_up: mu^-alpha u(mu^-beta x) on the compressed grid."""
    if mu <= 0:
        raise ValueError("mu must be positive")
    period = u.grid.period * mu**exps.beta
    period = _snap(period, period_hint)
    grid = PeriodicGrid(period, u.grid.n)
    return SpectralField.from_values(grid, mu ** (-exps.alpha) * u.values)


def _snap(period: float, hint: float | None) -> float:
    if hint is not None and abs(period - hint) <= 1e-9 * hint:
        return hint
    return period


def kdv_profile(x: np.ndarray, polarity: int = 1) -> np.ndarray:
    """(3/2)^(2/3) sech^2((3/2)^(1/3) x): the unit-momentum KdV ground state."""
    return polarity * KDV_AMPLITUDE / np.cosh(KDV_DECAY * x) ** 2


def kdv_soliton(grid: PeriodicGrid, tail_tol: float = 1e-12) -> SpectralField:
    """KdV ground state sampled on the grid; the period must contain its decay."""
    w = SpectralField.from_values(grid, kdv_profile(grid.nodes))
    t = tail_max(w)
    if t > tail_tol:
        raise TailTooLarge(f"period {grid.period:g} too small: tail {t:.2e}")
    return w


def kdv_speed() -> float:
    """Multiplier of the unit-momentum KdV ground state, (2/3)^(1/3)."""
    return (2.0 / 3.0) ** (1.0 / 3.0)


def kdv_energy() -> float:
    """Reduced energy of the KdV ground state, -(4/15) (3/2)^(5/3)."""
    return -(4.0 / 15.0) * 1.5 ** (5.0 / 3.0)


def orbit_distance(u: SpectralField, v: SpectralField,
                   s_norm: float = 0.0) -> tuple[float, float]:
    """min over y of ||u - v(. + y)||_{H^s} and the minimizing y.

    The correlation is scanned on the node lattice spectrally, then the shift
    is refined by minimizing the distance itself, so exact translates come out
    at round-off rather than at the cancellation floor of the correlation form.
    """
    require_same_grid(u, v)
    g = u.grid
    k = g.wavenumbers
    w = (1.0 + k**2) ** s_norm
    z = w * u.coeffs * np.conj(v.coeffs)
    corr = np.fft.fft(z).real  # corr[l] = sum_m z_m exp(-2 pi i m l / N)
    l0 = int(np.argmax(corr))
    y0 = l0 * g.spacing

    def dist_at(y: float) -> float:
        d = u.coeffs - v.coeffs * np.exp(1j * k * y)
        return float(np.sqrt(np.sum(w * np.abs(d) ** 2)))

    # Newton on the correlation derivative: the correlation is a band-limited
    # trigonometric polynomial, concave at its peak, so this polishes the
    # lattice argmax to round-off in a few steps
    delta = 0.0
    for _ in range(60):
        phase = np.exp(-1j * k * (y0 + delta))
        c1 = float(np.real(np.sum(-1j * k * z * phase)))
        c2 = float(np.real(np.sum(-(k**2) * z * phase)))
        if not np.isfinite(c1) or c2 >= 0:
            break
        upd = -c1 / c2
        if abs(upd) > g.spacing:
            upd = np.copysign(g.spacing, upd)
        delta += upd
        if abs(delta) > 2 * g.spacing:  # safeguard: lattice argmax was sharper
            delta = 0.0
            break
        if abs(upd) < 1e-16 * max(1.0, abs(y0)):
            break
    y = y0 + delta
    best = min((dist_at(y), y), (dist_at(y0), y0))
    d, y = best
    # report the shift in (-P/2, P/2]
    y = y - g.period * round(y / g.period)
    return d, y


def align(u: SpectralField, v: SpectralField, s_norm: float = 0.0) -> tuple[SpectralField, float, float]:
    """Translate v onto u; returns (shifted v, distance, shift)."""
    d, y = orbit_distance(u, v, s_norm)
    shifted = SpectralField.from_coeffs(
        v.grid, v.coeffs * np.exp(1j * v.grid.wavenumbers * y))
    return shifted, d, y

"""Uniform periodic grids with paired physical/spectral representations.

The Fourier convention is unitary in L2 over one period,

    u(x) = P**-0.5 * sum_m c_m exp(2j*pi*m*x/P),

so sum_m |c_m|**2 equals the squared L2 norm over the period and
closed-form integrals of band-limited fields are reproduced to round-off.
Coefficients are stored in FFT order; the node offset -P/2 is absorbed
into an exact (+-1) phase so that c_m are coefficients about x, not about
the array index.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import GridMismatch, ResolutionLoss, TailTooLarge


@dataclass(frozen=True)
class PeriodicGrid:
    """Nodes x_j = -P/2 + j*P/N, wavenumbers k_m = 2*pi*m/P, m in [-N/2, N/2)."""

    period: float
    n: int

    def __post_init__(self):
        if self.period <= 0:
            raise ValueError("period must be positive")
        n = self.n
        if n < 16 or n & (n - 1):
            raise ValueError("n must be a power of two, at least 16")

    @property
    def spacing(self) -> float:
        return self.period / self.n

    @cached_property
    def nodes(self) -> np.ndarray:
        x = -0.5 * self.period + self.spacing * np.arange(self.n)
        x.setflags(write=False)
        return x

    @cached_property
    def modes(self) -> np.ndarray:
        m = np.fft.fftfreq(self.n, d=1.0 / self.n).astype(np.int64)
        m.setflags(write=False)
        return m

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        k = (2.0 * np.pi / self.period) * self.modes
        k.setflags(write=False)
        return k

    @cached_property
    def _phase(self) -> np.ndarray:
        # exp(-i k_m x_0) with x_0 = -P/2 is exactly (-1)^m
        p = np.where(self.modes % 2 == 0, 1.0, -1.0)
        p.setflags(write=False)
        return p

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        # 2/3 rule: keep |m| <= N/3
        mask = (np.abs(self.modes) <= self.n // 3).astype(float)
        mask.setflags(write=False)
        return mask

    @cached_property
    def ik(self) -> np.ndarray:
        # Nyquist mode of an odd multiplier breaks realness, zero it
        v = 1j * self.wavenumbers.copy()
        v[self.modes == -self.n // 2] = 0.0
        v.setflags(write=False)
        return v

    def to_coeffs(self, values: np.ndarray) -> np.ndarray:
        return (np.sqrt(self.period) / self.n) * self._phase * np.fft.fft(values)

    def to_values(self, coeffs: np.ndarray) -> np.ndarray:
        return (self.n / np.sqrt(self.period)) * np.fft.ifft(coeffs * self._phase).real


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SpectralField:
    """Real periodic field with samples and Fourier coefficients kept in sync."""

    grid: PeriodicGrid
    values: np.ndarray
    coeffs: np.ndarray

    @classmethod
    def from_values(cls, grid: PeriodicGrid, values) -> "SpectralField":
        v = np.asarray(values, dtype=float)
        if v.shape != (grid.n,):
            raise ValueError(f"expected {grid.n} samples, got {v.shape}")
        return cls(grid, _frozen(v.copy()), _frozen(grid.to_coeffs(v)))

    @classmethod
    def from_coeffs(cls, grid: PeriodicGrid, coeffs) -> "SpectralField":
        c = np.asarray(coeffs, dtype=complex)
        if c.shape != (grid.n,):
            raise ValueError(f"expected {grid.n} coefficients, got {c.shape}")
        return cls(grid, _frozen(grid.to_values(c)), _frozen(c.copy()))

    @classmethod
    def zero(cls, grid: PeriodicGrid) -> "SpectralField":
        return cls.from_values(grid, np.zeros(grid.n))

    def __add__(self, other: "SpectralField") -> "SpectralField":
        require_same_grid(self, other)
        return SpectralField(self.grid, _frozen(self.values + other.values),
                             _frozen(self.coeffs + other.coeffs))

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        require_same_grid(self, other)
        return SpectralField(self.grid, _frozen(self.values - other.values),
                             _frozen(self.coeffs - other.coeffs))

    def __mul__(self, a: float) -> "SpectralField":
        a = float(a)
        return SpectralField(self.grid, _frozen(a * self.values), _frozen(a * self.coeffs))

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralField":
        return self * -1.0


def require_same_grid(u: SpectralField, v: SpectralField):
    if u.grid != v.grid:
        raise GridMismatch(f"grids differ: {u.grid} vs {v.grid}")


def inner_l2(u: SpectralField, v: SpectralField) -> float:
    """(P/N) sum_j u_j v_j; trapezoid is exact for band-limited integrands."""
    require_same_grid(u, v)
    g = u.grid
    return float((g.period / g.n) * np.dot(u.values, v.values))


def l2_norm(u: SpectralField) -> float:
    return float(np.sqrt(np.sum(np.abs(u.coeffs) ** 2)))


def sobolev_norm(u: SpectralField, s: float) -> float:
    """Discrete H^s norm, sqrt(sum (1+k^2)^s |c|^2)."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    w = (1.0 + u.grid.wavenumbers**2) ** s
    return float(np.sqrt(np.sum(w * np.abs(u.coeffs) ** 2)))


def sup_norm(u: SpectralField) -> float:
    return float(np.max(np.abs(u.values)))


def dealias(u: SpectralField) -> SpectralField:
    return SpectralField.from_coeffs(u.grid, u.coeffs * u.grid.dealias_mask)


def shift(u: SpectralField, y: float) -> SpectralField:
    """Translate by y: u(. + y), exact for band-limited fields."""
    return SpectralField.from_coeffs(u.grid, u.coeffs * np.exp(1j * u.grid.wavenumbers * y))


def reflect(u: SpectralField) -> SpectralField:
    """Spatial reflection x -> -x; exact on the symmetric node set."""
    idx = (-np.arange(u.grid.n)) % u.grid.n
    return SpectralField.from_values(u.grid, u.values[idx])


def roll(u: SpectralField, j: int) -> SpectralField:
    """Cyclic shift by j nodes (exact translation by j*h)."""
    return SpectralField.from_values(u.grid, np.roll(u.values, j))


def tail_max(u: SpectralField) -> float:
    """max |u| over the outer tenth of the period (|x| >= 0.45 P).

    Gate for treating the periodic field as a line-solitary surrogate.
    """
    mask = np.abs(u.grid.nodes) >= 0.45 * u.grid.period
    return float(np.max(np.abs(u.values[mask])))


def spectral_tail(u: SpectralField) -> float:
    """Relative magnitude of the top decile of modes; resolution monitor."""
    m = np.abs(u.grid.modes)
    band = m >= int(0.45 * u.grid.n)
    top = float(np.max(np.abs(u.coeffs[band])))
    full = float(np.max(np.abs(u.coeffs)))
    return top / full if full > 0 else 0.0


def resample(u: SpectralField, target: PeriodicGrid, tail_tol: float = 1e-10) -> SpectralField:
    """Move a field to a finer or larger grid.

    Same period: refinement by zero-padding coefficients (exact).
    Larger period with identical spacing: embed the samples centered in the
    new period, zeros elsewhere; requires the boundary samples to be below
    ``tail_tol`` since the field is cut at +-P/2.
    """
    g = u.grid
    if target == g:
        return u
    if target.period == g.period:
        if target.n < g.n:
            raise GridMismatch("refinement only: target must not have fewer points")
        return _pad_modes(u, target)
    if target.period > g.period:
        if abs(target.spacing - g.spacing) > 1e-12 * g.spacing:
            raise GridMismatch("enlargement requires identical node spacing")
        if (target.n - g.n) % 2:
            raise GridMismatch("enlargement requires an even number of added nodes")
        t = tail_max(u)
        if t > tail_tol:
            raise TailTooLarge(f"boundary samples {t:.3e} exceed {tail_tol:.1e}")
        pad = (target.n - g.n) // 2
        v = np.zeros(target.n)
        v[pad:pad + g.n] = u.values
        return SpectralField.from_values(target, v)
    raise GridMismatch("cannot shrink the period")


def _pad_modes(u: SpectralField, target: PeriodicGrid) -> SpectralField:
    c = np.zeros(target.n, dtype=complex)
    src = u.grid.modes
    c[src % target.n] = u.coeffs
    return SpectralField.from_coeffs(target, c)


def change_points(u: SpectralField, n: int, drop_tol: float = 1e-8) -> SpectralField:
    """Re-express on the same period with n points, padding or truncating modes.

    Truncation is gated: the dropped coefficient energy must stay below
    ``drop_tol`` relative to the total.
    """
    g = u.grid
    if n == g.n:
        return u
    target = PeriodicGrid(g.period, n)
    if n > g.n:
        return _pad_modes(u, target)
    keep = np.abs(g.modes) < n // 2
    dropped = float(np.sqrt(np.sum(np.abs(u.coeffs[~keep]) ** 2)))
    total = float(np.sqrt(np.sum(np.abs(u.coeffs) ** 2)))
    if total > 0 and dropped > drop_tol * total:
        raise ResolutionLoss(f"truncation would drop {dropped / total:.2e} of the field")
    c = np.zeros(n, dtype=complex)
    c[g.modes[keep] % n] = u.coeffs[keep]
    return SpectralField.from_coeffs(target, c)


def band_noise(grid: PeriodicGrid, band: int, rng: np.random.Generator) -> SpectralField:
    """Random real field with modes |m| <= band, normalized to unit L2 norm."""
    band = min(band, grid.n // 2 - 1)
    c = np.zeros(grid.n, dtype=complex)
    re = rng.standard_normal(band)
    im = rng.standard_normal(band)
    for m in range(1, band + 1):
        c[m] = re[m - 1] + 1j * im[m - 1]
        c[-m] = np.conj(c[m])
    c[0] = rng.standard_normal()
    u = SpectralField.from_coeffs(grid, c)
    return u * (1.0 / l2_norm(u))

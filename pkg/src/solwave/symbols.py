"""Dispersion multipliers m(k): bundled families, Taylor data, validation.

A multiplier must be even, smooth, decaying (negative order), with a strict
positive global maximum at k = 0 and leading even Taylor term
m(0) + d2j_star * k**(2*j_star) / (2*j_star)!.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .errors import ConfigError, SymbolViolation


@dataclass(frozen=True)
class DispersionSymbol:
    name: str
    eval: Callable[[np.ndarray], np.ndarray]
    m_zero: float
    decay_order: float          # classical-symbol order, must be negative
    j_star: int                 # first non-vanishing even derivative is 2*j_star
    d2j_star: float             # m^(2 j_star)(0), strictly negative
    k_cut: float                # m(k) <= m_zero/2 for |k| >= k_cut

    def __post_init__(self):
        if self.m_zero <= 0:
            raise ValueError("m(0) must be positive")
        if self.d2j_star >= 0:
            raise ValueError("leading Taylor coefficient must be negative")
        if self.decay_order >= 0:
            raise ValueError("symbol order must be negative (smoothing operator)")
        if self.j_star < 1:
            raise ValueError("j_star must be a positive integer")


def cutoff_wavenumber(eval_m, m_zero: float, k_max: float = 100.0,
                      samples: int = 10_000) -> float:
    """Smallest k beyond which m stays at or below m_zero/2, by sampling
    then bisection on the last crossing."""
    ks = np.linspace(0.0, k_max, samples)
    vals = np.asarray(eval_m(ks), dtype=float)
    above = np.nonzero(vals > 0.5 * m_zero)[0]
    if len(above) == 0:
        return 0.0
    i = int(above[-1])
    if i + 1 >= len(ks):
        raise ValueError("m(k) still exceeds m(0)/2 at k_max; increase k_max")
    return float(brentq(lambda k: float(eval_m(k)) - 0.5 * m_zero,
                        ks[i], ks[i + 1], xtol=1e-12, rtol=1e-15))


def _whitham_eval(k):
    k = np.asarray(k, dtype=float)
    out = np.empty_like(k)
    small = np.abs(k) < 1e-2
    ks = k[small]
    # Maclaurin series of tanh(k)/k through k^6, then the square root;
    # avoids 0/0 and keeps full double accuracy below the switch radius
    t = 1.0 - ks**2 / 3.0 + (2.0 / 15.0) * ks**4 - (17.0 / 315.0) * ks**6
    out[small] = np.sqrt(t)
    kb = k[~small]
    out[~small] = np.sqrt(np.tanh(kb) / kb)
    if out.ndim == 0:
        return float(out)
    return out


def whitham() -> DispersionSymbol:
    """sqrt(tanh(k)/k): the water-wave phase speed in scaled units."""
    return DispersionSymbol(
        name="whitham",
        eval=_whitham_eval,
        m_zero=1.0,
        decay_order=-0.5,
        j_star=1,
        d2j_star=-1.0 / 3.0,
        k_cut=cutoff_wavenumber(_whitham_eval, 1.0),
    )


def gaussian() -> DispersionSymbol:
    def m(k):
        k = np.asarray(k, dtype=float)
        return np.exp(-(k**2))

    return DispersionSymbol("gaussian", m, 1.0, -2.0, 1, -2.0,
                            cutoff_wavenumber(m, 1.0, k_max=10.0))


def rational(s: float) -> DispersionSymbol:
    """(1 + k^2)^(-s) for s > 0."""
    if s <= 0:
        raise ValueError("rational symbol needs s > 0")

    def m(k):
        k = np.asarray(k, dtype=float)
        return (1.0 + k**2) ** (-s)

    k_cut = math.sqrt(2.0 ** (1.0 / s) - 1.0)
    return DispersionSymbol(f"rational:{s:g}", m, 1.0, -2.0 * s, 1, -2.0 * s, k_cut)


def symbol_from_name(name: str) -> DispersionSymbol:
    if name == "whitham":
        return whitham()
    if name == "gaussian":
        return gaussian()
    if name.startswith("rational:"):
        try:
            s = float(name.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"bad rational symbol spec {name!r}", field="symbol")
        return rational(s)
    raise ConfigError(f"unknown symbol {name!r}", field="symbol")


def taylor_remainder(sym: DispersionSymbol, k) -> float | np.ndarray:
    """m(k) minus its leading even Taylor polynomial at 0."""
    k = np.asarray(k, dtype=float)
    j2 = 2 * sym.j_star
    r = sym.eval(k) - sym.m_zero - sym.d2j_star * k**j2 / math.factorial(j2)
    if r.ndim == 0:
        return float(r)
    return r


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst_k: float
    detail: str


@dataclass(frozen=True)
class SymbolReport:
    symbol: str
    checks: tuple[CheckResult, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def raise_if_failed(self):
        for c in self.checks:
            if not c.passed:
                raise SymbolViolation(
                    f"{c.name} at k = {c.worst_k:.6g}: {c.detail}",
                    check=c.name, k=c.worst_k)

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            status = "pass" if c.passed else "FAIL"
            out.append(f"{status:4s}  {c.name:22s} {c.detail}")
        return out


def _fd_even_derivative(eval_m, order: int, step: float) -> float:
    """Central finite difference of even order at k = 0."""
    acc = 0.0
    for i in range(order + 1):
        acc += (-1) ** i * math.comb(order, i) * float(eval_m((order / 2 - i) * step))
    return acc / step**order


def validate_symbol(sym: DispersionSymbol, k_max: float = 100.0,
                    n_samples: int = 10_000) -> SymbolReport:
    """Evaluate the multiplier invariants on a uniform sample of [-k_max, k_max]."""
    if k_max <= 0:
        raise ValueError("k_max must be positive")
    if n_samples < 16:
        raise ValueError("need at least 16 samples")
    ks = np.linspace(-k_max, k_max, n_samples)
    vals = np.asarray(sym.eval(ks), dtype=float)
    checks = []

    # evenness
    diff = np.abs(vals - vals[::-1])
    i = int(np.argmax(diff))
    checks.append(CheckResult("NOT_EVEN", bool(diff[i] <= 1e-12), float(ks[i]),
                              f"max |m(k)-m(-k)| = {diff[i]:.3e}"))

    # strict positive global maximum at 0
    interior = np.abs(ks) > 1e-14
    excess = vals[interior] - sym.m_zero
    j = int(np.argmax(excess))
    worst = float(ks[interior][j])
    checks.append(CheckResult("NO_STRICT_MAX", bool(excess[j] < 0), worst,
                              f"max m(k)-m(0) off origin = {excess[j]:.3e}"))

    checks.append(CheckResult("NONPOSITIVE_MZERO", sym.m_zero > 0, 0.0,
                              f"m(0) = {sym.m_zero:g}"))
    checks.append(CheckResult("NONNEGATIVE_D2JSTAR", sym.d2j_star < 0, 0.0,
                              f"m^(2j*)(0) = {sym.d2j_star:g}"))

    # declared Taylor data vs finite differences (analytic derivatives of
    # order 2 j_star are ill-conditioned to estimate, so this is a coarse check)
    fd = _fd_even_derivative(sym.eval, 2 * sym.j_star, 1e-3)
    rel = abs(fd - sym.d2j_star) / abs(sym.d2j_star)
    checks.append(CheckResult("TAYLOR_MISMATCH", bool(rel <= 1e-4), 0.0,
                              f"fd {fd:.8g} vs declared {sym.d2j_star:.8g} (rel {rel:.2e})"))

    # remainder r(k) = O(k^(2 j_star + 2)) near zero: the sampled ratio must
    # be bounded on 0 < |k| <= 1
    near = (np.abs(ks) > 1e-6) & (np.abs(ks) <= 1.0)
    if not near.any():
        near = (np.abs(ks) > 0) & (np.abs(ks) <= k_max / 10)
    kn = ks[near]
    ratio = np.abs(taylor_remainder(sym, kn)) / np.abs(kn) ** (2 * sym.j_star + 2)
    jr = int(np.argmax(ratio))
    checks.append(CheckResult("TAYLOR_REMAINDER", bool(np.isfinite(ratio[jr])), float(kn[jr]),
                              f"sup |r|/k^(2j*+2) = {ratio[jr]:.3e}"))

    # cutoff: m <= m(0)/2 beyond k_cut
    beyond = np.abs(ks) >= sym.k_cut
    if beyond.any():
        vb = vals[beyond] - 0.5 * sym.m_zero
        jb = int(np.argmax(vb))
        checks.append(CheckResult("CUTOFF", bool(vb[jb] <= 1e-12), float(ks[beyond][jb]),
                                  f"max m(k)-m(0)/2 beyond k_cut = {vb[jb]:.3e}"))
    else:
        checks.append(CheckResult("CUTOFF", True, sym.k_cut, "no samples beyond k_cut"))

    return SymbolReport(sym.name, tuple(checks))

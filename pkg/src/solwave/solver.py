"""Constrained minimization of the wave energy at fixed momentum.

The minimizer runs projected gradient descent on the momentum sphere
Q(u) = mu: at each iterate the multiplier estimate nu = -<g, u>/(2 mu)
makes the residual g + nu u tangent, a backtracking line search with exact
renormalization to Q = mu accepts the step, and descent stops when the
residual drops below tolerance.  An independent Petviashvili fixed-point
iteration at given speed serves as a cross-check oracle: the two methods
meet on the same discrete travelling-wave equation from different sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import (BallExit, ConfigError, MaxIterations, MuTooLarge,
                     NoConvergence, SubcriticalSpeed)
from .functionals import (DiscreteFunctional, Penalization, Problem,
                          discretize, discretize_reduced)
from .grid import PeriodicGrid, SpectralField, change_points, l2_norm, tail_max
from .longwave import ScalingExponents, exponents, kdv_profile, kdv_speed
from .nonlinearity import Nonlinearity

_LEDGE = 1e-15  # roundoff slack for the descent test near the floor of E


@dataclass
class SolveConfig:
    """Knobs for one constrained solve.

    ``period``/``points`` override the automatic grid; otherwise the period
    scales like mu^-beta so the wave occupies a fixed fraction of it, and the
    point count keeps the Nyquist wavenumber beyond both the band-split cutoff
    and the seed's spectral support.
    """

    mu: float = 1e-3
    period: float | None = None
    points: int | None = None
    tol_residual: float = 1e-9
    max_iter: int = 50_000
    step_init: float = 1.0
    step_shrink: float = 0.5
    armijo: float = 1e-4
    step_grow: float = 2.0
    step_max: float = 64.0
    penalization: Penalization | None = None
    seed_profile: str = "kdv"     # kdv | file:<path> | previous (sweep-internal)
    polarity: int = 1
    period_scale: float = 80.0
    min_period: float = 64.0
    nyquist_factor: float = 2.2   # times the band-split cutoff
    seed_band: float = 45.0       # scaled Nyquist demand of the seed spectrum

    def __post_init__(self):
        if self.mu <= 0:
            raise ConfigError("mu must be positive", field="mu")
        if self.tol_residual <= 0:
            raise ConfigError("tol_residual must be positive", field="tol_residual")
        if self.polarity not in (-1, 1):
            raise ConfigError("polarity must be +1 or -1", field="polarity")


@dataclass(frozen=True)
class WaveProfile:
    """A computed travelling wave and its certificate numbers."""

    field: SpectralField
    mu: float
    speed: float
    residual: float
    energy: float
    symbol: str
    nonlinearity: str
    iterations: int
    supercritical: bool

    def meta(self) -> dict:
        g = self.field.grid
        return {
            "mu": self.mu, "nu": self.speed, "residual": self.residual,
            "energy": self.energy, "P": g.period, "N": g.n,
            "iterations": self.iterations, "supercritical": self.supercritical,
            "symbol": self.symbol, "nonlinearity": self.nonlinearity,
            "convention": "unitary-sqrtP",
        }


def next_pow2(x: float) -> int:
    return 1 << max(4, math.ceil(math.log2(max(x, 16))))


def default_grid(cfg: SolveConfig, k_cut: float, exps: ScalingExponents) -> PeriodicGrid:
    period = cfg.period
    if period is None:
        period = max(cfg.min_period, cfg.period_scale * cfg.mu ** (-exps.beta))
    n = cfg.points
    if n is None:
        k_need = max(cfg.nyquist_factor * k_cut, cfg.seed_band * cfg.mu**exps.beta)
        n = next_pow2(max(256, period * k_need / math.pi))
    return PeriodicGrid(period, n)


def kdv_scaled_seed(grid: PeriodicGrid, mu: float, exps: ScalingExponents,
                    polarity: int = 1) -> SpectralField:
    """mu^alpha w_kdv(mu^beta x): the long-wave seed on the solve grid."""
    y = mu**exps.beta * grid.nodes
    return SpectralField.from_values(grid, mu**exps.alpha * kdv_profile(y, polarity))


def renormalize(u: SpectralField, mu: float) -> SpectralField:
    """Rescale to Q = mu exactly (Q = ||u||_0^2 / 2)."""
    nrm = l2_norm(u)
    if nrm == 0:
        raise ValueError("cannot renormalize the zero field")
    return u * (math.sqrt(2.0 * mu) / nrm)


def center(u: SpectralField) -> SpectralField:
    """Cyclic shift putting the node of max |u| at x = 0."""
    j = int(np.argmax(np.abs(u.values)))
    return SpectralField.from_values(u.grid, np.roll(u.values, u.grid.n // 2 - j))


def _vdot(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.real(np.vdot(a, b)))


def _descend(eng: DiscreteFunctional, mu: float, cfg: SolveConfig,
             c0: np.ndarray) -> tuple[np.ndarray, float, float, int, dict]:
    """Projected-gradient core on coefficient arrays.

    Returns (coeffs, nu, residual, iterations, history) with history holding
    the residual and the accepted energy per iteration.  The line search
    accepts on sufficient decrease with a round-off ledge so descent can
    continue once E differences reach machine precision.
    """
    scale = math.sqrt(2.0 * mu)
    c = c0 * (scale / np.sqrt(np.sum(np.abs(c0) ** 2)))
    if eng.pen is not None and eng.h1_sq(c) >= (2.0 * eng.pen.radius) ** 2:
        raise BallExit(f"initial iterate has ||u||_H1^2 = {eng.h1_sq(c):.3e}, "
                       f"outside the barrier domain (2R)^2 = "
                       f"{(2.0 * eng.pen.radius) ** 2:.3e}")
    two_mu = 2.0 * mu
    step = cfg.step_init
    history: dict = {"residuals": [], "energies": []}
    for it in range(cfg.max_iter):
        g = eng.gradient(c)
        nu = -_vdot(g, c) / two_mu
        r = g + nu * c
        res = float(np.sqrt(np.sum(np.abs(r) ** 2)))
        history["residuals"].append(res)
        if res <= cfg.tol_residual:
            return c, nu, res, it, history
        if eng.precond is not None:
            d = -eng.precond * r
            d -= (_vdot(d, c) / two_mu) * c
            lam = eng.precond * (nu - eng.mvals)
        else:
            d = -r
            lam = nu - eng.mvals
        slope = _vdot(r, d)  # strictly negative for a descent direction
        # explicit-descent stability bound: steps beyond 2/lam_max amplify the
        # stiffest mode, and near convergence the energy test cannot see that
        lam_max = float(np.max(lam))
        cap = 1.7 / lam_max if lam_max > 0 else cfg.step_init
        e0 = eng.energy(c, infinite_outside=True)
        t = min(step, cap)
        accepted = False
        while t > 1e-18:
            trial = c + t * d
            trial *= scale / np.sqrt(np.sum(np.abs(trial) ** 2))
            e1 = eng.energy(trial, infinite_outside=True)
            if e1 <= e0 + cfg.armijo * t * slope + _LEDGE * abs(e0):
                accepted = True
                break
            t *= cfg.step_shrink
        if not accepted:
            raise MuTooLarge(
                f"line search collapsed at residual {res:.3e}; no minimizer "
                f"in reach at mu = {mu:g}", residual=res,
                history=history["residuals"])
        c = trial
        history["energies"].append(e1)
        step = min(t * cfg.step_grow, cfg.step_max)
    raise MaxIterations(
        f"residual {history['residuals'][-1]:.3e} after {cfg.max_iter} "
        f"iterations (tol {cfg.tol_residual:g})",
        history=history["residuals"])


def _finish(eng: DiscreteFunctional, prob_symbol: str, nl_name: str, mu: float,
            m_sup: float, c: np.ndarray, nu: float, res: float, its: int) -> WaveProfile:
    u = center(SpectralField.from_coeffs(eng.grid, c))
    supercritical = nu > m_sup
    return WaveProfile(field=u, mu=mu, speed=nu, residual=res,
                       energy=eng.energy(u.coeffs), symbol=prob_symbol,
                       nonlinearity=nl_name, iterations=its,
                       supercritical=supercritical)


def minimize_constrained(prob: Problem, cfg: SolveConfig,
                         guess: SpectralField | None = None) -> WaveProfile:
    """Minimize the energy over Q = mu; returns the wave with its speed.

    Raises MU_TOO_LARGE when the line search collapses or the converged
    multiplier is not supercritical: both say the small-momentum regime,
    where the constrained minimizer exists, has been left.
    """
    exps = exponents(prob.symbol.j_star, prob.nonlinearity.p)
    if guess is not None:
        grid = guess.grid
    else:
        grid = default_grid(cfg, prob.symbol.k_cut, exps)
        guess = _build_seed(cfg, grid, exps)
    eng = discretize(prob, grid, cfg.penalization)
    c, nu, res, its, _ = _descend(eng, cfg.mu, cfg, guess.coeffs)
    if nu <= prob.symbol.m_zero:
        raise MuTooLarge(f"converged multiplier nu = {nu:g} is subcritical "
                         f"(m(0) = {prob.symbol.m_zero:g})", nu=nu)
    return _finish(eng, prob.symbol.name, prob.nonlinearity.name, cfg.mu,
                   prob.symbol.m_zero, c, nu, res, its)


def _build_seed(cfg: SolveConfig, grid: PeriodicGrid,
                exps: ScalingExponents) -> SpectralField:
    if cfg.seed_profile in ("kdv", "kdv-scaled"):
        return kdv_scaled_seed(grid, cfg.mu, exps, cfg.polarity)
    if cfg.seed_profile.startswith("file:"):
        from .fileio import read_field_csv
        u = read_field_csv(cfg.seed_profile.split(":", 1)[1])
        if u.grid != grid:
            raise ConfigError(
                f"seed grid (P={u.grid.period:g}, N={u.grid.n}) does not match "
                f"solve grid (P={grid.period:g}, N={grid.n})", field="seed_profile")
        return u
    raise ConfigError(f"unknown seed {cfg.seed_profile!r}", field="seed_profile")


def minimize_reduced(j_star: int, d2j_star: float, nl: Nonlinearity,
                     cfg: SolveConfig | None = None,
                     guess: SpectralField | None = None) -> WaveProfile:
    """Ground state of the reduced long-wave functional on Q = 1.

    The polynomial multiplier is unbounded, so the descent direction is
    preconditioned by (1 + k^(2 j_star))^-1; stationary points are unchanged.
    """
    cfg = replace(cfg, mu=1.0) if cfg is not None else SolveConfig(mu=1.0, tol_residual=1e-10)
    if guess is not None:
        grid = guess.grid
    else:
        period = cfg.period if cfg.period is not None else cfg.period_scale
        n = cfg.points if cfg.points is not None else next_pow2(
            max(256, period * cfg.seed_band / math.pi))
        grid = PeriodicGrid(period, n)
        polarity = cfg.polarity if nl.cp > 0 else -1
        # generic unit-width bump: the descent must find the ground state itself
        guess = SpectralField.from_values(
            grid, polarity * np.exp(-0.5 * grid.nodes**2))
    eng = discretize_reduced(j_star, d2j_star, nl, grid)
    c, nu, res, its, _ = _descend(eng, 1.0, cfg, guess.coeffs)
    if nu <= 0:
        raise MuTooLarge(f"reduced multiplier nu = {nu:g} not positive", nu=nu)
    return _finish(eng, f"reduced(j*={j_star}, m2j={d2j_star:g})", nl.name,
                   1.0, 0.0, c, nu, res, its)


def petviashvili(prob: Problem, nu: float, cfg: SolveConfig,
                 guess: SpectralField | None = None,
                 tol: float | None = None, max_iter: int = 2_000) -> WaveProfile:
    """Stabilized fixed point u -> S^gamma (nu - L)^(-1) n(u) at fixed speed.

    Independent of the minimizer: the momentum of the result is whatever the
    travelling wave at this speed carries.  Requires a leading-homogeneous
    nonlinearity (the stabilizer exponent is gamma = p/(p-1)).
    """
    if nu <= prob.symbol.m_zero:
        raise SubcriticalSpeed(f"nu = {nu:g} does not exceed m(0) = {prob.symbol.m_zero:g}")
    if prob.nonlinearity.remainder is not None:
        raise ConfigError("fixed-point oracle needs a homogeneous nonlinearity",
                          field="nonlinearity")
    tol = cfg.tol_residual if tol is None else tol
    exps = exponents(prob.symbol.j_star, prob.nonlinearity.p)
    if guess is None:
        # seed momentum from the long-wave speed relation nu = m(0) + nu_lw mu^gamma
        mu_guess = max(((nu - prob.symbol.m_zero) / kdv_speed()) ** (1.0 / exps.gamma), 1e-12)
        cfg = replace(cfg, mu=mu_guess)
        grid = default_grid(cfg, prob.symbol.k_cut, exps)
        guess = kdv_scaled_seed(grid, mu_guess, exps, cfg.polarity)
    eng = discretize(prob, guess.grid)
    gamma = prob.nonlinearity.p / (prob.nonlinearity.p - 1.0)
    denom_m = nu - eng.mvals
    c = guess.coeffs.copy()
    for it in range(max_iter):
        nc = eng.nonlinear_coeffs(c)
        r = denom_m * c - nc
        res = float(np.sqrt(np.sum(np.abs(r) ** 2)))
        if res <= tol:
            mu = 0.5 * float(np.sum(np.abs(c) ** 2))
            return _finish(eng, prob.symbol.name, prob.nonlinearity.name, mu,
                           prob.symbol.m_zero, c, nu, res, it)
        num = float(np.sum(denom_m * np.abs(c) ** 2))
        den = _vdot(c, nc)
        if not np.isfinite(den) or den == 0.0:
            raise NoConvergence("fixed-point stabilizer degenerated", iteration=it)
        s = num / den
        if not np.isfinite(s) or s <= 0:
            raise NoConvergence(f"stabilizer S = {s:g} at iteration {it}", iteration=it)
        c = s**gamma * nc / denom_m
    raise NoConvergence(f"residual {res:.3e} after {max_iter} fixed-point steps",
                        residual=res)


def continuation_sweep(prob: Problem, mu_list: list[float],
                       base_cfg: SolveConfig) -> list[WaveProfile]:
    """Solve an ascending mu family, warm-starting each solve from the previous
    wave rescaled through the long-wave frame (an exact relabeling on the
    automatically chosen grids)."""
    if not mu_list:
        raise ConfigError("mu_list is empty", field="mu_list")
    if any(b <= a for a, b in zip(mu_list, mu_list[1:])):
        raise ConfigError("mu_list must be strictly ascending", field="mu_list")
    exps = exponents(prob.symbol.j_star, prob.nonlinearity.p)
    profiles: list[WaveProfile] = []
    prev: WaveProfile | None = None
    for mu in mu_list:
        cfg = replace(base_cfg, mu=mu)
        grid = default_grid(cfg, prob.symbol.k_cut, exps)
        if prev is None:
            guess = _build_seed(cfg, grid, exps)
        else:
            a = mu / prev.mu
            carried = SpectralField.from_values(
                PeriodicGrid(grid.period, prev.field.grid.n),
                a**exps.alpha * prev.field.values)
            guess = change_points(carried, grid.n, drop_tol=1e-6)
        profiles.append(minimize_constrained(prob, cfg, guess))
        prev = profiles[-1]
    return profiles


def sweep_rows(profiles: list[WaveProfile]) -> list[dict]:
    rows = []
    for p in profiles:
        rows.append({
            "mu": p.mu, "P": p.field.grid.period, "N": p.field.grid.n,
            "nu": p.speed, "energy": p.energy, "residual": p.residual,
            "tail": tail_max(p.field), "iters": p.iterations,
        })
    return rows

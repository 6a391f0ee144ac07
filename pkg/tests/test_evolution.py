import numpy as np
import pytest
from pytest import approx

from solwave.errors import Blowup, ConfigError, ResolutionLoss
from solwave.evolution import (EvolutionConfig, evolve, perturbation,
                               stability_experiment, travel_test)
from solwave.functionals import Problem, momentum
from solwave.grid import (PeriodicGrid, SpectralField, l2_norm, roll,
                          spectral_tail)
from solwave.longwave import kdv_profile
from solwave.nonlinearity import quadratic
from solwave.solver import SolveConfig, minimize_constrained
from solwave.symbols import whitham

PROB = Problem(whitham(), quadratic())


@pytest.fixture(scope="module")
def wave():
    return minimize_constrained(PROB, SolveConfig(mu=3e-3, tol_residual=1e-11))


def smooth_pulse(period=40.0, n=512, amp=0.5, decay=1.5):
    g = PeriodicGrid(period, n)
    return SpectralField.from_values(g, amp / np.cosh(decay * g.nodes) ** 2)


def test_linear_flow_is_exact():
    u0 = smooth_pulse()
    g = u0.grid
    cfg = EvolutionConfig(dt=0.01, t_final=10.0, stride=200)
    trace = evolve(whitham(), u0, cfg)
    lam = -g.ik * whitham().eval(g.wavenumbers)
    exact = SpectralField.from_coeffs(g, u0.coeffs * np.exp(lam * 10.0))
    assert l2_norm(trace.final - exact) <= 1e-12 * l2_norm(exact)


def test_linear_flow_time_reversal():
    u0 = smooth_pulse()
    fwd = evolve(whitham(), u0, EvolutionConfig(dt=0.01, t_final=4.0, stride=100))
    back = evolve(whitham(), fwd.final,
                  EvolutionConfig(dt=0.01, t_final=-4.0, stride=100))
    assert l2_norm(back.final - u0) <= 1e-10 * l2_norm(u0)


def test_conservation_on_solitary_wave(wave):
    cfg = EvolutionConfig(dt=0.02, t_final=10.0, stride=50)
    trace = evolve(PROB, wave.field, cfg)
    assert np.max(np.abs(trace.q_drift)) <= 1e-10
    assert np.max(np.abs(trace.e_drift)) <= 1e-8


@pytest.mark.filterwarnings("ignore:dt = 0.025 exceeds")
def test_drift_order_under_dt_halving():
    u0 = smooth_pulse()
    drifts = []
    for dt in (0.025, 0.0125):
        trace = evolve(PROB, u0, EvolutionConfig(dt=dt, t_final=5.0,
                                                 stride=int(1 / dt)))
        drifts.append(np.max(np.abs(trace.e_drift)))
    order = np.log2(drifts[0] / drifts[1])
    assert order >= 3.5


def test_rk4_matches_ifrk4_on_smooth_data():
    u0 = smooth_pulse(amp=0.2)
    a = evolve(PROB, u0, EvolutionConfig(dt=0.01, t_final=1.0, integrator="ifrk4"))
    b = evolve(PROB, u0, EvolutionConfig(dt=0.01, t_final=1.0, integrator="rk4"))
    assert l2_norm(a.final - b.final) <= 1e-7 * l2_norm(a.final)


def test_travel_test(wave):
    cfg = EvolutionConfig(dt=0.01, t_final=5.0, stride=50)
    rep = travel_test(PROB, wave, cfg)
    assert rep.shape_error <= 1e-6
    assert rep.speed_error <= 1e-5


def test_zero_perturbation_reduces_to_travel(wave):
    # without a perturbation the distance stays at the travel shape error
    cfg = EvolutionConfig(dt=0.02, t_final=5.0, stride=50)
    pert = SpectralField.zero(wave.field.grid)
    rep = stability_experiment(PROB, wave, pert, cfg)
    assert rep.max_dist <= 1e-9


def test_stability_run_and_momentum_restoration(wave):
    cfg = EvolutionConfig(dt=0.02, t_final=5.0, stride=50)
    pert = perturbation(wave.field.grid, l2_norm(wave.field), 0.01, seed=7)
    assert l2_norm(pert) == approx(0.01 * l2_norm(wave.field), rel=1e-12)
    rep = stability_experiment(PROB, wave, pert, cfg)
    assert rep.initial_dist > 0
    assert rep.max_dist <= 5 * rep.initial_dist


def test_perturbation_size_gate(wave):
    big = perturbation(wave.field.grid, l2_norm(wave.field), 0.5, seed=1)
    with pytest.raises(ConfigError):
        stability_experiment(PROB, wave, big, EvolutionConfig())


def test_distances_invariant_under_initial_translation(wave):
    cfg = EvolutionConfig(dt=0.02, t_final=2.0, stride=25)
    a = evolve(PROB, wave.field, cfg, reference=wave.field)
    b = evolve(PROB, roll(wave.field, 17), cfg, reference=wave.field)
    assert np.max(np.abs(a.orbit_dist - b.orbit_dist)) <= 1e-9


def test_under_resolved_start_rejected():
    g = PeriodicGrid(40.0, 64)
    u0 = SpectralField.from_values(g, kdv_profile(g.nodes))  # tail ~ 1e-5
    assert spectral_tail(u0) > 1e-10
    with pytest.raises(ResolutionLoss):
        evolve(PROB, u0, EvolutionConfig(dt=0.01, t_final=1.0))


def test_blowup_detected():
    u0 = smooth_pulse(amp=0.8)
    with np.errstate(over="ignore", invalid="ignore"), \
            pytest.warns(RuntimeWarning), pytest.raises(Blowup) as err:
        evolve(PROB, u0, EvolutionConfig(dt=5.0, t_final=50.0, stride=1))
    assert err.value.info["trace"] is not None


def test_dt_advisory_warns(wave):
    with pytest.warns(RuntimeWarning, match="advisory advective bound"):
        evolve(PROB, wave.field, EvolutionConfig(dt=2.0, t_final=2.0, stride=1))


def test_config_validation():
    with pytest.raises(ConfigError):
        EvolutionConfig(dt=0.0)
    with pytest.raises(ConfigError):
        EvolutionConfig(integrator="euler")
    with pytest.raises(ConfigError):
        EvolutionConfig(stride=0)


def test_trace_rows(wave):
    cfg = EvolutionConfig(dt=0.02, t_final=0.2, stride=5)
    trace = evolve(PROB, wave.field, cfg, reference=wave.field)
    rows = trace.rows()
    assert set(rows[0]) == {"t", "E_drift", "Q_drift", "orbit_dist", "shift"}
    assert rows[0]["t"] == 0.0
    assert momentum(trace.final) == approx(momentum(wave.field), rel=1e-10)

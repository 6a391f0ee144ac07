"""Batch front door: solve, sweep, compare-kdv, evolve, stability, validate-symbol.

One JSON config document with sections {problem, grid, solver, evolution,
sweep, stability}; unknown keys are errors so typos cannot silently corrupt a
study.  Flags override config values.  Every command writes a manifest
sufficient to re-run it.  Exit codes: 0 ok, 1 config, 2 model regime
(no wave there), 3 iteration/resolution failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import fileio
from .analysis import (convergence_rows, convergence_study, reduced_reference,
                       scaling_diagnostics)
from .errors import ConfigError, SolwaveError
from .evolution import (EvolutionConfig, StabilityReport, perturbation,
                        stability_experiment, travel_test)
from .functionals import Penalization, Problem
from .grid import PeriodicGrid, l2_norm
from .longwave import exponents
from .nonlinearity import nonlinearity_from_name
from .solver import (SolveConfig, WaveProfile, continuation_sweep,
                     minimize_constrained, sweep_rows)
from .symbols import symbol_from_name, validate_symbol

DEFAULT_CONFIG = {
    "problem": {"symbol": "whitham", "nonlinearity": "quadratic", "ball_radius": 1.0},
    "grid": {"period": None, "points": None, "period_scale": 80.0},
    "solver": {"mu": 1e-3, "tol_residual": 1e-9, "max_iter": 50_000,
               "step_init": 1.0, "step_shrink": 0.5, "armijo": 1e-4,
               "penalized": False, "seed_profile": "kdv", "polarity": 1},
    "evolution": {"dt": 0.01, "t_final": 20.0, "integrator": "ifrk4",
                  "dealias": True, "stride": 50},
    "sweep": {"mu_list": [1e-4, 3e-4, 1e-3, 3e-3, 1e-2], "tau": 0.9},
    "stability": {"scales": [0.005, 0.01, 0.02], "seed": 20260811, "band": 32},
}


def load_config(path: str | None) -> dict:
    cfg = json.loads(json.dumps(DEFAULT_CONFIG))  # deep copy
    if path is None:
        return cfg
    try:
        with open(path) as f:
            user = json.load(f)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}", field="config")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}", field="config")
    if not isinstance(user, dict):
        raise ConfigError("config must be a JSON object", field="config")
    for section, content in user.items():
        if section not in cfg:
            raise ConfigError(f"unknown config section {section!r}", field=section)
        if not isinstance(content, dict):
            raise ConfigError(f"section {section!r} must be an object", field=section)
        for key, value in content.items():
            if key not in cfg[section]:
                raise ConfigError(f"unknown key {section}.{key}", field=f"{section}.{key}")
            cfg[section][key] = value
    return cfg


def build_problem(cfg: dict) -> Problem:
    sec = cfg["problem"]
    if not sec.get("symbol"):
        raise ConfigError("problem.symbol is missing", field="problem.symbol")
    if not sec.get("nonlinearity"):
        raise ConfigError("problem.nonlinearity is missing", field="problem.nonlinearity")
    return Problem(symbol_from_name(sec["symbol"]),
                   nonlinearity_from_name(sec["nonlinearity"]),
                   ball_radius=float(sec["ball_radius"]))


def build_solve_config(cfg: dict, prob: Problem) -> SolveConfig:
    s, g = cfg["solver"], cfg["grid"]
    pen = Penalization(prob.ball_radius) if s["penalized"] else None
    return SolveConfig(
        mu=float(s["mu"]), period=g["period"], points=g["points"],
        tol_residual=float(s["tol_residual"]), max_iter=int(s["max_iter"]),
        step_init=float(s["step_init"]), step_shrink=float(s["step_shrink"]),
        armijo=float(s["armijo"]), penalization=pen,
        seed_profile=s["seed_profile"], polarity=int(s["polarity"]),
        period_scale=float(g["period_scale"]))


def build_evolution_config(cfg: dict) -> EvolutionConfig:
    e = cfg["evolution"]
    return EvolutionConfig(dt=float(e["dt"]), t_final=float(e["t_final"]),
                           integrator=e["integrator"], dealias=bool(e["dealias"]),
                           stride=int(e["stride"]))


def _write_profile(outdir: Path, prof: WaveProfile, stem: str = "profile"):
    fileio.write_field_csv(outdir / f"{stem}.csv", prof.field, spectral_sidecar=True)
    fileio.write_json(outdir / f"meta{stem.removeprefix('profile')}.json", prof.meta())


def cmd_solve(args, cfg) -> int:
    prob = build_problem(cfg)
    scfg = build_solve_config(cfg, prob)
    out = Path(args.out)
    t0 = time.time()
    prof = minimize_constrained(prob, scfg)
    _write_profile(out, prof)
    fileio.write_json(out / "manifest.json",
                      fileio.manifest("solve", cfg, {"elapsed_s": round(time.time() - t0, 3)}))
    print(f"solved mu={prof.mu:g}: nu={prof.speed:.12g} residual={prof.residual:.3e} "
          f"iterations={prof.iterations} supercritical={prof.supercritical}")
    return 0


def _run_sweep(cfg) -> tuple[Problem, list[WaveProfile]]:
    prob = build_problem(cfg)
    scfg = build_solve_config(cfg, prob)
    mu_list = [float(m) for m in cfg["sweep"]["mu_list"]]
    profiles = continuation_sweep(prob, mu_list, scfg)
    return prob, profiles


def _convergence_outputs(prob, profiles, tau, outdir: Path):
    exps = exponents(prob.symbol.j_star, prob.nonlinearity.p)
    n_ref = max(p.field.grid.n for p in profiles)
    scaled_period = profiles[0].field.grid.period * profiles[0].mu**exps.beta
    ref = reduced_reference(prob, PeriodicGrid(scaled_period, n_ref))
    comparisons = convergence_study(prob, profiles, ref)
    records = [scaling_diagnostics(prob, p, tau) for p in profiles]
    fileio.write_rows_csv(outdir / "convergence.csv",
                          convergence_rows(comparisons, records),
                          fileio.CONVERGENCE_COLUMNS)
    return ref


def cmd_sweep(args, cfg) -> int:
    if args.mu_list:
        cfg["sweep"]["mu_list"] = [float(v) for v in args.mu_list.split(",")]
    out = Path(args.out)
    t0 = time.time()
    prob, profiles = _run_sweep(cfg)
    for i, prof in enumerate(profiles):
        _write_profile(out / "profiles", prof, stem=f"profile_{i:03d}")
    fileio.write_rows_csv(out / "sweep.csv", sweep_rows(profiles), fileio.SWEEP_COLUMNS)
    _convergence_outputs(prob, profiles, float(cfg["sweep"]["tau"]), out)
    fileio.write_json(out / "manifest.json",
                      fileio.manifest("sweep", cfg, {"elapsed_s": round(time.time() - t0, 3)}))
    print(f"sweep of {len(profiles)} waves written to {out}")
    return 0


def cmd_compare_kdv(args, cfg) -> int:
    src = Path(args.sweep_dir)
    metas = sorted(src.glob("profiles/meta_*.json"))
    if not metas:
        raise ConfigError(f"no sweep profiles under {src}", field="sweep-dir")
    prob = build_problem(cfg)
    profiles = []
    for mp in metas:
        meta = json.loads(mp.read_text())
        u = fileio.read_field_csv(mp.parent / f"profile_{mp.stem.split('_')[1]}.csv")
        profiles.append(WaveProfile(
            field=u, mu=meta["mu"], speed=meta["nu"], residual=meta["residual"],
            energy=meta["energy"], symbol=meta["symbol"],
            nonlinearity=meta["nonlinearity"], iterations=meta["iterations"],
            supercritical=meta["supercritical"]))
    out = Path(args.out or args.sweep_dir)
    t0 = time.time()
    exps = exponents(prob.symbol.j_star, prob.nonlinearity.p)
    ref = _convergence_outputs(prob, profiles, float(cfg["sweep"]["tau"]), out)
    from .longwave import scale_down
    for i, prof in enumerate(profiles):
        w = scale_down(prof.mu, exps, prof.field, period_hint=ref.field.grid.period)
        fileio.write_field_csv(out / "scaled" / f"scaled_{i:03d}.csv", w)
    fileio.write_json(out / "manifest_compare.json",
                      fileio.manifest("compare-kdv", cfg,
                                      {"elapsed_s": round(time.time() - t0, 3)}))
    print(f"convergence study over {len(profiles)} waves written to {out}")
    return 0


def _load_profile(path: str) -> WaveProfile:
    p = Path(path)
    u = fileio.read_field_csv(p)
    meta_path = p.parent / ("meta" + p.stem.removeprefix("profile") + ".json")
    if not meta_path.exists():
        raise ConfigError(f"missing metadata {meta_path}", field="profile")
    meta = json.loads(meta_path.read_text())
    return WaveProfile(field=u, mu=meta["mu"], speed=meta["nu"],
                       residual=meta["residual"], energy=meta["energy"],
                       symbol=meta["symbol"], nonlinearity=meta["nonlinearity"],
                       iterations=meta["iterations"],
                       supercritical=meta["supercritical"])


def cmd_evolve(args, cfg) -> int:
    prob = build_problem(cfg)
    ecfg = build_evolution_config(cfg)
    prof = _load_profile(args.profile)
    out = Path(args.out)
    t0 = time.time()
    report = travel_test(prob, prof, ecfg)
    fileio.write_rows_csv(out / "trace.csv", report.trace.rows(), fileio.TRACE_COLUMNS)
    fileio.write_field_csv(out / "final.csv", report.trace.final)
    fileio.write_json(out / "manifest.json", fileio.manifest(
        "evolve", cfg, {"elapsed_s": round(time.time() - t0, 3),
                        "shape_error": report.shape_error,
                        "measured_speed": report.measured_speed,
                        "speed_error": report.speed_error}))
    print(f"travelled T={ecfg.t_final:g}: shape_error={report.shape_error:.3e} "
          f"speed_error={report.speed_error:.3e}")
    return 0


def cmd_stability(args, cfg) -> int:
    prob = build_problem(cfg)
    ecfg = build_evolution_config(cfg)
    prof = _load_profile(args.profile)
    st = cfg["stability"]
    seed = int(st["seed"] if args.seed is None else args.seed)
    scales = ([float(args.scale)] if args.scale is not None
              else [float(s) for s in st["scales"]])
    out = Path(args.out)
    t0 = time.time()
    summaries = []
    for i, scale in enumerate(scales):
        pert = perturbation(prof.field.grid, l2_norm(prof.field), scale,
                            seed + i, band=int(st["band"]))
        rep: StabilityReport = stability_experiment(prob, prof, pert, ecfg)
        fileio.write_rows_csv(out / f"trace_{i:03d}.csv", rep.trace.rows(),
                              fileio.TRACE_COLUMNS)
        summaries.append({"scale": scale, "seed": seed + i,
                          "initial_dist": rep.initial_dist,
                          "max_dist": rep.max_dist, "ratio": rep.ratio})
        print(f"scale={scale:g}: initial={rep.initial_dist:.3e} "
              f"max={rep.max_dist:.3e} ratio={rep.ratio:.2f}")
    fileio.write_json(out / "summary.json", {"runs": summaries})
    fileio.write_json(out / "manifest.json", fileio.manifest(
        "stability", cfg, {"elapsed_s": round(time.time() - t0, 3), "seed": seed}))
    return 0


def cmd_validate_symbol(args, cfg) -> int:
    name = args.name or cfg["problem"]["symbol"]
    if not name:
        raise ConfigError("symbol name is missing", field="problem.symbol")
    sym = symbol_from_name(name)
    report = validate_symbol(sym, k_max=float(args.k_max), n_samples=int(args.samples))
    for line in report.lines():
        print(line)
    if args.out:
        fileio.write_json(Path(args.out) / "symbol_report.json", {
            "symbol": report.symbol,
            "passed": report.passed,
            "checks": [{"name": c.name, "passed": c.passed, "worst_k": c.worst_k,
                        "detail": c.detail} for c in report.checks],
        })
    if not report.passed:
        print(f"symbol {name!r} FAILED validation", file=sys.stderr)
        return 2
    print(f"symbol {name!r} passed all checks")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="solwave", description=__doc__)
    parser.add_argument("--config", help="JSON config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute one constrained minimizer")
    p.add_argument("--mu", type=float)
    p.add_argument("--out", default="out-solve")
    p.add_argument("--penalized", action="store_true")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("sweep", help="continuation over a mu list + convergence study")
    p.add_argument("--mu-list")
    p.add_argument("--out", default="out-sweep")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("compare-kdv", help="long-wave comparison of an existing sweep")
    p.add_argument("--sweep-dir", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_compare_kdv)

    p = sub.add_parser("evolve", help="travel test of a stored profile")
    p.add_argument("--profile", required=True)
    p.add_argument("--T", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--out", default="out-evolve")
    p.set_defaults(fn=cmd_evolve)

    p = sub.add_parser("stability", help="perturb a stored profile and evolve")
    p.add_argument("--profile", required=True)
    p.add_argument("--scale", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--T", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--out", default="out-stability")
    p.set_defaults(fn=cmd_stability)

    p = sub.add_parser("validate-symbol", help="run the multiplier checks")
    p.add_argument("--name")
    p.add_argument("--k-max", default=100.0)
    p.add_argument("--samples", default=10_000)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_validate_symbol)

    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        if getattr(args, "mu", None) is not None:
            cfg["solver"]["mu"] = args.mu
        if getattr(args, "penalized", False):
            cfg["solver"]["penalized"] = True
        if getattr(args, "T", None) is not None:
            cfg["evolution"]["t_final"] = args.T
        if getattr(args, "dt", None) is not None:
            cfg["evolution"]["dt"] = args.dt
        return args.fn(args, cfg)
    except SolwaveError as exc:
        err = {"error": exc.code, "message": str(exc)}
        err.update({k: v for k, v in exc.info.items() if isinstance(v, (str, int, float))})
        print(json.dumps(err), file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(json.dumps({"error": "CONFIG", "message": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

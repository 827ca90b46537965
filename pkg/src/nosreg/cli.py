"""Command-line front end: design, search, simulate, reproduce-example.

Configuration and gains travel as JSON; trajectories as CSV plus a generated
gnuplot script.  Exit codes: 0 success, 2 validation, 3 synthesis or
certificate failure, 4 search exhausted, 5 simulation failure (non-finite
state or detected overshoot).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .chains import Exosystem, NonlinearPlant, assemble_mimo, split_state
from .errors import (CertificateFailed, ConfigError, DimensionMismatch,
                     InvalidOrder, InvalidPoleSet, NonFiniteState,
                     NoRegulatorSolution, SearchExhausted, SingularMatrix)
from .linalg import as_vector
from .modal import DEFAULT_SEP_MIN, PoleSet
from .plants import BUILTIN_PLANTS
from .polesearch import DEFAULT_MAX_TRIALS, SearchSpec, search
from .regulation import solve_sylvester, synthesize
from .sim import SimConfig, simulate_linear, simulate_nonlinear, write_csv

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SYNTHESIS = 3
EXIT_SEARCH = 4
EXIT_SIMULATION = 5

_VALIDATION_ERRORS = (ConfigError, DimensionMismatch, InvalidOrder, InvalidPoleSet)
_SYNTHESIS_ERRORS = (SingularMatrix, NoRegulatorSolution, CertificateFailed)


@dataclass(frozen=True)
class ProblemConfig:
    """Parsed, dimension-checked problem description."""

    degrees: tuple[int, ...]
    exo: Exosystem
    plant: NonlinearPlant | None
    plant_name: str | None
    x0: np.ndarray | None
    xi0: np.ndarray
    pole_sets: tuple[PoleSet, ...] | None
    intervals: tuple[tuple[tuple[float, float], ...], ...] | None
    max_trials: int
    seed: int
    sep_min: float
    sim: SimConfig


@dataclass(frozen=True)
class LoadedGains:
    """Gains file contents; duck-compatible with RegulatorGains where it matters (F, G)."""

    F: np.ndarray
    G: np.ndarray
    degrees: tuple[int, ...]
    poles: tuple[tuple[float, ...], ...]
    p_values: tuple[float, ...]


def _field(data: dict, key: str, path: str, required: bool = True, default=None):
    if key not in data:
        if required:
            raise ConfigError(f"missing field '{path}{key}'")
        return default
    return data[key]


def load_config(path) -> ProblemConfig:
    """Read and validate a problem configuration file."""
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: "
                          f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")

    degrees = tuple(int(g) for g in _field(raw, "degrees", ""))
    if not degrees or any(g < 1 for g in degrees):
        raise ConfigError("'degrees' must be a nonempty list of positive integers")
    p = len(degrees)
    gamma = sum(degrees)

    exo_raw = _field(raw, "exosystem", "")
    exo = Exosystem(S=_field(exo_raw, "S", "exosystem."),
                    H=_field(exo_raw, "H", "exosystem."),
                    w0=_field(exo_raw, "w0", "exosystem."))
    if exo.num_outputs != p:
        raise ConfigError(f"exosystem.H has {exo.num_outputs} rows, expected {p}")

    init = _field(raw, "initial", "")
    plant = plant_name = x0 = None
    if "plant" in init:
        plant_name = init["plant"]
        if plant_name not in BUILTIN_PLANTS:
            raise ConfigError(f"unknown plant '{plant_name}'; "
                              f"available: {sorted(BUILTIN_PLANTS)}")
        plant = BUILTIN_PLANTS[plant_name]()
        if plant.degrees != degrees:
            raise ConfigError(f"plant '{plant_name}' has degrees {plant.degrees}, "
                              f"config says {degrees}")
        x0 = as_vector(_field(init, "x0", "initial."), length=plant.state_dim)
        xi0 = as_vector(plant.normal_map(x0), length=gamma)
    elif "xi0" in init:
        xi0 = as_vector(init["xi0"], length=gamma)
    else:
        raise ConfigError("'initial' needs either 'xi0' or 'plant' + 'x0'")

    sep_min = float(_field(raw.get("search", {}), "sep_min", "search.",
                           required=False, default=DEFAULT_SEP_MIN))

    pole_sets = None
    if "poles" in raw:
        lists = raw["poles"]
        if len(lists) != p:
            raise ConfigError(f"'poles' must list one pole set per subsystem ({p})")
        sets = []
        for j, lams in enumerate(lists):
            if len(lams) != degrees[j]:
                raise ConfigError(f"poles[{j}] has {len(lams)} entries, "
                                  f"subsystem order is {degrees[j]}")
            sets.append(PoleSet(tuple(float(l) for l in lams), sep_min=sep_min))
        pole_sets = tuple(sets)

    intervals = None
    if "intervals" in raw:
        lists = raw["intervals"]
        if len(lists) != p:
            raise ConfigError(f"'intervals' must list one box per subsystem ({p})")
        boxes = []
        for j, box in enumerate(lists):
            if len(box) != degrees[j]:
                raise ConfigError(f"intervals[{j}] has {len(box)} intervals, "
                                  f"subsystem order is {degrees[j]}")
            boxes.append(tuple((float(lo), float(hi)) for lo, hi in box))
        intervals = tuple(boxes)

    srch = raw.get("search", {})
    simc = raw.get("sim", {})
    cfg = SimConfig(step=float(simc.get("step", 1e-3)),
                    horizon=float(simc.get("horizon", 40.0)),
                    record_stride=int(simc.get("record_stride", 10)),
                    zero_band=float(simc.get("zero_band", 1e-9)))
    return ProblemConfig(
        degrees=degrees, exo=exo, plant=plant, plant_name=plant_name,
        x0=x0, xi0=xi0, pole_sets=pole_sets, intervals=intervals,
        max_trials=int(srch.get("max_trials", DEFAULT_MAX_TRIALS)),
        seed=int(srch.get("seed", 0)), sep_min=sep_min, sim=cfg)


def _gains_payload(cfg: ProblemConfig, gains, seed=None, trials=None) -> dict:
    subs = []
    for j, sub in enumerate(gains.subsystems):
        entry = {
            "poles": list(sub.poles.lambdas),
            "F": sub.F[0].tolist(),
            "G": sub.G[0].tolist(),
            "Pi": sub.Pi.tolist(),
            "Gamma": sub.Gamma[0].tolist(),
            "p_value": sub.cert.p_value,
        }
        if trials is not None:
            entry["trials_used"] = trials[j]
        subs.append(entry)
    payload = {
        "degrees": list(cfg.degrees),
        "exo_dim": cfg.exo.dim,
        "subsystems": subs,
        "F": gains.F.tolist(),
        "G": gains.G.tolist(),
    }
    if seed is not None:
        payload["seed"] = seed
    return payload


def write_gains(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def load_gains(path, cfg: ProblemConfig) -> LoadedGains:
    """Read a gains file and check it against the problem dimensions."""
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read gains file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"gains file {path} is not valid JSON: "
                          f"line {exc.lineno}: {exc.msg}") from exc
    degrees = tuple(int(g) for g in _field(raw, "degrees", ""))
    if degrees != cfg.degrees:
        raise ConfigError(f"gains were designed for degrees {degrees}, "
                          f"config says {cfg.degrees}")
    gamma, p, m = sum(degrees), len(degrees), cfg.exo.dim
    F = np.asarray(_field(raw, "F", ""), dtype=float)
    G = np.asarray(_field(raw, "G", ""), dtype=float)
    if F.shape != (p, gamma) or G.shape != (p, m):
        raise ConfigError(f"gains have shapes F{F.shape}, G{G.shape}; "
                          f"expected F{(p, gamma)}, G{(p, m)}")
    subs = _field(raw, "subsystems", "")
    return LoadedGains(
        F=F, G=G, degrees=degrees,
        poles=tuple(tuple(float(l) for l in s["poles"]) for s in subs),
        p_values=tuple(float(s["p_value"]) for s in subs))


def _print_design_summary(cfg: ProblemConfig, gains, out) -> None:
    for j, sub in enumerate(gains.subsystems):
        poles = ", ".join(f"{l:.6g}" for l in sub.poles.lambdas)
        print(f"subsystem {j}: poles [{poles}]")
        print(f"  F = {np.array2string(sub.F[0], precision=6)}")
        print(f"  G = {np.array2string(sub.G[0], precision=6)}")
        if np.allclose(sub.decomp.alpha, 0.0):
            print("  certificate: trivial (initial state on the steady-state manifold)")
        else:
            print(f"  certificate: p = {sub.cert.p_value:.6g} > 0")
    print(f"gains written to {out}")


def cmd_design(config_path, out_path) -> int:
    """Synthesize gains from explicit pole lists and write the gains file."""
    cfg = load_config(config_path)
    if cfg.pole_sets is None:
        raise ConfigError("'design' needs explicit 'poles' in the config")
    mimo = assemble_mimo(cfg.degrees)
    gains = synthesize(mimo, cfg.exo, cfg.xi0, cfg.pole_sets)
    write_gains(out_path, _gains_payload(cfg, gains))
    _print_design_summary(cfg, gains, out_path)
    return EXIT_OK


def cmd_search(config_path, out_path, seed: int | None = None) -> int:
    """Search the configured pole intervals per subsystem, then design and write gains."""
    cfg = load_config(config_path)
    if cfg.intervals is None:
        raise ConfigError("'search' needs 'intervals' in the config")
    base_seed = cfg.seed if seed is None else int(seed)
    mimo = assemble_mimo(cfg.degrees)
    xi_blocks = split_state(cfg.xi0, cfg.degrees)

    found, trials = [], []
    for j, chain in enumerate(mimo.blocks):
        Pi_j, _ = solve_sylvester(chain, cfg.exo, cfg.exo.H[j:j + 1])
        xt0_j = xi_blocks[j] - Pi_j @ cfg.exo.w0
        spec = SearchSpec(intervals=cfg.intervals[j], max_trials=cfg.max_trials,
                          seed=base_seed + j, sep_min=cfg.sep_min)
        poles, cert, used = search(spec, xt0_j)
        print(f"subsystem {j}: passing poles after {used} trial(s), "
              f"p = {cert.p_value:.6g}")
        found.append(poles)
        trials.append(used)

    gains = synthesize(mimo, cfg.exo, cfg.xi0, tuple(found))
    write_gains(out_path, _gains_payload(cfg, gains, seed=base_seed, trials=trials))
    _print_design_summary(cfg, gains, out_path)
    return EXIT_OK


def gnuplot_script(csv_path, plot_path, n: int, m: int, p: int) -> str:
    e0 = 1 + n + m + 2 * p + 1
    u0 = 1 + n + m + 3 * p + 1
    err_plots = ", ".join(
        f"csv using 1:{e0 + j} with lines title 'e{j + 1}'" for j in range(p))
    inp_plots = ", ".join(
        f"csv using 1:{u0 + j} with lines title 'u{j + 1}'" for j in range(p))
    img = str(Path(plot_path).with_suffix(".png"))
    return (
        "# generated plot script: tracking errors and control inputs\n"
        f"csv = '{csv_path}'\n"
        "set datafile separator ','\n"
        "set terminal pngcairo size 1200,450\n"
        f"set output '{img}'\n"
        "set multiplot layout 1,2\n"
        "set grid\n"
        "set xlabel 't [s]'\n"
        "set title 'tracking errors'\n"
        f"plot {err_plots}\n"
        "set title 'control inputs'\n"
        f"plot {inp_plots}\n"
        "unset multiplot\n"
    )


def cmd_simulate(config_path, gains_path, csv_path, plot_path) -> int:
    """Simulate the closed loop under a gains file; write CSV and a gnuplot script."""
    cfg = load_config(config_path)
    gains = load_gains(gains_path, cfg)
    if cfg.plant is not None:
        traj, report = simulate_nonlinear(cfg.plant, cfg.exo, gains, cfg.x0, cfg.sim)
    else:
        mimo = assemble_mimo(cfg.degrees)
        traj, report = simulate_linear(mimo, cfg.exo, gains, cfg.xi0, cfg.sim)
    write_csv(traj, csv_path)
    n, m, p = traj.x.shape[1], traj.w.shape[1], traj.y.shape[1]
    Path(plot_path).write_text(gnuplot_script(csv_path, plot_path, n, m, p))
    print(f"trajectory written to {csv_path} ({len(traj.times)} samples), "
          f"plot script to {plot_path}")
    for j in range(p):
        if report.sign_changed[j]:
            print(f"output {j + 1}: OVERSHOOT, error changes sign at "
                  f"t = {report.first_crossing_time[j]:.6g} s")
        else:
            print(f"output {j + 1}: no sign change, "
                  f"final |e| = {report.final_abs_error[j]:.3e}")
    return EXIT_SIMULATION if report.any_overshoot else EXIT_OK


def cmd_reproduce_example() -> int:
    """Run the bundled-scenario verification suite and print one line per criterion."""
    from .acceptance import run_all

    results = run_all()
    failed = [r.name for r in results if not r.passed]
    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}: {r.detail}")
    if failed:
        print(f"{len(failed)} criterion(s) failed: {', '.join(failed)}")
        return 1
    print(f"all {len(results)} criteria passed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nosreg",
        description="Nonovershooting output-regulation design and simulation.")
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("design", help="synthesize gains from explicit poles")
    d.add_argument("--config", required=True)
    d.add_argument("--out", required=True)

    s = sub.add_parser("search", help="search pole intervals, then synthesize gains")
    s.add_argument("--config", required=True)
    s.add_argument("--seed", type=int, default=None,
                   help="override the seed from the config")
    s.add_argument("--out", required=True)

    m = sub.add_parser("simulate", help="simulate the closed loop under a gains file")
    m.add_argument("--config", required=True)
    m.add_argument("--gains", required=True)
    m.add_argument("--csv", required=True)
    m.add_argument("--plot", required=True)

    sub.add_parser("reproduce-example",
                   help="run the bundled-scenario verification suite")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "design":
            return cmd_design(args.config, args.out)
        if args.command == "search":
            return cmd_search(args.config, args.out, seed=args.seed)
        if args.command == "simulate":
            return cmd_simulate(args.config, args.gains, args.csv, args.plot)
        return cmd_reproduce_example()
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except _SYNTHESIS_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SYNTHESIS
    except SearchExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEARCH
    except NonFiniteState as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIMULATION


if __name__ == "__main__":
    sys.exit(main())

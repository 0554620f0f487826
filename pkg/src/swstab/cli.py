"""Command-line front-end: parse system/signal specs, run analyses, write
JSON reports and CSV trajectories.

Exit codes: 0 success; 1 parse/validation error; 2 numerical failure;
3 instability or divergence detected (reports are still written).
"""

from __future__ import annotations

import argparse
import json
import math
import sys as _sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__, presets
from .linalg import LinalgError
from .model import (SwitchedSystem, common_equilibrium, average_system,
                    equilibrium, EquilibriumError, load_system,
                    system_to_dict)
from .signals import (NormMinPolicy, PeriodicSignal, activation_fractions,
                      example_signal, load_signal, scale, signal_to_dict)
from .stability import DEFAULT_K_LIST, is_ici_stable, lemma4_bound_holds
from .simulate import (DivergenceError, NoAttractingCycleError,
                       DegenerateCycleError, limit_cycle, simulate,
                       simulate_norm_min)
from .synthesis import find_stable_combination, max_stable_eta

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NUMERICAL = 2
EXIT_UNSTABLE = 3


@dataclass
class RunConfig:
    """Fully resolved invocation, embedded in every report."""

    command: str
    system_path: Optional[str] = None
    signal_path: Optional[str] = None
    example: Optional[int] = None
    eta: float = 1.0
    t_end: float = 60.0
    sample_dt: float = 0.05
    output_dir: str = "."
    circle: Optional[int] = None
    x0: list = field(default_factory=list)
    resolution: float = 0.01
    eta_max: Optional[float] = None
    grid_points: int = 50
    k_list: list = field(default_factory=lambda: list(DEFAULT_K_LIST))
    tolerances: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items()}


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _report(config: RunConfig, body: dict) -> dict:
    out = dict(body)
    out["version"] = __version__
    out["config"] = config.to_dict()
    return out


def _parse_tols(items) -> dict:
    tols = {}
    for item in items or []:
        if "=" not in item:
            raise ValueError(f"--tol expects NAME=VALUE, got {item!r}")
        name, value = item.split("=", 1)
        tols[name.strip()] = float(value)
    return tols


def _parse_k_list(text: Optional[str]) -> list[int]:
    if text is None:
        return list(DEFAULT_K_LIST)
    ks = [int(part) for part in text.split(",") if part.strip()]
    if not ks or any(k < 1 for k in ks):
        raise ValueError(f"--k-list must be positive integers, got {text!r}")
    return ks


def _initial_conditions(config: RunConfig, n: int) -> list[np.ndarray]:
    points = [np.asarray(x, dtype=float) for x in config.x0]
    for p in points:
        if p.shape != (n,):
            raise ValueError(f"initial condition {p.tolist()} has wrong dimension")
    if config.circle:
        if n < 2:
            raise ValueError("--circle needs state dimension >= 2")
        for j in range(config.circle):
            theta = 2.0 * math.pi * j / config.circle
            p = np.zeros(n)
            p[0], p[1] = math.cos(theta), math.sin(theta)
            points.append(p)
    if not points:
        raise ValueError("no initial conditions; pass --x0 or --circle")
    return points


def _load_inputs(config: RunConfig) -> tuple[SwitchedSystem, Optional[PeriodicSignal]]:
    if config.example is not None:
        sys_ = presets.preset(config.example)
        sig = example_signal(config.eta)
        return sys_, sig
    if config.system_path is None:
        raise ValueError("--system is required")
    sys_ = load_system(config.system_path)
    sig = None
    if config.signal_path is not None:
        sig = load_signal(config.signal_path)
        if config.eta != 1.0:
            sig = scale(sig, config.eta)
    return sys_, sig


def _write_trajectories(out: Path, trajectories) -> list[str]:
    names = []
    for k, traj in enumerate(trajectories):
        name = f"trajectory_{k:02d}.csv"
        with open(out / name, "w") as fh:
            traj.write_csv(fh)
        names.append(name)
    return names


# -- subcommand bodies --------------------------------------------------------

def _cmd_analyze(config: RunConfig, out: Path) -> int:
    sys_, sig = _load_inputs(config)
    if sig is None:
        raise ValueError("analyze needs a switching signal (--signal)")
    report = is_ici_stable(sys_, sig, eta=config.eta)
    body = report.to_dict()
    w = activation_fractions(sig, sys_.m)
    body["activation_fractions"] = w.alpha.tolist()
    body["lemma4_bound_holds"] = lemma4_bound_holds(
        sys_, w, 1.0, k_list=config.k_list)
    tol = config.tolerances.get("common_equilibrium", 1e-9)
    try:
        eq = common_equilibrium(sys_, tol=tol)
        body["common_equilibrium"] = None if eq is None else eq.tolist()
    except EquilibriumError:
        body["common_equilibrium"] = None
    _write_json(out / "analysis.json", _report(config, body))
    return EXIT_OK if report.is_stable else EXIT_UNSTABLE


def _cmd_synthesize(config: RunConfig, out: Path) -> int:
    sys_, _ = _load_inputs(config)
    comb = find_stable_combination(
        [sub.A for sub in sys_.subsystems], resolution=config.resolution)
    _write_json(out / "combination.json", _report(config, comb.to_dict()))
    if not comb.found:
        return EXIT_UNSTABLE
    search = max_stable_eta(
        sys_, comb.weights, eta_max=config.eta_max,
        grid_points=config.grid_points,
        refine_tol=config.tolerances.get("refine_tol", 1e-3))
    _write_json(out / "eta_search.json", _report(config, search.to_dict()))
    with open(out / "eta_grid.csv", "w") as fh:
        fh.write("eta,spectral_radius\n")
        for eta, rho in search.grid:
            fh.write(f"{eta:.12g},{rho:.12g}\n")
    return EXIT_OK


def _cmd_simulate(config: RunConfig, out: Path) -> int:
    sys_, sig = _load_inputs(config)
    if sig is None:
        raise ValueError("simulate needs a switching signal (--signal)")
    points = _initial_conditions(config, sys_.n)
    trajectories, diverged = [], []
    for p in points:
        try:
            trajectories.append(simulate(sys_, sig, p, config.t_end,
                                         config.sample_dt))
        except DivergenceError as exc:
            trajectories.append(exc.trajectory)
            diverged.append({"x0": p.tolist(), "escape_time": exc.time})
    names = _write_trajectories(out, trajectories)
    body = {"trajectories": names, "diverged": diverged}
    _write_json(out / "simulate.json", _report(config, body))
    return EXIT_UNSTABLE if diverged else EXIT_OK


def _cmd_cycle(config: RunConfig, out: Path) -> int:
    sys_, sig = _load_inputs(config)
    if sig is None:
        raise ValueError("cycle needs a switching signal (--signal)")
    try:
        cyc = limit_cycle(sys_, sig)
    except (NoAttractingCycleError, DegenerateCycleError) as exc:
        _write_json(out / "cycle.json",
                    _report(config, {"error": str(exc)}))
        return EXIT_UNSTABLE
    body = cyc.to_dict()
    try:
        w = activation_fractions(sig, sys_.m)
        body["average_equilibrium"] = equilibrium(
            average_system(sys_, w)).tolist()
    except EquilibriumError:
        body["average_equilibrium"] = None
    _write_json(out / "cycle.json", _report(config, body))
    with open(out / "orbit.csv", "w") as fh:
        fh.write("t," + ",".join(f"x{i + 1}" for i in range(sys_.n)) + "\n")
        for t, x in zip(cyc.orbit_times, cyc.orbit):
            fh.write(f"{t:.12g}," + ",".join(f"{v:.12g}" for v in x) + "\n")
    return EXIT_OK


def _cmd_normmin(config: RunConfig, out: Path) -> int:
    sys_, _ = _load_inputs(config)
    points = _initial_conditions(config, sys_.n)
    policy = NormMinPolicy(config.sample_dt)
    trajectories, diverged = [], []
    for p in points:
        try:
            trajectories.append(simulate_norm_min(sys_, p, config.t_end, policy))
        except DivergenceError as exc:
            trajectories.append(exc.trajectory)
            diverged.append({"x0": p.tolist(), "escape_time": exc.time})
    names = _write_trajectories(out, trajectories)
    _write_json(out / "normmin.json",
                _report(config, {"trajectories": names, "diverged": diverged}))
    return EXIT_UNSTABLE if diverged else EXIT_OK


def _cmd_example(config: RunConfig, out: Path) -> int:
    sys_ = presets.preset(config.example)
    sig = example_signal(config.eta)
    _write_json(out / "system.json", system_to_dict(sys_))
    _write_json(out / "signal.json", signal_to_dict(sig))
    if config.circle is None and not config.x0:
        config.circle = 8
    status = _cmd_analyze(config, out)
    sim_status = _cmd_simulate(config, out)
    if config.example == 2:
        cyc_status = _cmd_cycle(config, out)
        return max(status, sim_status, cyc_status)
    return max(status, sim_status)


# -- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swstab",
        description="Stabilising switching signals for switched affine systems")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, signal=False, sim=False, synth=False):
        p.add_argument("--system", help="system JSON file")
        if signal:
            p.add_argument("--signal", help="signal JSON file")
            p.add_argument("--eta", type=float, default=1.0,
                           help="time-scale applied to the signal")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--tol", action="append", metavar="NAME=VALUE",
                       help="tolerance override (repeatable)")
        if sim:
            p.add_argument("--t-end", type=float, default=60.0)
            p.add_argument("--dt", type=float, default=0.05,
                           help="sample step (policy step for normmin)")
            p.add_argument("--x0", action="append", metavar="CSV",
                           help="initial condition, e.g. 1,0 (repeatable)")
            p.add_argument("--circle", type=int,
                           help="K initial points on the unit circle")
        if synth:
            p.add_argument("--resolution", type=float, default=0.01)
            p.add_argument("--eta-max", type=float)
            p.add_argument("--grid-points", type=int, default=50)

    p = sub.add_parser("analyze", help="stability report for system + signal")
    add_common(p, signal=True)
    p.add_argument("--k-list", help="comma-separated k grid for the dwell bound")

    p = sub.add_parser("synthesize",
                       help="find a stable combination and the max dwell scale")
    add_common(p, synth=True)

    p = sub.add_parser("simulate", help="exact trajectories under a signal")
    add_common(p, signal=True, sim=True)

    p = sub.add_parser("cycle", help="limit cycle of the one-period map")
    add_common(p, signal=True)

    p = sub.add_parser("normmin", help="norm-minimising closed-loop simulation")
    add_common(p, sim=True)

    p = sub.add_parser("example", help="write a bundled example and analyse it")
    p.add_argument("number", type=int, choices=(1, 2))
    add_common(p, signal=False, sim=True)
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--k-list", help="comma-separated k grid for the dwell bound")

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    x0 = []
    for item in getattr(args, "x0", None) or []:
        x0.append([float(v) for v in item.split(",")])
    return RunConfig(
        command=args.command,
        system_path=getattr(args, "system", None),
        signal_path=getattr(args, "signal", None),
        example=getattr(args, "number", None),
        eta=getattr(args, "eta", 1.0),
        t_end=getattr(args, "t_end", 60.0),
        sample_dt=getattr(args, "dt", 0.05),
        output_dir=args.out,
        circle=getattr(args, "circle", None),
        x0=x0,
        resolution=getattr(args, "resolution", 0.01),
        eta_max=getattr(args, "eta_max", None),
        grid_points=getattr(args, "grid_points", 50),
        k_list=_parse_k_list(getattr(args, "k_list", None)),
        tolerances=_parse_tols(getattr(args, "tol", None)),
    )


_DISPATCH = {
    "analyze": _cmd_analyze,
    "synthesize": _cmd_synthesize,
    "simulate": _cmd_simulate,
    "cycle": _cmd_cycle,
    "normmin": _cmd_normmin,
    "example": _cmd_example,
}


def run(config: RunConfig) -> int:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return _DISPATCH[config.command](config, out)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_INVALID
    try:
        return run(config)
    except (ValueError, KeyError, OSError, json.JSONDecodeError,
            IndexError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_INVALID
    except LinalgError as exc:
        print(f"numerical failure: {exc}", file=_sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())

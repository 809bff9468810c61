"""Command-line entry point.

Usage: coevonet <subcommand> <config-file> [key=value ...]

Subcommands: integrate, simulate, fixed-points, stability,
sweep-temperature, sweep-plane, census, critical-temp.

Configs are flat ``key = value`` text (``#`` comments allowed); trailing
``key=value`` arguments override file entries.  The configuration is
validated in full before any computation or file is written.  Exit codes:
0 success, 1 configuration error, 2 numerical failure.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .analysis import classify_stability, critical_temperature, find_rest_points
from .dynamics import FlowParams, integrate
from .errors import CoevonetError, ConfigError, NumericalError
from .experiments import basin_sample, sweep_plane, sweep_temperature
from .games import PayoffSpec, effective_matrix, reduce_matrix
from .qlearning import random_qstate, run
from .seeding import derive_seed
from .state import random_interior

__all__ = ["RunConfig", "parse_config", "main", "entrypoint"]

SUBCOMMANDS = (
    "integrate",
    "simulate",
    "fixed-points",
    "stability",
    "sweep-temperature",
    "sweep-plane",
    "census",
    "critical-temp",
)

_FLOAT_KEYS = {
    "game.b11",
    "game.b12",
    "game.b21",
    "game.b22",
    "game.c_iso",
    "temperature",
    "alpha",
    "horizon",
    "tol.local",
    "tol.equilibrium",
    "grid.t.min",
    "grid.t.max",
    "grid.ci.min",
    "grid.ci.max",
    "census.threshold",
    "stride",
}
_INT_KEYS = {
    "n",
    "seed",
    "grid.t.steps",
    "grid.ci.steps",
    "starts",
    "trials",
    "steps",
    "workers",
}
_STR_KEYS = {"out.dir"}
_ALL_KEYS = _FLOAT_KEYS | _INT_KEYS | _STR_KEYS

_DEFAULTS = {
    "game.c_iso": 0.0,
    "temperature": 0.0,
    "alpha": 0.05,
    "seed": 0,
    "horizon": 1e5,
    "tol.local": 1e-9,
    "tol.equilibrium": 1e-10,
    "starts": 48,
    "trials": 100,
    "steps": 2000,
    "stride": 0.0,  # 0: sample every accepted step
    "workers": 1,
    "census.threshold": 0.25,
}


@dataclass
class RunConfig:
    """Validated parameters of one CLI invocation."""

    game: PayoffSpec
    n: int
    temperature: float
    alpha: float
    seed: int
    horizon: float
    tol_local: float
    tol_equilibrium: float
    starts: int
    trials: int
    steps: int
    stride: float
    workers: int
    census_threshold: float
    out_dir: str | None
    t_grid: np.ndarray | None
    ci_grid: np.ndarray | None


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {raw!r}") from exc
    return raw


def parse_config(text: str, overrides: list[str] | None = None) -> dict:
    """Parse config text plus key=value overrides into a raw key dict.

    Unknown keys are rejected outright.
    """
    values: dict = {}
    lines = list(text.splitlines())
    for override in overrides or []:
        lines.append(override)
    for lineno, line in enumerate(lines, start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in _ALL_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        values[key] = _parse_value(key, raw)
    return values


def _grid(values: dict, prefix: str) -> np.ndarray | None:
    keys = [f"{prefix}.min", f"{prefix}.max", f"{prefix}.steps"]
    present = [k for k in keys if k in values]
    if not present:
        return None
    if len(present) != 3:
        raise ConfigError(f"grid {prefix} needs min, max and steps; got only {present}")
    lo, hi, steps = values[keys[0]], values[keys[1]], values[keys[2]]
    if steps < 1 or (steps > 1 and hi <= lo):
        raise ConfigError(f"grid {prefix} must be strictly increasing with steps >= 1")
    return np.linspace(lo, hi, steps)


def build_config(values: dict) -> RunConfig:
    for key in ("game.b11", "game.b12", "game.b21", "game.b22", "n"):
        if key not in values:
            raise ConfigError(f"missing required config key {key!r}")
    merged = dict(_DEFAULTS)
    merged.update(values)
    try:
        game = PayoffSpec(
            b11=merged["game.b11"],
            b12=merged["game.b12"],
            b21=merged["game.b21"],
            b22=merged["game.b22"],
            c_iso=merged["game.c_iso"],
        )
    except CoevonetError as exc:
        raise ConfigError(str(exc)) from exc
    n = merged["n"]
    if n < 2:
        raise ConfigError(f"n must be >= 2, got {n}")
    if merged["temperature"] < 0:
        raise ConfigError(f"temperature must be nonnegative, got {merged['temperature']}")
    if not 0 < merged["alpha"] <= 1:
        raise ConfigError(f"alpha must be in (0, 1], got {merged['alpha']}")
    for key in ("horizon", "tol.local", "tol.equilibrium"):
        if merged[key] <= 0:
            raise ConfigError(f"{key} must be positive, got {merged[key]}")
    for key in ("starts", "trials", "workers"):
        if merged[key] < 1:
            raise ConfigError(f"{key} must be >= 1, got {merged[key]}")
    if merged["steps"] < 0:
        raise ConfigError(f"steps must be >= 0, got {merged['steps']}")
    return RunConfig(
        game=game,
        n=n,
        temperature=merged["temperature"],
        alpha=merged["alpha"],
        seed=merged["seed"],
        horizon=merged["horizon"],
        tol_local=merged["tol.local"],
        tol_equilibrium=merged["tol.equilibrium"],
        starts=merged["starts"],
        trials=merged["trials"],
        steps=merged["steps"],
        stride=merged["stride"],
        workers=merged["workers"],
        census_threshold=merged["census.threshold"],
        out_dir=merged.get("out.dir"),
        t_grid=_grid(merged, "grid.t"),
        ci_grid=_grid(merged, "grid.ci"),
    )


def _require_outdir(cfg: RunConfig) -> Path:
    if not cfg.out_dir:
        raise ConfigError("this subcommand requires out.dir")
    path = Path(cfg.out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write(path: Path, content: str) -> None:
    path.write_text(content)


def _rest_point_csv(points, reports) -> str:
    lines = ["id,residual,classification,configuration,max_real_eigenvalue,state_json"]
    for k, (rp, rep) in enumerate(zip(points, reports)):
        from .state import state_to_json

        lines.append(
            f"{k},{rp.residual:.17g},{rep.classification.value},"
            f"{rep.matched_configuration.value},{rep.max_real_part:.17g},"
            f'"{state_to_json(rp.state).replace(chr(34), chr(39))}"'
        )
    return "\n".join(lines) + "\n"


def _cmd_integrate(cfg: RunConfig) -> int:
    out = _require_outdir(cfg)
    fp = FlowParams.from_payoff(cfg.game, temperature=cfg.temperature)
    s0 = random_interior(cfg.n, seed=derive_seed(cfg.seed, "integrate", 0), margin=0.02)
    traj = integrate(
        s0,
        fp,
        horizon=cfg.horizon,
        local_tol=cfg.tol_local,
        equilibrium_tol=cfg.tol_equilibrium,
        sample_every=cfg.stride or None,
    )
    _write(out / "trajectory.csv", traj.to_csv())
    _write(out / "trajectory.json", json.dumps(traj.metadata()))
    print(f"integrated to t={traj.times[-1]:.6g}, converged={traj.converged}")
    return 0


def _cmd_simulate(cfg: RunConfig) -> int:
    out = _require_outdir(cfg)
    if cfg.temperature <= 0:
        raise ConfigError("simulate needs temperature > 0 (softmax selection)")
    qs0 = random_qstate(cfg.n, cfg.alpha, cfg.temperature, seed=derive_seed(cfg.seed, "simulate", 0))
    payoff = effective_matrix(cfg.game)
    trace = run(qs0, payoff, steps=cfg.steps, stride=max(1, int(cfg.stride) or 1))
    _write(out / "policy_trace.csv", trace.to_csv())
    _write(
        out / "policy_trace.json",
        json.dumps({"seed": cfg.seed, "alpha": cfg.alpha, "temperature": cfg.temperature, "steps": cfg.steps}),
    )
    print(f"simulated {cfg.steps} steps")
    return 0


def _cmd_fixed_points(cfg: RunConfig, with_spectra: bool) -> int:
    out = _require_outdir(cfg)
    fp = FlowParams.from_payoff(cfg.game, temperature=cfg.temperature)
    points = find_rest_points(fp, cfg.n, starts=cfg.starts, seed=cfg.seed)
    reports = [classify_stability(rp) for rp in points]
    _write(out / "rest_points.csv", _rest_point_csv(points, reports))
    if with_spectra:
        payload = []
        for rp, rep in zip(points, reports):
            payload.append(
                {
                    "residual": rp.residual,
                    "eigenvalues": [[float(ev.real), float(ev.imag)] for ev in rep.eigenvalues],
                    "classification": rep.classification.value,
                    "configuration": rep.matched_configuration.value,
                    "p": rp.state.p.tolist(),
                    "c": rp.state.c.tolist(),
                }
            )
        _write(out / "stability.json", json.dumps(payload))
    print(f"found {len(points)} rest points")
    return 0


def _cmd_sweep_temperature(cfg: RunConfig) -> int:
    out = _require_outdir(cfg)
    if cfg.t_grid is None:
        raise ConfigError("sweep-temperature requires grid.t.min/max/steps")
    result = sweep_temperature(
        cfg.game, cfg.n, cfg.t_grid, starts=cfg.starts, seed=cfg.seed, workers=cfg.workers
    )
    _write(out / "sweep_temperature.csv", result.to_csv())
    _write(out / "sweep_temperature.json", result.summary_json())
    print(f"swept {cfg.t_grid.size} temperatures; T_c estimate: {result.critical_temperature_estimate}")
    return 0


def _cmd_sweep_plane(cfg: RunConfig) -> int:
    out = _require_outdir(cfg)
    if cfg.t_grid is None or cfg.ci_grid is None:
        raise ConfigError("sweep-plane requires grid.t.* and grid.ci.*")
    result = sweep_plane(cfg.game, cfg.n, cfg.t_grid, cfg.ci_grid, starts=cfg.starts, seed=cfg.seed)
    _write(out / "sweep_plane.csv", result.to_csv())
    _write(out / "sweep_plane.json", result.summary_json())
    print(f"classified {cfg.t_grid.size * cfg.ci_grid.size} grid points")
    return 0


def _cmd_census(cfg: RunConfig) -> int:
    out = _require_outdir(cfg)
    result = basin_sample(
        cfg.game,
        cfg.n,
        cfg.temperature,
        trials=cfg.trials,
        seed=cfg.seed,
        reciprocity_threshold=cfg.census_threshold,
        workers=cfg.workers,
    )
    _write(out / "census.csv", result.to_csv())
    _write(out / "census.json", result.summary_json())
    print(f"census over {result.converged}/{result.trials} converged trials")
    return 0


def _cmd_critical_temp(cfg: RunConfig) -> int:
    game = reduce_matrix(effective_matrix(cfg.game))
    t_c = critical_temperature(game, cfg.n)
    if t_c is None:
        print("critical temperature: none (single-equilibrium game)")
    else:
        print(f"critical temperature: {t_c:.6f}")
    if cfg.out_dir:
        out = _require_outdir(cfg)
        _write(out / "critical_temperature.json", json.dumps({"critical_temperature": t_c}))
    return 0


def main(argv: list[str]) -> int:
    if not argv or argv[0] in ("-h", "--help"):
        print(__doc__)
        return 0 if argv else 1
    subcommand = argv[0]
    if subcommand not in SUBCOMMANDS:
        print(f"unknown subcommand {subcommand!r}; expected one of {', '.join(SUBCOMMANDS)}", file=sys.stderr)
        return 1
    if len(argv) < 2:
        print("missing config file path", file=sys.stderr)
        return 1
    config_path = Path(argv[1])
    try:
        if not config_path.exists():
            raise ConfigError(f"config file not found: {config_path}")
        values = parse_config(config_path.read_text(), overrides=list(argv[2:]))
        cfg = build_config(values)
        if subcommand == "integrate":
            return _cmd_integrate(cfg)
        if subcommand == "simulate":
            return _cmd_simulate(cfg)
        if subcommand == "fixed-points":
            return _cmd_fixed_points(cfg, with_spectra=False)
        if subcommand == "stability":
            return _cmd_fixed_points(cfg, with_spectra=True)
        if subcommand == "sweep-temperature":
            return _cmd_sweep_temperature(cfg)
        if subcommand == "sweep-plane":
            return _cmd_sweep_plane(cfg)
        if subcommand == "census":
            return _cmd_census(cfg)
        if subcommand == "critical-temp":
            return _cmd_critical_temp(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (NumericalError, CoevonetError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    raise AssertionError("unreachable")


def entrypoint() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entrypoint()

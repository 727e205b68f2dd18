"""Command-line front end.

Subcommands ``evolve``, ``death-time``, ``classify`` and ``sweep`` parse
state/channel literals, run the corresponding library operations and emit
CSV or JSON to stdout or ``--out``.  Values resolve as flags over
config-file entries over built-in defaults; outputs are byte-identical
for identical configs and seeds.  Exit codes: 0 ok, 2 usage or parse
error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import multiprocessing
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .channels import ChannelSpec, ExplicitSamples, is_catalog, max_rate, parse_channel_literal
from .classify import classify_channel, classify_set, scenario_to_json
from .dynamics import (
    DEFAULT_SAMPLES,
    death_report_to_json,
    death_time,
    simulate,
    trajectory_to_csv,
)
from .errors import NotXFormError, ParseError
from .states import (
    DensityMatrix,
    ToleranceConfig,
    XState,
    embed_x,
    make_x,
    parse_state_literal,
    project_x,
)

__all__ = ["RunConfig", "build_parser", "main",
           "cmd_evolve", "cmd_death_time", "cmd_classify", "cmd_sweep"]

_CONFIG_KEYS = {
    "channel", "state", "horizon", "dt", "seed", "eps_death", "out",
    "jobs", "samples", "set_file", "family", "grid",
}

# x-literal field names accepted as sweep parameters; bare w/z mean the real parts
_SWEEP_FIELDS = ("a", "b", "c", "d", "w_re", "w_im", "z_re", "z_im")
_SWEEP_ALIASES = {"w": "w_re", "z": "z_re"}


@dataclass
class RunConfig:
    """Resolved inputs for one command invocation."""

    command: str
    channel: ChannelSpec | None = None
    state: XState | DensityMatrix | None = None
    horizon: float | None = None
    dt: float | None = None
    seed: int = 0
    tol: ToleranceConfig = field(default_factory=ToleranceConfig)
    out: str | None = None
    jobs: int | None = None
    samples: int = 100
    set_file: str | None = None
    family: str = "x"
    grids: list[tuple[str, np.ndarray]] = field(default_factory=list)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="esdkit",
        description="Simulate two-qubit noise channels and classify "
                    "entanglement sudden death.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "evolve": "sample a trajectory and write its CSV",
        "death-time": "scan for loss of entanglement and write a JSON report",
        "classify": "label a channel's asymptotic set and write JSON evidence",
        "sweep": "evaluate death-time over a parameter grid and write CSV",
    }
    commands = {}
    for name, help_text in specs.items():
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--channel", help="channel literal (decay:/dephase:/collective:/custom:)")
        cmd.add_argument("--state", help="state literal (x: or dense:)")
        cmd.add_argument("--horizon", type=float, help="observation time span")
        cmd.add_argument("--dt", type=float, help="integration / sampling step")
        cmd.add_argument("--seed", type=int, help="seed for sampled classification members")
        cmd.add_argument("--eps-death", type=float, help="negativity death threshold")
        cmd.add_argument("--out", help="output path (default: stdout)")
        cmd.add_argument("--config", help="JSON file with defaults for any flag")
        cmd.add_argument("--jobs", type=int, help="worker processes for sweep rows")
        commands[name] = cmd
    commands["classify"].add_argument("--set-file", help="JSON file with explicit member states")
    commands["classify"].add_argument("--samples", type=int,
                                      help="random members per sampled family (default 100)")
    commands["sweep"].add_argument("--grid", action="append",
                                   help="parameter grid, param=start:stop:n (repeatable)")
    commands["sweep"].add_argument("--family", choices=("x", "pure"),
                                   help="swept family: overrides of --state (x) or "
                                        "pure superpositions of |ee> and |gg> (pure)")
    return parser


def _load_config_file(path: str) -> dict:
    try:
        payload = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read --config {path!r}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"--config {path!r} is not valid JSON: {exc}") from None
    if not isinstance(payload, dict):
        raise ParseError(f"--config {path!r} must contain a JSON object")
    normalized = {}
    for key, value in payload.items():
        name = key.replace("-", "_")
        if name not in _CONFIG_KEYS:
            raise ParseError(f"--config {path!r} has unknown key {key!r}")
        normalized[name] = value
    return normalized


def _parse_field(name: str, text: str, parse):
    try:
        return parse(text)
    except ValueError as exc:
        raise ParseError(f"invalid --{name}: {exc}") from None


def _parse_grid(text: str) -> tuple[str, np.ndarray]:
    head, sep, tail = text.partition("=")
    if not sep:
        raise ParseError(f"invalid --grid {text!r}: expected param=start:stop:n")
    name = head.strip()
    name = _SWEEP_ALIASES.get(name, name)
    if name not in _SWEEP_FIELDS:
        raise ParseError(
            f"invalid --grid {text!r}: unknown parameter {head.strip()!r} "
            f"(expected one of {', '.join(_SWEEP_FIELDS)})"
        )
    parts = tail.split(":")
    if len(parts) != 3:
        raise ParseError(f"invalid --grid {text!r}: expected start:stop:n")
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise ParseError(f"invalid --grid {text!r}: non-numeric bound or count") from None
    if count < 1:
        raise ParseError(f"invalid --grid {text!r}: n must be >= 1")
    return name, np.linspace(start, stop, count)


def _build_config(args: argparse.Namespace) -> RunConfig:
    file_values = _load_config_file(args.config) if args.config else {}

    def resolve(name: str, default=None):
        flag = getattr(args, name, None)
        if flag is not None:
            return flag
        if name in file_values and file_values[name] is not None:
            return file_values[name]
        return default

    config = RunConfig(command=args.command)
    channel_text = resolve("channel")
    if channel_text is not None:
        config.channel = _parse_field("channel", str(channel_text), parse_channel_literal)
    state_text = resolve("state")
    if state_text is not None:
        config.state = _parse_field("state", str(state_text), parse_state_literal)
    horizon = resolve("horizon")
    if horizon is not None:
        config.horizon = float(horizon)
        if config.horizon <= 0.0:
            raise ParseError(f"invalid --horizon: must be positive, got {horizon!r}")
    dt = resolve("dt")
    if dt is not None:
        config.dt = float(dt)
        if config.dt <= 0.0:
            raise ParseError(f"invalid --dt: must be positive, got {dt!r}")
    config.seed = int(resolve("seed", 0))
    eps_death = resolve("eps_death")
    try:
        config.tol = (
            ToleranceConfig(eps_death=float(eps_death))
            if eps_death is not None
            else ToleranceConfig()
        )
    except ValueError as exc:
        raise ParseError(f"invalid --eps-death: {exc}") from None
    out = resolve("out")
    config.out = None if out is None else str(out)
    jobs = resolve("jobs")
    if jobs is not None:
        config.jobs = int(jobs)
        if config.jobs < 1:
            raise ParseError(f"invalid --jobs: must be >= 1, got {jobs!r}")
    config.samples = int(resolve("samples", 100))
    if config.samples < 0:
        raise ParseError(f"invalid --samples: must be >= 0, got {config.samples!r}")
    set_file = resolve("set_file")
    config.set_file = None if set_file is None else str(set_file)
    config.family = str(resolve("family", "x"))
    if config.family not in ("x", "pure"):
        raise ParseError(f"invalid --family: expected 'x' or 'pure', got {config.family!r}")
    grid_texts = getattr(args, "grid", None)
    if grid_texts is None:
        raw = file_values.get("grid")
        if raw is None:
            grid_texts = []
        elif isinstance(raw, list):
            grid_texts = [str(item) for item in raw]
        else:
            grid_texts = [str(raw)]
    config.grids = [_parse_grid(text) for text in grid_texts]
    return config


def _require(value, name: str):
    if value is None:
        raise ParseError(f"missing required --{name} (flag or config entry)")
    return value


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _require_x(state, name: str) -> XState:
    if isinstance(state, XState):
        return state
    try:
        return project_x(state)
    except NotXFormError as exc:
        raise ParseError(f"invalid --{name}: {exc} (an X state is required)") from None


def cmd_evolve(config: RunConfig) -> int:
    channel = _require(config.channel, "channel")
    state = _require(config.state, "state")
    horizon = _require(config.horizon, "horizon")
    traj = simulate(state, channel, horizon, dt=config.dt, tol=config.tol)
    _emit(trajectory_to_csv(traj), config.out)
    return 0


def cmd_death_time(config: RunConfig) -> int:
    channel = _require(config.channel, "channel")
    if not is_catalog(channel):
        raise ParseError("invalid --channel: death-time requires a catalog channel")
    x0 = _require_x(_require(config.state, "state"), "state")
    horizon = config.horizon
    if horizon is None:
        horizon = 50.0 / max_rate(channel)
    report = death_time(x0, channel, horizon, tol=config.tol, dt=config.dt)
    _emit(death_report_to_json(report), config.out)
    return 0


def _load_set_file(path: str, tol: ToleranceConfig) -> ExplicitSamples:
    """Read explicit members from JSON: ``{"states": ["<literal>", ...]}``."""
    try:
        payload = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read --set-file {path!r}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"--set-file {path!r} is not valid JSON: {exc}") from None
    if not isinstance(payload, dict) or "states" not in payload:
        raise ParseError(f"--set-file {path!r} lacks a 'states' list")
    members = []
    for idx, literal in enumerate(payload["states"]):
        try:
            state = parse_state_literal(str(literal), tol)
        except ValueError as exc:
            raise ParseError(f"--set-file {path!r} state {idx + 1}: {exc}") from None
        members.append(embed_x(state) if isinstance(state, XState) else state)
    return ExplicitSamples(tuple(members))


def cmd_classify(config: RunConfig) -> int:
    if (config.channel is None) == (config.set_file is None):
        raise ParseError("classify requires exactly one of --channel or --set-file")
    if config.set_file is not None:
        aset = _load_set_file(config.set_file, config.tol)
        label = classify_set(aset, tol=config.tol, n_samples=config.samples,
                             seed=config.seed)
    else:
        if not is_catalog(config.channel):
            raise ParseError(
                "invalid --channel: custom channels have no catalog asymptotic set; "
                "supply --set-file instead"
            )
        label = classify_channel(config.channel, tol=config.tol,
                                 n_samples=config.samples, seed=config.seed)
    _emit(scenario_to_json(label), config.out)
    return 0


def _pure_family_state(a: float) -> XState:
    # superposition sqrt(a)|ee> + sqrt(1-a)|gg>
    if not 0.0 < a < 1.0:
        raise ParseError(f"pure family requires 0 < a < 1, got {a!r}")
    return make_x(a, 0.0, 0.0, 1.0 - a, np.sqrt(a * (1.0 - a)), 0.0)


def _sweep_state(config: RunConfig, names: list[str], values: tuple[float, ...]) -> XState:
    if config.family == "pure":
        if names != ["a"]:
            raise ParseError("pure family sweeps accept exactly one grid over a")
        return _pure_family_state(values[0])
    base = _require_x(_require(config.state, "state"), "state")
    fields = {
        "a": base.a, "b": base.b, "c": base.c, "d": base.d,
        "w_re": base.w.real, "w_im": base.w.imag,
        "z_re": base.z.real, "z_im": base.z.imag,
    }
    fields.update(zip(names, values))
    return make_x(
        fields["a"], fields["b"], fields["c"], fields["d"],
        complex(fields["w_re"], fields["w_im"]),
        complex(fields["z_re"], fields["z_im"]),
    )


def _sweep_row(task) -> tuple[str, float | None, int]:
    x0, channel, horizon, dt, tol = task
    report = death_time(x0, channel, horizon, tol=tol, dt=dt)
    return report.verdict, report.t_star, report.crossings


def cmd_sweep(config: RunConfig) -> int:
    channel = _require(config.channel, "channel")
    if not config.grids:
        raise ParseError("sweep requires at least one --grid (param=start:stop:n)")
    if not is_catalog(channel):
        raise ParseError("invalid --channel: sweep requires a catalog channel")
    names = [name for name, _ in config.grids]
    if len(set(names)) != len(names):
        raise ParseError("sweep grids repeat a parameter name")
    horizon = config.horizon
    if horizon is None:
        horizon = 50.0 / max_rate(channel)
    combos = list(itertools.product(*(axis for _, axis in config.grids)))
    tasks = []
    for values in combos:
        x0 = _sweep_state(config, names, tuple(float(v) for v in values))
        tasks.append((x0, channel, horizon, config.dt, config.tol))
    jobs = config.jobs if config.jobs is not None else (os.cpu_count() or 1)
    jobs = min(jobs, len(tasks))
    if jobs > 1:
        with multiprocessing.Pool(jobs) as pool:
            results = pool.map(_sweep_row, tasks)
    else:
        results = [_sweep_row(task) for task in tasks]
    lines = [",".join(names) + ",verdict,t_star,crossings"]
    for values, (verdict, t_star, crossings) in zip(combos, results):
        cells = [repr(float(v)) for v in values]
        cells.append(verdict)
        cells.append("" if t_star is None else repr(float(t_star)))
        cells.append(str(crossings))
        lines.append(",".join(cells))
    _emit("\n".join(lines) + "\n", config.out)
    return 0


_HANDLERS = {
    "evolve": cmd_evolve,
    "death-time": cmd_death_time,
    "classify": cmd_classify,
    "sweep": cmd_sweep,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _build_config(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return _HANDLERS[args.command](config)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3

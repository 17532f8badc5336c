"""Command-line front end: ``simulate``, ``audit``, ``plot`` and ``preset``.

Exit codes: 0 success, 2 usage or configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .audit import CLOSED_FORM_LITERAL, ORACLE, extrema_locator, observable_series, run_audit
from .closedform import thermal_entropy
from .dynamics import IntegrationError, TimeGrid
from .model import CouplingKind, ModelParams, ParameterError, Temperature, thermal_populations
from .plotting import MissingColumnError, PlotSpec, plot_csv

log = logging.getLogger("qtentropy")

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 2, 3

CSV_COLUMNS = (
    "s1",
    "s2",
    "s_total",
    "re_sigma_plus",
    "im_sigma_plus",
    "abs_sigma_plus",
    "rho2_00",
    "rho2_11",
)
PRESET_TEMPERATURES = ("0.5", "1", "inf")


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass(frozen=True)
class ScenarioConfig:
    interaction: str = "ising"
    e1: float = 1e-4
    e2: float = 1.0
    j: float = 1e-2
    temperature: str = "1"
    t_max: float = 400.0
    steps: int = 4000
    method: str = "exact"
    output: str | None = None

    @classmethod
    def from_mapping(cls, data: dict) -> "ScenarioConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(key, "unknown configuration key")
        cfg = cls(**{k: v for k, v in data.items()})
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.interaction not in ("ising", "heisenberg"):
            raise ConfigError("interaction", f"expected 'ising' or 'heisenberg', got {self.interaction!r}")
        for key in ("e1", "e2", "j", "t_max"):
            value = getattr(self, key)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ConfigError(key, f"expected a finite number, got {value!r}")
        if self.e2 <= 0:
            raise ConfigError("e2", "must be positive")
        if self.t_max <= 0:
            raise ConfigError("t_max", "must be positive")
        if isinstance(self.steps, bool) or not isinstance(self.steps, int) or self.steps < 2:
            raise ConfigError("steps", f"need an integer >= 2 (at least 3 grid points), got {self.steps!r}")
        if self.method not in ("exact", "rk4", "both"):
            raise ConfigError("method", f"expected 'exact', 'rk4' or 'both', got {self.method!r}")
        try:
            Temperature.parse(str(self.temperature))
        except ParameterError as exc:
            raise ConfigError("temperature", str(exc)) from None

    @property
    def params(self) -> ModelParams:
        return ModelParams(self.e1, self.e2, self.j, CouplingKind(self.interaction))

    @property
    def temp(self) -> Temperature:
        return Temperature.parse(str(self.temperature))

    @property
    def grid(self) -> TimeGrid:
        return TimeGrid(0.0, float(self.t_max), self.steps + 1)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_series_csv(path: Path, cfg: ScenarioConfig) -> None:
    """Write the observable series for ``cfg`` in the fixed CSV schema."""
    p, temp, grid = cfg.params, cfg.temp, cfg.grid
    oracle = observable_series(p, temp, grid, ORACLE, method="rk4" if cfg.method == "rk4" else "exact")
    columns = {"t": grid.times, "e2_t": p.e2 * grid.times}
    for name in CSV_COLUMNS:
        columns[name] = oracle.column(name)
    if cfg.method == "both":
        closed = observable_series(p, temp, grid, CLOSED_FORM_LITERAL)
        for name in CSV_COLUMNS:
            columns[name + "_cf"] = closed.column(name)
    names = list(columns)
    data = np.column_stack([columns[n] for n in names])
    with open(path, "w", newline="") as fh:
        fh.write(",".join(names) + "\n")
        for row in data:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _load_config(args: argparse.Namespace) -> ScenarioConfig:
    data: dict = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"malformed JSON in {args.config}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config", "top level must be a JSON object")
    for f in dataclasses.fields(ScenarioConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            data[f.name] = value
    return ScenarioConfig.from_mapping(data)


def _add_scenario_flags(sp: argparse.ArgumentParser, output_help: str) -> None:
    sp.add_argument("--config", help="JSON file with scenario keys; flags override it")
    sp.add_argument("--interaction", choices=("ising", "heisenberg"))
    sp.add_argument("--e1", type=float)
    sp.add_argument("--e2", type=float)
    sp.add_argument("--j", type=float)
    sp.add_argument("--temperature", help="positive number, 0 or inf")
    sp.add_argument("--t-max", dest="t_max", type=float)
    sp.add_argument("--steps", type=int, help="number of time steps (grid has steps + 1 points)")
    sp.add_argument("--method", choices=("exact", "rk4", "both"))
    sp.add_argument("-o", "--output", help=output_help)


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    out = Path(cfg.output or "simulation.csv")
    write_series_csv(out, cfg)
    log.info("wrote %s", out)
    return EXIT_OK


def cmd_audit(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    report = run_audit(cfg.params, cfg.temp, cfg.grid)
    out = Path(cfg.output or "audit.json")
    out.write_text(report.to_json())
    sys.stdout.write(report.to_table())
    log.info("wrote %s", out)
    return EXIT_OK


def cmd_plot(args: argparse.Namespace) -> int:
    if not args.y:
        raise ConfigError("y", "at least one y column is required")
    spec = PlotSpec(
        x=args.x,
        y=args.y,
        labels=args.label or (),
        xlabel=args.xlabel,
        ylabel=args.ylabel,
        title=args.title,
        hlines=args.hline or (),
        vlines=args.vline or (),
    )
    try:
        plot_csv(args.csv, spec, args.output)
    except MissingColumnError as exc:
        raise ConfigError("column", exc.args[0]) from None
    return EXIT_OK


def run_preset(name: str, out_dir: Path, t_max: float = 400.0, steps: int = 4000) -> list[Path]:
    """Reproduce the entropy (``fig1``) or precession (``fig2``) figure data and plot."""
    if name not in ("fig1", "fig2"):
        raise ConfigError("preset", f"unknown preset {name!r}")
    ScenarioConfig(t_max=t_max, steps=steps).validate()
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for temp in PRESET_TEMPERATURES:
        cfg = ScenarioConfig(temperature=temp, t_max=t_max, steps=steps)
        path = out_dir / f"{name}_T{temp}.csv"
        write_series_csv(path, cfg)
        written.append(path)
    labels = [f"T={t}" for t in PRESET_TEMPERATURES]
    base = ScenarioConfig(t_max=t_max, steps=steps)
    if name == "fig1":
        levels = [thermal_entropy(thermal_populations(base.e2, Temperature.parse(t))) for t in PRESET_TEMPERATURES]
        spec = PlotSpec("e2_t", ["s1"], labels, xlabel="E2 t", ylabel="S1", hlines=levels)
    else:
        series = observable_series(base.params, base.temp, base.grid)
        maxima = [base.e2 * e.t for e in extrema_locator(series, "s1") if e.kind == "max"]
        spec = PlotSpec("e2_t", ["abs_sigma_plus"], labels, xlabel="E2 t", ylabel="|<sigma_+>|", vlines=maxima)
    svg = plot_csv(written, spec, out_dir / f"{name}.svg")
    written.append(svg)
    return written


def cmd_preset(args: argparse.Namespace) -> int:
    t_max = 400.0 if args.t_max is None else args.t_max
    steps = 4000 if args.steps is None else args.steps
    paths = run_preset(args.name, Path(args.output_dir), t_max, steps)
    for p in paths:
        log.info("wrote %s", p)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qtentropy", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="write the observable series as CSV")
    _add_scenario_flags(sp, "CSV path (default simulation.csv)")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("audit", help="compare closed-form expressions with the exact evolution")
    _add_scenario_flags(sp, "JSON report path (default audit.json)")
    sp.set_defaults(func=cmd_audit)

    sp = sub.add_parser("plot", help="plot CSV columns to SVG")
    sp.add_argument("csv", nargs="+")
    sp.add_argument("--x", default="e2_t")
    sp.add_argument("--y", action="append", help="column to plot (repeatable)")
    sp.add_argument("--label", action="append", help="trace label (repeatable, file-major order)")
    sp.add_argument("--hline", action="append", type=float)
    sp.add_argument("--vline", action="append", type=float)
    sp.add_argument("--xlabel")
    sp.add_argument("--ylabel")
    sp.add_argument("--title")
    sp.add_argument("-o", "--output", default="plot.svg")
    sp.set_defaults(func=cmd_plot)

    sp = sub.add_parser("preset", help="reproduce a figure: fig1 (entropy) or fig2 (precession)")
    sp.add_argument("name", choices=("fig1", "fig2"))
    sp.add_argument("-o", "--output-dir", default=".")
    sp.add_argument("--t-max", dest="t_max", type=float)
    sp.add_argument("--steps", type=int)
    sp.set_defaults(func=cmd_preset)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (ConfigError, ParameterError, IntegrationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

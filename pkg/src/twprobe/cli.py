"""Command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 numerical-validity error,
4 I/O error.
"""

from __future__ import annotations

import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from . import __version__
from .config import SCENARIOS, ScenarioConfig, parse_config
from .errors import ConfigError, TwprobeError
from .scenarios import run_scenario
from .single_photon import optimize_pulse_length
from .timeseries import FORMATS, emit_timeseries, metadata_json_text

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def _fail(msg: str, code: int):
    click.echo(f"error: {msg}", err=True)
    sys.exit(code)


def _run_one(cfg: ScenarioConfig, out_dir: Path, fmt: str) -> dict:
    ts = run_scenario(cfg)
    files = emit_timeseries(ts, fmt, out_dir / f"{cfg.name}.{fmt}")
    return {
        "name": cfg.name,
        "scenario": cfg.scenario,
        "rows": len(ts),
        "files": [p.name for p in files],
        "results": ts.metadata.get("results", {}),
    }


@click.group()
@click.version_option(__version__, prog_name="twprobe")
def main():
    """Traveling-wave continuous-measurement simulations."""


@main.command()
@click.argument("config_path", type=click.Path(dir_okay=False))
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None,
              help="Output directory (default: [run] out, else the current directory).")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default=None,
              help="Output format (default: [run] format, else csv).")
@click.option("--jobs", type=click.IntRange(1), default=1, show_default=True,
              help="Scenarios to run concurrently.")
def run(config_path, out_dir, fmt, jobs):
    """Run every scenario in CONFIG_PATH and write one output per section."""
    try:
        text = Path(config_path).read_text(encoding="utf-8")
    except OSError as exc:
        _fail(f"cannot read {config_path}: {exc}", EXIT_IO)
    try:
        runs = parse_config(text)
    except ConfigError as exc:
        _fail(str(exc), EXIT_CONFIG)

    out = Path(out_dir or runs[0].output_dir or ".")
    fmt = fmt or runs[0].output_format
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        _fail(f"cannot create {out}: {exc}", EXIT_IO)

    try:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            summaries = list(pool.map(lambda c: _run_one(c, out, fmt), runs))
    except ConfigError as exc:
        _fail(str(exc), EXIT_CONFIG)
    except TwprobeError as exc:
        _fail(str(exc), EXIT_NUMERICAL)
    except OSError as exc:
        _fail(f"I/O failure: {exc}", EXIT_IO)

    summaries.sort(key=lambda s: s["name"])
    try:
        (out / "summary.json").write_text(metadata_json_text({"runs": summaries}), encoding="utf-8")
    except OSError as exc:
        _fail(f"I/O failure: {exc}", EXIT_IO)
    for s in summaries:
        click.echo(f"{s['name']}: {s['scenario']} -> {', '.join(s['files'])} ({s['rows']} rows)")


@main.command("optimize-pulse")
@click.option("--kappa-over-gamma", type=float, required=True)
@click.option("--gamma", type=float, default=1.0, show_default=True)
def optimize_pulse(kappa_over_gamma, gamma):
    """Single-photon pulse length that maximises the excitation probability."""
    if not (kappa_over_gamma >= 0 and gamma > 0):
        _fail("need kappa-over-gamma >= 0 and gamma > 0", EXIT_CONFIG)
    tau, p_e = optimize_pulse_length(kappa_over_gamma * gamma, gamma)
    click.echo(json.dumps({
        "gamma_tau": gamma * tau,
        "tau": tau,
        "P_e": p_e,
        "P_e_over_kappa_over_gamma": p_e / kappa_over_gamma if kappa_over_gamma else None,
    }, indent=1))


@main.command("list-scenarios")
def list_scenarios():
    """Show every scenario with its required and optional keys."""
    for name in sorted(SCENARIOS):
        schema = SCENARIOS[name]
        click.echo(f"{name}: {schema.description}")
        click.echo(f"  required: {', '.join(schema.required)}")
        click.echo(f"  optional: {', '.join(schema.optional)}")

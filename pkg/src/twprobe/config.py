"""Scenario configuration files.

A config is INI-style text. Every section except ``[run]`` describes one
scenario run and is named after its output file::

    [run]
    format = csv

    [single_photon]
    scenario = single-photon
    kappa_over_gamma = 0.02
    gamma_tau = 2.5
    n_slices = 10000

Unknown keys, missing required keys and malformed numbers are all
:class:`ConfigError`.
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field

from .errors import ConfigError
from .timeseries import FORMATS

RUN_SECTION = "run"
RUN_KEYS = {"format", "seed", "out"}
_NAME_RE = re.compile(r"^[A-Za-z0-9_.-]+$")


@dataclass(frozen=True)
class ParamSpec:
    kind: type = float
    positive: bool = True  # strictly > 0; False means >= 0


@dataclass(frozen=True)
class ScenarioSchema:
    required: dict
    optional: dict
    description: str


_GAMMA = {"gamma": ParamSpec()}

SCENARIOS = {
    "coherent-drive": ScenarioSchema(
        required={"rabi": ParamSpec(positive=False), "kappa_over_gamma": ParamSpec(positive=False),
                  "t_final": ParamSpec()},
        optional={**_GAMMA, "step": ParamSpec(), "sample_every": ParamSpec(int),
                  "extra_decay": ParamSpec(positive=False),
                  "initial_excited": ParamSpec(int, positive=False)},
        description="driven atom decaying at the measurement rate kappa (master equation)",
    ),
    "single-photon": ScenarioSchema(
        required={"kappa_over_gamma": ParamSpec(), "gamma_tau": ParamSpec(),
                  "n_slices": ParamSpec(int)},
        optional={**_GAMMA, "t_final": ParamSpec(), "sample_every": ParamSpec(int)},
        description="square single-photon pulse, exact slice recursion vs closed form and cavity JC",
    ),
    "fock-pulse": ScenarioSchema(
        required={"n_photons": ParamSpec(int), "kappa_over_gamma": ParamSpec(),
                  "gamma_tau": ParamSpec(), "t_final": ParamSpec()},
        optional={**_GAMMA, "step": ParamSpec(), "sample_every": ParamSpec(int)},
        description="n-photon Fock pulse as a single Jaynes-Cummings mode, with regime checks",
    ),
    "faraday": ScenarioSchema(
        required={"kappa": ParamSpec(), "t_final": ParamSpec()},
        optional={**_GAMMA, "chi": ParamSpec(), "dt": ParamSpec(), "step": ParamSpec(),
                  "sample_every": ParamSpec(int)},
        description="Faraday QND dephasing: composed slice maps vs master equation vs analytic",
    ),
    "oracle-compare": ScenarioSchema(
        required={"kappa_over_gamma": ParamSpec(), "alpha_sq": ParamSpec(positive=False),
                  "kappa_dt": ParamSpec(), "t_final": ParamSpec()},
        optional={**_GAMMA, "sample_every": ParamSpec(int)},
        description="slicewise coherent-field oracle vs the driven-atom master equation",
    ),
}


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    scenario: str
    params: dict = field(default_factory=dict)
    output_format: str = "csv"
    output_dir: str | None = None
    seed: int = 0  # reserved; every scenario is deterministic


def _parse_value(scenario: str, key: str, raw: str, spec: ParamSpec):
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"[{scenario}] {key} = {raw!r} is not a number") from None
    if not math.isfinite(value):
        raise ConfigError(f"[{scenario}] {key} must be finite, got {raw!r}")
    if spec.kind is int:
        if value != int(value):
            raise ConfigError(f"[{scenario}] {key} must be an integer, got {raw!r}")
        value = int(value)
    if spec.positive and value <= 0:
        raise ConfigError(f"[{scenario}] {key} must be > 0, got {raw!r}")
    if not spec.positive and value < 0:
        raise ConfigError(f"[{scenario}] {key} must be >= 0, got {raw!r}")
    return value


def apply_defaults(scenario: str, params: dict) -> dict:
    """Fill in ``gamma = 1`` and ``step = min(dt, 1e-3 / gamma)`` where the scenario uses them."""
    p = dict(params)
    schema = SCENARIOS[scenario]
    p.setdefault("gamma", 1.0)
    base_step = 1e-3 / p["gamma"]
    if scenario == "faraday":
        # kappa*dt is the per-slice chi^2 |alpha|^2; keep it well under the perturbative limit
        p.setdefault("dt", min(base_step, 1e-4 / p["kappa"]))
        p.setdefault("chi", 1e-2)
    if "step" in schema.optional and scenario != "fock-pulse":
        p.setdefault("step", min(p.get("dt", base_step), base_step))
    if scenario == "fock-pulse":
        p.setdefault("step", p["t_final"] / 1000.0)
    if scenario == "single-photon":
        p.setdefault("t_final", 2.0 * p["gamma_tau"] / p["gamma"])
    if "sample_every" in schema.optional:
        p.setdefault("sample_every", 1)
    return p


def validate_section(name: str, items: dict) -> tuple[str, dict]:
    items = dict(items)
    scenario = items.pop("scenario", None)
    if scenario is None:
        raise ConfigError(f"section [{name}] is missing required key 'scenario'")
    if scenario not in SCENARIOS:
        raise ConfigError(f"section [{name}]: unknown scenario {scenario!r}; "
                          f"expected one of {sorted(SCENARIOS)}")
    schema = SCENARIOS[scenario]
    known = {**schema.required, **schema.optional}
    unknown = sorted(set(items) - set(known))
    if unknown:
        raise ConfigError(f"section [{name}] ({scenario}): unknown key(s) {', '.join(unknown)}")
    for key in schema.required:
        if key not in items:
            raise ConfigError(f"section [{name}] ({scenario}): missing required key '{key}'")
    params = {k: _parse_value(name, k, v, known[k]) for k, v in items.items()}
    return scenario, apply_defaults(scenario, params)


def parse_config(text: str) -> list[ScenarioConfig]:
    """Parse a config document into validated runs, ordered by section name."""
    parser = configparser.ConfigParser(interpolation=None, default_section="__no_defaults__")
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None

    fmt, out, seed = "csv", None, 0
    if parser.has_section(RUN_SECTION):
        run = dict(parser.items(RUN_SECTION))
        unknown = sorted(set(run) - RUN_KEYS)
        if unknown:
            raise ConfigError(f"section [run]: unknown key(s) {', '.join(unknown)}")
        fmt = run.get("format", fmt)
        if fmt not in FORMATS:
            raise ConfigError(f"section [run]: format must be one of {FORMATS}, got {fmt!r}")
        out = run.get("out")
        try:
            seed = int(run.get("seed", 0))
        except ValueError:
            raise ConfigError("section [run]: seed must be an integer") from None

    runs = []
    for name in sorted(parser.sections()):
        if name == RUN_SECTION:
            continue
        if not _NAME_RE.match(name):
            raise ConfigError(f"section name {name!r} is not usable as a file name")
        scenario, params = validate_section(name, parser.items(name))
        runs.append(ScenarioConfig(name, scenario, params, fmt, out, seed))
    if not runs:
        raise ConfigError("config defines no scenario sections")
    return runs

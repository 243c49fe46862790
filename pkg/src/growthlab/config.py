"""Scenario files: flat ``key = value`` sections parsed with configparser.

Layout::

    [scenario]
    name = my-run
    experiment = transition

    [params]
    sigma = 2.0

    [options]
    s_values = unbounded, 0

    [output]
    dir = my-run

The literal ``unbounded`` stands for an infinite constraint tightness.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field

from .errors import ConfigError
from .params import ModelParams

EXPERIMENTS = ("bgp", "grid", "transition", "trap", "policy", "nonrivalry", "accumulation")

SHOOTING_KEYS = ("dt", "horizon", "perturbation_scale", "target_g_N", "tolerance", "le_guard",
                 "g_N_floor", "chatter_limit")

OPTION_KEYS = {
    "bgp": (),
    "grid": ("xi_min", "xi_max", "xi_step", "zeta_min", "zeta_max", "zeta_step", "sigma_values", "columns"),
    "transition": SHOOTING_KEYS + ("s_values", "columns"),
    "trap": SHOOTING_KEYS + ("starts", "s_values"),
    "policy": ("tax_rates", "variant"),
    "nonrivalry": ("c0_values", "d_max", "planner_variant", "crossover_lo", "crossover_hi", "oracle_step"),
    "accumulation": ("kappa", "horizon", "dt", "Phi0"),
}

SECTIONS = {
    "scenario": ("name", "experiment"),
    "output": ("dir",),
}

UNBOUNDED = "unbounded"


def parse_number(text: str) -> float:
    t = text.strip()
    if t.lower() == UNBOUNDED:
        return math.inf
    try:
        return float(t)
    except ValueError:
        raise ConfigError(f"not a number: {text!r}") from None


def parse_list(text: str) -> list[float]:
    items = [x for x in (part.strip() for part in text.split(",")) if x]
    if not items:
        raise ConfigError("empty list")
    return [parse_number(x) for x in items]


@dataclass
class ScenarioConfig:
    name: str
    experiment: str
    params: ModelParams
    options: dict[str, str] = field(default_factory=dict)
    output_dir: str | None = None

    def number(self, key: str, default: float) -> float:
        return parse_number(self.options[key]) if key in self.options else default

    def numbers(self, key: str, default: list[float]) -> list[float]:
        return parse_list(self.options[key]) if key in self.options else list(default)

    def text(self, key: str, default: str) -> str:
        return self.options.get(key, default).strip()


def parse_config_text(text: str, default_name: str = "scenario") -> ScenarioConfig:
    """Parse a scenario; every unknown section or key raises ConfigError naming it."""
    cp = configparser.ConfigParser(interpolation=None, delimiters=("=",), comment_prefixes=("#", ";"))
    cp.optionxform = str  # keys are case-sensitive (g_N, M, Phi0)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None

    allowed_sections = set(SECTIONS) | {"params", "options"}
    for sec in cp.sections():
        if sec not in allowed_sections:
            raise ConfigError(f"unknown section [{sec}]")
    if not cp.has_section("scenario"):
        raise ConfigError("missing [scenario] section")
    for sec, keys in SECTIONS.items():
        if cp.has_section(sec):
            for key in cp[sec]:
                if key not in keys:
                    raise ConfigError(f"unknown key '{key}' in [{sec}]")

    experiment = cp["scenario"].get("experiment", "").strip()
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"experiment must be one of {', '.join(EXPERIMENTS)}; got {experiment!r}")

    values = {}
    if cp.has_section("params"):
        names = set(ModelParams.field_names())
        for key, raw in cp["params"].items():
            if key not in names:
                raise ConfigError(f"unknown key '{key}' in [params]")
            values[key] = parse_number(raw)
    params = ModelParams(**values)

    options = {}
    if cp.has_section("options"):
        for key, raw in cp["options"].items():
            if key not in OPTION_KEYS[experiment]:
                raise ConfigError(f"unknown key '{key}' in [options] for experiment '{experiment}'")
            options[key] = raw

    name = cp["scenario"].get("name", default_name).strip() or default_name
    out = cp["output"].get("dir") if cp.has_section("output") else None
    return ScenarioConfig(name, experiment, params, options, out.strip() if out else None)


def read_config(path: str) -> ScenarioConfig:
    import os

    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    stem = os.path.splitext(os.path.basename(path))[0]
    return parse_config_text(text, default_name=stem)


def params_to_manifest(p: ModelParams) -> dict:
    return {k: (UNBOUNDED if v == math.inf else v) for k, v in p.to_dict().items()}


def params_from_manifest(data: dict) -> ModelParams:
    return ModelParams(**{k: (math.inf if v == UNBOUNDED else float(v)) for k, v in data.items()})

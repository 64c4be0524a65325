"""Run configuration: INI sections with a closed set of keys.

Unknown sections or keys are errors.  Every value has a default taken from
the named preset, so an empty file is a valid configuration.
"""

from __future__ import annotations

import configparser
import dataclasses
import math
from dataclasses import dataclass

from ..errors import ParameterError
from ..model import ModelParams, preset_params

__all__ = ["ConfigError", "RunConfig", "load_config", "parse_dt_policy"]


class ConfigError(ParameterError):
    """Malformed or unknown configuration entry."""


@dataclass(frozen=True)
class RunConfig:
    # model
    omega1: float = 2.0
    lam: float = 0.1
    cutoff_M: float = 5.0
    # discretization
    box_L: float = 100.0
    n_modes: int = 1200
    # survival
    survival_t_min: float = -30.0
    survival_t_max: float = 30.0
    survival_t_step: float = 0.1
    fit_t_min: float = 2.0
    fit_t_max: float = 30.0
    # emission
    emission_t: float = 10.0
    emission_x_min: float = -30.0
    emission_x_max: float = 30.0
    emission_x_step: float = 0.0  # 0 means box_L / n_modes
    emission_window_margin: float = 2.0
    # correlation
    correlation_t: float = 30.0
    correlation_x2: float = 15.0
    correlation_x1_min: float = -50.0
    correlation_x1_max: float = 50.0
    correlation_x1_step: float = 0.0
    correlation_front_offset: float = 0.5
    correlation_peak_exclusion: float = 1.0
    # evolution
    dt_policy: str = "auto"
    dt0: float = 0.02
    dt_tol: float = 1e-6
    # tolerances
    tolerance: float = 1e-8
    pole_tol: float = 1e-10
    # selftest
    seed: int = 20240611
    corpus_size: int = 20
    # output
    out_dir: str = "runs"
    preset: str = "paper"

    @property
    def params(self) -> ModelParams:
        return ModelParams(self.omega1, self.lam, self.cutoff_M)

    @property
    def x_step(self) -> float:
        return self.emission_x_step or self.box_L / self.n_modes

    @property
    def x1_step(self) -> float:
        return self.correlation_x1_step or self.box_L / self.n_modes

    def replace(self, **changes) -> "RunConfig":
        cfg = dataclasses.replace(self, **changes)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        positives = ("cutoff_M", "box_L", "survival_t_step", "dt0", "dt_tol", "tolerance",
                     "pole_tol", "emission_t", "correlation_t", "correlation_front_offset")
        for name in positives:
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be positive, got {value}")
        if self.n_modes < 1 or self.corpus_size < 1:
            raise ConfigError("n_modes and corpus_size must be positive")
        for lo, hi in (("survival_t_min", "survival_t_max"), ("fit_t_min", "fit_t_max"),
                       ("emission_x_min", "emission_x_max"),
                       ("correlation_x1_min", "correlation_x1_max")):
            if not getattr(self, lo) < getattr(self, hi):
                raise ConfigError(f"{lo} must be below {hi}")
        parse_dt_policy(self.dt_policy)
        try:
            self.params
        except ParameterError as exc:
            raise ConfigError(str(exc)) from exc

    def echo(self) -> str:
        lines = []
        for section, keys in SECTIONS.items():
            lines.append(f"[{section}]")
            for key, attr in keys.items():
                lines.append(f"{key} = {getattr(self, attr)}")
            lines.append("")
        return "\n".join(lines)


# section -> {ini key: attribute}
SECTIONS = {
    "model": {"omega1": "omega1", "lambda": "lam", "cutoff_M": "cutoff_M"},
    "discretization": {"box_L": "box_L", "n_modes": "n_modes"},
    "survival": {"t_min": "survival_t_min", "t_max": "survival_t_max", "t_step": "survival_t_step",
                 "fit_t_min": "fit_t_min", "fit_t_max": "fit_t_max"},
    "emission": {"t": "emission_t", "x_min": "emission_x_min", "x_max": "emission_x_max",
                 "x_step": "emission_x_step", "window_margin": "emission_window_margin"},
    "correlation": {"t": "correlation_t", "x2": "correlation_x2", "x1_min": "correlation_x1_min",
                    "x1_max": "correlation_x1_max", "x1_step": "correlation_x1_step",
                    "front_offset": "correlation_front_offset",
                    "peak_exclusion": "correlation_peak_exclusion"},
    "evolution": {"dt_policy": "dt_policy", "dt0": "dt0", "dt_tol": "dt_tol"},
    "tolerances": {"tolerance": "tolerance", "pole": "pole_tol"},
    "selftest": {"seed": "seed", "corpus_size": "corpus_size"},
    "output": {"out_dir": "out_dir"},
}

_TYPES = {f.name: f.type for f in dataclasses.fields(RunConfig)}


def parse_dt_policy(text: str):
    """'auto' or 'fixed:<dt>'; returns None for auto, else the float dt."""
    if text == "auto":
        return None
    if text.startswith("fixed:"):
        try:
            dt = float(text[6:])
        except ValueError:
            raise ConfigError(f"bad dt policy {text!r}") from None
        if not (dt > 0 and math.isfinite(dt)):
            raise ConfigError(f"fixed dt must be positive, got {dt}")
        return dt
    raise ConfigError(f"dt policy must be 'auto' or 'fixed:<dt>', got {text!r}")


def _convert(attr: str, raw: str):
    kind = _TYPES[attr]
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
    except ValueError:
        raise ConfigError(f"{attr}: cannot parse {raw!r} as {kind}") from None
    return raw


def preset_config(name: str = "paper") -> RunConfig:
    params, box_L, n_modes = preset_params(name)
    return RunConfig(omega1=params.omega1, lam=params.lam, cutoff_M=params.cutoff_M,
                     box_L=box_L, n_modes=n_modes, preset=name)


def load_config(path: str | None = None, preset: str = "paper", **overrides) -> RunConfig:
    """Preset defaults, then the INI file, then keyword overrides."""
    values = {}
    if path is not None:
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str
        try:
            with open(path) as fh:
                parser.read_file(fh)
        except (OSError, configparser.Error) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        for section in parser.sections():
            if section not in SECTIONS:
                raise ConfigError(f"unknown section [{section}]")
            for key, raw in parser.items(section):
                if key not in SECTIONS[section]:
                    raise ConfigError(f"unknown key {key!r} in [{section}]")
                attr = SECTIONS[section][key]
                values[attr] = _convert(attr, raw.strip())
    values.update({k: v for k, v in overrides.items() if v is not None})
    cfg = dataclasses.replace(preset_config(preset), **values)
    cfg.validate()
    return cfg

"""Flat ``key = value`` experiment config files.

Blank lines and ``#`` comments are ignored; list values are comma
separated. Unknown or repeated keys are errors.

    L = 8
    lambda = 1.0
    beta_lambda = 0.1, 0.2, 0.3, 0.4
    partitions = 1, 2, 4
"""
from __future__ import annotations

from dataclasses import fields, replace
from pathlib import Path

from .experiments import ExperimentConfig


class ConfigError(ValueError):
    pass


def _floats(text):
    return tuple(float(v) for v in text.split(",") if v.strip())


def _ints(text):
    return tuple(int(v) for v in text.split(",") if v.strip())


def _optional_float(text):
    return None if text.strip().lower() in ("", "none", "auto") else float(text)


# file key -> (ExperimentConfig field, parser)
KEYS = {
    "L": ("L", int),
    "n": ("n", int),
    "lambda": ("lam", float),
    "delta_e": ("delta_e", float),
    "beta_lambda": ("beta_lambda", _floats),
    "partitions": ("partitions", _ints),
    "realizations": ("realizations", int),
    "base_seed": ("base_seed", int),
    "bin_width": ("bin_width", _optional_float),
    "envelope_amplitude": ("envelope_amplitude", float),
    "fig2_realization": ("fig2_realization", int),
    "fig2_beta_width": ("fig2_beta_width", float),
}
_FIELD_TO_KEY = {f: k for k, (f, _) in KEYS.items()}


def parse_config(text: str, base: ExperimentConfig | None = None) -> ExperimentConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        name, parse = KEYS[key]
        if name in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[name] = parse(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from None
    try:
        return replace(base or ExperimentConfig(), **values)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def format_config(config: ExperimentConfig) -> str:
    lines = []
    for f in fields(config):
        v = getattr(config, f.name)
        if isinstance(v, tuple):
            v = ", ".join(repr(x) for x in v)
        elif v is None:
            v = "auto"
        else:
            v = repr(v)
        lines.append(f"{_FIELD_TO_KEY[f.name]} = {v}")
    return "\n".join(lines) + "\n"

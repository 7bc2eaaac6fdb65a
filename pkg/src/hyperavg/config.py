"""Experiment configuration: a flat text file of "section.key = value" lines.

Blank lines and '#' comments are allowed.  CLI flags override file values,
and a config plus the tool version determines every output byte.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import ConfigError

_SECTIONS = ("hypergraph", "interaction", "init", "run", "output")

_SCHEMA = {
    # section.key -> (python type, default)
    "hypergraph.source": (str, None),  # path to a hypergraph file
    "hypergraph.kind": (str, None),  # er | complete | torus
    "hypergraph.n": (int, None),
    "hypergraph.p_edge": (float, None),
    "hypergraph.L": (int, None),
    "hypergraph.d": (int, 1),
    "hypergraph.seed": (int, 0),
    "interaction.kind": (str, "exponential"),
    "interaction.lambda": (float, 0.0),
    "interaction.coefficients": (str, None),  # comma-separated reals
    "init.p_init": (float, 0.5),
    "init.seed": (int, 0),
    "run.tol": (float, 1e-9),
    "run.t_max": (int, 1000),
    "run.stride": (int, None),
    "run.R": (int, 50),
    "run.C": (float, 4.3),
    "run.m_max": (int, 64),
    "run.target": (float, 1e-9),
    "run.a": (float, None),  # anti-concentration threshold
    "run.p_edge": (float, None),  # declared ER parameter for certificates
    "output.dir": (str, "."),
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Typed view of the parsed key/value pairs."""

    values: dict

    def get(self, key: str, default=None):
        if key in self.values:
            return self.values[key]
        if key in _SCHEMA and _SCHEMA[key][1] is not None:
            return _SCHEMA[key][1]
        return default

    def with_overrides(self, overrides: dict) -> "ExperimentConfig":
        """New config with non-None override values applied."""
        merged = dict(self.values)
        for key, val in overrides.items():
            if val is not None:
                merged[key] = _coerce(key, str(val))
        return ExperimentConfig(values=merged)


def _coerce(key: str, raw: str, line: int | None = None):
    if key not in _SCHEMA:
        raise ConfigError(f"unknown key {key!r}", line=line)
    typ = _SCHEMA[key][0]
    try:
        if typ is int:
            return int(raw)
        if typ is float:
            return float(raw)
        return raw
    except ValueError:
        raise ConfigError(
            f"value {raw!r} for {key!r} is not a valid {typ.__name__}", line=line
        ) from None


def parse_config(text: str) -> ExperimentConfig:
    """Parse 'section.key = value' lines; errors carry the line number."""
    values: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"expected 'section.key = value', got {line!r}", line=lineno)
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if "." not in key or key.split(".", 1)[0] not in _SECTIONS:
            raise ConfigError(
                f"key {key!r} must start with one of {', '.join(_SECTIONS)}",
                line=lineno,
            )
        values[key] = _coerce(key, raw, line=lineno)
    return ExperimentConfig(values=values)


def load_config(path) -> ExperimentConfig:
    from pathlib import Path

    return parse_config(Path(path).read_text())


def default_config() -> ExperimentConfig:
    return ExperimentConfig(values={})

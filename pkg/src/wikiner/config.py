"""Project configuration: a small TOML file plus environment overrides.

The file lives in the project root as ``wikiner.toml`` with flat
key/value sections. Unknown sections or keys are rejected so typos fail
loudly. Any value can be overridden through the environment as
``WIKINER_<SECTION>_<KEY>`` (for example ``WIKINER_EVAL_SEED=7``).
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

CONFIG_NAME = "wikiner.toml"
ENV_PREFIX = "WIKINER_"


class ConfigError(ValueError):
    pass


@dataclass
class ProjectConfig:
    project_dir: Path
    seed_list: str = "seeds.txt"
    tagger: str = "heuristic"
    pos_agg: str = "any"
    wt_agg: str = "all"
    model: str = "lr"
    folds: int = 5
    seed: int = 42
    fractions: list[float] = field(
        default_factory=lambda: [0.25, 0.5, 0.75, 1.0]
    )
    port: int = 8787
    annotators: list[str] = field(default_factory=lambda: ["annotator-1", "annotator-2"])

    def to_toml(self) -> str:
        fractions = ", ".join(str(f) for f in self.fractions)
        annotators = ", ".join(f'"{a}"' for a in self.annotators)
        return (
            "[project]\n"
            f'seed_list = "{self.seed_list}"\n'
            "\n[tagger]\n"
            f'kind = "{self.tagger}"\n'
            "\n[aggregation]\n"
            f'pos = "{self.pos_agg}"\n'
            f'wordtype = "{self.wt_agg}"\n'
            "\n[eval]\n"
            f'model = "{self.model}"\n'
            f"folds = {self.folds}\n"
            f"seed = {self.seed}\n"
            f"fractions = [{fractions}]\n"
            "\n[service]\n"
            f"port = {self.port}\n"
            f"annotators = [{annotators}]\n"
        )

    def save(self) -> Path:
        path = self.project_dir / CONFIG_NAME
        path.write_text(self.to_toml(), encoding="utf-8")
        return path


_SCHEMA = {
    "project": {"seed_list": str},
    "tagger": {"kind": str},
    "aggregation": {"pos": str, "wordtype": str},
    "eval": {"model": str, "folds": int, "seed": int, "fractions": list},
    "service": {"port": int, "annotators": list},
}

_FIELD_BY_KEY = {
    ("project", "seed_list"): "seed_list",
    ("tagger", "kind"): "tagger",
    ("aggregation", "pos"): "pos_agg",
    ("aggregation", "wordtype"): "wt_agg",
    ("eval", "model"): "model",
    ("eval", "folds"): "folds",
    ("eval", "seed"): "seed",
    ("eval", "fractions"): "fractions",
    ("service", "port"): "port",
    ("service", "annotators"): "annotators",
}


def load_config(project_dir: Path, environ: dict | None = None) -> ProjectConfig:
    """Read wikiner.toml (when present) and apply environment overrides."""
    project_dir = Path(project_dir)
    config = ProjectConfig(project_dir=project_dir)
    path = project_dir / CONFIG_NAME
    if path.exists():
        with path.open("rb") as fh:
            data = tomllib.load(fh)
        for section, values in data.items():
            if section not in _SCHEMA:
                raise ConfigError(f"unknown config section [{section}]")
            if not isinstance(values, dict):
                raise ConfigError(f"section [{section}] must hold key/value pairs")
            for key, value in values.items():
                expected = _SCHEMA[section].get(key)
                if expected is None:
                    raise ConfigError(f"unknown config key {section}.{key}")
                if expected is int and isinstance(value, bool):
                    raise ConfigError(f"{section}.{key} must be an integer")
                if expected is not list and not isinstance(value, expected):
                    raise ConfigError(
                        f"{section}.{key} must be {expected.__name__}"
                    )
                if expected is list and not isinstance(value, list):
                    raise ConfigError(f"{section}.{key} must be a list")
                setattr(config, _FIELD_BY_KEY[(section, key)], value)
    _apply_env(config, environ if environ is not None else os.environ)
    config.fractions = [float(f) for f in config.fractions]
    config.annotators = [str(a) for a in config.annotators]
    return config


def _apply_env(config: ProjectConfig, environ: dict) -> None:
    for (section, key), attr in _FIELD_BY_KEY.items():
        name = f"{ENV_PREFIX}{section.upper()}_{key.upper()}"
        if name not in environ:
            continue
        raw = environ[name]
        expected = _SCHEMA[section][key]
        if expected is int:
            try:
                value = int(raw)
            except ValueError as exc:
                raise ConfigError(f"{name} must be an integer") from exc
        elif expected is list:
            parts = [p.strip() for p in raw.split(",") if p.strip()]
            if attr == "fractions":
                value = [float(p) for p in parts]
            else:
                value = parts
        else:
            value = raw
        setattr(config, attr, value)

"""Compile configuration: defaults, YAML file, command-line overrides."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import yaml

from mdlc.place import PlaceParams
from mdlc.techmap import DEFAULT_FSM_PERIOD


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class CompileConfig:
    fsm_period: int = DEFAULT_FSM_PERIOD
    auto_clock: bool = True
    fanout_trees: bool = True
    io_buffers: bool = True
    max_ring: int = 20
    place: bool = True
    placement: PlaceParams = field(default_factory=PlaceParams)
    output_dir: str = "build"

    def to_dict(self) -> dict:
        return asdict(self)


_TOP = {f.name for f in fields(CompileConfig)} - {"placement"}
_PLACE = {f.name for f in fields(PlaceParams)}


def merge(base: CompileConfig, overrides: dict) -> CompileConfig:
    """Apply a flat or nested mapping of overrides; ``None`` values are skipped."""
    top, place = {}, {}
    for key, value in overrides.items():
        if value is None:
            continue
        if key == "placement":
            if not isinstance(value, dict):
                raise ConfigError("'placement' must be a mapping")
            for k, v in value.items():
                if k not in _PLACE:
                    raise ConfigError(f"unknown placement option {k!r}")
                if v is not None:
                    place[k] = v
        elif key in _TOP:
            top[key] = value
        elif key in _PLACE:
            place[key] = value
        else:
            raise ConfigError(f"unknown option {key!r}")
    cfg = replace(base, **top)
    if place:
        cfg = replace(cfg, placement=replace(cfg.placement, **place))
    if cfg.fsm_period < 2:
        raise ConfigError("fsm_period must be at least 2")
    return cfg


def load_config(path: str | Path | None, flags: dict | None = None) -> CompileConfig:
    cfg = CompileConfig()
    if path is not None:
        try:
            data = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a mapping")
        cfg = merge(cfg, data)
    return merge(cfg, flags or {})

"""Engine configuration: tunable thresholds, windows, and filter noise.

All knobs the interpretation pipeline uses live here with documented
defaults. A JSON config file overlays the defaults; unknown keys are
rejected so typos cannot silently revert a knob to its default.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any

from .errors import ConfigError


@dataclass(frozen=True, slots=True)
class KalmanConfig:
    """Scalar constant-position filter noise, shared by both affect axes."""

    q: float = 0.001  # process variance per step
    r: float = 0.05   # measurement variance
    p0: float = 1.0   # error variance after the initializing measurement


@dataclass(frozen=True, slots=True)
class ShiftConfig:
    """Sudden-valence-shift detector and flash timing."""

    window_s: float = 1.0        # age of the comparison baseline
    delta: float = 0.6           # smoothed-valence change that triggers a flash
    flash_duration_s: float = 0.7
    flash_refractory_s: float = 2.0
    flash_alpha: float = 0.3


@dataclass(frozen=True, slots=True)
class MovementConfig:
    """Sliding-window movement detection thresholds (degrees / deg^2)."""

    window_s: float = 1.0
    nod_var: float = 15.0
    shake_var: float = 15.0
    tilt_deg: float = 12.0
    var_opacity_max: float = 100.0     # variance mapping to opacity 1.0
    tilt_opacity_max_deg: float = 45.0  # |mean roll| mapping to opacity 1.0
    min_fill: float = 0.5              # fraction of window_s that must be covered


@dataclass(frozen=True, slots=True)
class GeometryConfig:
    """Rendering-placement constants, all in normalized image units."""

    ellipse_scale: float = 1.10  # outline semi-axes relative to half the face box
    icon_offset: float = 0.02    # icon anchor offset past the box corner
    line_band: float = 0.05      # band around box edges holding movement lines
    line_count: int = 3          # segments per side / per tilt ray


@dataclass(frozen=True, slots=True)
class EngineConfig:
    kalman: KalmanConfig = field(default_factory=KalmanConfig)
    icon_confidence: float = 0.80  # icon shown only when confidence strictly exceeds this
    shift: ShiftConfig = field(default_factory=ShiftConfig)
    movement: MovementConfig = field(default_factory=MovementConfig)
    hold_duration_s: float = 0.5   # outline hold across face dropouts
    geometry: GeometryConfig = field(default_factory=GeometryConfig)


_SECTIONS = {
    "kalman": KalmanConfig,
    "shift": ShiftConfig,
    "movement": MovementConfig,
    "geometry": GeometryConfig,
}


def _require_number(path: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {type(value).__name__}")
    v = float(value)
    if not math.isfinite(v):
        raise ConfigError(path, "must be finite")
    return v


def _overlay_section(name: str, cls: type, data: Any) -> Any:
    if not isinstance(data, dict):
        raise ConfigError(name, "expected an object")
    known = {f.name: f for f in fields(cls)}
    kwargs: dict[str, Any] = {}
    for key, value in data.items():
        path = f"{name}.{key}"
        if key not in known:
            raise ConfigError(path, "unknown key")
        if known[key].type == "int":
            v = _require_number(path, value)
            if v != int(v):
                raise ConfigError(path, "expected an integer")
            kwargs[key] = int(v)
        else:
            kwargs[key] = _require_number(path, value)
    return cls(**{**{f.name: getattr(cls(), f.name) for f in fields(cls)}, **kwargs})


def config_from_dict(data: dict[str, Any]) -> EngineConfig:
    """Overlay ``data`` onto the defaults, rejecting unknown keys."""
    if not isinstance(data, dict):
        raise ConfigError("<root>", "expected a JSON object")
    kwargs: dict[str, Any] = {}
    for key, value in data.items():
        if key in _SECTIONS:
            kwargs[key] = _overlay_section(key, _SECTIONS[key], value)
        elif key == "icon_confidence":
            kwargs[key] = _require_number(key, value)
        elif key == "hold_duration_s":
            kwargs[key] = _require_number(key, value)
        else:
            raise ConfigError(key, "unknown key")
    cfg = EngineConfig(**kwargs)
    validate_config(cfg)
    return cfg


def validate_config(cfg: EngineConfig) -> None:
    """Raise ConfigError on any out-of-range knob."""
    checks: list[tuple[str, float, bool]] = [
        ("kalman.q", cfg.kalman.q, cfg.kalman.q > 0),
        ("kalman.r", cfg.kalman.r, cfg.kalman.r > 0),
        ("kalman.p0", cfg.kalman.p0, cfg.kalman.p0 > 0),
        ("icon_confidence", cfg.icon_confidence, 0 < cfg.icon_confidence < 1),
        ("shift.window_s", cfg.shift.window_s, cfg.shift.window_s > 0),
        ("shift.delta", cfg.shift.delta, 0 < cfg.shift.delta <= 2),
        ("shift.flash_duration_s", cfg.shift.flash_duration_s, cfg.shift.flash_duration_s > 0),
        ("shift.flash_refractory_s", cfg.shift.flash_refractory_s,
         cfg.shift.flash_refractory_s >= cfg.shift.flash_duration_s),
        ("shift.flash_alpha", cfg.shift.flash_alpha, 0 < cfg.shift.flash_alpha <= 1),
        ("movement.window_s", cfg.movement.window_s, cfg.movement.window_s > 0),
        ("movement.nod_var", cfg.movement.nod_var, cfg.movement.nod_var > 0),
        ("movement.shake_var", cfg.movement.shake_var, cfg.movement.shake_var > 0),
        ("movement.tilt_deg", cfg.movement.tilt_deg, cfg.movement.tilt_deg > 0),
        ("movement.var_opacity_max", cfg.movement.var_opacity_max, cfg.movement.var_opacity_max > 0),
        ("movement.tilt_opacity_max_deg", cfg.movement.tilt_opacity_max_deg,
         cfg.movement.tilt_opacity_max_deg > 0),
        ("movement.min_fill", cfg.movement.min_fill, 0 < cfg.movement.min_fill <= 1),
        ("hold_duration_s", cfg.hold_duration_s, cfg.hold_duration_s > 0),
        ("geometry.ellipse_scale", cfg.geometry.ellipse_scale, cfg.geometry.ellipse_scale > 0),
        ("geometry.icon_offset", cfg.geometry.icon_offset, cfg.geometry.icon_offset > 0),
        ("geometry.line_band", cfg.geometry.line_band, cfg.geometry.line_band > 0),
        ("geometry.line_count", cfg.geometry.line_count, cfg.geometry.line_count > 0),
    ]
    for path, value, ok in checks:
        if not ok:
            raise ConfigError(path, f"value {value} out of range")


def load_config(path: str | Path | None) -> EngineConfig:
    """Load a config file, or return pure defaults when ``path`` is None."""
    if path is None:
        return EngineConfig()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(str(path), f"invalid JSON: {exc}") from exc
    return config_from_dict(data)

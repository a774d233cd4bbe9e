"""Runtime configuration: dotted keys, JSON files, command-line overrides.

All tunables live in one flat namespace of dotted keys. Config files may
nest ({"cusum": {"drift": 0.1}}) or use dotted keys directly; every key
can be overridden on the command line with ``--set key=value``. Unknown
keys are rejected.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Mapping

from .errors import ConfigError
from .primitives import FitConfig

DEFAULTS: dict[str, Any] = {
    "features.confidence_floor": 0.5,
    "features.normalize": False,
    "cusum.threshold_angle": 30.0,
    # Scaled by the torso length of the first feature sample; used as an
    # absolute threshold when the topology has no bone named "torso".
    "cusum.threshold_bone": 0.15,
    "cusum.drift": 0.0,
    "cusum.w_min": 4,
    "cusum.smoothing_window": 1,
    # Fractions of fit.frame_diagonal.
    "fit.stationary_eps": 0.005,
    "fit.max_radius": 10.0,
    "fit.model_margin": 0.05,
    # Diagonal of the coordinate frame; sqrt(2) suits normalized [0,1]^2
    # coordinates, pixel streams should override.
    "fit.frame_diagonal": math.sqrt(2.0),
    "match.tau": 0.2,
    "match.strict": False,
    "segmenter.min_segment_len": 4,
    "segmenter.refractory": True,
    "segmenter.buffer_capacity": 512,
    "counter.capacity": 64,
}

_BOOL_KEYS = {"features.normalize", "match.strict", "segmenter.refractory"}
_INT_KEYS = {
    "cusum.w_min",
    "cusum.smoothing_window",
    "segmenter.min_segment_len",
    "segmenter.buffer_capacity",
    "counter.capacity",
}


def _flatten(data: Mapping[str, Any], prefix: str = "") -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key, value in data.items():
        dotted = f"{prefix}{key}"
        if isinstance(value, Mapping):
            out.update(_flatten(value, prefix=f"{dotted}."))
        else:
            out[dotted] = value
    return out


def _coerce(key: str, value: Any) -> Any:
    if key in _BOOL_KEYS:
        if isinstance(value, bool):
            return value
        if isinstance(value, str):
            low = value.strip().lower()
            if low in ("true", "1", "yes", "on"):
                return True
            if low in ("false", "0", "no", "off"):
                return False
        raise ConfigError(f"{key} expects a boolean, got {value!r}")
    if key in _INT_KEYS:
        try:
            ivalue = int(value)
        except (TypeError, ValueError):
            raise ConfigError(f"{key} expects an integer, got {value!r}") from None
        if isinstance(value, float) and value != ivalue:
            raise ConfigError(f"{key} expects an integer, got {value!r}")
        return ivalue
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key} expects a number, got {value!r}") from None


def _validate(values: dict[str, Any]) -> None:
    positive = (
        "cusum.threshold_angle",
        "cusum.threshold_bone",
        "fit.stationary_eps",
        "fit.max_radius",
        "fit.frame_diagonal",
        "match.tau",
    )
    for key in positive:
        if values[key] <= 0:
            raise ConfigError(f"{key} must be > 0, got {values[key]}")
    if not 0.0 <= values["features.confidence_floor"] <= 1.0:
        raise ConfigError("features.confidence_floor must lie in [0, 1]")
    if values["cusum.drift"] < 0:
        raise ConfigError("cusum.drift must be >= 0")
    if values["cusum.w_min"] < 1:
        raise ConfigError("cusum.w_min must be >= 1")
    if values["cusum.smoothing_window"] < 1:
        raise ConfigError("cusum.smoothing_window must be >= 1")
    if not 0.0 <= values["fit.model_margin"] < 1.0:
        raise ConfigError("fit.model_margin must lie in [0, 1)")
    if values["segmenter.min_segment_len"] < 4:
        raise ConfigError("segmenter.min_segment_len must be >= 4")
    if values["segmenter.buffer_capacity"] < 8:
        raise ConfigError("segmenter.buffer_capacity must be >= 8")
    if values["counter.capacity"] < 1:
        raise ConfigError("counter.capacity must be >= 1")


@dataclass(frozen=True)
class RunConfig:
    """Validated snapshot of every tunable."""

    values: dict[str, Any]

    def __getitem__(self, key: str) -> Any:
        return self.values[key]

    def fit_config(self) -> FitConfig:
        diag = self.values["fit.frame_diagonal"]
        return FitConfig(
            stationary_eps=self.values["fit.stationary_eps"] * diag,
            max_radius=self.values["fit.max_radius"] * diag,
            model_margin=self.values["fit.model_margin"],
        )

    @classmethod
    def build(
        cls,
        file_values: Mapping[str, Any] | None = None,
        overrides: Mapping[str, Any] | None = None,
    ) -> "RunConfig":
        values = dict(DEFAULTS)
        for source in (file_values, overrides):
            if not source:
                continue
            for key, value in _flatten(source).items():
                if key not in DEFAULTS:
                    raise ConfigError(f"unknown config key {key!r}")
                values[key] = _coerce(key, value)
        _validate(values)
        return cls(values=values)

    @classmethod
    def from_file(cls, path, overrides: Mapping[str, Any] | None = None) -> "RunConfig":
        try:
            with open(path, "r", encoding="utf-8") as fp:
                data = json.load(fp)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config file {path} must hold a JSON object")
        return cls.build(file_values=data, overrides=overrides)


def parse_set_overrides(pairs: list[str]) -> dict[str, str]:
    """Turn repeated ``--set key=value`` arguments into a mapping."""
    out: dict[str, str] = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"--set expects key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        out[key.strip()] = value.strip()
    return out

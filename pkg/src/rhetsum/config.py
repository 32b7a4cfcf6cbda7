"""Weighting configuration and its JSON loader."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

import jsonschema

DEFAULT_COEFFICIENTS = {"Elaboration": 0.5, "Cause": 0.7, "Contrast": 0.6}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class WeightConfig:
    base_value: float = 1.0
    nucleus_increment: float = 1.0
    coefficients: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_COEFFICIENTS))
    # None disables the fallback: unknown relation types become a ConfigError.
    default_coefficient: float | None = 0.5

    def __post_init__(self):
        if not self.base_value > 0:
            raise ConfigError(f"base_value must be > 0, got {self.base_value!r}")
        if not self.nucleus_increment > 0:
            raise ConfigError(f"nucleus_increment must be > 0, got {self.nucleus_increment!r}")
        for name, value in self.coefficients.items():
            if not 0 < value <= 1:
                raise ConfigError(f"coefficient for {name!r} must be in (0, 1], got {value!r}")
        if self.default_coefficient is not None and not 0 < self.default_coefficient <= 1:
            raise ConfigError(
                f"default_coefficient must be in (0, 1], got {self.default_coefficient!r}"
            )

    def coefficient(self, rel_type: str) -> float:
        try:
            return self.coefficients[rel_type]
        except KeyError:
            if self.default_coefficient is None:
                raise ConfigError(
                    f"no coefficient for relation type {rel_type!r} and no default_coefficient"
                ) from None
            return self.default_coefficient

    def scaled(self, k: float) -> "WeightConfig":
        return WeightConfig(
            base_value=self.base_value * k,
            nucleus_increment=self.nucleus_increment * k,
            coefficients=dict(self.coefficients),
            default_coefficient=self.default_coefficient,
        )

    def to_json(self) -> dict[str, Any]:
        return asdict(self)


_CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "base_value": {"type": "number"},
        "nucleus_increment": {"type": "number"},
        "coefficients": {"type": "object", "additionalProperties": {"type": "number"}},
        "default_coefficient": {"type": ["number", "null"]},
    },
}


def load_weight_config(text: str | bytes) -> WeightConfig:
    """Read a config file body. Missing fields take the defaults; an explicit
    ``"default_coefficient": null`` turns the fallback off."""
    try:
        data = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"config: malformed JSON: {exc}") from exc
    try:
        jsonschema.validate(data, _CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"config: {exc.message}") from exc
    kwargs: dict[str, Any] = {}
    for key in ("base_value", "nucleus_increment", "default_coefficient"):
        if key in data:
            kwargs[key] = data[key]
    if "coefficients" in data:
        kwargs["coefficients"] = {k: float(v) for k, v in data["coefficients"].items()}
    return WeightConfig(**kwargs)

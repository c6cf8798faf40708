"""Run configuration: a flat JSON object, overridable from the command line.

Precedence is command-line flags, then the file, then ``DEFAULTS``. Unknown
keys and nested values are rejected.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields
from typing import Any, Mapping

from .errors import ConfigFormatError, ValidationError
from .mathutil import MASK64
from .pricing import MarketParams, OptionSpec

FORMATS = ("csv", "svg", "json")

# The reference contract: a 0.75y call struck at 2.3 on a 2.2 spot.
DEFAULTS: dict[str, Any] = {
    "spot": 2.2,
    "sigma": 0.25,
    "rd": 0.015,
    "rf": 0.01,
    "beta": 0.5,
    "strike": 2.3,
    "maturity": 0.75,
    "side": "call",
    "n_paths": 1_000_000,
    "dt": 0.001,
    "seed": 1,
    "horizon": 1.0,
    "output_path": None,
    "format": None,
}


@dataclass(frozen=True)
class RunConfig:
    spot: float
    sigma: float
    rd: float
    rf: float
    beta: float
    strike: float
    maturity: float
    side: str
    n_paths: int
    dt: float
    seed: int
    horizon: float
    output_path: str | None
    format: str | None

    def __post_init__(self):
        # building these runs the shared field checks and names the bad key
        MarketParams(self.spot, self.sigma, self.rd, self.rf, self.beta)
        OptionSpec(self.strike, self.maturity, self.side)
        _positive_int("n_paths", self.n_paths)
        _positive_real("dt", self.dt)
        _positive_real("horizon", self.horizon)
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed <= MASK64:
            raise ValidationError("seed must be an unsigned 64-bit integer", key="seed")
        if self.output_path is not None and not isinstance(self.output_path, str):
            raise ValidationError("output_path must be a string", key="output_path")
        if self.format is not None and self.format not in FORMATS:
            raise ValidationError(f"format must be one of {', '.join(FORMATS)}", key="format")

    @property
    def market(self) -> MarketParams:
        return MarketParams(self.spot, self.sigma, self.rd, self.rf, self.beta)

    def option(self, side: str | None = None) -> OptionSpec:
        return OptionSpec(self.strike, self.maturity, side or self.side)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def _positive_int(key: str, value) -> None:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ValidationError(f"{key} must be a positive integer, got {value!r}", key=key)


def _positive_real(key: str, value) -> None:
    if (
        isinstance(value, bool)
        or not isinstance(value, (int, float))
        or not math.isfinite(value)
        or value <= 0
    ):
        raise ValidationError(f"{key} must be a positive number, got {value!r}", key=key)


def load_document(text: str) -> dict[str, Any]:
    """Parse a flat JSON object; blank text is an empty document."""
    if not text.strip():
        return {}
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigFormatError(f"malformed config: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigFormatError("config must be a JSON object")
    for key, value in doc.items():
        if isinstance(value, (dict, list)):
            raise ConfigFormatError(f"config value for {key!r} must be a scalar")
    return doc


def parse_config(text: str, overrides: Mapping[str, Any] | None = None) -> RunConfig:
    """Merge defaults, the document in ``text`` and non-None ``overrides``."""
    doc = load_document(text)
    known = {f.name for f in fields(RunConfig)}
    for key in list(doc) + list(overrides or {}):
        if key not in known:
            raise ValidationError(f"unknown config key {key!r}", key=key)

    merged = dict(DEFAULTS)
    merged.update(doc)
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    # JSON has one number type; accept integral floats where integers are expected
    for key in ("n_paths", "seed"):
        value = merged[key]
        if isinstance(value, float) and value.is_integer():
            merged[key] = int(value)
    return RunConfig(**merged)

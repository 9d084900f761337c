"""Runtime settings for photocount.

Priority (highest to lowest):
1. ``PHOTOCOUNT_*`` environment variables (a ``.env`` file is honoured)
2. JSON file named by ``PHOTOCOUNT_CONFIG``
3. Packaged ``defaults.json``
"""

from __future__ import annotations

import json
import logging
import os
from pathlib import Path
from typing import Any, Callable, Dict, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

from photocount.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

DEFAULTS_PATH = Path(__file__).parent / "defaults.json"

_LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}


def _str_to_bool(value: str) -> bool:
    return value.strip().lower() in {"1", "true", "yes", "on"}


def _default_workers() -> int:
    return max(1, min(8, os.cpu_count() or 1))


# env var -> (section, key, converter)
ENV_MAPPINGS: Dict[str, tuple[str, str, Callable[[str], Any]]] = {
    "PHOTOCOUNT_SERIES_REL_TOL": ("series", "rel_tol", float),
    "PHOTOCOUNT_SERIES_MAX_TERMS": ("series", "max_terms", int),
    "PHOTOCOUNT_ROUTE_SWITCH_TAU": ("series", "route_switch_tau", float),
    "PHOTOCOUNT_MP_DPS": ("series", "mp_dps", int),
    "PHOTOCOUNT_ORDER": ("distribution", "default_order", int),
    "PHOTOCOUNT_SAMPLES": ("simulation", "samples", int),
    "PHOTOCOUNT_STEPS": ("simulation", "steps", int),
    "PHOTOCOUNT_SEED": ("simulation", "seed", lambda v: int(v, 0)),
    "PHOTOCOUNT_BLOCK_SIZE": ("simulation", "block_size", int),
    "PHOTOCOUNT_WORKERS": ("simulation", "workers", int),
    "PHOTOCOUNT_PROGRESS": ("simulation", "progress", _str_to_bool),
    "PHOTOCOUNT_FORMAT": ("output", "format", str),
    "PHOTOCOUNT_LOG_LEVEL": ("logging", "level", str),
}


class SeriesSettings(BaseModel):
    """Truncation and precision controls for the coefficient series."""

    rel_tol: float = Field(default=1e-16, description="Stop summing once a term drops below rel_tol * partial sum")
    max_terms: int = Field(default=200, description="Hard cap on summed terms")
    route_switch_tau: float = Field(default=1.0, description="Direct series at or below this tau, closed form above")
    mp_dps: int = Field(default=50, description="Decimal digits for the multiprecision backend")

    @field_validator("rel_tol", "route_switch_tau")
    @classmethod
    def _positive_float(cls, value: float, info) -> float:
        if not value > 0:
            raise ConfigurationError("must be positive", config_key=f"series.{info.field_name}")
        return value

    @field_validator("max_terms", "mp_dps")
    @classmethod
    def _positive_int(cls, value: int, info) -> int:
        if value < 1:
            raise ConfigurationError("must be at least 1", config_key=f"series.{info.field_name}")
        return value


class SimulationSettings(BaseModel):
    """Monte-Carlo oracle defaults."""

    samples: int = Field(default=100_000)
    steps: int = Field(default=512)
    seed: int = Field(default=42)
    block_size: int = Field(default=1024, description="Trajectories per counter-based RNG substream")
    workers: int = Field(default_factory=_default_workers)
    progress: bool = Field(default=False)

    @field_validator("samples", "steps", "block_size", "workers")
    @classmethod
    def _positive_int(cls, value: int, info) -> int:
        if value < 1:
            raise ConfigurationError("must be at least 1", config_key=f"simulation.{info.field_name}")
        return value

    @field_validator("seed")
    @classmethod
    def _seed_range(cls, value: int) -> int:
        if not 0 <= value < 2**64:
            raise ConfigurationError("must fit in 64 unsigned bits", config_key="simulation.seed")
        return value


class PhotocountSettings(BaseModel):
    """Resolved configuration view for photocount."""

    series: SeriesSettings = Field(default_factory=SeriesSettings)
    simulation: SimulationSettings = Field(default_factory=SimulationSettings)
    default_order: int = Field(default=3)
    output_format: str = Field(default="json")
    log_level: str = Field(default="WARNING")

    @field_validator("default_order")
    @classmethod
    def _order_non_negative(cls, value: int) -> int:
        if value < 0:
            raise ConfigurationError("must be non-negative", config_key="distribution.default_order")
        return value

    @field_validator("output_format")
    @classmethod
    def _known_format(cls, value: str) -> str:
        value = value.lower()
        if value not in {"json", "csv"}:
            raise ConfigurationError("expected 'json' or 'csv'", config_key="output.format")
        return value

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        value = value.upper()
        if value not in _LOG_LEVELS:
            raise ConfigurationError(f"expected one of {sorted(_LOG_LEVELS)}", config_key="logging.level")
        return value

    @classmethod
    def load(cls, config_path: Optional[Path] = None) -> "PhotocountSettings":
        """Load settings from defaults, an optional JSON file and the environment."""
        load_dotenv()
        raw = _load_json(DEFAULTS_PATH)

        path = config_path or (Path(os.environ["PHOTOCOUNT_CONFIG"]) if os.getenv("PHOTOCOUNT_CONFIG") else None)
        if path is not None:
            if not path.exists():
                raise ConfigurationError(f"config file not found: {path}", config_key="PHOTOCOUNT_CONFIG")
            raw = _merge(raw, _load_json(path))
            logger.debug("Merged settings from %s", path)

        for env_var, (section, key, convert) in ENV_MAPPINGS.items():
            value = os.getenv(env_var)
            if value in (None, ""):
                continue
            try:
                raw.setdefault(section, {})[key] = convert(value)
            except ValueError as exc:
                raise ConfigurationError(f"cannot parse {value!r}: {exc}", config_key=env_var) from exc

        simulation = dict(raw.get("simulation") or {})
        if simulation.get("workers") is None:
            simulation.pop("workers", None)

        return cls(
            series=SeriesSettings(**(raw.get("series") or {})),
            simulation=SimulationSettings(**simulation),
            default_order=(raw.get("distribution") or {}).get("default_order", 3),
            output_format=(raw.get("output") or {}).get("format", "json"),
            log_level=(raw.get("logging") or {}).get("level", "WARNING"),
        )


def _load_json(path: Path) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"Invalid JSON in {path}: {e}") from e


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    result = base.copy()
    for key, value in override.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = _merge(result[key], value)
        else:
            result[key] = value
    return result


_settings: Optional[PhotocountSettings] = None


def get_settings() -> PhotocountSettings:
    """Process-wide settings, loaded on first use."""
    global _settings
    if _settings is None:
        _settings = PhotocountSettings.load()
    return _settings


def reset_settings() -> None:
    """Drop the cached settings so the next call reloads them."""
    global _settings
    _settings = None


def set_settings(settings: PhotocountSettings) -> None:
    """Install explicitly loaded settings as the process-wide view."""
    global _settings
    _settings = settings

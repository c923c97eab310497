"""Engine settings: YAML file first, then CONJ_* environment overrides."""
from dataclasses import dataclass, fields, replace
from typing import Any, Dict, Optional
import logging
import os
import threading

import yaml
from dotenv import load_dotenv

from .errors import ConfigError

logger = logging.getLogger(__name__)

ENV_PREFIX = "CONJ_"
FINGERPRINT_POLICIES = ("abelian_only", "never", "always")
DEFAULT_SETTINGS_FILE = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "cli", "config", "settings.yaml"
)


@dataclass(frozen=True)
class Settings:
    order_cap: int = 10_000
    exhaustive_associativity_max: int = 256
    rewrite_budget: int = 1_000_000
    quotient_cap: int = 256
    tuple_cap: int = 10_000_000
    series_horizon: int = 8
    fingerprint_policy: str = "abelian_only"
    recursion_limit: int = 64
    workers: int = 4
    table_order_cap: int = 3125
    log_level: str = "INFO"

    def __post_init__(self):
        if self.fingerprint_policy not in FINGERPRINT_POLICIES:
            raise ConfigError(
                f"fingerprint_policy must be one of {FINGERPRINT_POLICIES}, got {self.fingerprint_policy!r}"
            )
        for f in fields(self):
            value = getattr(self, f.name)
            if f.type is int and (not isinstance(value, int) or value < 1):
                raise ConfigError(f"{f.name} must be a positive integer, got {value!r}")


def _coerce(name: str, kind: Any, raw: str) -> Any:
    if kind is int:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{ENV_PREFIX}{name.upper()} must be an integer, got {raw!r}")
    return raw


def load_settings(path: Optional[str] = None, use_env: bool = True) -> Settings:
    """Load settings from a YAML file and apply environment overrides.

    Args:
        path: YAML file with any subset of the Settings fields; missing file means defaults
        use_env: Whether CONJ_<FIELD> variables (and a .env file) override the file
    """
    values: Dict[str, Any] = {}
    if path and os.path.exists(path):
        with open(path, "r") as f:
            loaded = yaml.safe_load(f) or {}
        if not isinstance(loaded, dict):
            raise ConfigError(f"{path}: expected a mapping at top level")
        values.update(loaded)

    known = {f.name: f.type for f in fields(Settings)}
    unknown = sorted(set(values) - set(known))
    if unknown:
        raise ConfigError(f"unknown settings: {', '.join(unknown)}")

    if use_env:
        load_dotenv()
        for name, kind in known.items():
            raw = os.getenv(ENV_PREFIX + name.upper())
            if raw is not None:
                values[name] = _coerce(name, kind, raw)

    try:
        return Settings(**values)
    except TypeError as exc:
        raise ConfigError(str(exc))


_settings: Optional[Settings] = None
_settings_lock = threading.Lock()


def get_settings() -> Settings:
    global _settings
    with _settings_lock:
        if _settings is None:
            _settings = load_settings(DEFAULT_SETTINGS_FILE)
            logger.debug("loaded settings %s", _settings)
        return _settings


def configure(settings: Optional[Settings] = None, **overrides) -> Settings:
    """Replace the process-wide settings, optionally patching individual fields"""
    global _settings
    base = settings if settings is not None else get_settings()
    updated = replace(base, **overrides) if overrides else base
    with _settings_lock:
        _settings = updated
    return updated

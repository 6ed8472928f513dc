"""Loader for flat key=value experiment configs."""

from pathlib import Path
from typing import Any, Dict, List, Optional, Set, Tuple, Union

from pydantic import ValidationError

from src.core.exceptions import ConfigError
from src.core.models import (NumericsBlock, OutputBlock, PhysicsBlock, ProfileBlock, RunConfig,
                           ScheduleConfig)
from src.core.presets import PRESET_ASSUMPTIONS, PRESETS, preset_text

BLOCKS = {
    "schedule": ScheduleConfig,
    "physics": PhysicsBlock,
    "profile": ProfileBlock,
    "numerics": NumericsBlock,
    "output": OutputBlock,
}
TOP_LEVEL_KEYS = ("mode", "solver")
LIST_KEYS = {"output.sample_times"}


def known_keys() -> List[str]:
    keys = [f"{block}.{name}" for block, model in BLOCKS.items() for name in model.model_fields]
    return keys + list(TOP_LEVEL_KEYS)


def _config_error(e: ValidationError, lines: Optional[Dict[str, int]] = None) -> ConfigError:
    """First pydantic error as a ConfigError naming the dotted key."""
    error = e.errors()[0]
    key = ".".join(str(part) for part in error["loc"]) or "config"
    message = error["msg"].removeprefix("Value error, ")
    context: Dict[str, Any] = {"key": key}
    if lines and key in lines:
        context["line"] = lines[key]
    return ConfigError(f"{key}: {message}", **context)


class RunConfigLoader:
    """Parse and validate a config file (or preset) into a RunConfig."""

    def __init__(self, text: str, source: str = "<string>"):
        """Parse the text immediately; validation happens in ``load``."""
        self.source = source
        self.entries, self.lines = self._parse(text)

    @classmethod
    def from_path(cls, path: Union[str, Path]) -> "RunConfigLoader":
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except FileNotFoundError as e:
            raise ConfigError(f"config file not found: {path}") from e
        except UnicodeDecodeError as e:
            raise ConfigError(f"config file is not UTF-8: {path}") from e
        return cls(text, source=str(path))

    @classmethod
    def from_preset(cls, name: str) -> "RunConfigLoader":
        if name not in PRESETS:
            raise ConfigError(f"unknown preset '{name}' (choose from {', '.join(PRESETS)})")
        return cls(preset_text(name), source=f"preset:{name}")

    def _parse(self, text: str) -> Tuple[Dict[str, str], Dict[str, int]]:
        """Split lines into key -> raw value, remembering line numbers."""
        allowed = set(known_keys())
        entries: Dict[str, str] = {}
        lines: Dict[str, int] = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError("expected key=value", line=number, text=line)
            key, value = (part.strip() for part in line.split("=", 1))
            if not key:
                raise ConfigError("missing key before '='", line=number)
            if key not in allowed:
                raise ConfigError(f"unknown key '{key}'", line=number, key=key)
            if key in entries:
                raise ConfigError(f"duplicate key '{key}'", line=number, key=key)
            entries[key] = value
            lines[key] = number
        return entries, lines

    def _nested(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {}
        for key, value in self.entries.items():
            parsed: Any = value
            if key in LIST_KEYS:
                parsed = [item.strip() for item in value.split(",") if item.strip()]
            if "." in key:
                block, name = key.split(".", 1)
                data.setdefault(block, {})[name] = parsed
            else:
                data[key] = parsed
        return data

    def load(self) -> RunConfig:
        """Validate and resolve derived defaults."""
        try:
            config = RunConfig.model_validate(self._nested())
        except ValidationError as e:
            raise _config_error(e, self.lines) from e
        return config.resolved()

    @property
    def explicit_keys(self) -> Set[str]:
        return set(self.entries)

    def assumed_keys(self) -> Set[str]:
        """Keys pinned by a preset rather than taken from the figures."""
        if not self.source.startswith("preset:"):
            return set()
        return set(PRESET_ASSUMPTIONS)


def load_config(path: Union[str, Path]) -> RunConfig:
    """Load a config file into a validated RunConfig."""
    return RunConfigLoader.from_path(path).load()


def load_preset(name: str) -> RunConfig:
    return RunConfigLoader.from_preset(name).load()


def apply_overrides(config: RunConfig, mode: Optional[str] = None,
                    solver: Optional[str] = None) -> RunConfig:
    """Override mode/solver from the command line, re-validating the result."""
    update: Dict[str, Any] = config.model_dump()
    if mode:
        update["mode"] = mode
    if solver:
        update["solver"] = solver
    try:
        return RunConfig.model_validate(update)
    except ValidationError as e:
        raise _config_error(e) from e

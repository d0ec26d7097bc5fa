"""Run configuration: defaults < config file < environment < command-line flags."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .bounds import STEP_GUARD
from .ffield import ENUM_GUARD, REJECTION_CAP
from .walk import FULL_SPACE_GUARD

ENV_PREFIX = "FPSPHERE_"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    enum_guard: int = ENUM_GUARD
    full_space_guard: int = FULL_SPACE_GUARD
    step_guard: int = STEP_GUARD
    rejection_cap: int = REJECTION_CAP
    walk_log_base: str = "e"
    bound_log_base: str = "2"
    seed: int = 0
    threads: int = os.cpu_count() or 1

    def __post_init__(self):
        for name in ("enum_guard", "full_space_guard", "step_guard", "rejection_cap", "threads"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        for name in ("walk_log_base", "bound_log_base"):
            base = getattr(self, name)
            if base != "e":
                try:
                    value = float(base)
                except ValueError:
                    raise ConfigError(f"{name} must be 'e' or a number, got {base!r}") from None
                if value <= 0 or value == 1:
                    raise ConfigError(f"{name} must be positive and != 1")

    def log_base(self, which: str):
        base = getattr(self, f"{which}_log_base")
        return "e" if base == "e" else float(base)


def _coerce(name: str, raw: str):
    kind = {f.name: f.type for f in fields(RunConfig)}[name]
    if kind in ("int", int):
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{name} expects an integer, got {raw!r}") from None
    return raw.strip()


def parse_config_text(text: str) -> dict:
    known = {f.name for f in fields(RunConfig)}
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in known:
            raise ConfigError(f"config line {lineno}: unknown key {key!r}")
        out[key] = _coerce(key, value)
    return out


def env_overrides(environ=None) -> dict:
    environ = os.environ if environ is None else environ
    out = {}
    for f in fields(RunConfig):
        raw = environ.get(ENV_PREFIX + f.name.upper())
        if raw is not None:
            out[f.name] = _coerce(f.name, raw)
    return out


def load_config(path: str | None = None, flags: dict | None = None, environ=None) -> RunConfig:
    values: dict = {}
    if path:
        try:
            values.update(parse_config_text(Path(path).read_text()))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    values.update(env_overrides(environ))
    values.update({k: v for k, v in (flags or {}).items() if v is not None})
    return replace(RunConfig(), **values)

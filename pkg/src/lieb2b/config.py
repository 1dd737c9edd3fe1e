"""Run configuration: a plain-text key=value file with a stable hash.

Every exported artifact embeds the hash of the configuration that
produced it, so a fixture can be traced back to its exact settings.
The hash is taken over a canonical serialization (sorted keys, shortest
round-trip float representation), which makes it stable across
platforms and insensitive to comment or ordering changes in the file.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, fields, replace

from .holonomy import MIN_LOOP_RADIUS


class ConfigError(ValueError):
    """Malformed key, unknown key, or a value violating an invariant."""


@dataclass(frozen=True)
class RunConfig:
    solver_tol: float = 1e-12
    transport_rtol: float = 1e-10
    oracle_dg: float = 1e-5
    quadrature_nodes: int = 256
    truncation: int = 12
    proxy_infinity: float = 1e6
    ep_n_max: int = 8
    loop_radius: float = 1e-3
    grid_re_min: float = -3.0
    grid_re_max: float = 1.0
    grid_im_min: float = -4.0
    grid_im_max: float = 0.5
    grid_points: int = 41

    def __post_init__(self):
        for name in ("solver_tol", "transport_rtol", "oracle_dg", "loop_radius"):
            if not getattr(self, name) > 0.0:
                raise ConfigError(f"{name} must be strictly positive")
        if self.proxy_infinity < 1e4:
            raise ConfigError("proxy_infinity must be at least 1e4")
        if self.truncation < 2:
            raise ConfigError("truncation must retain at least two levels")
        if self.quadrature_nodes < 8:
            raise ConfigError("quadrature_nodes must be at least 8")
        if self.ep_n_max < 2:
            raise ConfigError("ep_n_max must be at least 2")
        if self.loop_radius < MIN_LOOP_RADIUS:
            raise ConfigError(f"loop_radius must be at least {MIN_LOOP_RADIUS}")
        if not self.grid_re_min < self.grid_re_max:
            raise ConfigError("grid window is empty along the real axis")
        if not self.grid_im_min < self.grid_im_max:
            raise ConfigError("grid window is empty along the imaginary axis")
        if self.grid_points < 2:
            raise ConfigError("grid_points must be at least 2 per axis")

    def canonical_text(self) -> str:
        """Sorted key=value lines with round-trip float formatting."""
        parts = []
        for f in sorted(fields(self), key=lambda f: f.name):
            value = getattr(self, f.name)
            text = repr(float(value)) if f.type == "float" else str(value)
            parts.append(f"{f.name} = {text}")
        return "\n".join(parts) + "\n"

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_text().encode("ascii")).hexdigest()

    def with_overrides(self, **kwargs) -> "RunConfig":
        provided = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **provided) if provided else self


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def parse_config(text: str) -> RunConfig:
    """Parse key = value lines; # starts a comment, blank lines ignored."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = float(value) if _FIELD_TYPES[key] == "float" else int(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from exc
    return RunConfig(**values)


def load_config(path) -> RunConfig:
    with open(path, "r", encoding="ascii") as fh:
        return parse_config(fh.read())

"""Run configuration: defaults, key=value file parsing, fingerprinting.

The fingerprint hashes the canonical serialization of every
computation-affecting setting (precision policy, grids, oracle ceiling,
c override) so cache entries written under a different configuration are
recomputed rather than silently reused.  Output format, cache path, and
worker count do not affect computed values and stay out of the hash.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, fields, replace
from fractions import Fraction

CACHE_ENV_VAR = "KUMMER_CACHE"

_COMPUTATION_FIELDS = (
    "prec_bits",
    "max_prec_bits",
    "oracle_ceiling",
    "x_grid",
    "nu_values",
    "sigma_scales",
    "c",
)


@dataclass(frozen=True)
class RunConfig:
    prec_bits: int = 128
    max_prec_bits: int = 4096
    oracle_ceiling: int = 199
    x_grid: tuple[int, ...] | None = None  # None: per-p default grid
    nu_values: tuple[int, ...] = (0, 1, 2, 3)
    sigma_scales: tuple[Fraction, ...] = (Fraction(1), Fraction(2))
    c: Fraction | None = None  # None: per-context default
    output_format: str = "csv"
    cache_path: str = "kummer-cache.jsonl"
    jobs: int = 1

    def validate(self) -> "RunConfig":
        if not (64 <= self.prec_bits <= self.max_prec_bits):
            raise ValueError(
                f"need 64 <= prec_bits <= max_prec_bits, got "
                f"{self.prec_bits}/{self.max_prec_bits}")
        if self.oracle_ceiling < 3:
            raise ValueError("oracle ceiling below the smallest odd prime")
        if self.x_grid is not None and any(x < 2 for x in self.x_grid):
            raise ValueError("x grid values must be >= 2")
        if any(nu < 0 for nu in self.nu_values):
            raise ValueError("nu values must be >= 0")
        if any(s <= 0 or s > 2 for s in self.sigma_scales):
            raise ValueError("sigma scales must lie in ]0, 2]")
        if self.c is not None and self.c <= 0:
            raise ValueError("c must be positive")
        if self.output_format not in ("csv", "jsonl"):
            raise ValueError(f"unknown output format {self.output_format!r}")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        return self

    def fingerprint(self) -> str:
        parts = []
        for name in _COMPUTATION_FIELDS:
            value = getattr(self, name)
            if isinstance(value, tuple):
                text = ",".join(str(v) for v in value)
            else:
                text = str(value)
            parts.append(f"{name}={text}")
        blob = "\n".join(parts).encode()
        return hashlib.sha256(blob).hexdigest()

    def resolved_cache_path(self) -> str:
        return os.environ.get(CACHE_ENV_VAR) or self.cache_path


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key in ("prec_bits", "max_prec_bits", "oracle_ceiling", "jobs"):
        return int(raw)
    if key in ("x_grid", "nu_values"):
        if raw.lower() in ("", "none", "default"):
            return None if key == "x_grid" else RunConfig.nu_values
        return tuple(int(v) for v in raw.split(","))
    if key == "sigma_scales":
        return tuple(Fraction(v) for v in raw.split(","))
    if key == "c":
        return None if raw.lower() in ("", "none", "default") else Fraction(raw)
    if key in ("output_format", "cache_path"):
        return raw
    raise ValueError(f"unknown config key {key!r}")


def load_config(path: str) -> RunConfig:
    """Parse a human-editable key=value file (#-comments, blank lines ok)."""
    cfg = RunConfig()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, _, raw = line.partition("=")
            key = key.strip()
            cfg = replace(cfg, **{key: _parse_value(key, raw)})
    return cfg.validate()


def dump_config(cfg: RunConfig) -> str:
    """Canonical key=value rendering (inverse of load_config)."""
    lines = []
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if value is None:
            text = "none"
        elif isinstance(value, tuple):
            text = ",".join(str(v) for v in value)
        else:
            text = str(value)
        lines.append(f"{f.name} = {text}")
    return "\n".join(lines) + "\n"

"""Run configuration: an INI file plus CHEBM_<SECTION>_<KEY> environment overrides."""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import InputError
from .sieve import DEFAULT_CEILING, HARD_CEILING
from .weights import DEFAULT_DELTA

# field -> (section, key)
_LAYOUT = {
    "sieve_ceiling": ("sieve", "ceiling"),
    "delta": ("weights", "delta"),
    "quad_tol": ("quadrature", "tol"),
    "psi_tol": ("quadrature", "psi_tol"),
    "kappa_eta": ("constants", "kappa_eta"),
    "kappa_prime": ("constants", "kappa_prime"),
    "roichman_q": ("constants", "roichman_q"),
    "roichman_k": ("constants", "roichman_k"),
    "roichman_b": ("constants", "roichman_b"),
    "threads": ("run", "threads"),
    "output_dir": ("run", "output_dir"),
}


@dataclass(frozen=True)
class Config:
    """Constants left as None are unknown and are reported symbolically."""

    sieve_ceiling: int = DEFAULT_CEILING
    delta: float = DEFAULT_DELTA
    quad_tol: float = 1e-6
    psi_tol: float = 1e-12
    kappa_eta: float | None = None
    kappa_prime: float | None = None
    roichman_q: float | None = None
    roichman_k: float | None = None
    roichman_b: float | None = None
    threads: int = 1
    output_dir: str = "."

    def __post_init__(self):
        if not 0 < self.sieve_ceiling <= HARD_CEILING:
            raise InputError(f"sieve ceiling must lie in (0, {HARD_CEILING}]")
        for name in ("delta", "quad_tol", "psi_tol"):
            if not getattr(self, name) > 0:
                raise InputError(f"{name} must be positive")
        if self.threads < 1:
            raise InputError("threads must be at least 1")

    def constants_line(self) -> str:
        parts = []
        for name in ("kappa_eta", "kappa_prime", "roichman_q", "roichman_k", "roichman_b"):
            v = getattr(self, name)
            parts.append(f"{name}={'unset' if v is None else repr(v)}")
        return " ".join(parts)


def _convert(name: str, raw: str):
    kind = {f.name: f.type for f in fields(Config)}[name]
    raw = raw.strip()
    try:
        if "None" in kind:
            return None if raw.lower() in ("", "none", "unset") else float(raw)
        if kind == "int":
            return int(float(raw))
        if kind == "float":
            return float(raw)
    except ValueError:
        raise InputError(f"bad value {raw!r} for {name}") from None
    return raw


def load_config(path: str | Path | None = None, env: dict | None = None) -> Config:
    env = os.environ if env is None else env
    parser = configparser.ConfigParser()
    if path is not None:
        if not Path(path).exists():
            raise InputError(f"config file {path} not found")
        parser.read(path)
    values = {}
    for name, (section, key) in _LAYOUT.items():
        if parser.has_option(section, key):
            values[name] = _convert(name, parser.get(section, key))
        var = f"CHEBM_{section.upper()}_{key.upper()}"
        if var in env:
            values[name] = _convert(name, env[var])
    return Config(**values)

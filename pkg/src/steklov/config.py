"""Run configuration: tolerances, search bounds and output settings."""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Optional

from .errors import SchemaError

ENV_VAR = "STEKLOV_CONFIG"
FORMATS = ("json", "csv", "pretty")


@dataclass(frozen=True)
class RunConfig:
    poly_tol: float = 1e-12
    congruence_tol: float = 1e-9
    closure_tol: float = 1e-10
    selfcheck_tol: float = 1e-8
    q_max: int = 15
    index_max: int = 5
    pair_bound: int = 1000
    format: str = "json"
    horizon: float = 50.0
    step: Optional[float] = None

    def __post_init__(self):
        for name in ("poly_tol", "congruence_tol", "closure_tol", "selfcheck_tol", "horizon"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not v > 0:
                raise SchemaError(f"{name} must be a positive number, got {v!r}")
        for name in ("q_max", "index_max", "pair_bound"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise SchemaError(f"{name} must be a positive integer, got {v!r}")
        if self.step is not None and (isinstance(self.step, bool) or not self.step > 0):
            raise SchemaError(f"step must be positive, got {self.step!r}")
        if self.format not in FORMATS:
            raise SchemaError(f"format must be one of {FORMATS}, got {self.format!r}")

    def to_dict(self) -> dict:
        return asdict(self)

    def updated(self, **overrides) -> "RunConfig":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def load_config(path: Optional[str] = None) -> RunConfig:
    """Read a JSON config; ``path`` falls back to ``$STEKLOV_CONFIG``, then defaults."""
    path = path or os.environ.get(ENV_VAR)
    if not path:
        return RunConfig()
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise SchemaError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise SchemaError("config must be a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise SchemaError(f"unknown config keys: {sorted(unknown)}")
    return RunConfig(**data)

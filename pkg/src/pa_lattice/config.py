from __future__ import annotations

import os
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Mapping, Optional

from .errors import MalformedInput

ENV_OVERRIDES = {
    "PA_CLAUSE_BUDGET": "clause_budget",
    "PA_GRID_BUDGET": "grid_budget",
}


@dataclass(frozen=True)
class EngineConfig:
    clause_budget: int = 10**6
    hyperplane_limit: int = 64
    grid_budget: int = 10**6
    min_split_radius: Fraction = Fraction(1, 64)
    certify_radius: int = 3
    best_effort_step: Fraction = Fraction(1, 8)
    distributed_task_threshold: int = 64
    sample_seed: int = 0
    decimal_digits: int = 12

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "EngineConfig":
        env = os.environ if environ is None else environ
        overrides = {}
        for var, attr in ENV_OVERRIDES.items():
            raw = env.get(var)
            if raw is None or raw == "":
                continue
            try:
                value = int(raw)
            except ValueError as exc:
                raise MalformedInput(f"{var} must be an integer, got {raw!r}") from exc
            if value <= 0:
                raise MalformedInput(f"{var} must be positive, got {value}")
            overrides[attr] = value
        return replace(cls(), **overrides)


DEFAULT_CONFIG = EngineConfig()

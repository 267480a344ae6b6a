"""Global configuration: node budgets and deterministic random streams."""

from __future__ import annotations

import os

import numpy as np

# Default cap on enumeration sizes (cylinder sets, difference-vector scans,
# cover trees).  Overridable per call or via the environment.
DEFAULT_BUDGET = 1 << 24

BUDGET_ENV_VAR = "FRACTALCONV_BUDGET"

_MASK64 = (1 << 64) - 1


def node_budget(override: int | None = None) -> int:
    """Resolve the node budget: explicit override, else env var, else default."""
    if override is not None:
        return int(override)
    raw = os.environ.get(BUDGET_ENV_VAR)
    if raw is not None:
        try:
            value = int(raw)
        except ValueError as exc:
            raise ValueError(f"{BUDGET_ENV_VAR} must be an integer, got {raw!r}") from exc
        if value <= 0:
            raise ValueError(f"{BUDGET_ENV_VAR} must be positive, got {value}")
        return value
    return DEFAULT_BUDGET


def stream(seed: int, stream_id: int = 0) -> np.random.Generator:
    """Deterministic counter-based generator for (seed, stream_id).

    Streams with distinct ids are independent and mergeable: results computed
    chunk-by-chunk do not depend on how work was split across workers.
    """
    key = (int(seed) & _MASK64) | ((int(stream_id) & _MASK64) << 64)
    return np.random.Generator(np.random.Philox(key=key))

"""Size limits.  ``LUKA_MAX_DIM`` overrides the dimension cap."""
from __future__ import annotations

import os

DEFAULT_MAX_DIM = 4
DEFAULT_MAX_FORMULAS = 8
DEFAULT_MAX_SUBDIVISIONS = 100_000


class LimitError(ValueError):
    """An input exceeds a configured size limit."""


def max_dim() -> int:
    raw = os.environ.get("LUKA_MAX_DIM")
    if raw is None:
        return DEFAULT_MAX_DIM
    try:
        value = int(raw)
    except ValueError:
        raise LimitError(f"LUKA_MAX_DIM must be an integer, got {raw!r}") from None
    if value < 1:
        raise LimitError("LUKA_MAX_DIM must be positive")
    return value


def check_dim(n: int) -> None:
    cap = max_dim()
    if not 1 <= n <= cap:
        raise LimitError(f"dimension {n} outside the supported range 1..{cap}")

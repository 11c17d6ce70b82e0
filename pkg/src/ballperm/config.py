import os

DEFAULT_MAX_N = 9


def max_n() -> int:
    """Largest register size the exhaustive routines accept (env ``BP_MAX_N``)."""
    raw = os.environ.get("BP_MAX_N")
    if raw is None:
        return DEFAULT_MAX_N
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"BP_MAX_N must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError("BP_MAX_N must be >= 1")
    return value


def check_size(n: int) -> None:
    limit = max_n()
    if n > limit:
        raise ValueError(f"n={n} exceeds the configured bound {limit} (set BP_MAX_N)")

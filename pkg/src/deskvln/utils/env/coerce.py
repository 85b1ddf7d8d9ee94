"""
Coerce configuration strings to typed values.
"""
from pathlib import Path


TRUE_WORDS = ("true", "1", "yes", "on", "y")
FALSE_WORDS = ("false", "0", "no", "off", "n")


def coerce_bool(value: str, default: bool = False) -> bool:
    """
    Lenient boolean parsing: true/1/yes/on/y and false/0/no/off/n in any case.
    Empty or unrecognized values return default.
    """
    if not value:
        return default
    lowered = value.lower()
    if lowered in TRUE_WORDS:
        return True
    if lowered in FALSE_WORDS:
        return False
    return default


def coerce_int(value: str, default: int | None = None) -> int | None:
    if not value:
        return default
    try:
        return int(value)
    except ValueError:
        return default


def coerce_float(value: str, default: float | None = None) -> float | None:
    if not value:
        return default
    try:
        return float(value)
    except ValueError:
        return default


def coerce_path(value: str, cwd: str | Path | None = None) -> Path:
    """
    Expand ~ and resolve relative paths against cwd. A value with | separators
    picks the first alternative that exists (or the last one if none do).
    """
    parts = value.split("|")
    if len(parts) > 1:
        p = None
        for part in parts:
            p = coerce_path(part, cwd)
            if p.exists():
                return p
        return p
    p = Path(value).expanduser()
    if not p.is_absolute():
        base = Path(cwd).expanduser() if cwd is not None else Path.cwd()
        p = base / p
    return p.resolve()


def coerce(s, t, **kwargs) -> str | float | int | bool | Path | None:
    """
    Coerce s to type t, given as a type or its name ("str", "int", "float", "bool",
    "path", "path_str"). Non-strings pass through; "", "none" and "null" become None.
    """
    if not isinstance(s, str):
        return s
    if s.lower() in ("", "null", "none"):
        return None
    if t in (str, "str"):
        return s
    if t in (int, "int"):
        return coerce_int(s, **kwargs)
    if t in (float, "float"):
        return coerce_float(s, **kwargs)
    if t in (bool, "bool"):
        return coerce_bool(s, **kwargs)
    if t in (Path, "path"):
        return coerce_path(s, **kwargs)
    if t == "path_str":
        return str(coerce_path(s, **kwargs))
    raise TypeError(f"Unsupported type: {t}")

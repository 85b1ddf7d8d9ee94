"""
Read KEY=VALUE configuration text.
"""
import os
import re
from pathlib import Path
from typing import Literal, Mapping


VAR_REFERENCE = re.compile(r"\$([A-Za-z_][A-Za-z0-9_]*)")


def load_env_raw(
    *sources: str | Path | Literal["os.environ"] | None,
    cwd: str | Path | None = None,
    prefix: str = "",
) -> dict[str, str]:
    """
    Merge configuration sources, lowest priority first.

    Sources can be file paths (~ is expanded, relative paths resolve against cwd),
    the literal "os.environ", or None (ignored). Missing files are skipped.

    e.g.
    >>> load_env_raw("defaults.env", ".env", "os.environ", prefix="DVLN_")
    """
    merged: dict[str, str] = {}
    for source in sources:
        merged.update(load_single_env_raw(source, cwd=cwd, prefix=prefix))
    return resolve_var_references(merged)


def load_single_env_raw(
    source: str | Path | None, cwd: str | Path | None = None, prefix: str = ""
) -> dict[str, str]:
    if not source:
        return {}
    if source == "os.environ":
        return {k: v for k, v in os.environ.items() if k.startswith(prefix)}
    path = resolve_relative(source, cwd=cwd)
    if not path.exists():
        return {}
    return parse_env_text(path.read_text(encoding="utf-8"))


def parse_env_text(text: str) -> dict[str, str]:
    """
    Parse KEY=VALUE lines. Blank lines and full-line # comments are skipped; inline
    comments, surrounding quotes and none/null spellings are normalized. No
    substitution happens here.
    """
    result = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#") or "=" not in line:
            continue
        key, value = line.split("=", 1)
        key = key.strip()
        value = normalize_none_value(remove_quotes(remove_inline_comments(value.strip())))
        if key:
            result[key] = value
    return result


def resolve_relative(x: str | Path, cwd: str | Path | None = None) -> Path:
    x = Path(x).expanduser()
    if x.is_absolute():
        return x.resolve()
    base = Path(cwd).expanduser() if cwd is not None else Path.cwd()
    return (base / x).resolve()


def resolve_var_references(env_dict: Mapping[str, str], max_iterations: int = 20) -> dict[str, str]:
    """
    Substitute $NAME references with other values from the same mapping.

    Repeats until nothing changes (references may chain); a key never expands itself.
    Unknown names are left as written.
    """
    result = dict(env_dict)
    for _ in range(max_iterations):
        changed = False
        for key, value in result.items():
            if "$" not in value:
                continue

            def replace_var(match, key=key):
                name = match.group(1)
                if name == key:
                    return match.group(0)
                return result.get(name, match.group(0))

            new_value = VAR_REFERENCE.sub(replace_var, value)
            if new_value != value:
                result[key] = new_value
                changed = True
        if not changed:
            break
    return result


def normalize_none_value(value: str) -> str:
    """Map none/null (any case) to the empty string."""
    return "" if value.strip().lower() in ("none", "null", "") else value


def remove_inline_comments(value: str) -> str:
    """Drop everything after an unquoted #."""
    if "#" not in value:
        return value
    quote_char = None
    for i, char in enumerate(value):
        if char in ('"', "'") and (i == 0 or value[i - 1] != "\\"):
            if quote_char is None:
                quote_char = char
            elif char == quote_char:
                quote_char = None
        elif char == "#" and quote_char is None:
            return value[:i].strip()
    return value


def remove_quotes(value: str) -> str:
    if len(value) >= 2 and value[0] == value[-1] and value[0] in ('"', "'"):
        return value[1:-1]
    return value

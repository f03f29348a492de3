"""Reader for the flat ``key = value`` text format used by materials and scenarios.

Blank lines and ``#`` comments are ignored.  Keys are dotted identifiers;
values are kept as stripped strings and typed by the caller.
"""

import re

from .errors import ConfigError

_KEY = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")


def parse_flat(text):
    """Return a list of ``(lineno, key, raw_value)`` tuples.

    Raises ConfigError for malformed lines and duplicate keys.
    """
    entries = []
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if not _KEY.match(key):
            raise ConfigError(f"malformed key {key!r}", line=lineno, key=key)
        if key in seen:
            raise ConfigError(f"duplicate key {key!r} (first on line {seen[key]})", line=lineno, key=key)
        seen[key] = lineno
        entries.append((lineno, key, value))
    return entries


def format_flat(mapping):
    """Inverse of :func:`parse_flat` for a plain ``{key: value}`` mapping."""
    lines = []
    for key, value in mapping.items():
        if isinstance(value, float):
            value = repr(value)
        elif isinstance(value, bool):
            value = "true" if value else "false"
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"

"""Key=value config blocks with a stable byte form and a content hash.

Keys are sorted, one `key=value` per line, LF endings, no escaping: values
must not contain newlines or a leading/trailing space that matters.  The
hash is sha256 over the exact serialized block, so any config drift is
detectable in artifacts that embed it.
"""

from __future__ import annotations

import hashlib

from .errors import MalformedEncoding


def format_config(pairs: dict[str, object]) -> str:
    lines = []
    for key in sorted(pairs):
        value = pairs[key]
        if isinstance(value, bool):
            value = "true" if value else "false"
        text = str(value)
        if "\n" in key or "=" in key or "\n" in text:
            raise MalformedEncoding(f"unserializable config entry {key!r}")
        lines.append(f"{key}={text}")
    return "".join(line + "\n" for line in lines)


def parse_config(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise MalformedEncoding(f"config line {lineno} has no '='")
        key, _, value = line.partition("=")
        key = key.strip()
        if key in out:
            raise MalformedEncoding(f"duplicate config key {key!r}")
        out[key] = value.strip()
    return out


def config_hash(pairs: dict[str, object]) -> str:
    return hashlib.sha256(format_config(pairs).encode()).hexdigest()


def parse_bool(text: str) -> bool:
    if text == "true":
        return True
    if text == "false":
        return False
    raise MalformedEncoding(f"expected true/false, got {text!r}")

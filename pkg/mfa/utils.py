"""Utilities for mfa."""
from __future__ import annotations

import hashlib
import json
from functools import lru_cache
from pathlib import Path
from typing import Any

TRANSLATIONS_FILE = Path(__file__).parent / "translations" / "en.json"


def set_nested_dict(data: dict, key_string: str, value: Any) -> None:
    """Set nested dict."""
    here = data
    keys = key_string.split(":")
    for key in keys[:-1]:
        here = here.setdefault(key, {})
    here[keys[-1]] = value


def get_nested_dict(data: dict, key_string: str, default: Any = None) -> Any:
    """Get nested dict."""
    here = data
    keys = key_string.split(":")
    for key in keys:
        here = here.get(key) if isinstance(here, dict) else None
        if here is None:
            return default
    return here


def derive_seed(seed: int, index: int) -> int:
    """Per-case seed, stable across runs and platforms."""
    digest = hashlib.sha256(f"{seed}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


@lru_cache(maxsize=1)
def load_translations() -> dict:
    """Message templates keyed by section and code."""
    with TRANSLATIONS_FILE.open(encoding="utf-8") as file:
        return json.load(file)


def translate(key_string: str, **placeholders: Any) -> str:
    """Render the template at ``key_string`` (e.g. ``error:not_ia``)."""
    template = get_nested_dict(load_translations(), key_string)
    if template is None:
        template = get_nested_dict(load_translations(), "error:unknown_error", key_string)
    try:
        return template.format(**placeholders)
    except (KeyError, IndexError):
        return template

"""Exact computations in free metabelian anticommutative algebras."""
from __future__ import annotations

import json
from pathlib import Path

MANIFEST = Path(__file__).parent / "manifest.json"

__version__: str = json.loads(MANIFEST.read_text(encoding="utf-8"))["version"]

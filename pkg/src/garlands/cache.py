"""Append-only disk cache for case reports, keyed by case hash."""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

from .config import SCHEMA_VERSION


def case_key(case: dict) -> str:
    payload = json.dumps({"schema": SCHEMA_VERSION, "case": case}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:24]


class DiskCache:
    """Write-once JSON files under a directory; results must not depend on hits.

    A schema version bump invalidates everything (the version is part of both
    the key and the stored document).
    """

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0

    def get(self, key: str) -> dict | None:
        path = self.root / f"{key}.json"
        if not path.exists():
            self.misses += 1
            return None
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, ValueError):
            self.misses += 1
            return None
        if doc.get("schema") != SCHEMA_VERSION:
            self.misses += 1
            return None
        self.hits += 1
        return doc["report"]

    def put(self, key: str, report: dict) -> None:
        path = self.root / f"{key}.json"
        if path.exists():
            return  # append-only: first write wins
        tmp = self.root / f"{key}.tmp"
        tmp.write_text(
            json.dumps({"schema": SCHEMA_VERSION, "report": report}, sort_keys=True, indent=1),
            encoding="utf-8",
        )
        tmp.replace(path)

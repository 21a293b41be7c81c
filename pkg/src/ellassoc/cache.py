"""Checksummed, versioned JSON caches for quotient tables, MZV tables and Mellin values.

The cache root is ``$ELLASSOC_CACHE`` or ``~/.cache/ellassoc``.  Every file is a
JSON object {"version", "checksum", "payload"}; a checksum or version mismatch
causes the entry to be discarded and recomputed with a warning.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path

log = logging.getLogger(__name__)

CACHE_VERSION = 1
ENV_VAR = "ELLASSOC_CACHE"
_override: Path | None = None
_disabled = False


class CacheError(OSError):
    """Cache directory cannot be used."""


def set_root(path: str | os.PathLike | None):
    global _override
    _override = Path(path) if path is not None else None


def disable(flag: bool = True):
    global _disabled
    _disabled = flag


def root() -> Path:
    if _override is not None:
        return _override
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "ellassoc"


def _checksum(payload) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def store(kind: str, name: str, payload, version: int = CACHE_VERSION) -> Path | None:
    if _disabled:
        return None
    d = root() / kind
    try:
        d.mkdir(parents=True, exist_ok=True)
        path = d / name
        tmp = path.with_suffix(path.suffix + ".tmp")
        doc = {"version": version, "checksum": _checksum(payload), "payload": payload}
        tmp.write_text(json.dumps(doc, sort_keys=True))
        tmp.replace(path)
        return path
    except OSError as exc:
        raise CacheError(f"cannot write cache file in {d}: {exc}") from exc


def load(kind: str, name: str, version: int = CACHE_VERSION):
    """Payload, or None when missing, stale or corrupt (the file is then removed)."""
    if _disabled:
        return None
    path = root() / kind / name
    if not path.exists():
        return None
    try:
        doc = json.loads(path.read_text())
        if doc.get("version") != version:
            log.warning("cache %s has version %s, expected %s; recomputing",
                        path, doc.get("version"), version)
            invalidate(kind, name)
            return None
        if doc.get("checksum") != _checksum(doc.get("payload")):
            log.warning("checksum mismatch in %s; recomputing", path)
            invalidate(kind, name)
            return None
        return doc["payload"]
    except (OSError, ValueError, KeyError) as exc:
        log.warning("unreadable cache %s (%s); recomputing", path, exc)
        invalidate(kind, name)
        return None


def invalidate(kind: str, name: str | None = None) -> int:
    d = root() / kind
    if not d.exists():
        return 0
    paths = [d / name] if name else list(d.glob("*.json"))
    n = 0
    for p in paths:
        try:
            p.unlink()
            n += 1
        except FileNotFoundError:
            pass
    return n


# -- typed helpers -----------------------------------------------------------------


def _table_name(kind, n, N):
    from .presentations import TABLE_VERSION

    return f"{kind}-{n}-N{N}-v{TABLE_VERSION}.json"


def load_table(kind: str, n: int, N: int):
    from .presentations import QuotientLieAlgebra

    payload = load("basis", _table_name(kind, n, N))
    if payload is None:
        return None
    try:
        return QuotientLieAlgebra.from_json(payload)
    except (ValueError, KeyError) as exc:
        log.warning("discarding bad table cache (%s)", exc)
        invalidate("basis", _table_name(kind, n, N))
        return None


def store_table(q) -> Path | None:
    try:
        return store("basis", _table_name(q.presentation.kind, q.presentation.n, q.N), q.to_json())
    except CacheError as exc:
        log.warning("%s", exc)
        return None

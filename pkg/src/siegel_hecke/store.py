"""JSON persistence: atomic writes and a content-addressed expansion cache."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Optional, Union

from .errors import ChecksumMismatch
from .series import FourierExpansion

CACHE_ENV = "SIEGEL_HECKE_CACHE"


def atomic_write_text(path: Union[str, Path], text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_json(path: Union[str, Path], data) -> None:
    atomic_write_text(path, json.dumps(data, indent=1, sort_keys=True) + "\n")


def save_expansion(path: Union[str, Path], f: FourierExpansion) -> None:
    atomic_write_text(path, f.dumps() + "\n")


def load_expansion_file(path: Union[str, Path]) -> FourierExpansion:
    return FourierExpansion.loads(Path(path).read_text(encoding="utf-8"))


def cache_key(generator: str, **params) -> str:
    blob = json.dumps({"generator": generator, "params": params}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


class ExpansionCache:
    """Expansions stored under their key, each with a checksum of its payload."""

    def __init__(self, root: Union[str, Path, None] = None):
        root = root or os.environ.get(CACHE_ENV)
        if not root:
            raise ValueError(f"no cache directory given and ${CACHE_ENV} is unset")
        self.root = Path(root)

    def path(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def store(self, key: str, f: FourierExpansion) -> Path:
        payload = f.to_json()
        record = {"key": key, "checksum": f.checksum(), "expansion": payload}
        path = self.path(key)
        atomic_write_text(path, json.dumps(record, separators=(",", ":")))
        return path

    def load(self, key: str) -> Optional[FourierExpansion]:
        """The cached expansion, or None on a miss; ChecksumMismatch if corrupted."""
        path = self.path(key)
        if not path.exists():
            return None
        try:
            record = json.loads(path.read_text(encoding="utf-8"))
            f = FourierExpansion.from_json(record["expansion"])
        except (ValueError, KeyError, TypeError) as err:
            raise ChecksumMismatch(f"unreadable cache entry {path}: {err}") from err
        if f.checksum() != record.get("checksum"):
            raise ChecksumMismatch(f"checksum mismatch in {path}")
        return f

    def get_or_build(self, key: str, build) -> FourierExpansion:
        try:
            f = self.load(key)
        except ChecksumMismatch:
            f = None
        if f is None:
            f = build()
            self.store(key, f)
        return f

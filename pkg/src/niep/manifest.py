"""Run manifests and atomic output writing for the command line tools.

Every file the CLI produces embeds (or sits next to) a manifest naming
the command, its parameters, the seed, and the library versions that
produced it, so a result can be regenerated byte for byte.  Timestamps
live outside the deterministic core: two runs with equal inputs differ
only in the ``started_at`` / ``duration_seconds`` fields.
"""

from __future__ import annotations

import datetime as _dt
import hashlib
import json
import os
import platform
import tempfile
from dataclasses import dataclass, field
from importlib import metadata
from typing import Any

from . import __version__

__all__ = ["RunManifest", "atomic_write_text", "atomic_write_json", "file_digest"]


def _dist_version(name: str) -> str:
    try:
        return metadata.version(name)
    except metadata.PackageNotFoundError:
        return "unknown"


@dataclass
class RunManifest:
    """Provenance block attached to every CLI output."""

    command: str
    argv: list[str]
    parameters: dict[str, Any]
    seed: int | None = None
    package_version: str = __version__
    python_version: str = field(default_factory=platform.python_version)
    numpy_version: str = field(default_factory=lambda: _dist_version("numpy"))
    scipy_version: str = field(default_factory=lambda: _dist_version("scipy"))
    input_digests: dict[str, str] = field(default_factory=dict)
    started_at: str = ""
    duration_seconds: float = 0.0

    def start(self) -> None:
        self.started_at = _dt.datetime.now(_dt.timezone.utc).isoformat()

    def deterministic_core(self) -> dict[str, Any]:
        """Everything except wall-clock fields, for byte-stable outputs."""
        return {
            "command": self.command,
            "argv": list(self.argv),
            "parameters": dict(self.parameters),
            "seed": self.seed,
            "package_version": self.package_version,
            "python_version": self.python_version,
            "numpy_version": self.numpy_version,
            "scipy_version": self.scipy_version,
            "input_digests": dict(self.input_digests),
        }

    def to_dict(self) -> dict[str, Any]:
        data = self.deterministic_core()
        data["started_at"] = self.started_at
        data["duration_seconds"] = self.duration_seconds
        return data


def file_digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def atomic_write_text(path: str, text: str) -> None:
    """Write via a temp file in the same directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".niep-tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def atomic_write_json(path: str, payload: dict[str, Any]) -> None:
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")

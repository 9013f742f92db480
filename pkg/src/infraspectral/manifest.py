"""Run manifests and atomic result-file writing.

Every CLI run emits one manifest JSON recording the command, each input's
content hash, all configuration and seed values, the tool version, a
timestamp, and the hash of every result file it produced.  Result files
carry a leading ``# manifest: <name>`` comment (CSV) or a ``manifest``
key (JSON) pointing back at it, so any result can be traced to the exact
inputs and settings that produced it and re-derived bit for bit
(timestamps live only in the manifest, keeping result files
deterministic under a fixed seed).
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone

from . import __version__


def sha256_file(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def atomic_write_text(path: str, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass
class RunManifest:
    """Provenance record for one CLI invocation."""

    command: str
    inputs: list[dict] = field(default_factory=list)
    config: dict = field(default_factory=dict)
    rng: dict = field(default_factory=dict)
    tool_version: str = __version__
    created_utc: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds")
    )
    outputs: list[dict] = field(default_factory=list)

    def add_input(self, path: str) -> None:
        self.inputs.append({"path": os.path.abspath(path), "sha256": sha256_file(path)})

    def add_output(self, path: str, text: str) -> None:
        self.outputs.append({"file": os.path.basename(path), "sha256": sha256_text(text)})

    def write(self, path: str) -> None:
        payload = {
            "command": self.command,
            "inputs": self.inputs,
            "config": self.config,
            "rng": self.rng,
            "tool_version": self.tool_version,
            "created_utc": self.created_utc,
            "outputs": self.outputs,
        }
        atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")

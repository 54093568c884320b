"""Artifact manifests: content hashes binding outputs to their inputs.

Every pipeline command writes ``<artifact>.manifest.json`` beside its
artifact, recording the command, input file hashes, the config
snapshot, and the seeds in play. Reruns with identical manifests
produce byte-identical artifacts; ``verify`` recomputes every hash.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .errors import DataError

MANIFEST_SCHEMA = "infodemic.manifest/1"


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def manifest_path(artifact: str | Path) -> Path:
    artifact = Path(artifact)
    return artifact.with_name(artifact.name + ".manifest.json")


def write_manifest(
    artifact: str | Path,
    command: str,
    inputs: dict[str, str | Path],
    config_snapshot: dict,
    seeds: dict[str, int],
) -> Path:
    artifact = Path(artifact)
    doc = {
        "schema": MANIFEST_SCHEMA,
        "command": command,
        "artifact": {"path": artifact.name, "sha256": sha256_file(artifact)},
        "inputs": {
            name: {"path": str(path), "sha256": sha256_file(path)}
            for name, path in sorted(inputs.items())
        },
        "config": config_snapshot,
        "seeds": {k: int(v) for k, v in sorted(seeds.items())},
    }
    out = manifest_path(artifact)
    out.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return out


def read_manifest(path: str | Path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"manifest not found: {path}")
    doc = json.loads(path.read_text(encoding="utf-8"))
    if doc.get("schema") != MANIFEST_SCHEMA:
        raise DataError(f"unsupported manifest schema: {doc.get('schema')!r}")
    return doc


def verify_manifest(path: str | Path) -> list[str]:
    """Recompute all hashes; returns a list of problems (empty = verified)."""
    path = Path(path)
    doc = read_manifest(path)
    problems = []
    artifact = path.parent / doc["artifact"]["path"]
    if not artifact.is_file():
        problems.append(f"artifact missing: {artifact}")
    elif sha256_file(artifact) != doc["artifact"]["sha256"]:
        problems.append(f"artifact hash mismatch: {artifact}")
    for name, entry in doc["inputs"].items():
        input_path = Path(entry["path"])
        if not input_path.is_absolute():
            input_path = path.parent / input_path
        if not input_path.is_file():
            problems.append(f"input {name} missing: {input_path}")
        elif sha256_file(input_path) != entry["sha256"]:
            problems.append(f"input {name} hash mismatch: {input_path}")
    return problems

"""Deterministic seed derivation.

Every randomized stage takes a seed derived from the master seed plus a
stage tag, so two runs with the same master seed make identical draws no
matter which stages run or in what order. The derivation hashes the tag
tuple with SHA-256 (stable across platforms and interpreter restarts,
unlike the builtin ``hash``).
"""

from __future__ import annotations

import hashlib


def derive_seed(master: int, *tags: int | str) -> int:
    """Derive a 63-bit child seed from a master seed and a tag path."""
    h = hashlib.sha256()
    h.update(str(int(master)).encode("ascii"))
    for tag in tags:
        h.update(b"/")
        h.update(str(tag).encode("utf-8"))
    return int.from_bytes(h.digest()[:8], "big") >> 1

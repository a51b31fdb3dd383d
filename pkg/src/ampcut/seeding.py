"""Seed splitting.

A subsystem never draws from its caller's generator. It derives its own seed as the
first 8 bytes (little endian) of ``sha256(f"{seed}/{label}")``, so adding a new
consumer leaves every existing stream untouched.
"""

from __future__ import annotations

import hashlib


def derive_seed(seed: int, *labels: object) -> int:
    text = "/".join([str(int(seed))] + [str(label) for label in labels])
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "little")

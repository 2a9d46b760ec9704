"""Deterministic seed splitting for reproducible experiments.

Every randomized run in this package is driven by a single 64-bit master
seed.  Sub-tasks (one trial of a game, one instance search, one oracle)
derive their own generator via ``make_rng(master, label, index)``, which
hashes ``"{master}:{label}:{index}"`` with SHA-256 and keeps the first
8 bytes.  The construction is platform independent, so parallel and
sequential runs of the same experiment see identical randomness.
"""

from __future__ import annotations

import hashlib
import random

__all__ = ["subseed", "make_rng"]


def subseed(master: int, label: str, index: int = 0) -> int:
    """Derive a 64-bit child seed from (master seed, task label, index)."""
    digest = hashlib.sha256(f"{master}:{label}:{index}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


def make_rng(master: int, label: str, index: int = 0) -> random.Random:
    """A fresh ``random.Random`` seeded from (master, label, index)."""
    return random.Random(subseed(master, label, index))

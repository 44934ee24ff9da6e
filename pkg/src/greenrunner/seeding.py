"""Deterministic seed derivation.

All randomness in the package flows from named substreams derived here so
that oracle draws, per-arm sample schedules, and strategy randomness never
alias each other. The mixer is splitmix64; string labels are folded in
through an 8-byte blake2b digest.
"""

from __future__ import annotations

import hashlib

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One splitmix64 step: maps a 64-bit word to a well-mixed 64-bit word."""
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def _label_word(label: int | str) -> int:
    if isinstance(label, str):
        digest = hashlib.blake2b(label.encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "big")
    return label & MASK64


def derive_seed(seed: int, *labels: int | str) -> int:
    """Derive a 64-bit subseed from `seed` and an ordered label path."""
    h = splitmix64(seed & MASK64)
    for label in labels:
        h = splitmix64(h ^ _label_word(label))
    return h


def unit_uniform(word: int) -> float:
    """Map a 64-bit word to a float in [0, 1) using the top 53 bits."""
    return (word >> 11) * (1.0 / (1 << 53))

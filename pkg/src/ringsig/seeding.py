"""Deterministic seed derivation for trial-parallel experiments.

Every trial's RNG seed is a hash of (master seed, labels...), so results are
independent of scheduling, worker count, and grid iteration order.
"""

from __future__ import annotations

import hashlib


def derive_seed(*parts) -> int:
    """64-bit seed from a hash of the stringified parts."""
    text = "|".join(repr(p) for p in parts)
    digest = hashlib.blake2b(text.encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")

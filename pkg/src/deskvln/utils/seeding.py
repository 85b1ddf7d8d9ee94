"""
Deterministic seed handling.

All randomness in deskvln flows through numpy Generators. Seeds for sub-components
(an episode, a step, a worker) are derived from a parent seed and string keys with
blake2b, so they do not depend on evaluation order or on Python's salted hash().
"""
import hashlib

import numpy as np

from deskvln.utils.typehints import Seed


def derive_seed(seed: int, *keys: object) -> int:
    """
    Derive a 63-bit child seed from a parent seed and any number of keys.

    Args:
        seed: Parent seed
        *keys: Values identifying the child (converted with str())

    Returns:
        Non-negative integer seed, stable across processes and platforms
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(seed)).encode())
    for key in keys:
        h.update(b"\x1f")
        h.update(str(key).encode())
    return int.from_bytes(h.digest(), "little") >> 1


def as_generator(seed: Seed) -> np.random.Generator:
    """Return seed unchanged if it is already a Generator, else a fresh default_rng(seed)."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)

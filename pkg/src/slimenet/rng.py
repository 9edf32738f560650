"""Seed derivation and named random streams.

Every stochastic draw goes through ``stream(seed, name)``: a PCG64 generator
keyed by the integer seed and a stable code for the stream name, so draws for
center placement, flow scheduling and sampling designs never share state.
"""
from __future__ import annotations

import hashlib

import numpy as np

CENTERS = "centers"
FLOWS = "flows"
LHS = "lhs"


def _digest(text: str, nbytes: int) -> int:
    h = hashlib.blake2b(text.encode("ascii"), digest_size=nbytes)
    return int.from_bytes(h.digest(), "big")


def derive_seed(*keys: int) -> int:
    """Stable 63-bit seed from a tuple of integers (blake2b of ``"k0:k1:..."``)."""
    return _digest(":".join(str(int(k)) for k in keys), 8) >> 1


def stream(seed: int, name: str) -> np.random.Generator:
    code = _digest(name, 4)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), code])))

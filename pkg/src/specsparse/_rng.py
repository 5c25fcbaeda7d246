"""Deterministic seeding: named child seeds and per-edge uniforms."""
from __future__ import annotations

import hashlib

import numpy as np

_MASK = (1 << 64) - 1


def child_seed(seed: int, *tags) -> int:
    """64-bit seed derived from ``seed`` and a branch path, order-independent of execution."""
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(seed) & _MASK).encode())
    for t in tags:
        h.update(b"/")
        h.update(str(t).encode())
    return int.from_bytes(h.digest(), "little")


def _splitmix64(x: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        x = x + np.uint64(0x9E3779B97F4A7C15)
        x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return x ^ (x >> np.uint64(31))


def edge_uniforms(seed: int, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Uniforms in [0, 1) keyed by (seed, u, v); independent of edge order."""
    base = _splitmix64(np.array([int(seed) & _MASK], dtype=np.uint64))[0]
    key = (np.asarray(u, dtype=np.uint64) << np.uint64(32)) | np.asarray(v, dtype=np.uint64)
    with np.errstate(over="ignore"):
        bits = _splitmix64(_splitmix64(key ^ base) + base)
    return (bits >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def generator(seed: int, *tags) -> np.random.Generator:
    return np.random.default_rng(child_seed(seed, *tags))

"""Deterministic RNG streams.

All randomness flows from a single root seed through named SeedSequence
spawns, so any component can be re-created bit-exactly from
(root_seed, *path) without threading generator objects everywhere.
"""

from __future__ import annotations

import zlib

import numpy as np


def _path_key(path: tuple) -> tuple[int, ...]:
    key = []
    for part in path:
        if isinstance(part, str):
            key.append(zlib.crc32(part.encode("utf-8")))
        else:
            key.append(int(part) & 0xFFFFFFFF)
    return tuple(key)


def stream(root_seed: int, *path) -> np.random.Generator:
    """Named child generator, e.g. stream(seed, "episode", 12, "noise")."""
    ss = np.random.SeedSequence(entropy=root_seed, spawn_key=_path_key(tuple(path)))
    return np.random.Generator(np.random.PCG64(ss))

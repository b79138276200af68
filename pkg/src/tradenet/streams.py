"""Seed derivation shared by every stochastic stage.

A stream is identified by ``(master seed, stage name, index)``; the stage
name is hashed with CRC-32 so derivation is stable across processes and
Python versions.
"""
from __future__ import annotations

import os
import zlib

import numpy as np

from .errors import ConfigError

MAX_SEED = 2**64 - 1


def check_seed(seed) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or not 0 <= seed <= MAX_SEED:
        raise ConfigError(f"seed must be an integer in [0, 2**64), got {seed!r}")
    return int(seed)


def seed_sequence(seed: int, stage: str, index: int = 0) -> np.random.SeedSequence:
    return np.random.SeedSequence(check_seed(seed), spawn_key=(zlib.crc32(stage.encode("utf-8")), int(index)))


def stream(seed: int, stage: str, index: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed_sequence(seed, stage, index)))


def default_threads() -> int:
    env = os.environ.get("TRADENET_THREADS")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ConfigError(f"TRADENET_THREADS must be a positive integer, got {env!r}") from None
        if value < 1:
            raise ConfigError(f"TRADENET_THREADS must be a positive integer, got {env!r}")
        return value
    return os.cpu_count() or 1

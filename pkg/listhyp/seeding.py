# Copyright 2025 The listhyp Authors
# Licensed under the Apache License, Version 2.0

"""
Seed handling.

All randomness flows from one 64-bit command-level seed. Sub-streams get
their own seed ``splitmix64(seed ^ stream_index)`` so adding a stream never
shifts the others.
"""

import numpy as np

MASK64 = (1 << 64) - 1


def splitmix64(value: int) -> int:
    """One round of the SplitMix64 finalizer."""
    z = (value + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, stream_index: int) -> int:
    """Sub-seed for the given stream."""
    return splitmix64((seed & MASK64) ^ (stream_index & MASK64))


def make_generator(seed: int) -> np.random.Generator:
    """PCG64 generator for a 64-bit seed (negative seeds wrap modulo 2^64)."""
    return np.random.Generator(np.random.PCG64(seed & MASK64))

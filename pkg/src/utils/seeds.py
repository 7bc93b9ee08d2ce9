"""
Per-trial seed derivation.

seed_i = splitmix64(base + (i + 1) * 0x9E3779B97F4A7C15 mod 2^64), the
SplitMix64 output function applied to the i-th step of its Weyl sequence.
"""
from src.errors import InputError

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(value: int) -> int:
    z = value & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def check_seed(seed: int) -> int:
    if not 0 <= seed <= MASK64:
        raise InputError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def derive_seed(base_seed: int, index: int) -> int:
    check_seed(base_seed)
    if index < 0:
        raise InputError(f"trial index must be non-negative, got {index}")
    return splitmix64(base_seed + (index + 1) * GOLDEN_GAMMA)

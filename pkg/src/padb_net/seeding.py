"""Deterministic seed derivation.

A base seed expands into per-cell seeds with splitmix64 so any two
implementations using the same constants reproduce the same seed ledger::

    mix(i_1, ..., i_m) = s_m,  s_0 = 0,  s_j = splitmix64(s_{j-1} XOR i_j)
    derive_seed(base, i_1, ..., i_m) = base XOR mix(i_1, ..., i_m)

All arithmetic is modulo 2**64.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_1 = 0xBF58476D1CE4E5B9
MIX_2 = 0x94D049BB133111EB


def splitmix64(x: int) -> int:
    z = (x + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * MIX_1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_2) & MASK64
    return z ^ (z >> 31)


def derive_seed(base: int, *indices: int) -> int:
    h = 0
    for i in indices:
        h = splitmix64(h ^ (int(i) & MASK64))
    return (int(base) & MASK64) ^ h

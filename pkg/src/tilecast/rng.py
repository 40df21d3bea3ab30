"""Counter-based splittable RNG.

State is a (key, counter) pair of u64. Drawing finalizes
``key + counter * GOLDEN`` through a splitmix64-style mixer and bumps the
counter; splitting derives an independent child key from a salted draw, so
streams can be fanned out per environment (or per policy) without any
sequential coupling. The same arithmetic is reimplemented in the compiled
backend and in numpy limbs (see policy_uniform); all three must agree bit
for bit.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

_MASK = 0xFFFF_FFFF_FFFF_FFFF
_GOLDEN = 0x9E37_79B9_7F4A_7C15
_MIX1 = 0xBF58_476D_1CE4_E5B9
_MIX2 = 0x94D0_49BB_1331_11EB
_SPLIT_SALT = 0x3C6E_F372_FE94_F82A


class RngState(NamedTuple):
    key: int
    counter: int


def _mix(x: int) -> int:
    x &= _MASK
    x ^= x >> 30
    x = (x * _MIX1) & _MASK
    x ^= x >> 27
    x = (x * _MIX2) & _MASK
    x ^= x >> 31
    return x


def from_seed(seed: int) -> RngState:
    """Root state for a user seed (any int; reduced mod 2^64)."""
    return RngState(_mix(seed & _MASK), 0)


def next_u64(state: RngState) -> tuple[int, RngState]:
    """Draw one u64, returning (value, advanced state)."""
    value = _mix((state.key + state.counter * _GOLDEN) & _MASK)
    return value, RngState(state.key, (state.counter + 1) & _MASK)


def next_below(state: RngState, n: int) -> tuple[int, RngState]:
    """Draw an int in [0, n) via multiply-high; n must be >= 1."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    u, state = next_u64(state)
    return (u * n) >> 64, state


def split(state: RngState, index: int) -> RngState:
    """Child stream `index` of this state; independent of draws on `state`."""
    child_key = _mix((state.key + _SPLIT_SALT + (index & _MASK) * _GOLDEN) & _MASK)
    return RngState(child_key, 0)


def policy_uniform(key: int, counters: np.ndarray, n: int) -> np.ndarray:
    """Vectorized next_below over an array of counters (one stream, u64 key).

    numpy has no 128-bit type, so the mixer runs on u64 (wrapping is the
    point) and the final multiply-high is done in 32-bit limbs. Returns
    int64 draws in [0, n).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    x = np.uint64(key) + counters.astype(np.uint64) * np.uint64(_GOLDEN)
    x ^= x >> np.uint64(30)
    x *= np.uint64(_MIX1)
    x ^= x >> np.uint64(27)
    x *= np.uint64(_MIX2)
    x ^= x >> np.uint64(31)
    # multiply-high: split u64 draw and u64 n into 32-bit limbs
    mask32 = np.uint64(0xFFFF_FFFF)
    xl = x & mask32
    xh = x >> np.uint64(32)
    nn = np.uint64(n)
    nl = nn & mask32
    nh = nn >> np.uint64(32)
    ll = xl * nl
    lh = xl * nh
    hl = xh * nl
    hh = xh * nh
    carry = ((ll >> np.uint64(32)) + (lh & mask32) + (hl & mask32)) >> np.uint64(32)
    hi = hh + (lh >> np.uint64(32)) + (hl >> np.uint64(32)) + carry
    return hi.astype(np.int64)

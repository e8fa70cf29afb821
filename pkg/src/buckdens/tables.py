"""Vectorized arithmetic tables over a window ``[0, W]``.

Index ``n`` of each array holds the value for ``n``; index 0 is padding.
Tables are cached per ``W`` since the same window is scanned repeatedly.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .residue import prime_table


@lru_cache(maxsize=64)
def valuations(p: int, W: int) -> np.ndarray:
    v = np.zeros(W + 1, dtype=np.int8)
    q = p
    while q <= W:
        v[q::q] += 1
        q *= p
    v.flags.writeable = False
    return v


@lru_cache(maxsize=4)
def omega(W: int) -> np.ndarray:
    w = np.zeros(W + 1, dtype=np.int8)
    for p in prime_table(max(W, 2)):
        w[p::p] += 1
    w.flags.writeable = False
    return w


@lru_cache(maxsize=4)
def tau(W: int) -> np.ndarray:
    t = np.ones(W + 1, dtype=np.int64)
    t[0] = 0
    small = math.isqrt(W)
    for p in prime_table(max(W, 2)):
        p = int(p)
        if p <= small:
            t[p::p] *= valuations(p, W)[p::p].astype(np.int64) + 1
        else:
            t[p::p] *= 2
    t.flags.writeable = False
    return t


def _odd_parity(p: int, W: int, out: np.ndarray) -> None:
    # flips at every power of p, so the bit ends up as v_p(n) mod 2
    q = p
    while q <= W:
        out[q::q] ^= 1
        q *= p


@lru_cache(maxsize=16)
def odd_exponent_count(W: int, primes: tuple[int, ...] | None = None) -> np.ndarray:
    """Number of primes (from ``primes``, default all) with odd exponent in n."""
    plist = prime_table(max(W, 2)).tolist() if primes is None else [p for p in primes if p <= W]
    count = np.zeros(W + 1, dtype=np.int16)
    parity = np.zeros(W + 1, dtype=np.uint8)
    small = math.isqrt(W)
    for p in plist:
        if p <= small:
            parity[:] = 0
            _odd_parity(p, W, parity)
            count += parity
        else:
            count[p::p] += 1
    count.flags.writeable = False
    return count


def naturals(W: int) -> np.ndarray:
    return np.arange(W + 1, dtype=np.int64)

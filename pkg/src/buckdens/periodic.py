"""Finite unions of residue classes stored as membership bit vectors."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

import numpy as np

from .residue import ResidueClass, check_u64, factorize

PERIOD_LIMIT = 2**32


class PeriodLimitError(OverflowError):
    pass


def _check_period(period: int, limit: int | None = None) -> int:
    check_u64(period, "period")
    limit = PERIOD_LIMIT if limit is None else limit
    if period > limit:
        raise PeriodLimitError(f"period {period} exceeds the limit {limit}")
    return period


class PeriodicSet:
    """A set of naturals ``n`` decided by ``n mod period``.

    ``members[i]`` is True iff every ``n ≡ i (mod period)`` belongs to the set.
    Instances are immutable; ``canonicalize`` reduces to the minimal period.
    """

    __slots__ = ("period", "members")

    def __init__(self, period: int, members):
        _check_period(period)
        bits = np.zeros(period, dtype=bool)
        if isinstance(members, np.ndarray) and members.dtype == bool:
            if members.shape != (period,):
                raise ValueError("membership vector length must equal the period")
            bits[:] = members
        else:
            idx = np.fromiter((int(x) for x in members), dtype=np.int64)
            if idx.size and (idx.min() < 0 or idx.max() >= period):
                raise ValueError(f"members must lie in [0, {period})")
            bits[idx] = True
        bits.flags.writeable = False
        self.period = period
        self.members = bits

    @classmethod
    def full(cls) -> "PeriodicSet":
        return cls(1, [0])

    @classmethod
    def empty(cls) -> "PeriodicSet":
        return cls(1, [])

    def __contains__(self, n: int) -> bool:
        return bool(self.members[n % self.period])

    def residues(self) -> list[int]:
        return np.flatnonzero(self.members).tolist()

    def count(self) -> int:
        return int(np.count_nonzero(self.members))

    def __repr__(self):
        res = self.residues()
        shown = res if len(res) <= 12 else res[:12] + ["..."]
        return f"PeriodicSet(period={self.period}, members={shown})"

    def expand(self, period: int) -> np.ndarray:
        """Membership vector re-expressed over a multiple of the period."""
        if period % self.period:
            raise ValueError(f"{period} is not a multiple of {self.period}")
        _check_period(period)
        return np.tile(self.members, period // self.period)

    def canonicalize(self) -> "PeriodicSet":
        L = self.period
        bits = self.members
        for p, _ in factorize(L):
            while L % p == 0:
                d = L // p
                if np.array_equal(np.tile(bits[:d], p), bits[:L]):
                    L = d
                    bits = bits[:L]
                else:
                    break
        if L == self.period:
            return self
        return PeriodicSet(L, bits.copy())

    def __eq__(self, other):
        if not isinstance(other, PeriodicSet):
            return NotImplemented
        a, b = self.canonicalize(), other.canonicalize()
        return a.period == b.period and np.array_equal(a.members, b.members)

    def __hash__(self):
        c = self.canonicalize()
        return hash((c.period, c.members.tobytes()))

    def classes(self) -> list[ResidueClass]:
        return [ResidueClass(r, self.period) for r in self.residues()]

    def local_counts(self, g: int) -> np.ndarray:
        """Number of members congruent to each residue mod ``g`` (``g | period``)."""
        idx = np.flatnonzero(self.members) % g
        return np.bincount(idx, minlength=g)


def from_classes(classes: Iterable[ResidueClass]) -> PeriodicSet:
    classes = list(classes)
    if not classes:
        return PeriodicSet.empty()
    L = _check_period(math.lcm(*(c.m for c in classes)))
    bits = np.zeros(L, dtype=bool)
    for c in classes:
        bits[c.r :: c.m] = True
    return PeriodicSet(L, bits)


def density(s: PeriodicSet) -> Fraction:
    return Fraction(s.count(), s.period)


def _align(a: PeriodicSet, b: PeriodicSet) -> tuple[np.ndarray, np.ndarray, int]:
    L = _check_period(math.lcm(a.period, b.period))
    return a.expand(L), b.expand(L), L


def union(a: PeriodicSet, b: PeriodicSet) -> PeriodicSet:
    x, y, L = _align(a, b)
    return PeriodicSet(L, x | y)


def intersect(a: PeriodicSet, b: PeriodicSet) -> PeriodicSet:
    x, y, L = _align(a, b)
    return PeriodicSet(L, x & y)


def complement(a: PeriodicSet) -> PeriodicSet:
    return PeriodicSet(a.period, ~a.members)


def difference(a: PeriodicSet, b: PeriodicSet) -> PeriodicSet:
    x, y, L = _align(a, b)
    return PeriodicSet(L, x & ~y)


def is_subset(a: PeriodicSet, b: PeriodicSet) -> bool:
    x, y, _ = _align(a, b)
    return not np.any(x & ~y)


def scale_set(a: int, s: PeriodicSet) -> PeriodicSet:
    """The image ``a*S``: period ``a*L``, members ``a*x`` for members ``x``."""
    if a < 1:
        raise ValueError(f"scale factor must be >= 1, got {a}")
    L = _check_period(a * s.period)
    bits = np.zeros(L, dtype=bool)
    bits[::a] = s.members
    return PeriodicSet(L, bits)


def residue_count_periodic(s: PeriodicSet, m: int) -> int:
    """``R(S:m)``, the number of residues mod ``m`` attained by ``S``.

    A residue ``y`` mod ``m`` is attained iff some member ``x`` mod ``L``
    agrees with ``y`` mod ``gcd(L, m)`` (CRT), so only the projection of the
    members onto ``gcd(L, m)`` matters.
    """
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    g = math.gcd(s.period, m)
    hit = np.count_nonzero(s.local_counts(g))
    return int(hit) * (m // g)

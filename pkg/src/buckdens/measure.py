"""Exact Buck measures for valuation sets, B_alpha and scaled unions.

Every result is a :class:`Measure`: an exact rational ``value`` plus a
rational ``tail_bound`` on what truncation left out. A zero tail bound means
the value is the measure itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Sequence

from .residue import check_u64, factorize, require_prime

if TYPE_CHECKING:
    from .sets import SetExpr

DEFAULT_TRUNCATION = 64


@dataclass(frozen=True)
class Measure:
    value: Fraction
    tail_bound: Fraction = Fraction(0)
    caveat: str | None = None

    @property
    def exact(self) -> bool:
        return self.tail_bound == 0

    def contains(self, x: Fraction) -> bool:
        """Whether ``x`` lies in ``[value, value + tail_bound]``."""
        return self.value <= x <= self.value + self.tail_bound


@dataclass(frozen=True)
class ExponentSet:
    """Set of allowed exponents ``e >= 1``.

    ``kind`` is ``"explicit"`` (a finite strictly increasing tuple) or
    ``"ap"`` (the infinite progression ``start, start+step, ...``). For
    progressions ``truncation`` is the number of leading terms summed by the
    measure formulas; membership always uses the full progression.
    """

    kind: str
    values: tuple[int, ...] = ()
    start: int = 1
    step: int = 1
    truncation: int = DEFAULT_TRUNCATION

    def __post_init__(self):
        if self.kind == "explicit":
            v = self.values
            if any(e < 1 for e in v):
                raise ValueError("exponents must be >= 1")
            if any(a >= b for a, b in zip(v, v[1:])):
                raise ValueError(f"exponents must be strictly increasing, got {v}")
        elif self.kind == "ap":
            if self.start < 1 or self.step < 1:
                raise ValueError("progression needs start >= 1 and step >= 1")
            if self.truncation < 0:
                raise ValueError("truncation must be >= 0")
        else:
            raise ValueError(f"unknown exponent-set kind {self.kind!r}")

    @classmethod
    def explicit(cls, values: Sequence[int]) -> "ExponentSet":
        return cls("explicit", tuple(int(e) for e in values))

    @classmethod
    def ap(cls, start: int, step: int, truncation: int = DEFAULT_TRUNCATION) -> "ExponentSet":
        return cls("ap", start=start, step=step, truncation=truncation)

    @classmethod
    def all(cls, truncation: int = DEFAULT_TRUNCATION) -> "ExponentSet":
        return cls.ap(1, 1, truncation)

    @property
    def finite(self) -> bool:
        return self.kind == "explicit"

    def __contains__(self, e: int) -> bool:
        if self.kind == "explicit":
            return e in self.values
        return e >= self.start and (e - self.start) % self.step == 0

    def terms(self) -> tuple[int, ...]:
        """The summed terms: all of a finite set, the first K of a progression."""
        if self.kind == "explicit":
            return self.values
        return tuple(self.start + k * self.step for k in range(self.truncation))

    def below(self, a: int) -> list[int]:
        """Elements ``e < a``."""
        if self.kind == "explicit":
            return [e for e in self.values if e < a]
        return list(range(self.start, a, self.step))

    def has_at_least(self, a: int) -> bool:
        if self.kind == "explicit":
            return bool(self.values) and self.values[-1] >= a
        return True

    def contains_all_from(self, a: int) -> bool:
        """Whether every ``e >= a`` belongs to the set."""
        return self.kind == "ap" and self.step == 1 and a >= self.start

    def __str__(self) -> str:
        if self.kind == "explicit":
            return "{" + ",".join(map(str, self.values)) + "}"
        return f"ap({self.start},{self.step}),{self.truncation}"


def _geometric_tail(p: int, e_first: int, step: int) -> Fraction:
    """``sum_{j>=0} p**-(e_first + j*step)``."""
    return Fraction(1, p**e_first) / (1 - Fraction(1, p**step))


def measure_valuation(p: int, E: ExponentSet) -> Measure:
    """Measure of ``N(p,E)``, the naturals whose ``p``-adic valuation lies in E.

    The set is the disjoint union of ``p**e * (N minus (p))`` over e in E, so
    the measure is ``(1 - 1/p) * sum p**-e``.
    """
    require_prime(p)
    factor = 1 - Fraction(1, p)
    value = factor * sum((Fraction(1, p**e) for e in E.terms()), Fraction(0))
    if E.finite:
        return Measure(value)
    e_next = E.start + E.truncation * E.step
    return Measure(value, factor * _geometric_tail(p, e_next, E.step))


def measure_multi(ps: Sequence[int], Es: Sequence[ExponentSet]) -> Measure:
    """Measure of the set fixing the valuations at several distinct primes."""
    if len(ps) != len(Es):
        raise ValueError(f"{len(ps)} primes but {len(Es)} exponent sets")
    if len(set(ps)) != len(ps):
        raise ValueError(f"primes must be distinct, got {list(ps)}")
    if list(ps) != sorted(ps):
        raise ValueError(f"primes must be increasing, got {list(ps)}")
    lo, hi = Fraction(1), Fraction(1)
    for p, E in zip(ps, Es):
        m = measure_valuation(p, E)
        lo *= m.value
        hi *= m.value + m.tail_bound
    return Measure(lo, hi - lo)


def residues_valuation(p: int, E: ExponentSet, a: int) -> int:
    """Residues mod ``p**a`` attained by ``N(p,E)``.

    A residue with valuation ``e < a`` is attained iff e is in E; there are
    ``p**(a-e-1) * (p-1)`` of them. Residue 0 is attained iff E reaches ``a``.
    """
    require_prime(p)
    if a < 0:
        raise ValueError("exponent a must be >= 0")
    check_u64(p**a, "prime power")
    count = sum(p ** (a - e - 1) * (p - 1) for e in E.below(a))
    return count + (1 if E.has_at_least(a) else 0)


# -- B_alpha ---------------------------------------------------------------


def dyadic_digits(alpha: Fraction, K: int) -> tuple[int, ...]:
    """First ``K`` binary digits ``a_1 a_2 ...`` of ``alpha`` in [0, 1).

    Dyadic rationals get their terminating expansion.
    """
    alpha = Fraction(alpha)
    if not 0 <= alpha < 1:
        raise ValueError(f"alpha must lie in [0, 1), got {alpha}")
    out = []
    for _ in range(K):
        alpha *= 2
        d = int(alpha >= 1)
        out.append(d)
        alpha -= d
    return tuple(out)


def parse_bits(bits: str) -> tuple[int, ...]:
    if not bits or any(c not in "01" for c in bits):
        raise ValueError(f"bit string must consist of 0/1 digits, got {bits!r}")
    return tuple(int(c) for c in bits)


def nonzero_positions(digits: Sequence[int]) -> list[int]:
    """Indices ``n_1 < n_2 < ...`` (1-based) of the nonzero digits."""
    return [i for i, d in enumerate(digits, 1) if d]


def measure_balpha(digits: Sequence[int], K: int | None = None, alpha: Fraction | None = None) -> Measure:
    """Partial sum of ``B_alpha``'s measure over its first ``K`` digit positions.

    With ``alpha`` given, the tail bound is the exact remainder
    ``alpha - partial``; otherwise the digit stream is taken as complete and
    any nonzero digit beyond position K bounds the remainder by ``2**-K``.
    """
    digits = tuple(digits)
    if any(d not in (0, 1) for d in digits):
        raise ValueError("dyadic digits must be 0 or 1")
    if alpha is not None and not 0 <= alpha < 1:
        raise ValueError(f"alpha must lie in [0, 1), got {alpha}")
    K = len(digits) if K is None else K
    kept = digits[:K]
    value = sum((Fraction(1, 2**n) for n in nonzero_positions(kept)), Fraction(0))
    if alpha is not None:
        tail = Fraction(alpha) - value
    elif any(digits[K:]):
        tail = Fraction(1, 2**K)
    else:
        tail = Fraction(0)
    return Measure(value, tail)


# -- scaled unions -----------------------------------------------------------


@dataclass(frozen=True)
class ScaledUnionSpec:
    """``H = union of b_i * H_i`` with ``b_i | b_{i+1}``.

    ``remainder_bound`` bounds the measure of the parts not listed (for a
    truncated infinite family); it is added to the reported tail bound.
    """

    scales: tuple[int, ...]
    parts: tuple["SetExpr", ...]
    remainder_bound: Fraction = field(default=Fraction(0))

    def __post_init__(self):
        if len(self.scales) != len(self.parts):
            raise ValueError(f"{len(self.scales)} scales but {len(self.parts)} parts")
        if any(b < 1 for b in self.scales):
            raise ValueError("scales must be >= 1")
        for i, (b, c) in enumerate(zip(self.scales, self.scales[1:])):
            if c % b:
                raise ValueError(f"divisibility chain broken: b_{i + 1}={b} does not divide b_{i + 2}={c}")

    def primes(self) -> list[int]:
        ps: set[int] = set()
        for b in self.scales:
            ps.update(p for p, _ in factorize(b))
        return sorted(ps)


class CoprimalityError(ValueError):
    def __init__(self, part: int, n: int, p: int):
        super().__init__(f"part {part} contains {n}, which is divisible by the scale prime {p}")
        self.part, self.n, self.p = part, n, p


def check_coprimality(spec: ScaledUnionSpec, W: int = 10**5) -> str | None:
    """Verify every element of every part is coprime to every scale.

    Structural parts are checked exactly: a part avoids the multiples of p iff
    residue 0 mod p is not attained. Others are scanned on ``[1, W]`` and a
    caveat string is returned. Raises :class:`CoprimalityError` on a
    counterexample.
    """
    from .sets import UnsupportedStructure

    caveat = None
    primes = spec.primes()
    for i, H in enumerate(spec.parts, 1):
        for p in primes:
            try:
                hit = bool(H.attained(p)[0])
                if hit:
                    n = H.first_member(W, divisor=p)
                    raise CoprimalityError(i, n if n is not None else p, p)
            except UnsupportedStructure:
                n = H.first_member(W, divisor=p)
                if n is not None:
                    raise CoprimalityError(i, n, p) from None
                caveat = f"coprimality empirically verified on [1, {W}]"
    return caveat


def measure_scaled_union(spec: ScaledUnionSpec, W: int = 10**5) -> Measure:
    """``sum mu(H_i) / b_i`` for a union of scaled parts coprime to the scales."""
    caveat = check_coprimality(spec, W)
    value, tail = Fraction(0), Fraction(spec.remainder_bound)
    for b, H in zip(spec.scales, spec.parts):
        m = H.measure()
        value += m.value / b
        tail += m.tail_bound / b
    return Measure(value, tail, caveat)


def partial_sum_reciprocals(primes: Sequence[int]) -> float:
    return math.fsum(1.0 / p for p in primes)

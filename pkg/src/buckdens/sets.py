"""Set expressions over the naturals.

Every node answers membership (scalar ``contains`` and windowed ``mask``).
Structural nodes also answer *local* queries: for a modulus ``m`` they
classify each residue class ``y+(m)`` as

* ``EMPTY``   no element of the class is in the set,
* ``FULL``    every element of the class is in the set,
* ``PARTIAL`` some but not all elements are,

and ``UNKNOWN`` marks classes an intersection could not decide. The attained
residues ``{s mod m : s in S}`` are the non-EMPTY classes, so ``R(S:m)`` is
read off the local map. Union, intersection and complement act on the three
states pointwise; only PARTIAL-with-PARTIAL intersections are ambiguous, and
those are refined at finer moduli before giving up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache, reduce
from typing import Sequence

import numpy as np

from . import periodic as P
from . import tables
from .measure import (
    ExponentSet,
    Measure,
    dyadic_digits,
    measure_balpha,
    measure_multi,
    measure_valuation,
    nonzero_positions,
    parse_bits,
    residues_valuation,
)
from .periodic import PeriodicSet, PeriodLimitError
from .residue import factorize, omega, prime_table, require_prime, tau, valuation

EMPTY, PARTIAL, FULL, UNKNOWN = 0, 1, 2, 3

REFINE_LIMIT = 2**25
REFINE_DEPTH = 8
PERIODIC_FORM_LIMIT = 2**20
DEFAULT_RT_BOUND = 10**4

_OR = np.array(
    [
        [EMPTY, PARTIAL, FULL, UNKNOWN],
        [PARTIAL, PARTIAL, FULL, PARTIAL],
        [FULL, FULL, FULL, FULL],
        [UNKNOWN, PARTIAL, FULL, UNKNOWN],
    ],
    dtype=np.int8,
)
_AND = np.array(
    [
        [EMPTY, EMPTY, EMPTY, EMPTY],
        [EMPTY, UNKNOWN, PARTIAL, UNKNOWN],
        [EMPTY, PARTIAL, FULL, UNKNOWN],
        [EMPTY, UNKNOWN, UNKNOWN, UNKNOWN],
    ],
    dtype=np.int8,
)
_NOT = np.array([FULL, PARTIAL, EMPTY, UNKNOWN], dtype=np.int8)


class UnsupportedStructure(Exception):
    """The node has no exact residue structure; fall back to window counting."""


def _states_from_counts(counts: np.ndarray, per: int) -> np.ndarray:
    st = np.full(counts.shape, PARTIAL, dtype=np.int8)
    st[counts == 0] = EMPTY
    st[counts == per] = FULL
    return st


def _pad_mask(inner: np.ndarray) -> np.ndarray:
    inner[0] = False
    return inner


class SetExpr:
    """Base class for set-expression nodes."""

    # -- membership ---------------------------------------------------------

    def contains(self, n: int) -> bool:
        raise NotImplementedError

    def __contains__(self, n: int) -> bool:
        return self.contains(n)

    def mask(self, W: int) -> np.ndarray:
        """Boolean membership of ``0..W`` (index 0 is always False)."""
        out = np.zeros(W + 1, dtype=bool)
        for n in range(1, W + 1):
            out[n] = self.contains(n)
        return out

    def members(self, W: int) -> np.ndarray:
        return np.flatnonzero(self.mask(W))

    def first_member(self, W: int, divisor: int | None = None) -> int | None:
        idx = self.members(W)
        if divisor is not None:
            idx = idx[idx % divisor == 0]
        return int(idx[0]) if idx.size else None

    # -- structure ----------------------------------------------------------

    @cached_property
    def periodic(self) -> PeriodicSet | None:
        """Exact periodic form when the node is a finite union of classes."""
        return None

    @property
    def has_exact_residues(self) -> bool:
        return self.periodic is not None

    @property
    def has_exact_measure(self) -> bool:
        return self.periodic is not None

    @property
    def resolvable(self) -> bool:
        """Whether every class becomes EMPTY or FULL at fine enough moduli."""
        return self.periodic is not None

    @property
    def hint(self) -> int:
        """Modulus factor whose powers refine this node's PARTIAL classes."""
        per = self.periodic
        return per.period if per is not None else 1

    def local(self, m: int) -> np.ndarray:
        per = self.periodic
        if per is None:
            raise UnsupportedStructure(f"{self} has no exact residue structure")
        g = math.gcd(per.period, m)
        st = _states_from_counts(per.local_counts(g), per.period // g)
        return np.tile(st, m // g)

    def attained(self, m: int) -> np.ndarray:
        """Bit vector of the residues mod ``m`` attained by the set."""
        if m > P.PERIOD_LIMIT:
            raise PeriodLimitError(f"modulus {m} exceeds the period limit {P.PERIOD_LIMIT}")
        st = self.local(m)
        if np.any(st == UNKNOWN):
            if self.has_exact_residues:
                raise PeriodLimitError(f"refining {self} modulo {m} exceeds the refinement limit")
            raise UnsupportedStructure(f"residues of {self} modulo {m} are undecided")
        return st != EMPTY

    def residue_count(self, m: int) -> int:
        per = self.periodic
        if per is not None:
            return P.residue_count_periodic(per, m)
        return int(np.count_nonzero(self.attained(m)))

    def measure(self) -> Measure:
        per = self.periodic
        if per is None:
            raise UnsupportedStructure(f"{self} has no exact measure")
        return Measure(P.density(per))

    def __str__(self) -> str:
        return self.format()

    def format(self) -> str:
        raise NotImplementedError


# -- leaves ------------------------------------------------------------------


@dataclass(frozen=True, eq=True)
class All(SetExpr):
    def contains(self, n):
        return n >= 1

    def mask(self, W):
        return _pad_mask(np.ones(W + 1, dtype=bool))

    @cached_property
    def periodic(self):
        return PeriodicSet.full()

    def format(self):
        return "all"


@dataclass(frozen=True, eq=True)
class Empty(SetExpr):
    def contains(self, n):
        return False

    def mask(self, W):
        return np.zeros(W + 1, dtype=bool)

    @cached_property
    def periodic(self):
        return PeriodicSet.empty()

    def format(self):
        return "empty"


@dataclass(frozen=True, eq=True)
class Odd(SetExpr):
    def contains(self, n):
        return n % 2 == 1

    def mask(self, W):
        return (tables.naturals(W) & 1).astype(bool)

    @cached_property
    def periodic(self):
        return PeriodicSet(2, [1])

    def format(self):
        return "odd"


@dataclass(frozen=True, eq=True)
class AP(SetExpr):
    r: int
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"modulus must be >= 1, got {self.m}")
        object.__setattr__(self, "r", self.r % self.m)

    def contains(self, n):
        return n % self.m == self.r

    def mask(self, W):
        return _pad_mask(tables.naturals(W) % self.m == self.r)

    @cached_property
    def periodic(self):
        return PeriodicSet(self.m, [self.r])

    def format(self):
        return f"ap({self.r},{self.m})"


@dataclass(frozen=True, eq=True)
class Periodic(SetExpr):
    pset: PeriodicSet

    def contains(self, n):
        return n in self.pset

    def mask(self, W):
        return _pad_mask(self.pset.members[tables.naturals(W) % self.pset.period])

    @cached_property
    def periodic(self):
        return self.pset

    def format(self):
        return f"periodic({self.pset.period},{{{','.join(map(str, self.pset.residues()))}}})"


def _valuation_states(p: int, E: ExponentSet, a: int) -> np.ndarray:
    q = p**a
    v = np.zeros(q, dtype=np.int64)
    pk = p
    for _ in range(1, a):
        v[::pk] += 1
        pk *= p
    lut = np.array([FULL if e in E else EMPTY for e in range(a + 1)], dtype=np.int8)
    st = lut[np.minimum(v, a)]
    if E.contains_all_from(a):
        st[0] = FULL
    elif E.has_at_least(a):
        st[0] = PARTIAL
    else:
        st[0] = EMPTY
    return st


def _valuation_resolvable(E: ExponentSet) -> bool:
    return E.finite or E.step == 1


@dataclass(frozen=True, eq=True)
class Valuation(SetExpr):
    """``N(p,E)``: naturals whose ``p``-adic valuation lies in ``E``."""

    p: int
    E: ExponentSet

    def __post_init__(self):
        require_prime(self.p)

    def contains(self, n):
        return valuation(n, self.p) in self.E

    def mask(self, W):
        v = tables.valuations(self.p, W)
        lut = np.array([e in self.E for e in range(int(v.max(initial=0)) + 1)], dtype=bool)
        return _pad_mask(lut[v])

    @cached_property
    def periodic(self):
        if not self.E.finite:
            return None
        q = self.p ** (max(self.E.values, default=0) + 1)
        if q > PERIODIC_FORM_LIMIT:
            return None
        return PeriodicSet(q, _valuation_states(self.p, self.E, valuation(q, self.p)) == FULL)

    @property
    def has_exact_residues(self):
        return True

    @property
    def has_exact_measure(self):
        return True

    @property
    def resolvable(self):
        return _valuation_resolvable(self.E)

    @property
    def hint(self):
        return self.p

    def local(self, m):
        a = valuation(m, self.p)
        return np.tile(_valuation_states(self.p, self.E, a), m // self.p**a)

    def residue_count(self, m):
        a = valuation(m, self.p)
        return residues_valuation(self.p, self.E, a) * (m // self.p**a)

    def measure(self):
        return measure_valuation(self.p, self.E)

    def format(self):
        return f"val({self.p},{self.E})"


@dataclass(frozen=True, eq=True)
class MultiValuation(SetExpr):
    """Naturals with ``v_{p_i}(n)`` in ``E_i`` for each listed prime."""

    pairs: tuple[tuple[int, ExponentSet], ...]

    def __post_init__(self):
        ps = [p for p, _ in self.pairs]
        for p in ps:
            require_prime(p)
        if len(set(ps)) != len(ps):
            raise ValueError(f"primes must be distinct, got {ps}")
        if ps != sorted(ps):
            raise ValueError(f"primes must be increasing, got {ps}")

    @property
    def parts(self) -> list[Valuation]:
        return [Valuation(p, E) for p, E in self.pairs]

    def contains(self, n):
        return all(v.contains(n) for v in self.parts)

    def mask(self, W):
        out = All().mask(W)
        for v in self.parts:
            out &= v.mask(W)
        return out

    @cached_property
    def periodic(self):
        pers = [v.periodic for v in self.parts]
        if any(per is None for per in pers) or math.prod(per.period for per in pers) > PERIODIC_FORM_LIMIT:
            return None
        return reduce(P.intersect, pers, PeriodicSet.full())

    @property
    def has_exact_residues(self):
        return True

    @property
    def has_exact_measure(self):
        return True

    @property
    def resolvable(self):
        return all(_valuation_resolvable(E) for _, E in self.pairs)

    @property
    def hint(self):
        return math.prod(p for p, _ in self.pairs)

    def local(self, m):
        # conditions at distinct primes are independent by CRT, so the
        # pointwise minimum of the per-prime states is exact
        qs, states = [], []
        for p, E in self.pairs:
            a = valuation(m, p)
            qs.append(p**a)
            states.append(_valuation_states(p, E, a))
        Q = math.prod(qs)
        st = np.full(Q, FULL, dtype=np.int8)
        for q, s in zip(qs, states):
            np.minimum(st, np.tile(s, Q // q), out=st)
        return np.tile(st, m // Q)

    def residue_count(self, m):
        count, rest = 1, m
        for p, E in self.pairs:
            a = valuation(m, p)
            count *= residues_valuation(p, E, a)
            rest //= p**a
        return count * rest

    def measure(self):
        return measure_multi([p for p, _ in self.pairs], [E for _, E in self.pairs])

    def format(self):
        return "mval(" + ",".join(f"({p},{E})" for p, E in self.pairs) + ")"


@dataclass(frozen=True, eq=True)
class BAlpha(SetExpr):
    """Truncated ``B_alpha``: the union of ``2**(n-1) * odd`` over the
    positions ``n <= K`` of the nonzero binary digits of alpha."""

    digits: tuple[int, ...]
    K: int
    alpha: Fraction | None = None

    def __post_init__(self):
        if self.K < 0:
            raise ValueError("K must be >= 0")
        if any(d not in (0, 1) for d in self.digits):
            raise ValueError("digits must be 0 or 1")

    @classmethod
    def from_bits(cls, bits: str, K: int | None = None) -> "BAlpha":
        d = parse_bits(bits)
        return cls(d, len(d) if K is None else K)

    @classmethod
    def from_alpha(cls, alpha: Fraction, K: int) -> "BAlpha":
        alpha = Fraction(alpha)
        return cls(dyadic_digits(alpha, K), K, alpha)

    @property
    def positions(self) -> list[int]:
        return nonzero_positions(self.digits[: self.K])

    def contains(self, n):
        e = valuation(n, 2)
        return e + 1 <= min(self.K, len(self.digits)) and self.digits[e] == 1

    def mask(self, W):
        v = tables.valuations(2, W)
        top = int(v.max(initial=0)) + 1
        lut = np.array([k < min(self.K, len(self.digits)) and self.digits[k] == 1 for k in range(top)], dtype=bool)
        return _pad_mask(lut[v])

    @cached_property
    def periodic(self):
        return P.from_classes(P.ResidueClass(2 ** (n - 1), 2**n) for n in self.positions)

    def measure(self):
        return measure_balpha(self.digits, self.K, self.alpha)

    def format(self):
        if self.alpha is not None:
            return f"balpha({self.alpha.numerator}/{self.alpha.denominator},{self.K})"
        return f"balpha({''.join(map(str, self.digits))},{self.K})"


@lru_cache(maxsize=256)
def squares_mod(q: int) -> np.ndarray:
    """Bit vector of the squares modulo ``q``."""
    x = np.arange(q // 2 + 1, dtype=np.int64)
    out = np.zeros(q, dtype=bool)
    out[(x * x) % q] = True
    out.flags.writeable = False
    return out


def square_count_prime_power(p: int, a: int) -> int:
    """Number of squares modulo ``p**a``.

    Squares with valuation >= 2 are ``p**2`` times squares mod ``p**(a-2)``;
    valuation 1 is impossible; units contribute half of phi for odd p and
    ``max(1, 2**(a-3))`` for p = 2.
    """
    if a == 0:
        return 1
    if a == 1:
        return 2 if p == 2 else (p + 1) // 2
    units = max(1, 2 ** (a - 3)) if p == 2 else (p - 1) * p ** (a - 1) // 2
    return units + square_count_prime_power(p, a - 2)


@dataclass(frozen=True, eq=True)
class Squares(SetExpr):
    def contains(self, n):
        return n >= 1 and math.isqrt(n) ** 2 == n

    def mask(self, W):
        out = np.zeros(W + 1, dtype=bool)
        k = np.arange(1, math.isqrt(W) + 1, dtype=np.int64)
        out[k * k] = True
        return out

    @property
    def has_exact_residues(self):
        return True

    @property
    def has_exact_measure(self):
        return True

    @property
    def resolvable(self):
        return False

    def local(self, m):
        ok = np.ones(m, dtype=bool)
        for _, _, q in _prime_powers(m):
            ok &= np.tile(squares_mod(q), m // q)
        return np.where(ok, PARTIAL, EMPTY).astype(np.int8)

    def residue_count(self, m):
        return math.prod(square_count_prime_power(p, a) for p, a, _ in _prime_powers(m))

    def measure(self):
        return Measure(Fraction(0))

    def format(self):
        return "squares"


def _prime_powers(m: int):
    return [(p, a, p**a) for p, a in factorize(m)]


# -- arithmetic sets without residue structure -------------------------------


@dataclass(frozen=True, eq=True)
class PtMax(SetExpr):
    """Naturals with at most ``t`` distinct prime divisors."""

    t: int

    def contains(self, n):
        return omega(n) <= self.t

    def mask(self, W):
        return _pad_mask(tables.omega(W) <= self.t)

    def format(self):
        return f"pt({self.t})"


@lru_cache(maxsize=4)
def default_rt_primes(bound: int = DEFAULT_RT_BOUND) -> tuple[int, ...]:
    return tuple(int(p) for p in prime_table(bound))


@dataclass(frozen=True, eq=True)
class RtMax(SetExpr):
    """Naturals with at most ``t`` primes from ``primes`` at odd exponent."""

    t: int
    primes: tuple[int, ...] = field(default_factory=default_rt_primes)

    def __post_init__(self):
        if not self.primes:
            raise ValueError("prime list must be non-empty")
        if len(set(self.primes)) != len(self.primes):
            raise ValueError("prime list must be distinct")
        if self.primes != default_rt_primes():
            for p in self.primes:
                require_prime(p)

    def odd_count(self, n: int) -> int:
        ps = set(self.primes)
        return sum(1 for p, e in factorize(n) if e % 2 == 1 and p in ps)

    def contains(self, n):
        return self.odd_count(n) <= self.t

    def mask(self, W):
        return _pad_mask(tables.odd_exponent_count(W, tuple(sorted(self.primes))) <= self.t)

    def format(self):
        if self.primes == default_rt_primes():
            return f"rt({self.t};default)"
        return f"rt({self.t};{','.join(map(str, self.primes))})"


@dataclass(frozen=True, eq=True)
class TauDivides(SetExpr):
    """Naturals divisible by their number of divisors."""

    def contains(self, n):
        return n % tau(n) == 0

    def mask(self, W):
        t = tables.tau(W)
        out = np.zeros(W + 1, dtype=bool)
        out[1:] = tables.naturals(W)[1:] % t[1:] == 0
        return out

    def format(self):
        return "taudiv"


# -- combinators -------------------------------------------------------------


@dataclass(frozen=True, eq=True)
class Scale(SetExpr):
    """``a*S = {a s : s in S}``."""

    a: int
    inner: SetExpr

    def __post_init__(self):
        if self.a < 1:
            raise ValueError(f"scale factor must be >= 1, got {self.a}")

    def contains(self, n):
        return n % self.a == 0 and self.inner.contains(n // self.a)

    def mask(self, W):
        out = np.zeros(W + 1, dtype=bool)
        inner = self.inner.mask(W // self.a)
        out[:: self.a] = inner
        return out

    @cached_property
    def periodic(self):
        per = self.inner.periodic
        return None if per is None else P.scale_set(self.a, per)

    @property
    def has_exact_residues(self):
        return self.inner.has_exact_residues

    @property
    def has_exact_measure(self):
        return self.inner.has_exact_measure

    @property
    def resolvable(self):
        return self.inner.resolvable

    @property
    def hint(self):
        return self.a * self.inner.hint

    def local(self, m):
        if self.periodic is not None:
            return super().local(m)
        a = self.a
        g = math.gcd(a, m)
        m2, a2 = m // g, a // g
        inner = self.inner.local(m2)
        if m2 > 1:
            if m2 * (a2 % m2) >= 2**63:
                raise PeriodLimitError(f"modulus {m} too large for scaling by {a}")
            # a*s ≡ g*y (mod m) iff a2*s ≡ y (mod m2)
            z = (np.arange(m2, dtype=np.int64) * pow(a2, -1, m2)) % m2
            sub = inner[z]
        else:
            sub = inner.copy()
        if m % a:
            sub = np.where(sub == FULL, PARTIAL, sub).astype(np.int8)
        out = np.zeros(m, dtype=np.int8)
        out[::g] = sub
        return out

    def measure(self):
        m = self.inner.measure()
        return Measure(m.value / self.a, m.tail_bound / self.a, m.caveat)

    def format(self):
        return f"scale({self.a},{self.inner.format()})"


def _lcm_hint(children) -> int:
    return reduce(math.lcm, (c.hint for c in children), 1)


@dataclass(frozen=True, eq=True)
class Union(SetExpr):
    children: tuple[SetExpr, ...]

    def contains(self, n):
        return any(c.contains(n) for c in self.children)

    def mask(self, W):
        out = np.zeros(W + 1, dtype=bool)
        for c in self.children:
            out |= c.mask(W)
        return out

    @cached_property
    def periodic(self):
        pers = [c.periodic for c in self.children]
        if any(p is None for p in pers):
            return None
        return reduce(P.union, pers, PeriodicSet.empty())

    @property
    def has_exact_residues(self):
        return all(c.has_exact_residues for c in self.children)

    @property
    def has_exact_measure(self):
        if self.periodic is not None:
            return True
        rest = [c for c in self.children if not isinstance(c, Empty)]
        return len(rest) == 1 and rest[0].has_exact_measure

    @property
    def resolvable(self):
        return all(c.resolvable for c in self.children)

    @property
    def hint(self):
        return _lcm_hint(self.children)

    def local(self, m):
        if self.periodic is not None:
            return super().local(m)
        st = np.full(m, EMPTY, dtype=np.int8)
        for c in self.children:
            st = _OR[st, c.local(m)]
        return st

    def measure(self):
        if self.periodic is not None:
            return super().measure()
        rest = [c for c in self.children if not isinstance(c, Empty)]
        if len(rest) == 1:
            return rest[0].measure()
        raise UnsupportedStructure(f"{self} has no exact measure")

    def format(self):
        return "union(" + ",".join(c.format() for c in self.children) + ")"


@dataclass(frozen=True, eq=True)
class Intersect(SetExpr):
    children: tuple[SetExpr, ...]

    def contains(self, n):
        return all(c.contains(n) for c in self.children)

    def mask(self, W):
        out = All().mask(W)
        for c in self.children:
            out &= c.mask(W)
        return out

    @cached_property
    def periodic(self):
        pers = [c.periodic for c in self.children]
        if any(p is None for p in pers):
            return None
        return reduce(P.intersect, pers, PeriodicSet.full())

    @property
    def has_exact_residues(self):
        if not all(c.has_exact_residues for c in self.children):
            return False
        return sum(1 for c in self.children if not c.resolvable) <= 1

    def _measure_known(self) -> Measure | None:
        if self.periodic is not None:
            return Measure(P.density(self.periodic))
        rest = [c for c in self.children if not isinstance(c, All)]
        if len(rest) == 1 and rest[0].has_exact_measure:
            return rest[0].measure()
        for c in rest:
            if c.has_exact_measure:
                m = c.measure()
                if m.value == 0 and m.tail_bound == 0:
                    return m
        if any(isinstance(c, Empty) for c in rest):
            return Measure(Fraction(0))
        return None

    @property
    def has_exact_measure(self):
        return self._measure_known() is not None

    @property
    def resolvable(self):
        return all(c.resolvable for c in self.children)

    @property
    def hint(self):
        return _lcm_hint(self.children)

    def _combine(self, m: int) -> np.ndarray:
        st = np.full(m, FULL, dtype=np.int8)
        for c in self.children:
            st = _AND[st, c.local(m)]
        return st

    def local(self, m):
        if self.periodic is not None:
            return super().local(m)
        st = self._combine(m)
        f = self.hint
        k = 0
        while f > 1 and k < REFINE_DEPTH and np.any(st == UNKNOWN):
            k += 1
            m2 = m * f**k
            if m2 > REFINE_LIMIT:
                break
            fine = self._combine(m2).reshape(m2 // m, m)
            hit = np.any((fine == PARTIAL) | (fine == FULL), axis=0)
            agg = np.where(
                np.all(fine == FULL, axis=0),
                FULL,
                np.where(np.all(fine == EMPTY, axis=0), EMPTY, np.where(hit, PARTIAL, UNKNOWN)),
            ).astype(np.int8)
            st = np.where(st == UNKNOWN, agg, st).astype(np.int8)
        return st

    def measure(self):
        m = self._measure_known()
        if m is None:
            raise UnsupportedStructure(f"{self} has no exact measure")
        return m

    def format(self):
        return "inter(" + ",".join(c.format() for c in self.children) + ")"


@dataclass(frozen=True, eq=True)
class Complement(SetExpr):
    inner: SetExpr

    def contains(self, n):
        return n >= 1 and not self.inner.contains(n)

    def mask(self, W):
        return _pad_mask(~self.inner.mask(W))

    @cached_property
    def periodic(self):
        per = self.inner.periodic
        return None if per is None else P.complement(per)

    @property
    def has_exact_residues(self):
        return self.inner.has_exact_residues

    @property
    def has_exact_measure(self):
        return self.inner.has_exact_measure

    @property
    def resolvable(self):
        return self.inner.resolvable

    @property
    def hint(self):
        return self.inner.hint

    def local(self, m):
        if self.periodic is not None:
            return super().local(m)
        return _NOT[self.inner.local(m)]

    def measure(self):
        # the inner set is Buck measurable, so the complement has measure 1 - mu
        m = self.inner.measure()
        return Measure(1 - m.value - m.tail_bound, m.tail_bound, m.caveat)

    def format(self):
        return f"comp({self.inner.format()})"


@dataclass(frozen=True, eq=True)
class PSlice(SetExpr):
    """``S_p = {s in S : p | s, p**2 does not divide s}``."""

    inner: SetExpr
    p: int

    def __post_init__(self):
        require_prime(self.p)

    @cached_property
    def expr(self) -> SetExpr:
        if isinstance(self.inner, All):
            return Valuation(self.p, ExponentSet.explicit([1]))
        if isinstance(self.inner, Empty):
            return Empty()
        return Intersect((self.inner, Valuation(self.p, ExponentSet.explicit([1]))))

    def contains(self, n):
        return self.expr.contains(n)

    def mask(self, W):
        return self.expr.mask(W)

    @cached_property
    def periodic(self):
        return self.expr.periodic

    @property
    def has_exact_residues(self):
        return self.expr.has_exact_residues

    @property
    def has_exact_measure(self):
        return self.expr.has_exact_measure

    @property
    def resolvable(self):
        return self.expr.resolvable

    @property
    def hint(self):
        return self.expr.hint

    def local(self, m):
        return self.expr.local(m)

    def residue_count(self, m):
        return self.expr.residue_count(m)

    def measure(self):
        return self.expr.measure()

    def format(self):
        return f"slice({self.inner.format()},{self.p})"


# -- membership predicates --------------------------------------------------


def member_balpha(n: int, digits: Sequence[int], K: int) -> bool:
    return BAlpha(tuple(digits), K).contains(n)


def member_valuation(n: int, p: int, E: ExponentSet) -> bool:
    return valuation(n, p) in E


def member_multi(n: int, ps: Sequence[int], Es: Sequence[ExponentSet]) -> bool:
    return all(valuation(n, p) in E for p, E in zip(ps, Es))


def member_pt(n: int, t: int) -> bool:
    return omega(n) <= t


def member_rt(n: int, t: int, primes: Sequence[int]) -> bool:
    return RtMax(t, tuple(primes)).contains(n)


def member_taudiv(n: int) -> bool:
    return n % tau(n) == 0


def p_slice(s: SetExpr, p: int) -> SetExpr:
    return PSlice(s, p)


def union(*children: SetExpr) -> SetExpr:
    return Union(tuple(children))


def intersect(*children: SetExpr) -> SetExpr:
    return Intersect(tuple(children))


def scale(a: int, s: SetExpr) -> SetExpr:
    return Scale(a, s)


def complement(s: SetExpr) -> SetExpr:
    return Complement(s)


def balpha_parts(b: BAlpha) -> list[SetExpr]:
    """The pieces ``2**(n_k-1) * odd`` of a truncated B_alpha."""
    return [Scale(2 ** (n - 1), Odd()) for n in b.positions]


def prime_reciprocal_sum(primes: Sequence[int]) -> float:
    return math.fsum(1.0 / p for p in primes)


def is_structural(s: SetExpr) -> bool:
    return s.has_exact_residues


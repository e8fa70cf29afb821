"""Integer and residue-class primitives.

Naturals are Python ints constrained to the unsigned 64-bit range; anything
that would leave that range raises ``OverflowError`` instead of wrapping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

U64_MAX = 2**64 - 1
DEFAULT_PRIME_BOUND = 10**6


def check_u64(x: int, what: str = "value") -> int:
    if x < 0 or x > U64_MAX:
        raise OverflowError(f"{what} {x} does not fit in 64 unsigned bits")
    return x


@dataclass(frozen=True, order=True)
class ResidueClass:
    """The arithmetic progression ``r+(m)`` with ``0 <= r < m``."""

    r: int
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"modulus must be >= 1, got {self.m}")
        if not 0 <= self.r < self.m:
            raise ValueError(f"residue {self.r} outside [0, {self.m})")
        check_u64(self.m, "modulus")

    @classmethod
    def of(cls, r: int, m: int) -> "ResidueClass":
        """Build the class of ``r`` mod ``m`` for any integer ``r``."""
        if m < 1:
            raise ValueError(f"modulus must be >= 1, got {m}")
        return cls(r % m, m)

    def __contains__(self, n: int) -> bool:
        return n % self.m == self.r

    def __str__(self) -> str:
        return f"{self.r}+({self.m})"

    @classmethod
    def parse(cls, text: str) -> "ResidueClass":
        """Parse ``"r+(m)"``."""
        s = text.strip().replace(" ", "")
        try:
            r, rest = s.split("+(", 1)
            if not rest.endswith(")"):
                raise ValueError
            return cls.of(int(r), int(rest[:-1]))
        except ValueError:
            raise ValueError(f"malformed residue class {text!r}, expected r+(m)") from None


def scale_class(a: int, c: ResidueClass) -> ResidueClass:
    """Image ``a*c`` of a class under multiplication: ``(a r)+(a m)``."""
    if a < 1:
        raise ValueError(f"scale factor must be >= 1, got {a}")
    m = check_u64(a * c.m, "scaled modulus")
    return ResidueClass(a * c.r, m)


@lru_cache(maxsize=8)
def prime_table(bound: int = DEFAULT_PRIME_BOUND) -> np.ndarray:
    """All primes ``<= bound`` (Eratosthenes)."""
    if bound < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(bound + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


@lru_cache(maxsize=8)
def _prime_list(bound: int) -> tuple[int, ...]:
    return tuple(int(p) for p in prime_table(bound))


def is_prime(n: int) -> bool:
    # deterministic trial division up to sqrt(n)
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    d = 5
    while d * d <= n:
        if n % d == 0 or n % (d + 2) == 0:
            return False
        d += 6
    return True


def require_prime(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return p


def factorize(n: int, bound: int = DEFAULT_PRIME_BOUND) -> list[tuple[int, int]]:
    """Canonical representation of ``n`` as ``[(p, e), ...]`` with increasing p.

    Trial division by the prime table up to ``bound``; a cofactor left after
    the table is exhausted is finished by plain trial division.
    """
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out = []
    for p in _prime_list(bound):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    else:
        d = bound + 1 if bound >= 2 else 2
        while d * d <= n:
            if n % d == 0:
                e = 0
                while n % d == 0:
                    n //= d
                    e += 1
                out.append((d, e))
            d += 1
    if n > 1:
        out.append((n, 1))
    return out


def valuation(n: int, p: int) -> int:
    """Largest ``e`` with ``p**e | n``."""
    if n < 1:
        raise ValueError(f"valuation undefined for n={n}")
    require_prime(p)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def tau(n: int) -> int:
    """Number of divisors, via the exponent product over the factorization."""
    if n < 1:
        raise ValueError(f"tau undefined for n={n}")
    return math.prod(e + 1 for _, e in factorize(n))


def omega(n: int) -> int:
    """Number of distinct prime divisors."""
    return len(factorize(n))


def lcm(*values: int) -> int:
    out = reduce(math.lcm, values, 1)
    return check_u64(out, "lcm")


def lcm_upto(n: int) -> int:
    """``lcm(1, ..., n)``; overflows past n = 42."""
    if n < 1:
        raise ValueError(f"lcm_upto needs n >= 1, got {n}")
    return lcm(*range(1, n + 1))


def prime_powers(m: int) -> list[tuple[int, int, int]]:
    """``[(p, a, p**a), ...]`` for the exact prime powers dividing ``m``."""
    return [(p, a, p**a) for p, a in factorize(m)]

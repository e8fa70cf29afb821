"""Estimating mu*(S) as the limit of R(S:B_N)/B_N over a remainder system."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .periodic import PERIOD_LIMIT, PeriodLimitError
from .residue import check_u64, lcm_upto
from .sets import SetExpr, UnsupportedStructure

DEFAULT_WINDOW = 10**6
SIEVE_LIMIT = 2**32


@dataclass(frozen=True)
class RemainderSystem:
    """A divisibility chain ``B_1 | B_2 | ...`` eventually divisible by every d.

    ``kind`` is ``"lcm"`` (lcm(1..N)), ``"factorial"`` (N!) or ``"custom"``
    with explicit ``values``.
    """

    kind: str = "lcm"
    values: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("lcm", "factorial", "custom"):
            raise ValueError(f"unknown remainder system {self.kind!r}")
        if self.kind == "custom":
            if not self.values:
                raise ValueError("custom remainder system needs values")
            for i, (b, c) in enumerate(zip(self.values, self.values[1:]), 1):
                if c % b or c <= b:
                    raise ValueError(f"B_{i}={b} does not properly divide B_{i + 1}={c}")

    @classmethod
    def parse(cls, text: str) -> "RemainderSystem":
        if text in ("lcm", "factorial"):
            return cls(text)
        if text.startswith("custom:"):
            try:
                vals = tuple(int(x) for x in text[len("custom:") :].split(",") if x.strip())
            except ValueError:
                raise ValueError(f"malformed custom system {text!r}") from None
            return cls("custom", vals)
        raise ValueError(f"unknown remainder system {text!r}")

    @property
    def max_N(self) -> int:
        if self.kind == "lcm":
            return 42
        if self.kind == "factorial":
            return 20
        return len(self.values)

    def B(self, N: int) -> int:
        if not 1 <= N <= self.max_N:
            raise ValueError(f"N={N} outside 1..{self.max_N} for the {self.kind} system")
        if self.kind == "lcm":
            return lcm_upto(N)
        if self.kind == "factorial":
            return check_u64(math.factorial(N), "factorial")
        return check_u64(self.values[N - 1], "B_N")

    def divisibility_reach(self) -> int:
        """Largest D with every d <= D dividing the last listed B_N (custom systems)."""
        last = self.B(self.max_N)
        d = 1
        while last % (d + 1) == 0:
            d += 1
        return d

    def describe(self) -> str:
        if self.kind == "custom":
            return "custom:" + ",".join(map(str, self.values))
        return self.kind


@dataclass
class DensityRecord:
    N: int
    B: int
    R: int
    ratio: Fraction
    exact: bool


@dataclass
class DensityReport:
    expr: str
    system: str
    mode: str
    records: list[DensityRecord] = field(default_factory=list)
    window: int | None = None

    @property
    def bound_semantics(self) -> str:
        return "upper-bound" if self.mode == "exact" else "approximation"

    @property
    def final(self) -> float:
        return float(self.records[-1].ratio) if self.records else float("nan")

    @property
    def final_ratio(self) -> Fraction:
        return self.records[-1].ratio

    def ratios(self) -> list[Fraction]:
        return [r.ratio for r in self.records]


def residue_count_exact(s: SetExpr, m: int) -> int:
    """Exact ``R(S:m)``; raises :class:`UnsupportedStructure` if S lacks structure."""
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    return s.residue_count(m)


def _mark(residues: np.ndarray, m: int, threads: int) -> np.ndarray:
    seen = np.zeros(m, dtype=bool)
    if threads <= 1 or residues.size < 1 << 16:
        seen[residues % m] = True
        return seen
    chunks = np.array_split(residues, threads)

    def work(chunk):
        local = np.zeros(m, dtype=bool)
        local[chunk % m] = True
        return local

    with ThreadPoolExecutor(threads) as pool:
        for part in pool.map(work, chunks):
            seen |= part
    return seen


def sieve_window(s: SetExpr, m: int, W: int, threads: int = 1) -> np.ndarray:
    """Residues mod ``m`` of the members ``n <= W``."""
    if m > SIEVE_LIMIT:
        raise PeriodLimitError(f"modulus {m} exceeds the sieve limit {SIEVE_LIMIT}")
    if W <= 0:
        return np.zeros(m, dtype=bool)
    return _mark(s.members(W), m, threads)


def residue_count_window(s: SetExpr, m: int, W: int, threads: int = 1) -> int:
    """``|{n mod m : n in S, n <= W}|``, a lower bound on ``R(S:m)``."""
    return int(np.count_nonzero(sieve_window(s, m, W, threads)))


def sieve_residues(s: SetExpr, B: int, mode: str = "exact", W: int | None = None, threads: int = 1) -> np.ndarray:
    """Attained-residue bit vector mod ``B``."""
    if B > SIEVE_LIMIT:
        raise PeriodLimitError(f"modulus {B} exceeds the sieve limit {SIEVE_LIMIT}")
    if mode == "exact":
        return s.attained(B)
    if mode == "window":
        return sieve_window(s, B, DEFAULT_WINDOW if W is None else W, threads)
    raise ValueError(f"unknown mode {mode!r}")


def mu_estimate(
    s: SetExpr,
    system: RemainderSystem,
    N_max: int,
    mode: str = "exact",
    W: int | None = None,
    threads: int = 1,
    N_min: int = 1,
) -> DensityReport:
    """The sequence ``R(S:B_N)/B_N`` for ``N = N_min..N_max``.

    Exact mode gives upper bounds on mu*(S) that are non-increasing in N;
    window mode gives lower estimates of each ratio.
    """
    if mode not in ("exact", "window"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "window":
        W = DEFAULT_WINDOW if W is None else W
        members = s.members(W)
    report = DensityReport(s.format(), system.describe(), mode, window=W if mode == "window" else None)
    for N in range(N_min, N_max + 1):
        B = system.B(N)
        if B > PERIOD_LIMIT:
            raise PeriodLimitError(f"B_{N}={B} exceeds the period limit {PERIOD_LIMIT}")
        if mode == "exact":
            R = residue_count_exact(s, B)
        else:
            R = int(np.count_nonzero(_mark(members, B, threads)))
        report.records.append(DensityRecord(N, B, R, Fraction(R, B), mode == "exact"))
    return report


__all__ = [
    "RemainderSystem",
    "DensityRecord",
    "DensityReport",
    "UnsupportedStructure",
    "residue_count_exact",
    "residue_count_window",
    "sieve_residues",
    "sieve_window",
    "mu_estimate",
]

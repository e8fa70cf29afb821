"""Minimum-weight covers by residue classes.

``infimum_cover`` computes ``min sum 1/m_i`` over covers of a periodic set by
classes ``r_i+(m_i)`` with every ``m_i <= M``. It branches on the smallest
uncovered residue: any cover must contain a class through it, and the classes
through ``x`` with modulus ``m`` are exactly ``(x mod m)+(m)``, so each node
has at most M children. The density of what is still uncovered is a valid
lower bound on the remaining weight (the remaining classes must contain it).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import periodic as P
from .periodic import PeriodicSet, PeriodLimitError
from .residue import ResidueClass
from .sets import EMPTY, FULL, PARTIAL, Periodic, SetExpr, UnsupportedStructure

DEFAULT_NODE_BUDGET = 10**7


@dataclass
class CoverCertificate:
    classes: list[ResidueClass]
    status: str
    optimal: bool | None = None
    counterexample: int | None = None
    note: str | None = None
    max_modulus: int | None = None
    nodes: int = 0

    @property
    def weight(self) -> Fraction:
        return sum((Fraction(1, c.m) for c in self.classes), Fraction(0))


@dataclass
class CoverCheck:
    status: str
    counterexample: int | None = None
    window: int | None = None

    @property
    def ok(self) -> bool:
        return self.status in ("proved", "window-checked")


def _expand(bits: np.ndarray, period: int) -> np.ndarray:
    return np.tile(bits, period // bits.size)


@dataclass
class _Search:
    M: int
    budget: int
    best: Fraction | None = None
    best_classes: list[ResidueClass] = field(default_factory=list)
    nodes: int = 0
    exhausted: bool = False

    def run(self, uncovered: np.ndarray, weight: Fraction, chosen: list[ResidueClass]) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            self.exhausted = True
            return
        L = uncovered.size
        idx = np.flatnonzero(uncovered)
        if idx.size == 0:
            if self.best is None or weight < self.best:
                self.best = weight
                self.best_classes = list(chosen)
            return
        if self.best is not None and weight + Fraction(idx.size, L) >= self.best:
            return
        x = int(idx[0])
        options = []
        for m in range(1, self.M + 1):
            r = x % m
            L2 = math.lcm(L, m)
            if L2 > P.PERIOD_LIMIT:
                raise PeriodLimitError(f"search period {L2} exceeds the limit")
            u2 = _expand(uncovered, L2)
            inside = int(np.count_nonzero(u2[r::m]))
            # fraction of the class that lands on uncovered members
            eff = Fraction(inside * m, L2)
            options.append((-eff, m, r, L2))
        options.sort()
        for _, m, r, L2 in options:
            if self.exhausted:
                return
            w2 = weight + Fraction(1, m)
            if self.best is not None and w2 >= self.best:
                continue
            u2 = _expand(uncovered, L2).copy()
            u2[r::m] = False
            per2 = PeriodicSet(L2, u2).canonicalize()
            if self.best is not None and w2 + P.density(per2) >= self.best:
                continue
            chosen.append(ResidueClass(r, m))
            self.run(np.array(per2.members), w2, chosen)
            chosen.pop()


def infimum_cover(s: PeriodicSet, M: int, node_budget: int = DEFAULT_NODE_BUDGET) -> tuple[Fraction, CoverCertificate]:
    """Exact minimum of ``sum 1/m_i`` over covers of ``s`` with moduli ``<= M``.

    The value is the infimum *restricted to moduli <= M*. If the node budget
    runs out the best cover found is returned with ``optimal=False``.
    """
    if M < 1:
        raise ValueError(f"max modulus must be >= 1, got {M}")
    s = s.canonicalize()
    search = _Search(M, node_budget)
    search.run(np.array(s.members), Fraction(0), [])
    if search.best is None:
        # budget ran out before any cover; the single class 0+(1) always works
        search.best, search.best_classes = Fraction(1), [ResidueClass(0, 1)]
    classes = sorted(search.best_classes, key=lambda c: (c.m, c.r))
    check = verify_cover(Periodic(s), classes)
    cert = CoverCertificate(
        classes,
        check.status,
        optimal=not search.exhausted,
        max_modulus=M,
        nodes=search.nodes,
        note=f"infimum restricted to moduli <= {M}",
    )
    return search.best, cert


def verify_cover(s: SetExpr, classes: Sequence[ResidueClass], W: int | None = None) -> CoverCheck:
    """Check ``S`` is contained in the union of ``classes``.

    Exact when ``S`` has residue structure (status ``proved``); otherwise the
    members up to ``W`` are scanned (status ``window-checked``). Failures carry
    the smallest uncovered member found.
    """
    cover = P.from_classes(classes)
    L = cover.period
    try:
        outside = s.local(L)[~cover.members]
    except UnsupportedStructure:
        outside = None
    if outside is not None:
        if (outside == EMPTY).all():
            return CoverCheck("proved")
        if ((outside == PARTIAL) | (outside == FULL)).any():
            # some uncovered class holds a member; find the smallest one
            W = W if W is not None else max(10**4, 64 * L)
            for _ in range(4):
                n = _first_uncovered(s, cover, W)
                if n is not None:
                    return CoverCheck("fail", n, W)
                W *= 8
            return CoverCheck("fail", None, W)
    W = W if W is not None else 10**6
    n = _first_uncovered(s, cover, W)
    if n is not None:
        return CoverCheck("fail", n, W)
    return CoverCheck("window-checked", None, W)


def _first_uncovered(s: SetExpr, cover: PeriodicSet, W: int) -> int | None:
    idx = s.members(W)
    idx = idx[~cover.members[idx % cover.period]]
    return int(idx[0]) if idx.size else None


def greedy_cover(s: SetExpr, candidate_moduli: Sequence[int], W: int) -> CoverCertificate:
    """Greedy cover of the members ``n <= W`` by classes with the given moduli.

    Each step takes the class covering the most still-uncovered members per
    unit weight (ties: smaller modulus, then smaller residue).
    """
    members = s.members(W)
    moduli = sorted(set(int(m) for m in candidate_moduli))
    if not moduli or any(m < 1 for m in moduli):
        return CoverCertificate([ResidueClass(0, 1)], "window-checked", note="trivial cover")
    left = members
    chosen: list[ResidueClass] = []
    while left.size:
        best = None
        for m in moduli:
            counts = np.bincount(left % m, minlength=m)
            r = int(np.argmax(counts))
            key = (-(int(counts[r]) * m), m, r)
            if best is None or key < best:
                best = key
        _, m, r = best
        chosen.append(ResidueClass(r, m))
        left = left[left % m != r]
    chosen.sort(key=lambda c: (c.m, c.r))
    check = verify_cover(s, chosen, W)
    status = "window-checked" if check.status == "proved" else check.status
    return CoverCertificate(chosen, status, note=f"covers the members up to {W}")

"""Executable checks of the measurability results on concrete instances.

Each check returns a :class:`CheckReport` with verdict ``pass``, ``fail`` or
``inconclusive``. A ``fail`` always carries a concrete counterexample. No
check claims a proof for sets without exact structure; window scans are
flagged as such in ``notes``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from . import tables
from .estimator import RemainderSystem, mu_estimate, residue_count_exact, sieve_window
from .measure import CoprimalityError, Measure, ScaledUnionSpec, measure_scaled_union
from .periodic import PeriodLimitError
from .sets import (
    PSlice,
    RtMax,
    Scale,
    SetExpr,
    Union,
    UnsupportedStructure,
    default_rt_primes,
    prime_reciprocal_sum,
)

SLACK = Fraction(1, 10**9)


@dataclass
class CheckReport:
    check: str
    verdict: str
    evidence: dict[str, Any] = field(default_factory=dict)
    counterexample: dict[str, Any] | None = None
    window: int | None = None
    n_range: tuple[int, int] | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def _overlap(parts: Sequence[SetExpr], W: int) -> dict[str, int] | None:
    masks = [p.mask(W) for p in parts]
    for (i, a), (j, b) in itertools.combinations(enumerate(masks, 1), 2):
        both = np.flatnonzero(a & b)
        if both.size:
            return {"n": int(both[0]), "part_a": i, "part_b": j}
    return None


def _exact_measure(s: SetExpr) -> Measure | None:
    if not s.has_exact_measure:
        return None
    try:
        return s.measure()
    except UnsupportedStructure:
        return None


def _estimate(s: SetExpr, system: RemainderSystem, N_max: int, N_min: int = 1):
    try:
        return mu_estimate(s, system, N_max, mode="exact", N_min=N_min)
    except (UnsupportedStructure, PeriodLimitError):
        return None


def _table(report) -> list[dict[str, Any]]:
    if report is None:
        return []
    return [{"N": r.N, "B": r.B, "R": r.R, "ratio": r.ratio} for r in report.records]


def weak_sigma_check(
    parts: Sequence[SetExpr],
    system: RemainderSystem,
    N_max: int,
    K_max: int | None = None,
    W: int = 10**5,
    remainder_bound: Fraction = Fraction(0),
) -> CheckReport:
    """Countable additivity under the vanishing-tail condition.

    Compares the measure of the union of the listed parts with the sum of
    their measures, and tabulates the tail measures ``mu(union_{k>=K} A_k)``
    (plus ``remainder_bound`` for parts beyond the list).
    """
    rep = CheckReport("weak-sigma", "pass", window=W, n_range=(1, N_max))
    rep.notes.append(f"disjointness checked on [1, {W}] only")
    clash = _overlap(parts, W)
    if clash:
        rep.verdict, rep.counterexample = "fail", {"reason": "parts not disjoint", **clash}
        return rep
    measures = [p.measure() for p in parts]
    total = sum((m.value for m in measures), Fraction(0))
    tail = sum((m.tail_bound for m in measures), Fraction(remainder_bound))
    union = Union(tuple(parts))
    um = _exact_measure(union)
    est = _estimate(union, system, N_max)
    K_max = len(parts) if K_max is None else min(K_max, len(parts))
    tails = []
    for K in range(1, K_max + 1):
        tm = _exact_measure(Union(tuple(parts[K - 1 :])))
        tails.append({"K": K, "tail_measure": None if tm is None else tm.value + tm.tail_bound + remainder_bound})
    tails.append({"K": len(parts) + 1, "tail_measure": Fraction(remainder_bound)})
    rep.evidence = {
        "sum_of_measures": total,
        "tail_bound": tail,
        "union_measure": None if um is None else um.value,
        "estimates": _table(est),
        "tails": tails,
    }
    known = [t["tail_measure"] for t in tails if t["tail_measure"] is not None]
    if any(b > a for a, b in zip(known, known[1:])):
        rep.verdict = "fail"
        rep.counterexample = {"reason": "tail measures increase", "tails": known}
        return rep
    if est is not None and um is not None:
        low = [r for r in est.records if r.ratio < um.value]
        if low:
            r = low[0]
            rep.verdict = "fail"
            rep.counterexample = {"reason": "ratio below measure", "N": r.N, "ratio": r.ratio, "measure": um.value}
            return rep
    if um is None:
        rep.verdict = "inconclusive"
        rep.notes.append("union has no exact measure")
        return rep
    gap = abs(um.value - total)
    if gap > tail + um.tail_bound + SLACK:
        rep.verdict = "fail"
        rep.counterexample = {"reason": "additivity violated", "union_measure": um.value, "sum_of_measures": total}
    return rep


def scaled_union_check(spec: ScaledUnionSpec, system: RemainderSystem, N_max: int, W: int = 10**5) -> CheckReport:
    """``H = union b_i H_i`` has measure ``sum mu(H_i)/b_i``."""
    rep = CheckReport("scaled-union", "pass", window=W, n_range=(1, N_max))
    try:
        formula = measure_scaled_union(spec, W)
    except CoprimalityError as exc:
        rep.verdict = "fail"
        rep.counterexample = {"reason": "element not coprime to the scales", "part": exc.part, "n": exc.n, "prime": exc.p}
        return rep
    if formula.caveat:
        rep.notes.append(formula.caveat)
    H = Union(tuple(Scale(b, h) for b, h in zip(spec.scales, spec.parts)))
    hm = _exact_measure(H)
    est = _estimate(H, system, N_max)
    rep.evidence = {
        "formula_value": formula.value,
        "tail_bound": formula.tail_bound,
        "union_measure": None if hm is None else hm.value,
        "estimates": _table(est),
    }
    if est is not None:
        low = [r for r in est.records if r.ratio + SLACK < formula.value]
        if low:
            r = low[0]
            rep.verdict = "fail"
            rep.counterexample = {"reason": "ratio below formula value", "N": r.N, "ratio": r.ratio, "formula": formula.value}
            return rep
    if hm is None:
        rep.verdict = "inconclusive"
        rep.notes.append("union has no exact measure; only the upper-bound estimates were compared")
        return rep
    if abs(hm.value - formula.value) > formula.tail_bound + hm.tail_bound + SLACK:
        rep.verdict = "fail"
        rep.counterexample = {"reason": "measure differs from formula", "union_measure": hm.value, "formula": formula.value}
    return rep


def _auto_start(parts: Sequence[SetExpr], system: RemainderSystem, N_max: int) -> int | None:
    periods = [p.periodic.period for p in parts if p.periodic is not None]
    for N in range(1, N_max + 1):
        B = system.B(N)
        if all(B % L == 0 for L in periods):
            return N
    return None


def alexander_check(
    parts: Sequence[SetExpr],
    bounds: Sequence[Fraction],
    system: RemainderSystem,
    N_max: int,
    N_start: int | None = None,
    W: int = 10**5,
) -> CheckReport:
    """``R(A_n:B_N)/B_N <= c_n`` for all listed n and N, and additivity.

    With ``N_start=None`` the remainder system is started at the first N whose
    ``B_N`` is a multiple of every periodic part's period; a tail of a
    remainder system is again one.
    """
    if len(parts) != len(bounds):
        raise ValueError(f"{len(parts)} parts but {len(bounds)} bounds")
    bounds = [Fraction(c) for c in bounds]
    if any(c <= 0 for c in bounds):
        raise ValueError("bounds c_n must be positive")
    rep = CheckReport("alexander", "pass", window=W)
    rep.notes.append(f"disjointness checked on [1, {W}] only")
    partial = list(itertools.accumulate(bounds))
    rep.evidence["bound_partial_sums"] = partial
    clash = _overlap(parts, W)
    if clash:
        rep.verdict, rep.counterexample = "fail", {"reason": "parts not disjoint", **clash}
        return rep
    start = N_start if N_start is not None else _auto_start(parts, system, N_max)
    if start is None:
        rep.verdict = "inconclusive"
        rep.notes.append(f"no B_N with N <= {N_max} is a multiple of every part's period")
        return rep
    rep.n_range = (start, N_max)
    rows = []
    for N in range(start, N_max + 1):
        B = system.B(N)
        for n, (A, c) in enumerate(zip(parts, bounds), 1):
            ratio = Fraction(residue_count_exact(A, B), B)
            rows.append({"n": n, "N": N, "ratio": ratio, "c": c})
            if ratio > c:
                rep.verdict = "fail"
                rep.counterexample = {"reason": "R(A_n:B_N)/B_N exceeds c_n", "n": n, "N": N, "B": B, "ratio": ratio, "c": c}
                rep.evidence["ratios"] = rows
                return rep
    rep.evidence["ratios"] = rows
    ms = [_exact_measure(A) for A in parts]
    um = _exact_measure(Union(tuple(parts)))
    if um is not None and all(m is not None for m in ms):
        total = sum((m.value for m in ms), Fraction(0))
        tail = sum((m.tail_bound for m in ms), Fraction(0))
        rep.evidence.update(sum_of_measures=total, union_measure=um.value)
        if abs(um.value - total) > tail + um.tail_bound + SLACK:
            rep.verdict = "fail"
            rep.counterexample = {"reason": "additivity violated", "union_measure": um.value, "sum_of_measures": total}
    else:
        rep.notes.append("measures not all exact; additivity not compared")
    return rep


def niven_check(
    s: SetExpr,
    primes: Sequence[int],
    system: RemainderSystem,
    N_max: int,
    W: int = 10**5,
    tol: float = 1e-9,
) -> CheckReport:
    """Estimate ``mu(S_p)`` for each listed prime p.

    Evidence toward ``mu(S) = 0`` when every slice is negligible; a slice with
    positive exact measure refutes it. The divergence of ``sum 1/p`` over the
    listed primes is assumed, not verified; the partial sum is reported.
    """
    rep = CheckReport("niven", "pass", window=W, n_range=(1, N_max))
    rep.evidence["reciprocal_sum"] = prime_reciprocal_sum(primes)
    rows = []
    for p in primes:
        sl = PSlice(s, p)
        row: dict[str, Any] = {"p": p}
        if sl.has_exact_residues:
            try:
                if sl.residue_count(p * p) == 0:
                    row.update(estimate=Fraction(0), method="structurally empty")
                    rows.append(row)
                    continue
            except (UnsupportedStructure, PeriodLimitError):
                pass
        m = _exact_measure(sl)
        if m is not None:
            row.update(estimate=m.value, tail_bound=m.tail_bound, method="exact measure")
        else:
            est = _estimate(sl, system, N_max)
            if est is not None:
                row.update(estimate=est.final_ratio, method="exact-mode upper bound")
            else:
                est = mu_estimate(sl, system, N_max, mode="window", W=W)
                row.update(estimate=est.final_ratio, method=f"window approximation on [1, {W}]")
        rows.append(row)
    rep.evidence["slices"] = rows
    for row in rows:
        if row["method"] == "exact measure" and row["estimate"] > 0:
            sl = PSlice(s, row["p"])
            rep.verdict = "fail"
            rep.counterexample = {
                "reason": "slice has positive measure",
                "p": row["p"],
                "measure": row["estimate"],
                "n": sl.first_member(W),
            }
            return rep
    if any(float(row["estimate"]) > tol for row in rows):
        rep.verdict = "inconclusive"
    return rep


def taudiv_bound_report(s_max: int, system: RemainderSystem, N_max: int, W: int = 10**6) -> CheckReport:
    """Bound ``mu*(R) <= 2**-(s+1)`` for ``R = {n : tau(n) | n}``.

    For each s the window is scanned for members of R with more than s
    odd-exponent primes that are not multiples of ``2**(s+1)``; there must be
    none. The part of R inside P_s (at most s odd exponents) is null, so the
    cover ``(2**(s+1))`` bounds the rest.
    """
    if s_max < 1:
        raise ValueError("s_max must be >= 1")
    rep = CheckReport("taudiv-bound", "pass", window=W, n_range=(1, N_max))
    rep.notes.append(f"inclusion scanned on [1, {W}]")
    n = tables.naturals(W)
    t = tables.tau(W)
    odd = tables.odd_exponent_count(W)
    in_R = np.zeros(W + 1, dtype=bool)
    in_R[1:] = n[1:] % t[1:] == 0
    rows = []
    for s in range(1, s_max + 1):
        outside = in_R & (odd > s)
        bad = np.flatnonzero(outside & (n % 2 ** (s + 1) != 0))
        inside_idx = np.flatnonzero(in_R & (odd <= s))
        data = []
        for N in range(1, N_max + 1):
            B = system.B(N)
            seen = np.zeros(B, dtype=bool)
            seen[inside_idx % B] = True
            R = int(np.count_nonzero(seen))
            data.append({"N": N, "B": B, "R": R, "ratio": Fraction(R, B)})
        rows.append(
            {
                "s": s,
                "bound": Fraction(1, 2 ** (s + 1)),
                "outside_count": int(np.count_nonzero(outside)),
                "counterexamples": int(bad.size),
                "inside_window_residues": data,
            }
        )
        if bad.size and rep.counterexample is None:
            k = int(bad[0])
            rep.verdict = "fail"
            rep.counterexample = {"n": k, "s": s, "tau": int(t[k]), "odd_exponent_primes": int(odd[k])}
    rep.evidence["per_s"] = rows
    bounds = [r["bound"] for r in rows]
    if any(b >= a for a, b in zip(bounds, bounds[1:])):
        rep.verdict = "fail"
        rep.counterexample = rep.counterexample or {"reason": "bounds not strictly decreasing"}
    return rep


def rt_inclusion_check(
    ts: Sequence[int],
    slice_primes: Sequence[int],
    W: int = 10**6,
    primes: Sequence[int] | None = None,
) -> CheckReport:
    """The induction step for R_t: ``(R_t)_p`` lies in ``p R_{t-1}`` and ``(R_0)_p`` is empty."""
    plist = tuple(primes) if primes is not None else default_rt_primes()
    rep = CheckReport("rt-inclusion", "pass", window=W)
    rep.notes.append(f"scanned on [1, {W}]")
    rows = []
    for t in ts:
        cur = RtMax(t, plist)
        for p in slice_primes:
            if p not in plist:
                raise ValueError(f"slice prime {p} is not in the prime list")
            members = PSlice(cur, p).members(W)
            if t == 0:
                rows.append({"t": 0, "p": p, "slice_size": int(members.size)})
                if members.size and rep.counterexample is None:
                    rep.verdict = "fail"
                    rep.counterexample = {"reason": "(R_0)_p not empty", "t": 0, "p": p, "n": int(members[0])}
                continue
            prev = RtMax(t - 1, plist).mask(W // p)
            ok = prev[members // p]
            rows.append({"t": t, "p": p, "slice_size": int(members.size), "violations": int(np.count_nonzero(~ok))})
            if not ok.all() and rep.counterexample is None:
                n = int(members[~ok][0])
                rep.verdict = "fail"
                rep.counterexample = {"reason": "n/p not in R_{t-1}", "t": t, "p": p, "n": n}
    rep.evidence["rows"] = rows
    return rep


def slice_window_residues(s: SetExpr, p: int, m: int, W: int) -> int:
    return int(np.count_nonzero(sieve_window(PSlice(s, p), m, W)))

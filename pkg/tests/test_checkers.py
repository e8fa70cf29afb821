from fractions import Fraction

import pytest

from buckdens.checkers import (
    alexander_check,
    niven_check,
    rt_inclusion_check,
    scaled_union_check,
    taudiv_bound_report,
    weak_sigma_check,
)
from buckdens.estimator import RemainderSystem
from buckdens.grammar import parse
from buckdens.measure import ScaledUnionSpec
from buckdens.sets import BAlpha, balpha_parts

LCM = RemainderSystem("lcm")
ODD = parse("odd")


def test_weak_sigma_balpha():
    parts = balpha_parts(BAlpha.from_alpha(Fraction(5, 8), 3))
    rep = weak_sigma_check(parts, LCM, 12)
    assert rep.verdict == "pass"
    assert rep.evidence["union_measure"] == rep.evidence["sum_of_measures"] == Fraction(5, 8)
    tails = [t["tail_measure"] for t in rep.evidence["tails"]]
    assert tails == [Fraction(5, 8), Fraction(1, 8), Fraction(0)]


def test_weak_sigma_small_examples():
    assert weak_sigma_check([ODD], LCM, 6).evidence["sum_of_measures"] == Fraction(1, 2)
    rep = weak_sigma_check([parse("ap(1,4)"), parse("ap(3,4)")], LCM, 6)
    assert rep.verdict == "pass" and rep.evidence["union_measure"] == Fraction(1, 2)


def test_weak_sigma_overlap_fails():
    rep = weak_sigma_check([ODD, parse("ap(1,4)")], LCM, 6)
    assert rep.verdict == "fail" and rep.counterexample["n"] == 1


@pytest.mark.parametrize(
    "scales, parts, want",
    [((1, 4), ("odd", "odd"), Fraction(5, 8)), ((3, 9), ("comp(ap(0,3))", "comp(ap(0,3))"), Fraction(8, 27))],
)
def test_scaled_union(scales, parts, want):
    spec = ScaledUnionSpec(scales, tuple(parse(p) for p in parts))
    rep = scaled_union_check(spec, LCM, 12)
    assert rep.verdict == "pass"
    assert rep.evidence["formula_value"] == rep.evidence["union_measure"] == want


def test_scaled_union_hypothesis_violation():
    rep = scaled_union_check(ScaledUnionSpec((2,), (parse("ap(0,2)"),)), LCM, 6)
    assert rep.verdict == "fail" and rep.counterexample["n"] == 2


def test_alexander_examples():
    parts = [parse(f"scale({2 ** (k - 1)},odd)") for k in range(1, 5)]
    rep = alexander_check(parts, [Fraction(1, 2**k) for k in range(1, 5)], LCM, 16)
    assert rep.verdict == "pass"
    for row in rep.evidence["ratios"]:
        assert row["ratio"] == Fraction(1, 2 ** row["n"])
    rep = alexander_check([ODD], [Fraction(1, 4)], LCM, 6)
    assert rep.verdict == "fail" and rep.counterexample["ratio"] == Fraction(1, 2)
    assert alexander_check([ODD], [Fraction(1, 2)], LCM, 6).verdict == "pass"


def test_alexander_inconclusive_without_divisible_modulus():
    rep = alexander_check([parse("ap(1,64)")], [Fraction(1, 64)], LCM, 6)
    assert rep.verdict == "inconclusive"


def test_niven_examples():
    assert niven_check(parse("squares"), [2, 3, 5, 7], LCM, 10).verdict == "pass"
    rep = niven_check(parse("all"), [2, 3], LCM, 10)
    assert rep.verdict == "fail" and rep.counterexample["p"] == 2
    assert rep.counterexample["measure"] == Fraction(1, 4) and rep.counterexample["n"] == 2
    assert niven_check(parse("empty"), [2, 3], LCM, 10).verdict == "pass"


def test_niven_reports_partial_sum():
    rep = niven_check(parse("squares"), [2, 3, 5], LCM, 6)
    assert rep.evidence["reciprocal_sum"] == pytest.approx(1 / 2 + 1 / 3 + 1 / 5)


def test_taudiv_bounds():
    rep = taudiv_bound_report(3, LCM, 8, W=2 * 10**5)
    assert rep.verdict == "pass"
    rows = rep.evidence["per_s"]
    assert [r["bound"] for r in rows] == [Fraction(1, 4), Fraction(1, 8), Fraction(1, 16)]
    assert all(r["counterexamples"] == 0 for r in rows)


def test_rt_inclusion_small_window():
    rep = rt_inclusion_check([0, 1, 2], [2, 3, 5, 7], W=10**5)
    assert rep.verdict == "pass"
    assert all(r["slice_size"] == 0 for r in rep.evidence["rows"] if r["t"] == 0)

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from buckdens.estimator import (
    RemainderSystem,
    mu_estimate,
    residue_count_exact,
    residue_count_window,
    sieve_residues,
)
from buckdens.grammar import parse
from buckdens.periodic import PeriodLimitError
from buckdens.sets import UnsupportedStructure

LCM = RemainderSystem("lcm")


def test_remainder_systems():
    assert [LCM.B(n) for n in range(1, 7)] == [1, 2, 6, 12, 60, 60]
    f = RemainderSystem.parse("factorial")
    assert f.B(5) == 120
    c = RemainderSystem.parse("custom:2,12,120")
    assert c.max_N == 3 and c.B(3) == 120 and c.divisibility_reach() == 6
    with pytest.raises(ValueError):
        RemainderSystem.parse("custom:2,3")
    with pytest.raises(ValueError):
        RemainderSystem.parse("primorial")
    with pytest.raises(ValueError):
        LCM.B(0)


def test_residue_count_exact_examples():
    assert residue_count_exact(parse("odd"), 6) == 3
    assert residue_count_exact(parse("squares"), 60) == 12
    assert residue_count_exact(parse("val(2,{1})"), 8) == 2


def test_residue_count_window_examples():
    assert residue_count_window(parse("odd"), 6, 100) == 3
    assert residue_count_window(parse("taudiv"), 7, 0) == 0
    assert residue_count_window(parse("pt(1)"), 10, 1000) == 9


def test_mu_estimate_examples():
    rep = mu_estimate(parse("odd"), LCM, 10)
    assert all(r == Fraction(1, 2) for r in rep.ratios()[1:])
    rep = mu_estimate(parse("squares"), LCM, 6)
    assert rep.final_ratio == Fraction(1, 5) and rep.final == 0.2
    assert rep.bound_semantics == "upper-bound"
    rep = mu_estimate(parse("all"), RemainderSystem("factorial"), 8)
    assert set(rep.ratios()) == {1}


def test_sieve_residues_examples():
    assert sieve_residues(parse("odd"), 8).tolist() == [False, True] * 4
    assert sieve_residues(parse("scale(4,odd)"), 8).nonzero()[0].tolist() == [4]


def test_unsupported_in_exact_mode():
    with pytest.raises(UnsupportedStructure):
        mu_estimate(parse("taudiv"), LCM, 4)
    rep = mu_estimate(parse("taudiv"), LCM, 4, mode="window", W=10**4)
    assert rep.bound_semantics == "approximation" and rep.window == 10**4


def test_period_limit():
    with pytest.raises(PeriodLimitError):
        mu_estimate(parse("odd"), LCM, 40)


def test_threads_agree():
    s = parse("taudiv")
    a = residue_count_window(s, 5040, 2 * 10**5, threads=1)
    b = residue_count_window(s, 5040, 2 * 10**5, threads=4)
    assert a == b


struct = st.one_of(
    st.just("odd"),
    st.just("squares"),
    st.builds(lambda r, m: f"ap({r % m},{m})", st.integers(0, 30), st.integers(1, 30)),
    st.builds(lambda p, e: f"val({p},{{{e}}})", st.sampled_from([2, 3, 5, 7]), st.integers(1, 3)),
    st.builds(lambda p, a: f"val({p},ap({a},1),30)", st.sampled_from([2, 3]), st.integers(1, 3)),
    st.builds(lambda k: f"scale({k},squares)", st.integers(1, 6)),
    st.builds(lambda r: f"inter(squares,ap({r},8))", st.integers(0, 7)),
)


@given(struct, st.integers(2, 12))
def test_ratio_monotone_under_divisibility(text, N):
    rep = mu_estimate(parse(text), LCM, N)
    r = rep.ratios()
    assert all(b <= a for a, b in zip(r, r[1:]))


@given(struct, st.integers(1, 400), st.integers(0, 3000))
def test_window_never_exceeds_exact(text, m, W):
    s = parse(text)
    assert residue_count_window(s, m, W) <= residue_count_exact(s, m)


@given(
    st.lists(st.tuples(st.sampled_from([2, 3, 5, 7]), st.sets(st.integers(1, 3), min_size=1, max_size=2)), min_size=1, max_size=3, unique_by=lambda x: x[0]),
    st.integers(1, 14),
)
def test_crt_product_for_valuations(pairs, N):
    pairs = sorted(pairs)
    text = "mval(" + ",".join(f"({p},{{{','.join(map(str, sorted(es)))}}})" for p, es in pairs) + ")"
    B = LCM.B(N)
    joint = residue_count_exact(parse(text), B)
    single = [residue_count_exact(parse(f"val({p},{{{','.join(map(str, sorted(es)))}}})"), B) for p, es in pairs]
    got = Fraction(joint, B)
    want = 1
    for c in single:
        want *= Fraction(c, B)
    assert got == want

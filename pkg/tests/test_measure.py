from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from buckdens.grammar import parse
from buckdens.measure import (
    CoprimalityError,
    ExponentSet,
    ScaledUnionSpec,
    dyadic_digits,
    measure_balpha,
    measure_multi,
    measure_scaled_union,
    measure_valuation,
    parse_bits,
    residues_valuation,
)

from oracles import period_density, residues_of, v

E = ExponentSet.explicit


def test_measure_valuation_examples():
    m = measure_valuation(2, E([1]))
    assert m.value == Fraction(1, 4) and m.exact
    # oracle: residues mod 8 with v2 = 1
    assert period_density(lambda n: v(n, 2) == 1, 8) == Fraction(1, 4)
    assert measure_valuation(2, E([])).value == 0


def test_measure_valuation_all_exponents():
    m = measure_valuation(2, ExponentSet.all(20))
    assert m.value + m.tail_bound == Fraction(1, 2)
    assert 0 < m.tail_bound <= Fraction(1, 2**20)


def test_measure_multi_examples():
    assert measure_multi([2, 3], [E([1]), E([1])]).value == Fraction(1, 18)
    assert period_density(lambda n: v(n, 2) == 1 and v(n, 3) == 1, 36) == Fraction(1, 18)
    assert measure_multi([2], [E([1])]).value == Fraction(1, 4)
    assert measure_multi([2, 3], [E([1]), E([])]).value == 0


def test_measure_multi_rejects_bad_input():
    with pytest.raises(ValueError):
        measure_multi([3, 2], [E([1]), E([1])])
    with pytest.raises(ValueError):
        measure_multi([2, 2], [E([1]), E([1])])
    with pytest.raises(ValueError):
        measure_multi([2], [E([1]), E([1])])
    with pytest.raises(ValueError):
        measure_multi([4], [E([1])])


@pytest.mark.parametrize("p, es, a, want", [(2, [1], 3, 2), (2, [5], 3, 1), (3, [1, 2], 1, 1)])
def test_residues_valuation_examples(p, es, a, want):
    assert residues_valuation(p, E(es), a) == want
    assert len(residues_of(lambda n: v(n, p) in es, p**a, p ** max(es + [a]))) == want


def test_measure_balpha_examples():
    assert measure_balpha(parse_bits("1")).value == Fraction(1, 2)
    m = measure_balpha(parse_bits("101"))
    assert m.value == Fraction(5, 8) and m.tail_bound == 0
    assert measure_balpha(parse_bits("0")).value == 0


def test_dyadic_digits():
    assert dyadic_digits(Fraction(5, 8), 4) == (1, 0, 1, 0)
    assert dyadic_digits(Fraction(13, 16), 4) == (1, 1, 0, 1)
    with pytest.raises(ValueError):
        dyadic_digits(Fraction(1), 4)


def test_balpha_truncated_tail():
    alpha = Fraction(1, 3)
    m = measure_balpha(dyadic_digits(alpha, 10), 10, alpha)
    assert m.value < alpha <= m.value + m.tail_bound
    assert m.tail_bound <= Fraction(1, 2**10)


def test_scaled_union_examples():
    odd = parse("odd")
    assert measure_scaled_union(ScaledUnionSpec((1, 4), (odd, odd))).value == Fraction(5, 8)
    assert measure_scaled_union(ScaledUnionSpec((1,), (odd,))).value == Fraction(1, 2)
    h = parse("comp(ap(0,3))")
    m = measure_scaled_union(ScaledUnionSpec((3, 9), (h, h)))
    assert m.value == Fraction(8, 27)
    oracle = period_density(lambda n: (n % 3 == 0 and (n // 3) % 3 != 0) or (n % 9 == 0 and (n // 9) % 3 != 0), 27)
    assert oracle == Fraction(8, 27)


def test_scaled_union_coprimality_violation():
    with pytest.raises(CoprimalityError) as info:
        measure_scaled_union(ScaledUnionSpec((2,), (parse("ap(0,2)"),)))
    assert info.value.n % 2 == 0 and info.value.p == 2


def test_scaled_union_needs_divisibility_chain():
    odd = parse("odd")
    with pytest.raises(ValueError):
        ScaledUnionSpec((2, 3), (odd, odd))


@given(st.sampled_from([2, 3, 5, 7]), st.sets(st.integers(1, 4), max_size=3))
def test_valuation_measure_matches_period_oracle(p, es):
    top = max(es, default=0) + 1
    want = period_density(lambda n: v(n, p) in es, p**top)
    assert measure_valuation(p, E(sorted(es))).value == want


@given(st.integers(1, 2**10 - 1))
def test_balpha_dyadic_exact(num):
    alpha = Fraction(num, 2**10)
    m = measure_balpha(dyadic_digits(alpha, 10), 10, alpha)
    assert m.value == alpha and m.tail_bound == 0

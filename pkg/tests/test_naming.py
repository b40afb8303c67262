from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from condreal.naming import (
    NameTriple,
    NatFun,
    approx,
    format_rational,
    parse_rational,
    precision_index,
    rational_name,
    recording,
    validate_name,
)

rationals = st.fractions(
    min_value=-100, max_value=100, max_denominator=50
)


@given(rationals, st.integers(min_value=0, max_value=200))
def test_rational_name_is_exact_at_every_index(q, t):
    assert approx(rational_name(q), t) == q


@given(rationals)
def test_rational_name_components_are_naturals(q):
    name = rational_name(q)
    for fn in name:
        assert fn(0) >= 0


def test_validate_name_accepts_exact_names():
    report = validate_name(rational_name(Fraction(22, 7)), Fraction(22, 7), 50)
    assert report.passed
    assert report.first_failure is None


def test_validate_name_bound_is_strict():
    # approximation off by exactly 1/(t+1) at t=3 must be rejected
    hits = NatFun(lambda t: 5 if t == 3 else 4, memoize=False)
    name = NameTriple(hits, NatFun.constant(0), NatFun.constant(3))
    report = validate_name(name, Fraction(1), 10)
    assert not report.passed
    assert report.first_failure.t == 3


def test_validate_name_reports_first_failing_index():
    name = rational_name(Fraction(1, 2))
    report = validate_name(name, Fraction(0), 20)
    assert not report.passed
    # |1/2 - 0| = 1/2 >= 1/(t+1) from t = 1 on
    assert report.first_failure.t == 1
    assert any("FAIL" in line for line in report.lines())


def test_precision_index_examples():
    assert precision_index(Fraction(1)) == 0
    assert precision_index(Fraction(1, 1000)) == 999
    assert precision_index(Fraction(2, 7)) == 3
    assert precision_index(3) == 0


@given(st.fractions(min_value="1/10000", max_value=10))
def test_precision_index_is_the_least_sufficient_index(eps):
    t = precision_index(eps)
    assert Fraction(1, t + 1) <= eps
    if t > 0:
        assert Fraction(1, t) > eps


def test_precision_index_rejects_nonpositive():
    with pytest.raises(ValueError):
        precision_index(Fraction(0))


def test_natfun_rejects_bad_arguments_and_values():
    fn = NatFun(lambda t: t - 5)
    with pytest.raises(ValueError):
        fn(-1)
    with pytest.raises(ValueError):
        fn(2)
    assert fn(7) == 2


def test_natfun_memoization_is_per_instance():
    calls = []

    def body(t):
        calls.append(t)
        return t

    fn = NatFun(body)
    assert fn(4) == 4
    assert fn(4) == 4
    assert calls == [4]
    assert fn.eval_uncached(4) == 4
    assert calls == [4, 4]


def test_patched_switches_at_the_cutoff():
    patched = NatFun.patched(NatFun.constant(9), 3, NatFun.identity())
    assert [patched(t) for t in range(6)] == [9, 9, 9, 3, 4, 5]


def test_recording_logs_every_query_by_slot():
    spies, log = recording((NatFun.identity(), NatFun.constant(2)))
    spies[0](4)
    spies[0](4)
    spies[1](0)
    assert log[1] == {4}
    assert log[2] == {0}
    assert 3 not in log


@given(rationals)
def test_format_parse_rational_round_trip(q):
    assert parse_rational(format_rational(q)) == q


def test_format_rational_spellings():
    assert format_rational(Fraction(3)) == "3"
    assert format_rational(Fraction(-22, 7)) == "-22/7"
    assert parse_rational("4/6") == Fraction(2, 3)


def test_parse_rational_rejects_garbage():
    for text in ("", "one", "1/0", "1//2"):
        with pytest.raises(ValueError):
            parse_rational(text)

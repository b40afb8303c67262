from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from condreal.gadgets import (
    CORE,
    GadgetRegistry,
    ball_indicator,
    conj,
    decency_check,
    default_registry,
    delta_1,
    delta_k,
    derive_constant,
    gamma,
    gt,
    left,
    lt,
    monus,
    mu,
    pair,
    right,
    succ,
    tuple_pack,
    tuple_part,
)

nats = st.integers(min_value=0, max_value=10_000)
small = st.integers(min_value=0, max_value=30)


# ---------------------------------------------------------------------------
# core arithmetic
# ---------------------------------------------------------------------------


@given(nats)
def test_succ(x):
    assert succ(x) == x + 1


@given(nats, nats)
def test_monus_is_truncated_subtraction(x, y):
    assert monus(x, y) == max(x - y, 0)


@given(nats, nats)
def test_conj_vanishes_exactly_when_both_do(u, v):
    assert (conj(u, v) == 0) == (u == 0 and v == 0)


def test_delta_1_dispatches_on_zero():
    for x, y, z in product(range(4), repeat=3):
        assert delta_1(x, y, z) == (y if x == 0 else z)


# ---------------------------------------------------------------------------
# pairing and tuples
# ---------------------------------------------------------------------------


@given(nats, nats)
def test_pairing_round_trip(u, v):
    n = pair(u, v)
    assert left(n) == u
    assert right(n) == v


@given(nats)
def test_pairing_is_surjective(n):
    assert pair(left(n), right(n)) == n


def test_pairing_is_a_bijection_on_an_initial_segment():
    seen = {pair(u, v) for u in range(40) for v in range(40)}
    assert len(seen) == 1600
    assert set(range(40 * 41 // 2)) <= seen


@given(st.lists(small, min_size=1, max_size=5))
def test_tuple_pack_parts_invert(values):
    packed = tuple_pack(values)
    k = len(values)
    for i, v in enumerate(values, start=1):
        assert tuple_part(k, i, packed) == v


def test_tuple_part_validates_indices():
    with pytest.raises(ValueError):
        tuple_part(3, 0, 5)
    with pytest.raises(ValueError):
        tuple_part(3, 4, 5)


# ---------------------------------------------------------------------------
# selectors and comparators
# ---------------------------------------------------------------------------


def first_zero_oracle(k, args):
    *pairs, default = args
    for i in range(k):
        if pairs[2 * i] == 0:
            return pairs[2 * i + 1]
    return default


def test_delta_k_matches_first_zero_dispatch():
    for k in (1, 2, 3):
        fn = delta_k(k)
        assert fn.arity == 2 * k + 1
        for args in product(range(3), repeat=2 * k + 1):
            assert fn.fn(*args) == first_zero_oracle(k, args)


def test_mu_matches_its_case_rule_and_its_dispatch_formula():
    d1 = delta_k(1).fn
    for k, c in product(range(1, 5), repeat=2):
        fn = mu(k, c)
        for x, y in product(range(10), repeat=2):
            expected = c if x == k else y
            assert fn.fn(x, y) == expected
            assert fn.fn(x, y) == d1(monus(x, k), d1(monus(k, x), c, y), y)


def test_gamma_positivity_encodes_the_sum_comparison():
    for b, c in product(range(1, 4), repeat=2):
        fn = gamma(b, c)
        assert fn.arity == b + c
        for args in product(range(4), repeat=b + c):
            xs, ys = args[:b], args[b:]
            assert (fn.fn(*args) > 0) == (sum(xs) > sum(ys))


def test_gamma_rejects_empty_sides():
    with pytest.raises(ValueError):
        gamma(0, 1)
    with pytest.raises(ValueError):
        gamma(1, 0)


THRESHOLDS = (Fraction(-2), Fraction(-1, 2), Fraction(0), Fraction(1, 3), Fraction(1), Fraction(5, 2))


def test_lt_gt_match_exact_rational_comparison():
    for a in THRESHOLDS:
        below, above = lt(a), gt(a)
        for x, y, z in product(range(5), repeat=3):
            q = Fraction(x - y, z + 1)
            assert (below.fn(x, y, z) > 0) == (q < a)
            assert (above.fn(x, y, z) > 0) == (q > a)


def test_ball_indicator_matches_max_norm_membership():
    center = (Fraction(1, 2), Fraction(-1))
    radius = Fraction(3, 4)
    ind = ball_indicator(center, radius)
    assert ind.arity == 6
    for args in product(range(3), range(3), range(2), range(3), range(3), range(2)):
        x1, y1, z1, x2, y2, z2 = args
        q1 = Fraction(x1 - y1, z1 + 1)
        q2 = Fraction(x2 - y2, z2 + 1)
        inside = abs(q1 - center[0]) < radius and abs(q2 - center[1]) < radius
        assert (ind.fn(*args) == 0) == inside


def test_ball_indicator_with_nonpositive_radius_never_passes():
    ind = ball_indicator((Fraction(0),), Fraction(0))
    for x, y, z in product(range(3), repeat=3):
        assert ind.fn(x, y, z) != 0


def test_derive_constant_from_the_core_operations():
    for c in range(7):
        fn = derive_constant(c)
        assert fn.arity == 1
        assert [fn.fn(x) for x in range(5)] == [c] * 5


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------


def test_core_registry_has_the_eight_base_entries():
    for name in ("succ", "monus", "mul", "delta_1", "conj", "pair", "left", "right"):
        assert name in CORE.names()
        assert CORE.get(name).name == name


def test_resolve_spells_out_families():
    assert CORE.resolve("delta_3").arity == 7
    assert CORE.resolve("const_4").fn(9) == 4
    assert CORE.resolve("mu_2_5").fn(2, 0) == 5
    assert CORE.resolve("gamma_2_1").arity == 3
    assert CORE.resolve("lt_1/2").fn(0, 1, 0) > 0
    assert CORE.resolve("gt_-3").fn(0, 1, 0) > 0
    with pytest.raises(KeyError):
        CORE.resolve("nosuch")
    with pytest.raises(KeyError):
        CORE.resolve("delta_x")


def test_resolve_is_consistent_with_direct_constructors():
    got = CORE.resolve("gamma_2_2")
    for args in product(range(3), repeat=4):
        assert got.fn(*args) == gamma(2, 2).fn(*args)


def test_registry_without_drops_a_name():
    reg = default_registry().without("mul")
    assert "mul" not in reg.names()
    with pytest.raises(KeyError):
        reg.get("mul")
    assert "mul" in CORE.names()


def test_registry_override_replaces_behavior():
    reg = default_registry().override("succ", lambda x: x + 2)
    assert reg.get("succ").fn(0) == 2
    assert CORE.get("succ").fn(0) == 1


def test_decency_check_passes_on_the_default_registry():
    report = decency_check(CORE)
    assert report.passed
    assert all(line.endswith("ok") for line in report.lines())


def test_decency_check_fails_on_wrapping_subtraction():
    wrapped = default_registry().override("monus", lambda x, y: (x - y) % 2**16)
    report = decency_check(wrapped)
    assert not report.passed
    assert any("monus" in line for line in report.lines() if "FAIL" in line)


def test_decency_check_fails_on_broken_dispatch():
    broken = default_registry().override("delta_1", lambda x, y, z: y)
    assert not decency_check(broken).passed

"""Named invariant suites backing ``condreal suite``.

Each suite re-checks a slice of the library's contracts at interactive
scale and reports one line per check; the test suite runs the same
properties at larger scale.  All sampling is driven by the caller's
seed, so runs are reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from random import Random
from typing import Callable, Sequence

from . import gadgets
from .elementary import default_functions, uniform_from_rule
from .gadgets import CORE, decency_check, left, right, tuple_pack
from .metric import (
    MsBall,
    MsBallCover,
    MsUniformFn,
    OrdinaryName,
    apply_conditional_ms,
    apply_uniform_ms,
    code_ball_indicator,
    compose_conditional_ms,
    dispatch_index_ms,
    embed_uniform_ms,
    find_parameter_ms,
    glue_compact_ms,
    identity_ms,
    localize_ms,
    make_discrete,
    make_mn,
    metric_axiom_violations,
    mn_code,
    mn_name,
    translate_conditional,
    translate_uniform,
    translate_uniform_back,
    tuple_conditional,
    validate_ordinary_name,
)
from .naming import (
    NameTriple,
    NatFun,
    approx,
    format_rational,
    rational_name,
    validate_name,
)
from .realfns import (
    Ball,
    BallCover,
    ConditionalFn,
    ProcOperator,
    UniformFn,
    apply_conditional_at,
    apply_uniform,
    compose_conditional,
    dispatch_index,
    embed_uniform,
    find_parameter,
    glue_compact,
    localize,
    separation_violations,
)
from .sampling import random_natfun, random_term
from .terms import (
    OperatorTerm,
    Proj,
    curry,
    diagonalize,
    eval_term,
    multi_curry,
    uncurry,
)

__all__ = ["SUITE_NAMES", "run_suite"]

SUITE_NAMES = (
    "gadgets",
    "curry",
    "composition",
    "localization",
    "gluing",
    "metric-spaces",
)

_ALIASES = {
    "compose": "composition",
    "metric": "metric-spaces",
    "metric_spaces": "metric-spaces",
}


class _Recorder:
    def __init__(self) -> None:
        self.lines: list[str] = []
        self.passed = True

    def check(self, label: str, ok: bool, detail: str = "") -> None:
        if not ok:
            self.passed = False
        suffix = f" [{detail}]" if detail and not ok else ""
        self.lines.append(f"{'ok' if ok else 'FAIL'}: {label}{suffix}")

    def note(self, text: str) -> None:
        self.lines.append(f"  {text}")


# ---------------------------------------------------------------------------
# schedules and small uniform functions used by several suites
# ---------------------------------------------------------------------------


def _same_index(t: int, _names: Sequence[NameTriple]) -> int:
    return t


def _finer(t: int, _names: Sequence[NameTriple]) -> int:
    return 2 * t + 1


def _negate_fn() -> UniformFn:
    return uniform_from_rule(1, lambda a: -a, _same_index, "negate")


def _identity_fn() -> UniformFn:
    return uniform_from_rule(1, lambda a: a, _same_index, "identity")


def _abs_fn() -> UniformFn:
    return uniform_from_rule(1, abs, _same_index, "abs")


def _double_fn() -> UniformFn:
    return uniform_from_rule(1, lambda a: 2 * a, _finer, "double")


def _add_one_fn() -> UniformFn:
    return uniform_from_rule(1, lambda a: a + 1, _same_index, "add_one")


# ---------------------------------------------------------------------------
# gadgets
# ---------------------------------------------------------------------------


def _suite_gadgets(rng: Random, t_max: int) -> tuple[bool, list[str]]:
    r = _Recorder()

    report = decency_check(CORE)
    for line in report.lines():
        r.note(line)
    r.check("core registry passes the decency checks", report.passed)

    d2 = CORE.delta(2)
    bad = sum(
        1
        for args in product(range(3), repeat=5)
        if d2.fn(*args)
        != (args[1] if args[0] == 0 else args[3] if args[2] == 0 else args[4])
    )
    r.check("delta_2 equals first-zero dispatch on 3^5 argument grids", bad == 0)

    def mu_oracle(k: int, c: int, x: int, y: int) -> int:
        return c if x == k else y

    bad = 0
    for k, c in ((1, 2), (3, 1), (2, 5)):
        mu = CORE.mu(k, c)
        for x in range(10):
            for y in range(10):
                formula = gadgets.delta_1(
                    gadgets.monus(x, k),
                    gadgets.delta_1(gadgets.monus(k, x), c, y),
                    y,
                )
                if mu.fn(x, y) != mu_oracle(k, c, x, y) or mu.fn(x, y) != formula:
                    bad += 1
    r.check("mu agrees with its case rule and its delta_1 formula", bad == 0)

    bad = 0
    for b, c in ((1, 1), (2, 1), (1, 2), (2, 2)):
        g = CORE.gamma(b, c)
        for args in product(range(5), repeat=b + c):
            positive = g.fn(*args) > 0
            if positive != (sum(args[:b]) > sum(args[b:])):
                bad += 1
    r.check("gamma positivity encodes the sum comparison (exhaustive)", bad == 0)

    bad = 0
    for a in (Fraction(-3, 2), Fraction(0), Fraction(2, 3)):
        lt_a, gt_a = CORE.lt(a), CORE.gt(a)
        for x, y, z in product(range(6), repeat=3):
            v = Fraction(x - y, z + 1)
            if (lt_a.fn(x, y, z) > 0) != (v < a) or (gt_a.fn(x, y, z) > 0) != (v > a):
                bad += 1
    r.check("lt/gt sign tests match exact rational comparison", bad == 0)

    ball = gadgets.ball_indicator((Fraction(1, 2),), Fraction(1))
    bad = sum(
        1
        for x, y, z in product(range(5), repeat=3)
        if (ball.fn(x, y, z) == 0) != (abs(Fraction(x - y, z + 1) - Fraction(1, 2)) < 1)
    )
    r.check("ball indicator matches the max-norm membership oracle", bad == 0)

    bad = sum(
        1
        for u in range(25)
        for v in range(25)
        if gadgets.left(gadgets.pair(u, v)) != u or gadgets.right(gadgets.pair(u, v)) != v
    )
    packed = tuple_pack([4, 0, 7])
    parts = tuple(gadgets.tuple_part(3, i, packed) for i in (1, 2, 3))
    r.check("pairing projections invert packing", bad == 0 and parts == (4, 0, 7))

    return r.passed, r.lines


# ---------------------------------------------------------------------------
# curry
# ---------------------------------------------------------------------------


def _sample_fns(rng: Random, k: int) -> tuple[NatFun, ...]:
    return tuple(random_natfun(rng) for _ in range(k))


def _suite_curry(rng: Random, t_max: int) -> tuple[bool, list[str]]:
    r = _Recorder()
    terms = [random_term(rng, 2, 2, 3) for _ in range(30)]

    bad = 0
    for term in terms:
        for _ in range(12):
            fns = _sample_fns(rng, 2)
            s, t1 = rng.randrange(12), rng.randrange(12)
            lhs = eval_term(term, fns, (s, t1))
            rhs = eval_term(curry(term), fns + (NatFun.constant(s),), (t1,))
            if lhs != rhs:
                bad += 1
    r.check("currying satisfies its defining equality (30 terms x 12 samples)", bad == 0)

    bad = sum(1 for term in terms if uncurry(curry(term)) != term)
    r.check("uncurry inverts curry structurally", bad == 0)

    # Un-currying forgets how the last function slot was probed, so the
    # reverse round trip is only promised when that slot holds a constant.
    bad = 0
    for _ in range(20):
        term = random_term(rng, 2, 1, 3)
        back = curry(uncurry(term))
        for _ in range(12):
            fns = (_sample_fns(rng, 1)[0], NatFun.constant(rng.randrange(9)))
            n = rng.randrange(12)
            if eval_term(term, fns, (n,)) != eval_term(back, fns, (n,)):
                bad += 1
    r.check("curry inverts uncurry on constant final slots", bad == 0)

    bad = 0
    for _ in range(20):
        term = random_term(rng, 2, 3, 3)
        flat = multi_curry(term)
        for _ in range(12):
            fns = _sample_fns(rng, 2)
            s1, s2, t1 = (rng.randrange(10) for _ in range(3))
            lhs = eval_term(term, fns, (s1, s2, t1))
            rhs = eval_term(
                flat, fns + (NatFun.constant(s1), NatFun.constant(s2)), (t1,)
            )
            if lhs != rhs:
                bad += 1
    r.check("iterated currying eliminates every numeric slot", bad == 0)

    bad = 0
    for _ in range(20):
        term = random_term(rng, 3, 1, 3)
        diag = diagonalize(term)
        for _ in range(12):
            fns = _sample_fns(rng, 2)
            n = rng.randrange(12)
            lhs = eval_term(diag, fns, (n,))
            rhs = eval_term(term, fns + (NatFun.constant(n),), (n,))
            if lhs != rhs:
                bad += 1
    r.check("diagonalization matches its direct definition", bad == 0)

    return r.passed, r.lines


# ---------------------------------------------------------------------------
# composition
# ---------------------------------------------------------------------------


def _suite_composition(rng: Random, t_max: int) -> tuple[bool, list[str]]:
    r = _Recorder()
    registry = default_functions()
    recip = registry.get("recip").fn
    add_one = embed_uniform(_add_one_fn())
    double = embed_uniform(_double_fn())

    cases: list[tuple[str, ConditionalFn, ConditionalFn, Fraction, Fraction]] = [
        ("add_one after double at 3", add_one, double, Fraction(3), Fraction(7)),
        ("double after recip at 1/2", double, recip, Fraction(1, 2), Fraction(4)),
        ("recip after add_one at 1", recip, add_one, Fraction(1), Fraction(1, 2)),
        ("recip after recip at 2/3", recip, recip, Fraction(2, 3), Fraction(2, 3)),
        ("add_one after add_one at 0", add_one, add_one, Fraction(0), Fraction(2)),
    ]

    for label, outer, inner, point, want in cases:
        composite = compose_conditional(outer, inner)
        name = rational_name(point)
        s = find_parameter(composite, [name], 10**6)
        s0, s1 = left(s), right(s)
        r.note(f"{label}: s={s} splits into (L,R)=({s0},{s1})")

        fns = tuple(name)
        inner_ok = inner.E.apply(fns).eval_uncached(s1) == 0
        mid = tuple(
            op.apply(fns + (NatFun.constant(s1),))
            for op in (inner.F, inner.G, inner.H)
        )
        outer_ok = outer.E.apply(mid).eval_uncached(s0) == 0
        r.check(f"{label}: both split parameters certify", inner_ok and outer_ok)

        output = apply_conditional_at(composite, [name], s)
        report = validate_name(output, want, t_max)
        detail = "" if report.passed else f"first failure t={report.first_failure.t}"
        r.check(
            f"{label}: output names {format_rational(want)} for t <= {t_max}",
            report.passed,
            detail,
        )

    return r.passed, r.lines


# ---------------------------------------------------------------------------
# localization
# ---------------------------------------------------------------------------


def _suite_localization(rng: Random, t_max: int) -> tuple[bool, list[str]]:
    r = _Recorder()
    registry = default_functions()
    recip = registry.get("recip").fn

    anchor = rational_name(Fraction(1))
    hood, local = localize(recip, anchor, budget=1000)
    r.note(f"reciprocal at 1: cutoff u={hood.cutoff}")

    inside = [Fraction(1), Fraction(5, 6), Fraction(7, 6), Fraction(9, 10)]
    outside = [Fraction(1, 2), Fraction(2), Fraction(0)]
    r.check(
        "neighborhood membership is decided exactly",
        all(hood.contains(q) for q in inside)
        and not any(hood.contains(q) for q in outside),
    )

    ok = True
    for q in inside:
        output = apply_uniform(local, [rational_name(q)])
        if not validate_name(output, 1 / q, t_max).passed:
            ok = False
    r.check(f"localized reciprocal names 1/q inside the neighborhood (t <= {t_max})", ok)

    s0 = find_parameter(recip, [anchor], 1000)
    cut = hood.cutoff + 1
    ok = True
    for _ in range(20):
        patched = tuple(
            NatFun.patched(anchor_fn, cut, random_natfun(rng))
            for anchor_fn in anchor
        )
        if recip.E.apply(patched).eval_uncached(s0) != 0:
            ok = False
    r.check("patched perturbations keep the frozen certificate at zero", ok)

    ident = embed_uniform(_identity_fn())
    hood0, local0 = localize(ident, rational_name(Fraction(0)), budget=10)
    inside0 = Fraction(1, 7)
    ok = hood0.contains(inside0) and validate_name(
        apply_uniform(local0, [rational_name(inside0)]), inside0, t_max
    ).passed
    r.check("localized embedded identity still names nearby points", ok)

    return r.passed, r.lines


# ---------------------------------------------------------------------------
# gluing
# ---------------------------------------------------------------------------


def _two_ball_cover() -> BallCover:
    return BallCover(
        (
            Ball((Fraction(-1),), Fraction(3, 2), _negate_fn()),
            Ball((Fraction(1),), Fraction(3, 2), _identity_fn()),
        ),
        separation=3,
    )


def _three_ball_cover() -> BallCover:
    return BallCover(
        (
            Ball((Fraction(-1),), Fraction(1), _negate_fn()),
            Ball((Fraction(1),), Fraction(1), _identity_fn()),
            Ball((Fraction(0),), Fraction(1, 4), _abs_fn()),
        ),
        separation=15,
    )


def _suite_gluing(rng: Random, t_max: int) -> tuple[bool, list[str]]:
    r = _Recorder()

    cover = _two_ball_cover()
    glued = glue_compact(cover)
    warranted = [Fraction(n, 8) for n in range(-8, 1)] + [
        Fraction(n, 8) for n in range(2, 9)
    ]
    ok = all(
        validate_name(apply_uniform(glued, [rational_name(q)]), abs(q), t_max).passed
        for q in warranted
    )
    r.check(
        f"two-ball absolute value matches |q| on its warranted region (t <= {t_max})",
        ok,
    )

    ok = all(
        dispatch_index(cover, [rational_name(q)]) == 1
        for q in (Fraction(-1), Fraction(-1, 2))
    ) and all(
        dispatch_index(cover, [rational_name(q)]) == 2
        for q in (Fraction(1, 2), Fraction(1))
    )
    r.check("dispatch picks the unique certifying ball", ok)

    stray = approx(apply_uniform(glued, [rational_name(Fraction(1, 8))]), 40)
    r.check(
        "outside the warranted region the first ball wins (known limitation)",
        stray == Fraction(-1, 8),
    )

    sound = _three_ball_cover()
    glued3 = glue_compact(sound)
    grid = [Fraction(n, 16) for n in range(-16, 17)]
    ok = all(
        validate_name(apply_uniform(glued3, [rational_name(q)]), abs(q), t_max).passed
        for q in grid
    )
    r.check(f"three-ball absolute value matches |q| on all of [-1,1] (t <= {t_max})", ok)

    violations = separation_violations(sound, [(q,) for q in grid])
    r.check("three-ball separation holds on the sample grid", violations == [])

    single = BallCover((Ball((Fraction(0),), Fraction(1), _identity_fn()),), 1)
    glued1 = glue_compact(single)
    ok = all(
        validate_name(apply_uniform(glued1, [rational_name(q)]), q, t_max).passed
        for q in (Fraction(0), Fraction(1, 4), Fraction(-1, 4))
    )
    r.check("one-ball cover reduces to its local function", ok)

    return r.passed, r.lines


# ---------------------------------------------------------------------------
# metric spaces
# ---------------------------------------------------------------------------


def _suite_metric(rng: Random, t_max: int) -> tuple[bool, list[str]]:
    r = _Recorder()
    m1, m2 = make_mn(1), make_mn(2)

    code = tuple_pack([1, 0, 1])
    r.check("a packed (1,0,1) code decodes to 1/2", m1.alpha(code) == (Fraction(1, 2),))

    a, b = mn_code((Fraction(0), Fraction(0))), mn_code((Fraction(1, 2), Fraction(-1, 3)))
    r.check(
        "max-norm comparisons are exact",
        m2.dist_lt(a, b, Fraction(3, 5)) and not m2.dist_lt(a, b, Fraction(1, 2)),
    )

    r.check(
        "metric axioms hold on sampled codes",
        metric_axiom_violations(m2, range(20)) == []
        and metric_axiom_violations(make_discrete(5), range(5)) == [],
    )

    out = apply_uniform_ms(identity_ms(m1), mn_name((Fraction(2, 3),)))
    r.check(
        "identity map preserves names",
        validate_ordinary_name(out, mn_code((Fraction(2, 3),)), t_max) == [],
    )

    disc = make_discrete(5)
    perm1, perm2 = (1, 2, 3, 4, 0), (2, 0, 3, 1, 4)

    def perm_map(table: tuple[int, ...]) -> MsUniformFn:
        def build(fns: tuple[NatFun, ...]) -> NatFun:
            return NatFun(lambda t, _f=fns[0]: table[_f(t)], label="perm")

        return MsUniformFn(disc, disc, ProcOperator(1, build, "perm"))

    composed = compose_conditional_ms(
        embed_uniform_ms(perm_map(perm1)), embed_uniform_ms(perm_map(perm2))
    )
    ok = True
    for start in range(5):
        got = apply_conditional_ms(
            composed, OrdinaryName(NatFun.constant(start), disc), budget=10
        )
        if got.f(3) != perm1[perm2[start]]:
            ok = False
    r.check("discrete permutations compose pointwise", ok)

    registry = default_functions()
    add = registry.get("add").fn
    translated = translate_uniform(add)
    out = apply_uniform_ms(translated, mn_name((Fraction(1, 2), Fraction(1, 3))))
    r.check(
        "translated addition names 5/6",
        validate_ordinary_name(out, mn_code((Fraction(5, 6),)), t_max) == [],
    )

    back = translate_uniform_back(translated)
    names = [rational_name(Fraction(1, 2)), rational_name(Fraction(1, 3))]
    direct = apply_uniform(add, names)
    recovered = apply_uniform(back, names)
    ok = all(
        getattr(direct, c)(t) == getattr(recovered, c)(t)
        for c in ("f", "g", "h")
        for t in range(25)
    )
    r.check("translating there and back is a pointwise identity", ok)

    recip = registry.get("recip").fn
    ms_recip = translate_conditional(recip)
    s_real = find_parameter(recip, [rational_name(Fraction(1, 3))], 1000)
    s_ms = find_parameter_ms(ms_recip, mn_name((Fraction(1, 3),)), 1000)
    r.check("translated reciprocal finds the same parameter", s_real == s_ms)

    two = tuple_conditional(
        [embed_uniform_ms(identity_ms(m1)), translate_conditional(recip)]
    )
    out = apply_conditional_ms(two, mn_name((Fraction(1, 2),)), budget=10**4)
    r.check(
        "a two-component bundle names the value pair",
        validate_ordinary_name(out, mn_code((Fraction(1, 2), Fraction(2))), t_max)
        == [],
    )

    indicator = code_ball_indicator(1, mn_code((Fraction(0),)), Fraction(2, 3))
    center = mn_code((Fraction(0),))
    ok = all(
        (indicator(n) == 0) == m1.dist_lt(n, center, Fraction(2, 3))
        for n in range(150)
    )
    r.check("code-level ball indicator agrees with dist_lt", ok)

    return r.passed, r.lines


_SUITES: dict[str, Callable[[Random, int], tuple[bool, list[str]]]] = {
    "gadgets": _suite_gadgets,
    "curry": _suite_curry,
    "composition": _suite_composition,
    "localization": _suite_localization,
    "gluing": _suite_gluing,
    "metric-spaces": _suite_metric,
}


def run_suite(name: str, seed: int = 2021, t_max: int = 120) -> tuple[bool, list[str]]:
    """Run one named suite; returns (passed, report lines)."""
    canonical = _ALIASES.get(name, name)
    if canonical not in _SUITES:
        raise KeyError(name)
    return _SUITES[canonical](Random(seed), t_max)

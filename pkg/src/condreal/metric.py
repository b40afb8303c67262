"""Effective metric spaces and computability of maps between them.

A space is given by a coded dense subset: a decidable code domain, a
decoding map ``alpha`` from codes to points, and an exact distance
comparison ``dist_lt(n, m, q)`` deciding ``d(alpha(n), alpha(m)) < q``
for rational thresholds.  Points are opaque except through codes and
these comparisons.

An *ordinary name* of a point ``xi`` is a total function ``f`` on the
naturals with ``d(alpha(f(t)), xi) < 1/(t+1)`` for every ``t``.  A map is
*uniformly computable* when one operator T sends names of arguments to
names of values, and *conditionally computable* when a certificate
operator E must first vanish at a searched parameter ``s``, after which
``T(f, const_s)`` names the value.

The same composition / localization / gluing constructions as for real
functions apply verbatim, and the spaces ``M_N`` (rational N-tuples coded
by nested pairing, max-norm distance) translate real-function
computability back and forth losslessly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from . import gadgets
from .gadgets import conj, left, right, tuple_pack, tuple_part
from .naming import NatFun, format_rational, recording
from .realfns import (
    BudgetExhausted,
    ConditionalFn,
    Operator,
    ProcOperator,
    UniformFn,
)
from .terms import ArityMismatch

__all__ = [
    "EffectiveSpace",
    "MsBall",
    "MsBallCover",
    "MsConditionalFn",
    "MsNeighborhood",
    "MsUniformFn",
    "OrdinaryName",
    "SpaceMismatch",
    "apply_conditional_ms",
    "apply_conditional_ms_at",
    "apply_uniform_ms",
    "builtin_spaces",
    "code_ball_indicator",
    "compose_conditional_ms",
    "dispatch_index_ms",
    "embed_uniform_ms",
    "find_parameter_ms",
    "glue_compact_ms",
    "identity_ms",
    "localize_ms",
    "make_discrete",
    "make_mn",
    "metric_axiom_violations",
    "mn_code",
    "mn_decode",
    "mn_name",
    "translate_conditional",
    "translate_conditional_back",
    "translate_uniform",
    "translate_uniform_back",
    "tuple_conditional",
    "validate_ordinary_name",
]


class SpaceMismatch(ValueError):
    """Two constructions were wired across different spaces."""


@dataclass(frozen=True, eq=False)
class EffectiveSpace:
    """A metric space presented through a coded dense subset.

    ``dist_lt`` must decide strict comparisons exactly; ``dist`` is the
    exact rational distance where one exists (it does for every space
    built here) and feeds the metric-axiom spot checks.
    """

    name: str
    code_domain: Callable[[int], bool]
    alpha: Callable[[int], object]
    dist: Callable[[int, int], Fraction] | None
    dist_lt: Callable[[int, int, Fraction | int], bool]
    dimension: int | None = None

    def __repr__(self) -> str:
        return f"EffectiveSpace({self.name})"


@dataclass(frozen=True, eq=False)
class OrdinaryName:
    """A code stream converging to a point at rate 1/(t+1)."""

    f: NatFun
    space: EffectiveSpace


@dataclass(frozen=True, eq=False)
class MsUniformFn:
    """One operator T sending argument names to value names."""

    domain: EffectiveSpace
    codomain: EffectiveSpace
    T: Operator

    def __post_init__(self) -> None:
        if self.T.arity != 1:
            raise ArityMismatch("uniform metric-space operator must be unary")


@dataclass(frozen=True, eq=False)
class MsConditionalFn:
    """Certificate operator E plus binary value operator T."""

    domain: EffectiveSpace
    codomain: EffectiveSpace
    E: Operator
    T: Operator

    def __post_init__(self) -> None:
        if self.E.arity != 1:
            raise ArityMismatch("certificate operator must be unary")
        if self.T.arity != 2:
            raise ArityMismatch("conditional value operator must be binary")


def _same_space(a: EffectiveSpace, b: EffectiveSpace, what: str) -> None:
    if a is not b:
        raise SpaceMismatch(f"{what}: {a.name} vs {b.name}")


def _lift(base: Callable[[int], int], fn: NatFun, label: str) -> NatFun:
    return NatFun(lambda t: base(fn(t)), label=label, memoize=False)


def _part_lift(width: int, index: int, fn: NatFun) -> NatFun:
    return NatFun(
        lambda t: tuple_part(width, index, fn(t)),
        label=f"part{index}/{width}",
        memoize=False,
    )


def _pack_lift(fns: Sequence[NatFun]) -> NatFun:
    fns = tuple(fns)
    return NatFun(
        lambda t: tuple_pack([fn(t) for fn in fns]), label="pack", memoize=False
    )


# ---------------------------------------------------------------------------
# application
# ---------------------------------------------------------------------------


def apply_uniform_ms(fn: MsUniformFn, name: OrdinaryName) -> OrdinaryName:
    _same_space(name.space, fn.domain, "argument name lives in the wrong space")
    return OrdinaryName(fn.T.apply((name.f,)), fn.codomain)


def find_parameter_ms(fn: MsConditionalFn, name: OrdinaryName, budget: int) -> int:
    _same_space(name.space, fn.domain, "argument name lives in the wrong space")
    certificate = fn.E.apply((name.f,))
    for s in range(budget):
        if certificate.eval_uncached(s) == 0:
            return s
    raise BudgetExhausted(budget, "searching for a certifying parameter")


def apply_conditional_ms_at(
    fn: MsConditionalFn, name: OrdinaryName, s: int
) -> OrdinaryName:
    _same_space(name.space, fn.domain, "argument name lives in the wrong space")
    return OrdinaryName(fn.T.apply((name.f, NatFun.constant(s))), fn.codomain)


def apply_conditional_ms(
    fn: MsConditionalFn, name: OrdinaryName, budget: int
) -> OrdinaryName:
    return apply_conditional_ms_at(fn, name, find_parameter_ms(fn, name, budget))


def identity_ms(space: EffectiveSpace) -> MsUniformFn:
    return MsUniformFn(space, space, ProcOperator(1, lambda fns: fns[0], "identity"))


def embed_uniform_ms(fn: MsUniformFn) -> MsConditionalFn:
    """View a uniform map as conditional; s = 0 always certifies."""
    cert = ProcOperator(1, lambda _fns: NatFun.identity(), "embedded-cert")
    value = ProcOperator(2, lambda args, _fn=fn: _fn.T.apply(args[:1]), "embedded")
    return MsConditionalFn(fn.domain, fn.codomain, cert, value)


def validate_ordinary_name(
    name: OrdinaryName, target_code: int, t_max: int
) -> list[int]:
    """Indices t <= t_max violating the name contract for the coded target.

    A violation is a t where f(t) leaves the code domain or where the
    decoded point is not strictly within 1/(t+1) of the target.  Empty
    result = valid up to t_max.
    """
    space = name.space
    bad = []
    for t in range(t_max + 1):
        code = name.f(t)
        if not space.code_domain(code) or not space.dist_lt(
            code, target_code, Fraction(1, t + 1)
        ):
            bad.append(t)
    return bad


def metric_axiom_violations(space: EffectiveSpace, codes: Sequence[int]) -> list[str]:
    """Spot-check identity, symmetry and the triangle inequality, exactly."""
    if space.dist is None:
        raise ValueError(f"{space.name} has no exact distance oracle")
    bad = []
    for n in codes:
        if space.dist(n, n) != 0:
            bad.append(f"d({n},{n}) != 0")
    for n in codes:
        for m in codes:
            if space.dist(n, m) != space.dist(m, n):
                bad.append(f"d({n},{m}) asymmetric")
            if space.dist(n, m) < 0:
                bad.append(f"d({n},{m}) negative")
    for n in codes:
        for m in codes:
            for k in codes:
                if space.dist(n, k) > space.dist(n, m) + space.dist(m, k):
                    bad.append(f"triangle fails at ({n},{m},{k})")
    return bad


# ---------------------------------------------------------------------------
# composition, localization, gluing
# ---------------------------------------------------------------------------


def compose_conditional_ms(
    outer: MsConditionalFn, inner: MsConditionalFn
) -> MsConditionalFn:
    """Composite map; the parameter packs the component parameters.

    At candidate s the certificate conjoins the inner test at right(s)
    with the outer test, over the inner value name at that frozen inner
    parameter, at left(s); the value operator routes the found parameter
    through the same split.
    """
    _same_space(inner.codomain, outer.domain, "composition space mismatch")

    def build_cert(fns: tuple[NatFun, ...]) -> NatFun:
        (f,) = fns
        inner_cert = inner.E.apply((f,))

        def ev(s: int) -> int:
            first = inner_cert(right(s))
            mid = inner.T.apply((f, NatFun.constant(right(s))))
            second = outer.E.apply((mid,))(left(s))
            return conj(first, second)

        return NatFun(ev, label="ms-composed-cert")

    def build_value(args: tuple[NatFun, ...]) -> NatFun:
        f, e = args
        mid = inner.T.apply((f, _lift(right, e, "right.e")))
        return outer.T.apply((mid, _lift(left, e, "left.e")))

    return MsConditionalFn(
        inner.domain,
        outer.codomain,
        ProcOperator(1, build_cert, "ms-composed-cert"),
        ProcOperator(2, build_value, "ms-composed-value"),
    )


@dataclass(frozen=True, eq=False)
class MsNeighborhood:
    """Intersection of the metric balls cut out by the anchor's codes.

    A point belongs when it is within 1/(t+1) of the anchor's code at
    every t <= cutoff; membership of coded points is decided exactly
    through dist_lt.
    """

    space: EffectiveSpace
    cutoff: int
    anchor_codes: tuple[int, ...]

    def contains_code(self, code: int) -> bool:
        return all(
            self.space.dist_lt(self.anchor_codes[t], code, Fraction(1, t + 1))
            for t in range(self.cutoff + 1)
        )


def localize_ms(
    fn: MsConditionalFn, at: OrdinaryName, budget: int
) -> tuple[MsNeighborhood, MsUniformFn]:
    """Trade conditionality for locality around a named point.

    Finds the least certificate s0 for the anchor, instruments that
    evaluation to obtain the largest queried index u, and returns the
    neighborhood cut out by the anchor's first u+1 codes together with
    the uniform map patching every argument name below u+1 with the
    anchor and applying T at the frozen parameter.
    """
    _same_space(at.space, fn.domain, "anchor name lives in the wrong space")
    s0 = find_parameter_ms(fn, at, budget)

    wrapped, log = recording((at.f,))
    if fn.E.apply(wrapped)(s0) != 0:
        raise AssertionError("certificate changed value under instrumentation")
    queried = [t for seen in log.values() for t in seen]
    u = max(queried) if queried else 0

    hood = MsNeighborhood(fn.domain, u, tuple(at.f(t) for t in range(u + 1)))

    def build(fns: tuple[NatFun, ...]) -> NatFun:
        patched = NatFun.patched(at.f, u + 1, fns[0])
        return fn.T.apply((patched, NatFun.constant(s0)))

    return hood, MsUniformFn(
        fn.domain, fn.codomain, ProcOperator(1, build, "ms-localized")
    )


@dataclass(frozen=True, eq=False)
class MsBall:
    """Coded center, rational radius, the local map valid on the ball.

    ``indicator`` (zero exactly on codes within radius - 1/(k+1) of the
    center, for the cover's separation k) may be supplied; otherwise it
    is derived from the space's dist_lt at gluing time.
    """

    center_code: int
    radius: Fraction
    local: MsUniformFn
    indicator: Callable[[int], int] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "radius", Fraction(self.radius))
        if self.radius <= 0:
            raise ValueError("ball radius must be positive")


@dataclass(frozen=True, eq=False)
class MsBallCover:
    balls: tuple[MsBall, ...]
    separation: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "balls", tuple(self.balls))
        if not self.balls:
            raise ValueError("a cover needs at least one ball")
        if self.separation < 0:
            raise ValueError("separation index must be a natural")
        first = self.balls[0].local
        for ball in self.balls:
            _same_space(ball.local.domain, first.domain, "cover domain mismatch")
            _same_space(ball.local.codomain, first.codomain, "cover codomain mismatch")

    @property
    def domain(self) -> EffectiveSpace:
        return self.balls[0].local.domain

    @property
    def codomain(self) -> EffectiveSpace:
        return self.balls[0].local.codomain


def _cover_indicators_ms(cover: MsBallCover) -> list[Callable[[int], int]]:
    margin = Fraction(1, cover.separation + 1)
    space = cover.domain
    out: list[Callable[[int], int]] = []
    for ball in cover.balls:
        if ball.indicator is not None:
            out.append(ball.indicator)
        else:
            threshold = ball.radius - margin

            def derived(
                n: int, _c: int = ball.center_code, _q: Fraction = threshold
            ) -> int:
                return 0 if space.dist_lt(n, _c, _q) else 1

            out.append(derived)
    return out


def glue_compact_ms(cover: MsBallCover) -> MsUniformFn:
    """One uniform map dispatching among the cover's local maps.

    At output index t the glued operator probes the argument name at the
    separation index k, asks each ball's indicator about that code, and
    emits the first passing ball's local output at t (code 0 if none
    passes).  The caller warrants the covering and separation
    hypotheses, as for the real-number gluing.
    """
    k = cover.separation
    indicators = _cover_indicators_ms(cover)

    def build(fns: tuple[NatFun, ...]) -> NatFun:
        (f,) = fns
        outs = [ball.local.T.apply((f,)) for ball in cover.balls]

        def ev(t: int) -> int:
            probe = f(k)
            args: list[int] = []
            for e_i, out in zip(indicators, outs):
                args.append(e_i(probe))
                args.append(out(t))
            args.append(0)
            return gadgets._delta_k_value(len(outs), args)

        return NatFun(ev, label="ms-glued")

    return MsUniformFn(
        cover.domain, cover.codomain, ProcOperator(1, build, "ms-glued")
    )


def dispatch_index_ms(cover: MsBallCover, name: OrdinaryName) -> int | None:
    """Which ball (1-based) the glued map would source from, if any."""
    _same_space(name.space, cover.domain, "name lives in the wrong space")
    probe = name.f(cover.separation)
    for i, indicator in enumerate(_cover_indicators_ms(cover), start=1):
        if indicator(probe) == 0:
            return i
    return None


# ---------------------------------------------------------------------------
# the spaces M_N of rational N-tuples, and translations
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def make_mn(n_dims: int) -> EffectiveSpace:
    """R^N with the max-norm metric and rational tuples coded by pairing.

    A code decodes through the 3N-tuple projections: coordinate j is
    (c_{3j-2} - c_{3j-1}) / (c_{3j} + 1).  Every natural is a valid code,
    decoding is total, and distance comparisons are exact rational
    arithmetic.
    """
    if n_dims < 1:
        raise ValueError("dimension must be at least 1")
    width = 3 * n_dims

    def alpha(n: int) -> tuple[Fraction, ...]:
        parts = [tuple_part(width, i, n) for i in range(1, width + 1)]
        return tuple(
            Fraction(parts[3 * j] - parts[3 * j + 1], parts[3 * j + 2] + 1)
            for j in range(n_dims)
        )

    def dist(n: int, m: int) -> Fraction:
        a, b = alpha(n), alpha(m)
        return max(abs(x - y) for x, y in zip(a, b))

    return EffectiveSpace(
        name=f"M_{n_dims}",
        code_domain=lambda _n: True,
        alpha=alpha,
        dist=dist,
        dist_lt=lambda n, m, q: dist(n, m) < Fraction(q),
        dimension=n_dims,
    )


def mn_decode(n_dims: int, code: int) -> tuple[Fraction, ...]:
    """The rational tuple a code stands for (same map as the space's alpha)."""
    return make_mn(n_dims).alpha(code)


def mn_code(point: Sequence[Fraction | int]) -> int:
    """A canonical code for a rational tuple (decodes back exactly)."""
    values: list[int] = []
    for q in map(Fraction, point):
        p, d = q.numerator, q.denominator
        values.extend((p if p > 0 else 0, -p if p < 0 else 0, d - 1))
    return tuple_pack(values)


def mn_name(point: Sequence[Fraction | int]) -> OrdinaryName:
    """The constant ordinary name of a rational tuple (exact at every t)."""
    point = tuple(map(Fraction, point))
    return OrdinaryName(NatFun.constant(mn_code(point)), make_mn(len(point)))


@lru_cache(maxsize=None)
def make_discrete(size: int) -> EffectiveSpace:
    """Finitely many points, 0/1 metric, codes = points."""
    if size < 1:
        raise ValueError("a discrete space needs at least one point")

    def dist(n: int, m: int) -> Fraction:
        return Fraction(0) if n == m else Fraction(1)

    return EffectiveSpace(
        name=f"discrete_{size}",
        code_domain=lambda n: n < size,
        alpha=lambda n: n,
        dist=dist,
        dist_lt=lambda n, m, q: dist(n, m) < Fraction(q),
        dimension=None,
    )


def builtin_spaces() -> list[EffectiveSpace]:
    return [make_mn(1), make_mn(2), make_mn(3), make_discrete(8)]


def _decoded_parts(n_dims: int, fn: NatFun) -> tuple[NatFun, ...]:
    width = 3 * n_dims
    return tuple(_part_lift(width, i, fn) for i in range(1, width + 1))


def translate_uniform(fn: UniformFn) -> MsUniformFn:
    """A uniform real function as a uniform map from M_N to M_1.

    The operator decodes the argument-name codes into 3N component
    functions (which are exactly name triples of the coordinates), runs
    the real operators, and packs the output triple back into codes.
    """
    n = fn.n_args

    def build(fns: tuple[NatFun, ...]) -> NatFun:
        parts = _decoded_parts(n, fns[0])
        return _pack_lift(
            (fn.F.apply(parts), fn.G.apply(parts), fn.H.apply(parts))
        )

    return MsUniformFn(
        make_mn(n), make_mn(1), ProcOperator(1, build, "translated-uniform")
    )


def translate_uniform_back(fn: MsUniformFn) -> UniformFn:
    """The inverse packaging, for maps between the rational-tuple spaces."""
    n = fn.domain.dimension
    if n is None or fn.codomain.dimension != 1:
        raise SpaceMismatch("translation expects a map from M_N to M_1")

    def component(pick: int) -> ProcOperator:
        def build(fns: tuple[NatFun, ...]) -> NatFun:
            out = fn.T.apply((_pack_lift(fns),))
            return _part_lift(3, pick, out)

        return ProcOperator(3 * n, build, "translated-back")

    return UniformFn(n, component(1), component(2), component(3))


def translate_conditional(fn: ConditionalFn) -> MsConditionalFn:
    """A conditional real function as a conditional map from M_N to M_1."""
    n = fn.n_args

    def build_cert(fns: tuple[NatFun, ...]) -> NatFun:
        return fn.E.apply(_decoded_parts(n, fns[0]))

    def build_value(args: tuple[NatFun, ...]) -> NatFun:
        f, e = args
        parts = _decoded_parts(n, f) + (e,)
        return _pack_lift(
            (fn.F.apply(parts), fn.G.apply(parts), fn.H.apply(parts))
        )

    return MsConditionalFn(
        make_mn(n),
        make_mn(1),
        ProcOperator(1, build_cert, "translated-cert"),
        ProcOperator(2, build_value, "translated-value"),
    )


def translate_conditional_back(fn: MsConditionalFn) -> ConditionalFn:
    n = fn.domain.dimension
    if n is None or fn.codomain.dimension != 1:
        raise SpaceMismatch("translation expects a map from M_N to M_1")

    def build_cert(fns: tuple[NatFun, ...]) -> NatFun:
        return fn.E.apply((_pack_lift(fns),))

    def component(pick: int) -> ProcOperator:
        def build(fns: tuple[NatFun, ...]) -> NatFun:
            out = fn.T.apply((_pack_lift(fns[:-1]), fns[-1]))
            return _part_lift(3, pick, out)

        return ProcOperator(3 * n + 1, build, "translated-back-value")

    return ConditionalFn(
        n,
        ProcOperator(3 * n, build_cert, "translated-back-cert"),
        component(1),
        component(2),
        component(3),
    )


def tuple_conditional(fns: Sequence[MsConditionalFn]) -> MsConditionalFn:
    """Bundle K conditional maps into M_1 into one map into M_K.

    The parameter decodes into K component parameters; the certificate
    conjoins the component certificates at their slots, and the value
    operator interleaves the decoded component outputs into M_K codes
    (each component carries full index-t precision, so the max-norm
    error stays under 1/(t+1)).
    """
    fns = tuple(fns)
    if not fns:
        raise ValueError("tuple_conditional needs at least one component")
    domain = fns[0].domain
    for fn in fns:
        _same_space(fn.domain, domain, "components must share their domain")
        _same_space(fn.codomain, make_mn(1), "components must map into M_1")
    k = len(fns)

    def build_cert(args: tuple[NatFun, ...]) -> NatFun:
        (f,) = args
        certs = [fn.E.apply((f,)) for fn in fns]

        def ev(s: int) -> int:
            total = 0
            for i, cert in enumerate(certs, start=1):
                total = conj(total, cert(tuple_part(k, i, s)))
            return total

        return NatFun(ev, label="tupled-cert")

    def build_value(args: tuple[NatFun, ...]) -> NatFun:
        f, e = args
        outs = [
            fn.T.apply((f, _part_lift(k, i, e)))
            for i, fn in enumerate(fns, start=1)
        ]

        def ev(t: int) -> int:
            comps: list[int] = []
            for out in outs:
                code = out(t)
                comps.extend(tuple_part(3, j, code) for j in (1, 2, 3))
            return tuple_pack(comps)

        return NatFun(ev, label="tupled-value")

    return MsConditionalFn(
        domain,
        make_mn(k),
        ProcOperator(1, build_cert, "tupled-cert"),
        ProcOperator(2, build_value, "tupled-value"),
    )


def code_ball_indicator(
    n_dims: int, center_code: int, radius: Fraction | int
) -> Callable[[int], int]:
    """Zero exactly on codes decoding strictly inside the max-norm ball.

    Composes the triple-level ball indicator with the tuple decodes, so
    it agrees with dist_lt(n, center_code, radius) on every code.
    """
    center = mn_decode(n_dims, center_code)
    base = gadgets.ball_indicator(center, radius)
    width = 3 * n_dims

    def fn(n: int) -> int:
        return base.fn(*(tuple_part(width, i, n) for i in range(1, width + 1)))

    return fn

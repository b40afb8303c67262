"""Uniformly and conditionally computable real functions.

An N-argument real function is *uniformly computable* when three 3N-ary
operators F, G, H transform any name triples of the arguments into a name
triple of the value.  It is *conditionally computable* when a fourth
operator E certifies parameters first: a natural ``s`` with

    E(f_1, g_1, h_1, ..., f_N, g_N, h_N)(s) = 0

must exist whenever the arguments are named and lie in the domain, and
every such ``s`` -- not only the first -- makes

    (F(..., const_s), G(..., const_s), H(..., const_s))

a name of the value.  Uniform functions embed into conditional ones with
a certificate that accepts exactly s = 0.

Operators are either operator terms (single numeric argument) or direct
procedures honoring the same contract: total, deterministic, reading
their function arguments only by evaluation.  The constructions below --
composition of conditionals, localization of a conditional to a uniform
function near a point, and gluing of local uniform functions over a
finite ball cover -- stay inside the term language whenever every
ingredient is term-backed, and otherwise fall back to the equivalent
procedure form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from . import gadgets
from .gadgets import CORE, conj, left, right
from .naming import NameTriple, NatFun, recording
from .terms import (
    Apply,
    ArityMismatch,
    Base,
    BaseFunction,
    Node,
    OperatorTerm,
    Proj,
    compose_terms,
    diagonalize,
    eval_term,
)

__all__ = [
    "Ball",
    "BallCover",
    "BudgetExhausted",
    "ConditionalFn",
    "Neighborhood",
    "Operator",
    "ProcOperator",
    "TermOperator",
    "UniformFn",
    "apply_conditional",
    "apply_conditional_at",
    "apply_uniform",
    "compose_conditional",
    "dispatch_index",
    "embed_uniform",
    "find_parameter",
    "glue_compact",
    "identity_uniform",
    "localize",
    "patch_operator",
    "patch_operator_mu_chain",
    "separation_violations",
]


class BudgetExhausted(RuntimeError):
    """No certifying parameter found in the searched range.

    Carries the searched range; deliberately *not* a claim that no
    parameter exists beyond it.
    """

    def __init__(self, budget: int, context: str = ""):
        self.budget = budget
        self.context = context
        where = f" while {context}" if context else ""
        super().__init__(f"no parameter s < {budget} certified{where}")


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TermOperator:
    """An operator denoted by a single-argument operator term."""

    term: OperatorTerm

    def __post_init__(self) -> None:
        if self.term.m != 1:
            raise ArityMismatch("operator terms take a single numeric argument")

    @property
    def arity(self) -> int:
        return self.term.k

    def apply(self, fns: Sequence[NatFun]) -> NatFun:
        fns = tuple(fns)
        if len(fns) != self.arity:
            raise ArityMismatch(f"operator wants {self.arity} functions, got {len(fns)}")
        term = self.term
        return NatFun(lambda n: eval_term(term, fns, (n,)), label="term-op")


@dataclass(frozen=True, eq=False)
class ProcOperator:
    """An operator given directly as a procedure building the result function.

    The builder must be pure and must read the argument functions only by
    calling them, so instrumentation sees every query.
    """

    arity: int
    build: Callable[[tuple[NatFun, ...]], NatFun]
    label: str = ""

    def apply(self, fns: Sequence[NatFun]) -> NatFun:
        fns = tuple(fns)
        if len(fns) != self.arity:
            raise ArityMismatch(f"operator wants {self.arity} functions, got {len(fns)}")
        return self.build(fns)


Operator = TermOperator | ProcOperator


def _is_term(op: Operator) -> bool:
    return isinstance(op, TermOperator)


# ---------------------------------------------------------------------------
# function records
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class UniformFn:
    """N real arguments; F, G, H are 3N-ary operators."""

    n_args: int
    F: Operator
    G: Operator
    H: Operator

    def __post_init__(self) -> None:
        want = 3 * self.n_args
        for op in (self.F, self.G, self.H):
            if op.arity != want:
                raise ArityMismatch(f"uniform operators must be {want}-ary")


@dataclass(frozen=True, eq=False)
class ConditionalFn:
    """N real arguments; E is 3N-ary, F, G, H are (3N+1)-ary."""

    n_args: int
    E: Operator
    F: Operator
    G: Operator
    H: Operator

    def __post_init__(self) -> None:
        if self.E.arity != 3 * self.n_args:
            raise ArityMismatch(f"certificate operator must be {3 * self.n_args}-ary")
        for op in (self.F, self.G, self.H):
            if op.arity != 3 * self.n_args + 1:
                raise ArityMismatch(
                    f"conditional value operators must be {3 * self.n_args + 1}-ary"
                )


def _flatten(names: Sequence[NameTriple]) -> tuple[NatFun, ...]:
    return tuple(fn for name in names for fn in name)


def apply_uniform(fn: UniformFn, names: Sequence[NameTriple]) -> NameTriple:
    """Transform argument names into a (lazily evaluated) value name."""
    if len(names) != fn.n_args:
        raise ArityMismatch(f"{fn.n_args} argument names expected, got {len(names)}")
    fns = _flatten(names)
    return NameTriple(fn.F.apply(fns), fn.G.apply(fns), fn.H.apply(fns))


def find_parameter(fn: ConditionalFn, names: Sequence[NameTriple], budget: int) -> int:
    """Linear scan for the least certifying parameter s < budget."""
    if len(names) != fn.n_args:
        raise ArityMismatch(f"{fn.n_args} argument names expected, got {len(names)}")
    certificate = fn.E.apply(_flatten(names))
    for s in range(budget):
        if certificate.eval_uncached(s) == 0:
            return s
    raise BudgetExhausted(budget, "searching for a certifying parameter")


def apply_conditional_at(
    fn: ConditionalFn, names: Sequence[NameTriple], s: int
) -> NameTriple:
    """Apply at an already-found parameter (any certified s is valid)."""
    if len(names) != fn.n_args:
        raise ArityMismatch(f"{fn.n_args} argument names expected, got {len(names)}")
    fns = _flatten(names) + (NatFun.constant(s),)
    return NameTriple(fn.F.apply(fns), fn.G.apply(fns), fn.H.apply(fns))


def apply_conditional(
    fn: ConditionalFn, names: Sequence[NameTriple], budget: int
) -> NameTriple:
    """Search for a certificate, then apply; raises BudgetExhausted if none."""
    return apply_conditional_at(fn, names, find_parameter(fn, names, budget))


def embed_uniform(fn: UniformFn) -> ConditionalFn:
    """View a uniform function as conditional.

    The certificate operator returns the identity regardless of its
    arguments, so s = 0 certifies; the value operators ignore the extra
    parameter slot.
    """
    k = 3 * fn.n_args
    cert = TermOperator(OperatorTerm(k, 1, Proj(1)))

    def widen(op: Operator) -> Operator:
        if _is_term(op):
            return TermOperator(OperatorTerm(k + 1, 1, op.term.node))
        return ProcOperator(k + 1, lambda fns, _op=op: _op.apply(fns[:-1]), "widened")

    return ConditionalFn(fn.n_args, cert, widen(fn.F), widen(fn.G), widen(fn.H))


def identity_uniform() -> UniformFn:
    """The identity on reals, term-backed: passes the name straight through."""
    return UniformFn(
        1,
        TermOperator(OperatorTerm(3, 1, Apply(1, Proj(1)))),
        TermOperator(OperatorTerm(3, 1, Apply(2, Proj(1)))),
        TermOperator(OperatorTerm(3, 1, Apply(3, Proj(1)))),
    )


# ---------------------------------------------------------------------------
# composition of conditional functions
# ---------------------------------------------------------------------------

_PAIR_LEFT = CORE.get("left")
_PAIR_RIGHT = CORE.get("right")
_CONJ = CORE.get("conj")


def _precompose_slot(node: Node, slot: int, base: BaseFunction) -> Node:
    # every application of `slot` gets routed through `base` afterwards,
    # i.e. the slot function f becomes base . f
    if isinstance(node, Proj):
        return node
    if isinstance(node, Apply):
        sub = _precompose_slot(node.sub, slot, base)
        if node.index == slot:
            return Base(base, (Apply(slot, sub),))
        return Apply(node.index, sub)
    return Base(node.fn, tuple(_precompose_slot(sub, slot, base) for sub in node.subs))


def _subst_arg_node(node: Node, replacement: Node) -> Node:
    if isinstance(node, Proj):
        return replacement
    if isinstance(node, Apply):
        return Apply(node.index, _subst_arg_node(node.sub, replacement))
    return Base(node.fn, tuple(_subst_arg_node(sub, replacement) for sub in node.subs))


def _post_lift(base_fn: Callable[[int], int], fn: NatFun, label: str) -> NatFun:
    return NatFun(lambda t: base_fn(fn(t)), label=label, memoize=False)


def compose_conditional(outer: ConditionalFn, inner: ConditionalFn) -> ConditionalFn:
    """Composite of two conditional unary functions.

    The composite's parameter packs the component parameters through the
    diagonal pairing: at candidate ``s`` the certificate is

        conj(E_inner(f,g,h)(right(s)),
             E_outer(inner value name at parameter right(s))(left(s)))

    which vanishes exactly when ``right(s)`` certifies the inner function
    and ``left(s)`` certifies the outer one at the inner output.  The
    value operators feed the packed parameter through the same split.
    Term-backed ingredients yield term-backed results; otherwise the
    procedure form of the same equations is used.
    """
    if outer.n_args != 1 or inner.n_args != 1:
        raise ArityMismatch("composition is defined for unary conditional functions")

    ops = (inner.E, inner.F, inner.G, inner.H, outer.E, outer.F, outer.G, outer.H)
    if all(_is_term(op) for op in ops):
        return _compose_terms_path(outer, inner)
    return _compose_proc_path(outer, inner)


def _compose_terms_path(outer: ConditionalFn, inner: ConditionalFn) -> ConditionalFn:
    # value-name operators of the inner function with the parameter slot
    # rerouted through `right`
    f1 = _precompose_slot(inner.F.term.node, 4, _PAIR_RIGHT)
    g1 = _precompose_slot(inner.G.term.node, 4, _PAIR_RIGHT)
    h1 = _precompose_slot(inner.H.term.node, 4, _PAIR_RIGHT)
    inner_triple = [OperatorTerm(4, 1, node) for node in (f1, g1, h1)]

    # certificate: conj of the inner test at right(s) and the outer test,
    # over the rerouted inner value name, at left(s)
    a_node = _subst_arg_node(inner.E.term.node, Base(_PAIR_RIGHT, (Proj(1),)))
    w0 = compose_terms(outer.E.term, inner_triple)
    w_node = _subst_arg_node(w0.node, Base(_PAIR_LEFT, (Proj(1),)))
    b_term = diagonalize(OperatorTerm(4, 1, w_node))
    cert = OperatorTerm(3, 1, Base(_CONJ, (a_node, b_term.node)))

    # value operators: outer value operators over the rerouted inner name,
    # with the outer parameter slot fed by left . e
    left_lift = OperatorTerm(4, 1, Base(_PAIR_LEFT, (Apply(4, Proj(1)),)))
    inners = inner_triple + [left_lift]

    def value_op(op: TermOperator) -> TermOperator:
        return TermOperator(compose_terms(op.term, inners))

    return ConditionalFn(
        1,
        TermOperator(cert),
        value_op(outer.F),
        value_op(outer.G),
        value_op(outer.H),
    )


def _compose_proc_path(outer: ConditionalFn, inner: ConditionalFn) -> ConditionalFn:
    def inner_value_at(fns: tuple[NatFun, ...], e: NatFun) -> tuple[NatFun, NatFun, NatFun]:
        shifted = fns + (_post_lift(right, e, "right.e"),)
        return (inner.F.apply(shifted), inner.G.apply(shifted), inner.H.apply(shifted))

    def build_cert(fns: tuple[NatFun, ...]) -> NatFun:
        inner_cert = inner.E.apply(fns)

        def ev(s: int) -> int:
            first = inner_cert(right(s))
            triple = inner_value_at(fns, NatFun.constant(s))
            second = outer.E.apply(triple)(left(s))
            return conj(first, second)

        return NatFun(ev, label="composed-certificate")

    def build_value(op: Operator) -> ProcOperator:
        def build(args: tuple[NatFun, ...]) -> NatFun:
            fns, e = args[:3], args[3]
            triple = inner_value_at(fns, e)
            return op.apply(triple + (_post_lift(left, e, "left.e"),))

        return ProcOperator(4, build, "composed-value")

    return ConditionalFn(
        1,
        ProcOperator(3, build_cert, "composed-certificate"),
        build_value(outer.F),
        build_value(outer.G),
        build_value(outer.H),
    )


# ---------------------------------------------------------------------------
# patching and localization
# ---------------------------------------------------------------------------


def patch_operator(anchor: NatFun, k: int) -> ProcOperator:
    """The unary operator replacing values below index k by the anchor's."""
    if k < 0:
        raise ValueError("patch cutoff must be a natural")
    return ProcOperator(
        1, lambda fns: NatFun.patched(anchor, k, fns[0]), f"patch<{k}"
    )


def patch_operator_mu_chain(anchor: NatFun, k: int) -> ProcOperator:
    """Same operator built by chaining single-point overrides.

    The empty patch is the identity and each step overrides one more
    index through ``mu``; evaluation agrees everywhere with
    ``patch_operator`` and exists as the term-language route to patching.
    """
    if k < 0:
        raise ValueError("patch cutoff must be a natural")

    def build(fns: tuple[NatFun, ...]) -> NatFun:
        result = fns[0]
        for j in range(k):
            result = NatFun(
                lambda t, _j=j, _inner=result: gadgets._mu_value(_j, anchor(_j), t, _inner(t)),
                label=f"mu-patch<{j + 1}",
            )
        return result

    return ProcOperator(1, build, f"mu-patch<{k}")


def _patch_term_node(slot: int, values: Sequence[int]) -> Node:
    # chained single-point overrides as a term over the given slot
    node: Node = Apply(slot, Proj(1))
    for j, value in enumerate(values):
        node = Base(CORE.mu(j, value), (Proj(1), node))
    return node


@dataclass(frozen=True)
class Neighborhood:
    """Finitely many exact interval constraints around an anchor name.

    A rational (or real) ``xi`` belongs when, for every ``t <= cutoff``,
    the anchor's index-t approximation is within 1/(t+1) of ``xi``.
    Membership for rationals is decided exactly.
    """

    cutoff: int
    anchor: tuple[tuple[int, int, int], ...]

    def contains(self, q: Fraction | int) -> bool:
        q = Fraction(q)
        for t, (x, y, z) in enumerate(self.anchor):
            if abs(Fraction(x - y, z + 1) - q) >= Fraction(1, t + 1):
                return False
        return True


def localize(
    fn: ConditionalFn, at: NameTriple, budget: int
) -> tuple[Neighborhood, UniformFn]:
    """Trade conditionality for locality around a named point.

    Finds the least certificate ``s0`` for the anchor name, instruments
    that certificate evaluation to get the largest queried index ``u``
    (a continuity modulus: the certificate cannot distinguish functions
    agreeing up to ``u``), and returns

    * the neighborhood cut out by the anchor's first ``u+1``
      approximations, and
    * a uniform function that patches every argument name below ``u+1``
      with the anchor and applies the original value operators at the
      frozen parameter ``s0``.

    For any point of the neighborhood, patched names still name it, so
    the frozen certificate stays valid and the output names the value.
    """
    if fn.n_args != 1:
        raise ArityMismatch("localization is defined for unary conditional functions")
    anchor_fns = (at.f, at.g, at.h)
    s0 = find_parameter(fn, [at], budget)

    wrapped, log = recording(anchor_fns)
    check = fn.E.apply(wrapped)(s0)
    if check != 0:
        raise AssertionError("certificate changed value under instrumentation")
    queried = [t for seen in log.values() for t in seen]
    u = max(queried) if queried else 0

    anchor_values = tuple((at.f(t), at.g(t), at.h(t)) for t in range(u + 1))
    hood = Neighborhood(u, anchor_values)

    if all(_is_term(op) for op in (fn.F, fn.G, fn.H)):
        patches = [
            OperatorTerm(3, 1, _patch_term_node(slot + 1, [v[slot] for v in anchor_values]))
            for slot in range(3)
        ]
        const_term = OperatorTerm(3, 1, Base(CORE.constant(s0), (Proj(1),)))
        inners = patches + [const_term]
        uniform = UniformFn(
            1,
            TermOperator(compose_terms(fn.F.term, inners)),
            TermOperator(compose_terms(fn.G.term, inners)),
            TermOperator(compose_terms(fn.H.term, inners)),
        )
        return hood, uniform

    p = patch_operator(at.f, u + 1)
    q = patch_operator(at.g, u + 1)
    r = patch_operator(at.h, u + 1)

    def build(op: Operator) -> ProcOperator:
        def build_fn(fns: tuple[NatFun, ...]) -> NatFun:
            patched = (
                p.apply(fns[0:1]),
                q.apply(fns[1:2]),
                r.apply(fns[2:3]),
                NatFun.constant(s0),
            )
            return op.apply(patched)

        return ProcOperator(3, build_fn, "localized")

    return hood, UniformFn(1, build(fn.F), build(fn.G), build(fn.H))


# ---------------------------------------------------------------------------
# gluing over a finite ball cover
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Ball:
    """Open max-norm ball with the uniform function valid on it."""

    center: tuple[Fraction, ...]
    radius: Fraction
    local: UniformFn

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", tuple(Fraction(c) for c in self.center))
        object.__setattr__(self, "radius", Fraction(self.radius))
        if self.radius <= 0:
            raise ValueError("ball radius must be positive")
        if len(self.center) != self.local.n_args:
            raise ArityMismatch("ball center dimension must match the local function")


@dataclass(frozen=True, eq=False)
class BallCover:
    """Finitely many balls plus the separation index k.

    The caller warrants that the balls cover the intended compact domain,
    that each local function computes the target on its ball, and that
    every domain point sits at depth at least 2/(k+1) inside some ball
    (``separation_violations`` spot-checks the latter on sample points).
    """

    balls: tuple[Ball, ...]
    separation: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "balls", tuple(self.balls))
        if not self.balls:
            raise ValueError("a cover needs at least one ball")
        if self.separation < 0:
            raise ValueError("separation index must be a natural")
        n = self.balls[0].local.n_args
        if any(b.local.n_args != n for b in self.balls):
            raise ArityMismatch("all local functions must share one arity")

    @property
    def n_args(self) -> int:
        return self.balls[0].local.n_args


def _cover_indicators(cover: BallCover) -> list[BaseFunction]:
    margin = Fraction(1, cover.separation + 1)
    return [
        gadgets.ball_indicator(ball.center, ball.radius - margin)
        for ball in cover.balls
    ]


def glue_compact(cover: BallCover) -> UniformFn:
    """One uniform function dispatching among the cover's local functions.

    At output index ``t`` the glued operator reads every argument name at
    the separation index ``k``, asks each ball's indicator whether those
    approximations certify membership with margin 1/(k+1), and emits the
    first passing ball's local output at ``t`` (a constant-zero name if
    none passes).  With the warranted separation, some ball always
    certifies and the point provably lies inside every certifying ball.
    """
    k = cover.separation
    n = cover.n_args
    indicators = _cover_indicators(cover)
    locals_ = [ball.local for ball in cover.balls]

    if all(
        _is_term(op) for loc in locals_ for op in (loc.F, loc.G, loc.H)
    ):
        const_k = OperatorTerm(3 * n, 1, Base(CORE.constant(k), (Proj(1),)))
        probes = tuple(
            Apply(i, const_k.node) for i in range(1, 3 * n + 1)
        )
        selector = CORE.delta(len(cover.balls))
        zero_node = Base(CORE.constant(0), (Proj(1),))

        def glued(component: str) -> TermOperator:
            subs: list[Node] = []
            for indicator, loc in zip(indicators, locals_):
                subs.append(Base(indicator, probes))
                subs.append(getattr(loc, component).term.node)
            subs.append(zero_node)
            return TermOperator(OperatorTerm(3 * n, 1, Base(selector, tuple(subs))))

        return UniformFn(n, glued("F"), glued("G"), glued("H"))

    def build(component: str) -> ProcOperator:
        def build_fn(fns: tuple[NatFun, ...]) -> NatFun:
            branch = [getattr(loc, component).apply(fns) for loc in locals_]

            def ev(t: int) -> int:
                probes = [fn(k) for fn in fns]
                args: list[int] = []
                for indicator, out in zip(indicators, branch):
                    args.append(indicator.fn(*probes))
                    args.append(out(t))
                args.append(0)
                return gadgets._delta_k_value(len(branch), args)

            return NatFun(ev, label="glued")

        return ProcOperator(3 * n, build_fn, "glued")

    return UniformFn(n, build("F"), build("G"), build("H"))


def dispatch_index(cover: BallCover, names: Sequence[NameTriple]) -> int | None:
    """Which ball (1-based) the glued function would source from, if any."""
    if len(names) != cover.n_args:
        raise ArityMismatch(f"{cover.n_args} argument names expected")
    k = cover.separation
    probes = [fn(k) for name in names for fn in name]
    for i, indicator in enumerate(_cover_indicators(cover), start=1):
        if indicator.fn(*probes) == 0:
            return i
    return None


def separation_violations(
    cover: BallCover, points: Sequence[Sequence[Fraction | int]]
) -> list[tuple[Fraction, ...]]:
    """Sample points whose depth inside every ball is below 2/(k+1).

    Exact rational arithmetic; an empty result on a dense enough sample
    is evidence (not proof) for the warranted separation.
    """
    needed = Fraction(2, cover.separation + 1)
    bad: list[tuple[Fraction, ...]] = []
    for point in points:
        p = tuple(Fraction(c) for c in point)
        if len(p) != cover.n_args:
            raise ArityMismatch("sample point dimension mismatch")
        depth = max(
            ball.radius - max(abs(a - b) for a, b in zip(p, ball.center))
            for ball in cover.balls
        )
        if depth < needed:
            bad.append(p)
    return bad

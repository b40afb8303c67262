"""A little language of substitutional operator terms.

An *operator term* denotes a mapping that takes ``k`` functions on the
naturals and returns an ``m``-argument function on the naturals.  Terms
are built from exactly three node shapes:

``Proj(i)``
    the i-th numeric argument (1-based, ``i <= m``);
``Apply(i, sub)``
    apply the i-th function argument (1-based, ``i <= k``) to the value
    of ``sub``;
``Base(fn, subs)``
    apply a fixed base function to the values of ``subs``.

Terms are immutable; every transformation below is a pure structural
rewrite returning a fresh term, and each rewrite is justified by a
pointwise evaluation identity that the test-suite checks against
independent evaluation.  The key rewrites:

* ``compose_terms`` -- substitution: plug k inner operators into an outer
  operator's function slots.
* ``diagonalize`` -- remove the last function slot by feeding it the
  constant function of the numeric argument:
  ``G(f_1..f_k)(n) = F(f_1..f_k, const_n)(n)``.
* ``curry`` / ``uncurry`` -- trade the leading numeric argument against a
  trailing constant function slot:
  ``F(f_1..f_k)(s, t_1..t_m) = G(f_1..f_k, const_s)(t_1..t_m)``.
* ``representable_lift`` -- the pointwise lift of a base function:
  ``lift(f)(f_1..f_k)(n) = f(f_1(n), ..., f_k(n))``.

Evaluation only ever *reads* the function arguments at finitely many
points; ``eval_instrumented`` records that support, and
``support_bound`` computes the structural bound on its size (projections
contribute 0, each application 1 plus its subterm, base nodes the sum of
theirs).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence, Union

from .naming import NatFun, recording
from .sexpr import SexprError, parse_sexpr

__all__ = [
    "Apply",
    "ArityMismatch",
    "Base",
    "BaseFunction",
    "OperatorTerm",
    "Proj",
    "SupportTrace",
    "compose_terms",
    "curry",
    "diagonalize",
    "eval_instrumented",
    "eval_term",
    "multi_curry",
    "parse_term",
    "print_term",
    "representable_lift",
    "support_bound",
    "uncurry",
]


class ArityMismatch(ValueError):
    pass


@dataclass(frozen=True)
class BaseFunction:
    """A named, total, deterministic function on the naturals.

    Equality ignores the callable itself: two entries with the same name
    and arity are the same base function as far as terms are concerned,
    which is what makes the printed form round-trip.
    """

    name: str
    arity: int
    fn: Callable[..., int] = field(compare=False)

    def __call__(self, *args: int) -> int:
        return self.fn(*args)

    def __repr__(self) -> str:
        return f"BaseFunction({self.name}/{self.arity})"


@dataclass(frozen=True)
class Proj:
    index: int


@dataclass(frozen=True)
class Apply:
    index: int
    sub: "Node"


@dataclass(frozen=True)
class Base:
    fn: BaseFunction
    subs: tuple["Node", ...]


Node = Union[Proj, Apply, Base]


@dataclass(frozen=True)
class OperatorTerm:
    """A term together with its arities: k function slots, m numeric slots."""

    k: int
    m: int
    node: Node

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ArityMismatch("function arity k must be >= 0")
        if self.m < 1:
            raise ArityMismatch("numeric arity m must be >= 1")
        _validate(self.node, self.k, self.m)


def _validate(node: Node, k: int, m: int) -> None:
    if isinstance(node, Proj):
        if not 1 <= node.index <= m:
            raise ArityMismatch(f"projection index {node.index} outside 1..{m}")
    elif isinstance(node, Apply):
        if not 1 <= node.index <= k:
            raise ArityMismatch(f"function index {node.index} outside 1..{k}")
        _validate(node.sub, k, m)
    elif isinstance(node, Base):
        if len(node.subs) != node.fn.arity:
            raise ArityMismatch(
                f"base {node.fn.name} wants {node.fn.arity} arguments, got {len(node.subs)}"
            )
        for sub in node.subs:
            _validate(sub, k, m)
    else:
        raise TypeError(f"not a term node: {node!r}")


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def eval_term(term: OperatorTerm, fns: Sequence[NatFun], args: Sequence[int]) -> int:
    """Evaluate ``term`` at function arguments ``fns`` and numeric ``args``."""
    if len(fns) != term.k:
        raise ArityMismatch(f"term wants {term.k} functions, got {len(fns)}")
    if len(args) != term.m:
        raise ArityMismatch(f"term wants {term.m} numeric arguments, got {len(args)}")

    def ev(node: Node) -> int:
        if isinstance(node, Proj):
            return args[node.index - 1]
        if isinstance(node, Apply):
            return fns[node.index - 1](ev(node.sub))
        return node.fn.fn(*[ev(sub) for sub in node.subs])

    return ev(term.node)


@dataclass(frozen=True)
class SupportTrace:
    """Which (function slot, argument) pairs an evaluation actually read."""

    queried: Mapping[int, frozenset[int]]

    def size(self) -> int:
        return sum(len(v) for v in self.queried.values())

    def max_index(self) -> int | None:
        indices = [t for v in self.queried.values() for t in v]
        return max(indices) if indices else None

    def pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset((i, t) for i, v in self.queried.items() for t in v)


def eval_instrumented(
    term: OperatorTerm, fns: Sequence[NatFun], args: Sequence[int]
) -> tuple[int, SupportTrace]:
    """Evaluate and record the support: every function query made."""
    wrapped, log = recording(fns)
    value = eval_term(term, wrapped, args)
    trace = SupportTrace({i: frozenset(seen) for i, seen in log.items()})
    return value, trace


def support_bound(term: OperatorTerm) -> int:
    """Structural bound on the number of function queries of any evaluation.

    Independent of both the function and numeric arguments, which is what
    makes term-denoted operators strongly continuous: the support of an
    evaluation never exceeds this count.
    """
    if term.m != 1:
        raise ArityMismatch("support_bound is defined for single-argument terms")

    def bound(node: Node) -> int:
        if isinstance(node, Proj):
            return 0
        if isinstance(node, Apply):
            return 1 + bound(node.sub)
        return sum(bound(sub) for sub in node.subs)

    return bound(term.node)


# ---------------------------------------------------------------------------
# structural rewrites
# ---------------------------------------------------------------------------


def _subst_numeric(node: Node, replacement: Node) -> Node:
    # replace the (single) numeric argument -- every Proj(1) -- by a node
    if isinstance(node, Proj):
        return replacement
    if isinstance(node, Apply):
        return Apply(node.index, _subst_numeric(node.sub, replacement))
    return Base(node.fn, tuple(_subst_numeric(sub, replacement) for sub in node.subs))


def compose_terms(
    outer: OperatorTerm,
    inners: Sequence[OperatorTerm],
    result_arity: int | None = None,
) -> OperatorTerm:
    """Substitute ``inners`` into ``outer``'s function slots.

    All terms are single-numeric-argument.  The result ``H`` satisfies
    ``H(g_1..g_l)(n) = outer(inners_1(g_1..g_l), ..., inners_k(g_1..g_l))(n)``
    where ``l`` is the shared function arity of the inners.
    """
    if outer.m != 1 or any(inner.m != 1 for inner in inners):
        raise ArityMismatch("compose_terms needs single-argument terms")
    if len(inners) != outer.k:
        raise ArityMismatch(f"outer wants {outer.k} inners, got {len(inners)}")
    if inners:
        l = inners[0].k
        if any(inner.k != l for inner in inners):
            raise ArityMismatch("inner terms must share one function arity")
        if result_arity is not None and result_arity != l:
            raise ArityMismatch("result_arity disagrees with the inner terms")
    elif result_arity is None:
        raise ArityMismatch("composing a closed term needs an explicit result_arity")
    else:
        l = result_arity

    def graft(node: Node) -> Node:
        if isinstance(node, Proj):
            return node
        if isinstance(node, Apply):
            # f_i(sub) becomes inners[i-1] evaluated at the rewritten sub
            return _subst_numeric(inners[node.index - 1].node, graft(node.sub))
        return Base(node.fn, tuple(graft(sub) for sub in node.subs))

    return OperatorTerm(l, 1, graft(outer.node))


def diagonalize(term: OperatorTerm) -> OperatorTerm:
    """Feed the last function slot the constant function of the argument.

    The result ``G`` on ``k`` functions satisfies
    ``G(f_1..f_k)(n) = term(f_1..f_k, const_n)(n)``: applications of slot
    ``k+1`` collapse to the numeric argument itself, everything else is
    untouched.
    """
    if term.m != 1:
        raise ArityMismatch("diagonalize needs a single-argument term")
    if term.k < 1:
        raise ArityMismatch("diagonalize needs at least one function slot")
    last = term.k

    def walk(node: Node) -> Node:
        if isinstance(node, Proj):
            return node
        if isinstance(node, Apply):
            if node.index == last:
                # const_n applied to anything is n
                return Proj(1)
            return Apply(node.index, walk(node.sub))
        return Base(node.fn, tuple(walk(sub) for sub in node.subs))

    return OperatorTerm(term.k - 1, 1, walk(term.node))


def curry(term: OperatorTerm) -> OperatorTerm:
    """Move the leading numeric argument into a trailing constant slot.

    For a term on ``k`` functions and ``m+1`` numerics the result ``G``
    on ``k+1`` functions and ``m`` numerics satisfies
    ``term(f_1..f_k)(s, t_1..t_m) = G(f_1..f_k, const_s)(t_1..t_m)``.
    """
    if term.m < 2:
        raise ArityMismatch("curry needs at least two numeric arguments")
    new_slot = term.k + 1

    def walk(node: Node) -> Node:
        if isinstance(node, Proj):
            if node.index == 1:
                # the old first argument is now delivered by the constant
                # function in the new slot, probed at any point
                return Apply(new_slot, Proj(1))
            return Proj(node.index - 1)
        if isinstance(node, Apply):
            return Apply(node.index, walk(node.sub))
        return Base(node.fn, tuple(walk(sub) for sub in node.subs))

    return OperatorTerm(term.k + 1, term.m - 1, walk(term.node))


def uncurry(term: OperatorTerm) -> OperatorTerm:
    """Inverse direction: turn the last function slot into a leading numeric.

    For a term on ``k+1`` functions and ``m`` numerics the result ``F``
    on ``k`` functions and ``m+1`` numerics satisfies
    ``F(f_1..f_k)(s, t_1..t_m) = term(f_1..f_k, const_s)(t_1..t_m)``.
    """
    if term.k < 1:
        raise ArityMismatch("uncurry needs at least one function slot")
    last = term.k

    def walk(node: Node) -> Node:
        if isinstance(node, Proj):
            return Proj(node.index + 1)
        if isinstance(node, Apply):
            if node.index == last:
                # const_s applied to anything is s, the new first argument
                return Proj(1)
            return Apply(node.index, walk(node.sub))
        return Base(node.fn, tuple(walk(sub) for sub in node.subs))

    return OperatorTerm(term.k - 1, term.m + 1, walk(term.node))


def multi_curry(term: OperatorTerm) -> OperatorTerm:
    """Curry until a single numeric argument remains.

    A term on ``k`` functions and ``m+1`` numerics becomes one on ``k+m``
    functions and one numeric, satisfying
    ``term(f_1..f_k)(s_1..s_m, t) = result(f_1..f_k, const_s1..const_sm)(t)``.
    """
    while term.m > 1:
        term = curry(term)
    return term


def representable_lift(fn: BaseFunction) -> OperatorTerm:
    """The pointwise lift of a base function.

    ``lift(f)(f_1..f_k)(n) = f(f_1(n), ..., f_k(n))``.
    """
    subs = tuple(Apply(i, Proj(1)) for i in range(1, fn.arity + 1))
    return OperatorTerm(fn.arity, 1, Base(fn, subs))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def print_term(term: OperatorTerm) -> str:
    """Render as an s-expression: (proj i), (apply i SUB), (base NAME SUB...)."""

    def render(node: Node) -> str:
        if isinstance(node, Proj):
            return f"(proj {node.index})"
        if isinstance(node, Apply):
            return f"(apply {node.index} {render(node.sub)})"
        inner = " ".join(render(sub) for sub in node.subs)
        return f"(base {node.fn.name} {inner})" if inner else f"(base {node.fn.name})"

    return render(term.node)


def parse_term(
    text: str,
    k: int,
    m: int,
    resolve: Callable[[str], BaseFunction],
) -> OperatorTerm:
    """Parse the s-expression form back into a term.

    ``resolve`` maps base-function names to their entries (typically a
    gadget registry lookup); arities are re-validated on construction, so
    a printed term parses back to an equal one.
    """
    expr = parse_sexpr(text)

    def build(node) -> Node:
        if not isinstance(node, list) or not node:
            raise SexprError(f"expected a (proj|apply|base ...) form, got {node!r}")
        tag = node[0]
        if tag == "proj":
            if len(node) != 2:
                raise SexprError("(proj i) takes exactly one index")
            return Proj(_nat(node[1]))
        if tag == "apply":
            if len(node) != 3:
                raise SexprError("(apply i SUB) takes an index and a subterm")
            return Apply(_nat(node[1]), build(node[2]))
        if tag == "base":
            if len(node) < 2 or not isinstance(node[1], str):
                raise SexprError("(base NAME SUB...) needs a function name")
            try:
                fn = resolve(node[1])
            except KeyError:
                raise SexprError(f"unknown base function {node[1]!r}") from None
            return Base(fn, tuple(build(sub) for sub in node[2:]))
        raise SexprError(f"unknown term tag {tag!r}")

    return OperatorTerm(k, m, build(expr))


def _nat(token) -> int:
    if isinstance(token, str):
        try:
            value = int(token)
        except ValueError:
            value = -1
        if value >= 0:
            return value
    raise SexprError(f"expected a natural number, got {token!r}")

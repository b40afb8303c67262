"""Arithmetic gadget functions and the registry that names them.

Everything here is a small total function on the naturals, packaged as a
named ``BaseFunction`` so operator terms can mention it.  The library has
three layers:

* primitives: successor, truncated subtraction, multiplication, the
  three-way selector ``delta_1`` and the pairing functions;
* constructed families, built from the primitives by fixed recursions:
  ``delta_k`` (first-zero dispatch), ``mu`` (single-point override),
  ``gamma`` (sum comparison by repeated truncated subtraction), and from
  ``gamma`` the sign tests ``lt``/``gt`` and the ``ball_indicator``;
* the ``GadgetRegistry`` mapping names to entries, plus ``decency_check``
  which probes a registry for the behavior the rest of the package
  assumes (selector, successor and truncated subtraction present and
  correct, and the term-language closure witnesses holding over it).

The comparison family is deliberately division-free: ``lt(a)`` decides
``(x - y) / (z + 1) < a`` using only truncated subtraction and case
selection, so the test lives inside the term language; exact rational
arithmetic appears only in oracles on the testing side.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from random import Random
from typing import Callable, Iterable, Sequence

from . import terms
from .naming import NatFun
from .terms import Apply, Base, BaseFunction, OperatorTerm, Proj

__all__ = [
    "GadgetRegistry",
    "DecencyCheck",
    "DecencyReport",
    "ball_indicator",
    "conj",
    "decency_check",
    "default_registry",
    "delta_1",
    "delta_k",
    "derive_constant",
    "gamma",
    "gt",
    "left",
    "lt",
    "monus",
    "mu",
    "pair",
    "right",
    "succ",
    "tuple_pack",
    "tuple_part",
]


# ---------------------------------------------------------------------------
# primitives
# ---------------------------------------------------------------------------


def succ(x: int) -> int:
    return x + 1


def monus(x: int, y: int) -> int:
    """Truncated subtraction: max(x - y, 0)."""
    return x - y if x > y else 0


def delta_1(x: int, y: int, z: int) -> int:
    """y if x == 0 else z."""
    return y if x == 0 else z


def pair(u: int, v: int) -> int:
    """Diagonal pairing: (u+v)(u+v+1)/2 + u.  Bijective on pairs."""
    s = u + v
    return s * (s + 1) // 2 + u


def left(n: int) -> int:
    w = (isqrt(8 * n + 1) - 1) // 2
    return n - w * (w + 1) // 2


def right(n: int) -> int:
    w = (isqrt(8 * n + 1) - 1) // 2
    return w - (n - w * (w + 1) // 2)


def conj(u: int, v: int) -> int:
    """Zero exactly when both arguments are zero."""
    return u + v


def tuple_pack(values: Sequence[int]) -> int:
    """Right-nested pairing of a nonempty tuple; a single value codes itself."""
    if not values:
        raise ValueError("tuple_pack needs at least one value")
    code = values[-1]
    for v in reversed(values[:-1]):
        code = pair(v, code)
    return code


def tuple_part(k: int, i: int, n: int) -> int:
    """The i-th (1-based) component of a k-tuple code."""
    if not 1 <= i <= k:
        raise ValueError(f"component {i} outside 1..{k}")
    if k == 1:
        return n
    for _ in range(i - 1):
        n = right(n)
    return left(n) if i < k else n


# ---------------------------------------------------------------------------
# constructed families
# ---------------------------------------------------------------------------


def _delta_k_value(k: int, args: Sequence[int]) -> int:
    # delta_0(z) = z; delta_{K+1}(x1,y1,rest) = delta_1(x1, y1, delta_K(rest))
    if k == 0:
        return args[0]
    return delta_1(args[0], args[1], _delta_k_value(k - 1, args[2:]))


def _mu_value(k: int, c: int, x: int, y: int) -> int:
    return c if x == k else y


def _gamma_value(b: int, c: int, args: Sequence[int]) -> int:
    """Sum comparison by the truncated-subtraction recursion.

    Positive exactly when x_1 + .. + x_b > y_1 + .. + y_c.  The recursion
    peels one argument per step; the selector branches are evaluated
    lazily, which changes nothing about the value and keeps an
    evaluation linear in b + c.
    """
    xs, ys = args[:b], args[b:]
    if b == 1 and c == 1:
        return monus(xs[0], ys[0])
    if b == 1:
        # fold the last y into the single x
        return _gamma_value(1, c - 1, (monus(xs[0], ys[-1]),) + tuple(ys[:-1]))
    if c == 1:
        # single y left: if the last x already exceeds it the total does too,
        # otherwise shrink y by that x and drop it
        guard = monus(xs[-1], ys[0])
        if guard == 0:
            return _gamma_value(b - 1, 1, tuple(xs[:-1]) + (monus(ys[0], xs[-1]),))
        return guard
    guard = monus(xs[-1], ys[-1])
    if guard == 0:
        return _gamma_value(
            b - 1, c, tuple(xs[:-1]) + tuple(ys[:-1]) + (monus(ys[-1], xs[-1]),)
        )
    return _gamma_value(b, c - 1, tuple(xs[:-1]) + (guard,) + tuple(ys[:-1]))


def delta_k(k: int) -> BaseFunction:
    """First-zero dispatch on k guard/value pairs with a default.

    ``delta_k(k)(x_1, y_1, ..., x_k, y_k, z)`` is the first ``y_i`` whose
    guard ``x_i`` is zero, or ``z`` when no guard is.
    """
    if k < 0:
        raise ValueError("k must be a natural")

    def fn(*args: int) -> int:
        return _delta_k_value(k, args)

    return BaseFunction(f"delta_{k}", 2 * k + 1, fn)


def mu(k: int, c: int) -> BaseFunction:
    """Override at one point: value c when x == k, else y."""
    if k < 0 or c < 0:
        raise ValueError("mu parameters must be naturals")
    return BaseFunction(f"mu_{k}_{c}", 2, lambda x, y: _mu_value(k, c, x, y))


def gamma(b: int, c: int) -> BaseFunction:
    """Positive exactly when the first b arguments out-sum the last c."""
    if b < 1 or c < 1:
        raise ValueError("gamma needs b, c >= 1")

    def fn(*args: int) -> int:
        return _gamma_value(b, c, args)

    return BaseFunction(f"gamma_{b}_{c}", b + c, fn)


def lt(a: Fraction | int) -> BaseFunction:
    """Sign test: positive exactly when (x - y) / (z + 1) < a.

    Realized without division.  For a = 0 the test is y - x truncated;
    for positive a = b/c it compares b copies of z+1 against c copies of
    x - y (truncated), and for negative a = -c/b the mirror image.
    """
    a = Fraction(a)
    if a == 0:
        fn: Callable[..., int] = lambda x, y, z: monus(y, x)
    elif a > 0:
        b, c = a.numerator, a.denominator

        def fn(x: int, y: int, z: int, _b: int = b, _c: int = c) -> int:
            return _gamma_value(_b, _c, (z + 1,) * _b + (monus(x, y),) * _c)

    else:
        c, b = -a.numerator, a.denominator

        def fn(x: int, y: int, z: int, _b: int = b, _c: int = c) -> int:
            return _gamma_value(_b, _c, (monus(y, x),) * _b + (z + 1,) * _c)

    return BaseFunction(f"lt_{a}", 3, fn)


def gt(a: Fraction | int) -> BaseFunction:
    """Sign test: positive exactly when (x - y) / (z + 1) > a."""
    a = Fraction(a)
    mirror = lt(-a)
    return BaseFunction(f"gt_{a}", 3, lambda x, y, z: mirror.fn(y, x, z))


def ball_indicator(centers: Sequence[Fraction | int], radius: Fraction | int) -> BaseFunction:
    """Zero exactly inside an open max-norm ball around rational centers.

    The argument list is one (x, y, z) triple per coordinate; coordinate
    j must satisfy |(x_j - y_j)/(z_j + 1) - centers[j]| < radius for the
    result to be 0, otherwise it is 1.
    """
    if not centers:
        raise ValueError("ball_indicator needs at least one coordinate")
    q = Fraction(radius)
    tests = [
        (gt(Fraction(a) - q).fn, lt(Fraction(a) + q).fn) for a in map(Fraction, centers)
    ]

    def fn(*args: int) -> int:
        flags = []
        for j, (above, below) in enumerate(tests):
            x, y, z = args[3 * j : 3 * j + 3]
            g = above(x, y, z)
            # delta_1(g, g, below(...)): zero when either side test fails
            flags.append(g if g == 0 else below(x, y, z))
        return _delta_k_value(len(flags), [v for u in flags for v in (u, 1)] + [0])

    name = "ball_" + "_".join(str(Fraction(a)) for a in centers) + f"_r_{q}"
    return BaseFunction(name, 3 * len(tests), fn)


def derive_constant(c: int) -> BaseFunction:
    """The constant function built from successor and truncated subtraction.

    ``x - x`` is zero, and c successors on top of it give c; the result
    agrees with a directly-defined constant everywhere.
    """
    if c < 0:
        raise ValueError("constant must be a natural")

    def fn(x: int) -> int:
        value = monus(x, x)
        for _ in range(c):
            value = succ(value)
        return value

    return BaseFunction(f"derived_const_{c}", 1, fn)


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------


def _core_entries() -> dict[str, BaseFunction]:
    return {
        fn.name: fn
        for fn in (
            BaseFunction("succ", 1, succ),
            BaseFunction("monus", 2, monus),
            BaseFunction("mul", 2, lambda x, y: x * y),
            BaseFunction("delta_1", 3, delta_1),
            BaseFunction("conj", 2, conj),
            BaseFunction("pair", 2, pair),
            BaseFunction("left", 1, left),
            BaseFunction("right", 1, right),
        )
    }


class GadgetRegistry:
    """Named base functions, with memoized on-demand construction.

    Core entries are fixed at construction; the family constructors
    (``delta``, ``constant``, ``mu``, ``gamma``, ``lt``, ``gt``,
    ``ball``) build on demand, cache by name, and are observationally
    pure, so the registry stays a stable naming environment for terms.
    """

    def __init__(self, entries: dict[str, BaseFunction] | None = None):
        self._entries: dict[str, BaseFunction] = dict(
            _core_entries() if entries is None else entries
        )

    def names(self) -> list[str]:
        return sorted(self._entries)

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def get(self, name: str) -> BaseFunction:
        try:
            return self._entries[name]
        except KeyError:
            raise KeyError(f"no gadget named {name!r}") from None

    def _remember(self, fn: BaseFunction) -> BaseFunction:
        return self._entries.setdefault(fn.name, fn)

    def delta(self, k: int) -> BaseFunction:
        if k == 1 and "delta_1" in self._entries:
            return self._entries["delta_1"]
        return self._remember(delta_k(k))

    def constant(self, c: int) -> BaseFunction:
        if c < 0:
            raise ValueError("constant must be a natural")
        return self._remember(BaseFunction(f"const_{c}", 1, lambda _x, _c=c: _c))

    def mu(self, k: int, c: int) -> BaseFunction:
        return self._remember(mu(k, c))

    def gamma(self, b: int, c: int) -> BaseFunction:
        return self._remember(gamma(b, c))

    def lt(self, a: Fraction | int) -> BaseFunction:
        return self._remember(lt(a))

    def gt(self, a: Fraction | int) -> BaseFunction:
        return self._remember(gt(a))

    def ball(self, centers: Sequence[Fraction | int], radius: Fraction | int) -> BaseFunction:
        return self._remember(ball_indicator(centers, radius))

    def resolve(self, name: str) -> BaseFunction:
        """Look a name up, constructing family members on demand.

        Understands the generated spellings: ``delta_K``, ``const_C``,
        ``mu_K_C``, ``gamma_B_C``, ``lt_A`` and ``gt_A`` (A a rational).
        """
        if name in self._entries:
            return self._entries[name]
        parts = name.split("_")
        try:
            if parts[0] == "delta" and len(parts) == 2:
                return self.delta(int(parts[1]))
            if parts[0] == "const" and len(parts) == 2:
                return self.constant(int(parts[1]))
            if parts[0] == "mu" and len(parts) == 3:
                return self.mu(int(parts[1]), int(parts[2]))
            if parts[0] == "gamma" and len(parts) == 3:
                return self.gamma(int(parts[1]), int(parts[2]))
            if parts[0] in ("lt", "gt") and len(parts) == 2:
                a = Fraction(parts[1])
                return self.lt(a) if parts[0] == "lt" else self.gt(a)
        except (ValueError, ZeroDivisionError):
            pass
        raise KeyError(f"no gadget named {name!r}")

    def without(self, name: str) -> "GadgetRegistry":
        entries = dict(self._entries)
        entries.pop(name, None)
        return GadgetRegistry(entries)

    def override(self, name: str, fn: Callable[..., int]) -> "GadgetRegistry":
        entries = dict(self._entries)
        old = self.get(name)
        entries[name] = BaseFunction(old.name, old.arity, fn)
        return GadgetRegistry(entries)


def default_registry() -> GadgetRegistry:
    return GadgetRegistry()


# the library's own naming environment for term construction
CORE = default_registry()


# ---------------------------------------------------------------------------
# decency check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecencyCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class DecencyReport:
    checks: tuple[DecencyCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> Iterable[str]:
        for c in self.checks:
            status = "ok" if c.passed else "FAIL"
            yield f"{c.name}: {status}" + (f" ({c.detail})" if c.detail else "")


def decency_check(registry: GadgetRegistry) -> DecencyReport:
    """Probe a registry for the behavior the term machinery relies on.

    Presence and small-domain correctness of successor, truncated
    subtraction and the selector, then the four closure witnesses of the
    term language (slot projection, chained application, substitution,
    diagonal collapse) evaluated over sampled functions using terms built
    from the registry's own entries.
    """
    checks: list[DecencyCheck] = []

    def record(name: str, passed: bool, detail: str = "") -> bool:
        checks.append(DecencyCheck(name, passed, detail))
        return passed

    present = True
    for name in ("succ", "monus", "delta_1"):
        if name not in registry:
            record(f"entry {name}", False, "missing")
            present = False
        else:
            record(f"entry {name}", True)
    if not present:
        return DecencyReport(tuple(checks))

    s, sub, sel = registry.get("succ"), registry.get("monus"), registry.get("delta_1")

    bad = next((x for x in range(60) if s.fn(x) != x + 1), None)
    record("succ behavior", bad is None, "" if bad is None else f"succ({bad})")

    bad_pair = next(
        (
            (x, y)
            for x in range(21)
            for y in range(21)
            if sub.fn(x, y) != max(x - y, 0)
        ),
        None,
    )
    record(
        "monus behavior",
        bad_pair is None,
        "" if bad_pair is None else f"monus{bad_pair} != {max(bad_pair[0]-bad_pair[1],0)}",
    )

    bad_sel = next(
        (
            (x, y, z)
            for x in range(4)
            for y in range(4)
            for z in range(4)
            if sel.fn(x, y, z) != (y if x == 0 else z)
        ),
        None,
    )
    record("delta_1 behavior", bad_sel is None, "" if bad_sel is None else str(bad_sel))

    if not all(c.passed for c in checks):
        return DecencyReport(tuple(checks))

    # closure witnesses, evaluated over sampled functions
    rng = Random(20210)
    fns = [
        NatFun(lambda t, a=rng.randrange(1, 5), b=rng.randrange(7): a * t + b)
        for _ in range(3)
    ]
    samples = [rng.randrange(40) for _ in range(12)]

    proj_term = OperatorTerm(2, 1, Apply(2, Proj(1)))
    record(
        "projection witness",
        all(_eval_ok(proj_term, fns[:2], n, fns[1](n)) for n in samples),
    )

    chain_term = OperatorTerm(2, 1, Apply(1, Apply(2, Proj(1))))
    record(
        "composition witness",
        all(_eval_ok(chain_term, fns[:2], n, fns[0](fns[1](n))) for n in samples),
    )

    outer = OperatorTerm(1, 1, Base(s, (Apply(1, Proj(1)),)))
    inner = OperatorTerm(2, 1, Base(sub, (Apply(1, Proj(1)), Apply(2, Proj(1)))))
    substituted = terms.compose_terms(outer, [inner])
    record(
        "substitution witness",
        all(
            _eval_ok(substituted, fns[:2], n, terms.eval_term(outer, [_as_fn(inner, fns[:2])], [n]))
            for n in samples
        ),
    )

    diag_input = OperatorTerm(2, 1, Base(sub, (Apply(1, Proj(1)), Apply(2, Proj(1)))))
    diag = terms.diagonalize(diag_input)
    record(
        "diagonalization witness",
        all(
            terms.eval_term(diag, fns[:1], [n])
            == terms.eval_term(diag_input, [fns[0], NatFun.constant(n)], [n])
            for n in samples
        ),
    )

    return DecencyReport(tuple(checks))


def _eval_ok(term: OperatorTerm, fns: Sequence[NatFun], n: int, expected: int) -> bool:
    return terms.eval_term(term, fns, [n]) == expected


def _as_fn(term: OperatorTerm, fns: Sequence[NatFun]) -> NatFun:
    return NatFun(lambda n: terms.eval_term(term, fns, [n]), label="term-closure")

"""Registered elementary real functions over name triples.

The uniform entries (negate, add, sub, mul, abs, min, max and the
rational constants) all follow one recipe: at output index ``t`` query
every argument name at a fine enough index, combine the exact rational
approximations, and re-encode the exact result as a canonical triple
component.  The error budget is the standard split -- a binary function
reads its arguments at ``2t+1``, so two input errors below ``1/(2t+2)``
sum to under ``1/(t+1)``; multiplication additionally rescales the index
by a magnitude bound read off the index-0 approximations.

Reciprocal is the genuinely conditional entry: its certificate at
parameter ``s`` checks ``|approx(input, s)| > 2/(s+1)`` -- realized with
the ``gt`` comparison gadget on a rescaled triple -- which pins the named
point away from zero and fixes the output's precision schedule.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterator, Sequence

from . import gadgets
from .naming import (
    NameTriple,
    NatFun,
    approx,
    format_rational,
    parse_rational,
    rational_name,
    validate_name,
)
from .realfns import (
    ConditionalFn,
    ProcOperator,
    UniformFn,
    apply_conditional,
    apply_uniform,
)

__all__ = [
    "DEFAULT_GRID",
    "Entry",
    "FunctionRegistry",
    "GridCheck",
    "OutsideDomain",
    "RegistryReport",
    "constant_fn",
    "default_functions",
    "register_builtins",
    "registry_validate",
    "uniform_from_rule",
]


class OutsideDomain(ValueError):
    """The requested point is outside the function's domain."""


def _encode(q: Fraction) -> tuple[int, int, int]:
    # canonical triple values for an exact rational p/d
    p, d = q.numerator, q.denominator
    return (p if p > 0 else 0, -p if p < 0 else 0, d - 1)


Schedule = Callable[[int, Sequence[NameTriple]], int]


def uniform_from_rule(
    n_args: int,
    rule: Callable[..., Fraction],
    schedule: Schedule,
    name: str,
) -> UniformFn:
    """A uniform function computed by exact rational arithmetic.

    At output index ``t`` every argument name is queried at
    ``schedule(t, names)``, ``rule`` combines the exact approximations,
    and the exact rational result is re-encoded canonically.  The caller
    owns the error analysis: the schedule must be fine enough that the
    rule's output is within ``1/(t+1)`` of the true value.
    """

    def component(pick: int) -> ProcOperator:
        def build(fns: tuple[NatFun, ...]) -> NatFun:
            names = [NameTriple(*fns[3 * j : 3 * j + 3]) for j in range(n_args)]

            def ev(t: int) -> int:
                tau = schedule(t, names)
                value = Fraction(rule(*(approx(nm, tau) for nm in names)))
                return _encode(value)[pick]

            return NatFun(ev, label=f"{name}.{'fgh'[pick]}")

        return ProcOperator(3 * n_args, build, f"{name}-{'FGH'[pick]}")

    return UniformFn(n_args, component(0), component(1), component(2))


def _at_t(t: int, _names: Sequence[NameTriple]) -> int:
    return t


def _twice_plus_one(t: int, _names: Sequence[NameTriple]) -> int:
    return 2 * t + 1


def _product_schedule(t: int, names: Sequence[NameTriple]) -> int:
    # |ab - a'b'| <= |a||b - b'| + |b'||a - a'| < (2M+1)/(tau+1) where M
    # bounds |a'| + 1 and |b'| + 1 via the index-0 approximations; making
    # tau + 1 = ceil((2M+1)(t+1)) brings the output under 1/(t+1).
    m = max(abs(approx(nm, 0)) for nm in names) + 1
    need = (2 * m + 1) * (t + 1)
    return -(-need.numerator // need.denominator) - 1


def constant_fn(q: Fraction | int) -> UniformFn:
    """The zero-argument uniform function naming the rational exactly."""
    value = Fraction(q)
    return uniform_from_rule(
        0, lambda: value, _at_t, f"const_{format_rational(value)}"
    )


def _recip_certificate() -> ProcOperator:
    """Zero at ``s`` exactly when the input's approximation there exceeds
    ``2/(s+1)`` in magnitude.

    With triple values (x, y, z) at ``s`` the condition
    ``|x - y| / (z + 1) > 2/(s+1)`` is the same as
    ``(|x - y|(s+1)) / (z + 1) > 2``, a single ``gt`` gadget test on the
    rescaled triple ``(|x-y|(s+1), 0, z)`` -- constant work per candidate.
    """
    test = gadgets.gt(2)

    def build(fns: tuple[NatFun, ...]) -> NatFun:
        f, g, h = fns

        def ev(s: int) -> int:
            x, y, z = f(s), g(s), h(s)
            d = x - y if x >= y else y - x
            return 0 if test.fn(d * (s + 1), 0, z) else 1

        return NatFun(ev, label="recip.cert", memoize=False)

    return ProcOperator(3, build, "recip-E")


def _recip_value(pick: int) -> ProcOperator:
    # A certified s gives |xi| > 1/(s+1).  Reading the input at
    # tau = 2(s+1)^2 (t+1) - 1 keeps the approximation q above
    # 1/(2(s+1)) in magnitude, and the quotient bound
    # |1/q - 1/xi| = |xi - q| / (|q||xi|) then lands strictly under
    # 1/(t+1).  The q = 0 guard is unreachable for certified inputs and
    # only keeps the operator total.
    def build(fns: tuple[NatFun, ...]) -> NatFun:
        f, g, h, e = fns

        def ev(t: int) -> int:
            s = e(t)
            tau = 2 * (s + 1) * (s + 1) * (t + 1) - 1
            q = Fraction(f(tau) - g(tau), h(tau) + 1)
            value = Fraction(0) if q == 0 else 1 / q
            return _encode(value)[pick]

        return NatFun(ev, label=f"recip.{'fgh'[pick]}")

    return ProcOperator(4, build, "recip-value")


def reciprocal_fn() -> ConditionalFn:
    """Reciprocal as a conditional function on the nonzero reals."""
    return ConditionalFn(
        1, _recip_certificate(), _recip_value(0), _recip_value(1), _recip_value(2)
    )


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Entry:
    """One registered function with its exact rational oracle.

    The oracle raises OutsideDomain at points the function does not
    cover (reciprocal at 0); it is None for entries with no closed-form
    reference.
    """

    name: str
    n_args: int
    fn: UniformFn | ConditionalFn
    oracle: Callable[..., Fraction] | None

    @property
    def kind(self) -> str:
        return "conditional" if isinstance(self.fn, ConditionalFn) else "uniform"


_QUICK_GRID = (Fraction(-2), Fraction(1, 3), Fraction(1))
_QUICK_T_MAX = 25
_QUICK_BUDGET = 10_000


class FunctionRegistry:
    """Unique-named elementary functions, validated on registration.

    Rational constants are a family rather than finitely many rows:
    ``get("const_p/q")`` resolves (and caches) the exact constant on
    demand.
    """

    def __init__(self) -> None:
        self._entries: dict[str, Entry] = {}
        self._aliases: dict[str, str] = {}

    def register(
        self, entry: Entry, aliases: Sequence[str] = (), validate: bool = True
    ) -> Entry:
        for name in (entry.name, *aliases):
            if name in self._entries or name in self._aliases:
                raise ValueError(f"function name already registered: {name}")
        if validate and entry.oracle is not None:
            failure = _quick_check(entry)
            if failure is not None:
                raise ValueError(f"entry {entry.name} failed validation: {failure}")
        self._entries[entry.name] = entry
        for alias in aliases:
            self._aliases[alias] = entry.name
        return entry

    def names(self) -> list[str]:
        return sorted(self._entries)

    def __contains__(self, name: str) -> bool:
        try:
            self.get(name)
        except KeyError:
            return False
        return True

    def __iter__(self) -> Iterator[Entry]:
        return iter([self._entries[name] for name in self.names()])

    def get(self, name: str) -> Entry:
        if name in self._aliases:
            name = self._aliases[name]
        if name in self._entries:
            return self._entries[name]
        if name.startswith("const_"):
            try:
                value = parse_rational(name[len("const_") :])
            except ValueError:
                raise KeyError(name) from None
            spelled = f"const_{format_rational(value)}"
            if spelled not in self._entries:
                entry = Entry(spelled, 0, constant_fn(value), lambda _v=value: _v)
                self.register(entry)
            if spelled != name:
                self._aliases[name] = spelled
            return self._entries[spelled]
        raise KeyError(name)


def _quick_check(entry: Entry) -> str | None:
    # registration-time smoke test on a tiny grid; the full suite is
    # registry_validate
    for point in product(_QUICK_GRID, repeat=entry.n_args):
        try:
            reference = entry.oracle(*point)
        except OutsideDomain:
            continue
        names = [rational_name(q) for q in point]
        if isinstance(entry.fn, ConditionalFn):
            output = apply_conditional(entry.fn, names, _QUICK_BUDGET)
        else:
            output = apply_uniform(entry.fn, names)
        report = validate_name(output, reference, _QUICK_T_MAX)
        if not report.passed:
            row = report.first_failure
            point_text = ", ".join(format_rational(q) for q in point)
            return f"at ({point_text}): t={row.t} approx={row.approx}"
    return None


def register_builtins(registry: FunctionRegistry | None = None) -> FunctionRegistry:
    """Register the standard arithmetic entries (validated)."""
    reg = registry if registry is not None else FunctionRegistry()

    def uniform(
        name: str,
        n_args: int,
        rule: Callable[..., Fraction],
        schedule: Schedule,
        aliases: Sequence[str] = (),
    ) -> None:
        entry = Entry(name, n_args, uniform_from_rule(n_args, rule, schedule, name), rule)
        reg.register(entry, aliases=aliases)

    uniform("negate", 1, lambda a: -a, _at_t, aliases=("neg",))
    uniform("abs", 1, abs, _at_t)
    uniform("add", 2, lambda a, b: a + b, _twice_plus_one)
    uniform("sub", 2, lambda a, b: a - b, _twice_plus_one)
    uniform("min", 2, min, _twice_plus_one)
    uniform("max", 2, max, _twice_plus_one)
    uniform("mul", 2, lambda a, b: a * b, _product_schedule)

    def recip_oracle(a: Fraction) -> Fraction:
        if a == 0:
            raise OutsideDomain("reciprocal is undefined at 0")
        return 1 / a

    reg.register(
        Entry("recip", 1, reciprocal_fn(), recip_oracle), aliases=("reciprocal",)
    )
    return reg


def default_functions() -> FunctionRegistry:
    return register_builtins()


# ---------------------------------------------------------------------------
# grid validation
# ---------------------------------------------------------------------------

DEFAULT_GRID: tuple[Fraction, ...] = (
    Fraction(-3),
    Fraction(-3, 2),
    Fraction(0),
    Fraction(1, 7),
    Fraction(1, 2),
    Fraction(2),
    Fraction(22, 7),
)


@dataclass(frozen=True)
class GridCheck:
    entry: str
    point: tuple[Fraction, ...]
    reference: Fraction
    passed: bool
    first_failure: int | None


@dataclass(frozen=True)
class RegistryReport:
    checks: tuple[GridCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> list[GridCheck]:
        return [check for check in self.checks if not check.passed]

    def lines(self) -> Iterator[str]:
        for check in self.checks:
            status = "ok" if check.passed else f"FAIL at t={check.first_failure}"
            point_text = ", ".join(format_rational(q) for q in check.point)
            yield (
                f"{check.entry}({point_text}) ->"
                f" {format_rational(check.reference)}: {status}"
            )


def registry_validate(
    registry: FunctionRegistry,
    t_max: int = 1000,
    grid: Sequence[Fraction] = DEFAULT_GRID,
    budget: int = 100_000,
) -> RegistryReport:
    """Validate every entry against its oracle on the rational grid.

    Grid points outside an entry's domain are skipped; everything else
    must satisfy the strict 1/(t+1) bound for all t <= t_max, decided by
    exact rational comparison.
    """
    checks: list[GridCheck] = []
    for entry in registry:
        if entry.oracle is None:
            continue
        for point in product(tuple(grid), repeat=entry.n_args):
            try:
                reference = entry.oracle(*point)
            except OutsideDomain:
                continue
            names = [rational_name(q) for q in point]
            if isinstance(entry.fn, ConditionalFn):
                output = apply_conditional(entry.fn, names, budget)
            else:
                output = apply_uniform(entry.fn, names)
            report = validate_name(output, reference, t_max)
            row = report.first_failure
            checks.append(
                GridCheck(
                    entry.name,
                    point,
                    reference,
                    report.passed,
                    None if row is None else row.t,
                )
            )
    return RegistryReport(tuple(checks))

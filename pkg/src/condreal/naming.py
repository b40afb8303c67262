"""Real numbers as rational-approximation name triples.

A real number ``xi`` is *named* by three total functions ``f, g, h`` on
the naturals when

    |(f(t) - g(t)) / (h(t) + 1) - xi| < 1/(t+1)   for every index t.

Index ``t`` therefore doubles as a precision budget: the approximation at
``t`` is good to within ``1/(t+1)``.  Everything downstream (operator
terms, the gadget library, uniform and conditional function application)
manipulates these triples, so this module pins down the two ground types:

``NatFun``
    a total, deterministic function on the naturals.  Instances are built
    from a small closed set of constructors (constants, the identity,
    patching, term-evaluation closures and vouched-for pure callables)
    and memoize per instance, so repeated evaluation at the same index is
    cheap and always returns the same value.  Memoization uses a plain
    dict; under CPython's GIL concurrent readers at worst recompute the
    same (deterministic) value.

Rationals are ``fractions.Fraction`` throughout: arbitrary-precision,
kept in lowest terms with positive denominator, exactly the contract the
approximation arithmetic needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Sequence

__all__ = [
    "NatFun",
    "NameTriple",
    "ValidationReport",
    "ValidationRow",
    "approx",
    "format_rational",
    "parse_rational",
    "precision_index",
    "rational_name",
    "recording",
    "validate_name",
]


class NatFun:
    """A total function on the naturals with per-instance memoization.

    ``fn`` must be pure: total on the naturals, deterministic, and
    returning a natural.  Both the argument and the result are checked on
    every evaluation so contract violations surface at the offending
    call, not three layers later.
    """

    __slots__ = ("_fn", "_memo", "label")

    def __init__(self, fn: Callable[[int], int], label: str = "", memoize: bool = True):
        self._fn = fn
        self._memo: dict[int, int] | None = {} if memoize else None
        self.label = label

    def __call__(self, t: int) -> int:
        memo = self._memo
        if memo is not None:
            hit = memo.get(t)
            if hit is not None:
                return hit
        value = self._eval(t)
        if memo is not None:
            memo[t] = value
        return value

    def eval_uncached(self, t: int) -> int:
        """Evaluate without touching the memo table.

        Same value as ``__call__`` (the function is pure); used by search
        loops that sweep millions of indices exactly once and would only
        bloat the cache.
        """
        return self._eval(t)

    def _eval(self, t: int) -> int:
        if not isinstance(t, int) or isinstance(t, bool) or t < 0:
            raise ValueError(f"NatFun argument must be a natural, got {t!r}")
        value = self._fn(t)
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise ValueError(
                f"NatFun {self.label or '<anonymous>'} returned {value!r} at {t}; "
                "values must be naturals"
            )
        return value

    def __repr__(self) -> str:
        return f"NatFun({self.label or '...'})"

    @classmethod
    def constant(cls, c: int) -> "NatFun":
        """The constant function t -> c."""
        if not isinstance(c, int) or isinstance(c, bool) or c < 0:
            raise ValueError(f"constant value must be a natural, got {c!r}")
        return cls(lambda _t: c, label=f"const {c}", memoize=False)

    @classmethod
    def identity(cls) -> "NatFun":
        """The identity function t -> t."""
        return cls(lambda t: t, label="id", memoize=False)

    @classmethod
    def patched(cls, anchor: "NatFun", cutoff: int, inner: "NatFun") -> "NatFun":
        """Take values from ``anchor`` below ``cutoff``, from ``inner`` at or above."""
        if cutoff < 0:
            raise ValueError("cutoff must be a natural")
        return cls(
            lambda t: anchor(t) if t < cutoff else inner(t),
            label=f"patch<{cutoff}",
        )


@dataclass(frozen=True)
class NameTriple:
    """Three NatFuns naming a real via (f(t) - g(t)) / (h(t) + 1)."""

    f: NatFun
    g: NatFun
    h: NatFun

    def __iter__(self) -> Iterator[NatFun]:
        return iter((self.f, self.g, self.h))


def approx(name: NameTriple, t: int) -> Fraction:
    """The rational approximation encoded at index ``t``, in lowest terms."""
    return Fraction(name.f(t) - name.g(t), name.h(t) + 1)


def rational_name(q: Fraction | int) -> NameTriple:
    """The canonical name of a rational: exact at every index.

    With ``q = p/d`` in lowest terms the triple is the constant functions
    ``(max(p,0), max(-p,0), d-1)``, so the encoded approximation equals
    ``q`` exactly everywhere.
    """
    q = Fraction(q)
    p, d = q.numerator, q.denominator
    return NameTriple(
        NatFun.constant(p if p > 0 else 0),
        NatFun.constant(-p if p < 0 else 0),
        NatFun.constant(d - 1),
    )


def precision_index(eps: Fraction) -> int:
    """Least index t whose guarantee 1/(t+1) is at most ``eps``."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    # 1/(t+1) <= eps  <=>  t+1 >= 1/eps
    t_plus_1 = -((-eps.denominator) // eps.numerator)  # ceil(1/eps)
    return max(t_plus_1 - 1, 0)


@dataclass(frozen=True)
class ValidationRow:
    t: int
    approx: Fraction
    bound: Fraction
    ok: bool


@dataclass(frozen=True)
class ValidationReport:
    reference: Fraction
    rows: tuple[ValidationRow, ...]

    @property
    def passed(self) -> bool:
        return all(row.ok for row in self.rows)

    @property
    def first_failure(self) -> ValidationRow | None:
        for row in self.rows:
            if not row.ok:
                return row
        return None

    def lines(self) -> Iterator[str]:
        for row in self.rows:
            status = "ok" if row.ok else "FAIL"
            yield (
                f"t={row.t} approx={format_rational(row.approx)} "
                f"bound={format_rational(row.bound)} {status}"
            )


def validate_name(name: NameTriple, reference: Fraction | int, t_max: int) -> ValidationReport:
    """Check |approx(name, t) - reference| < 1/(t+1) for every t <= t_max.

    All comparisons are exact rational arithmetic; the report carries one
    row per index so failures point at the first offending t.
    """
    reference = Fraction(reference)
    rows = []
    for t in range(t_max + 1):
        value = approx(name, t)
        bound = Fraction(1, t + 1)
        rows.append(ValidationRow(t, value, bound, abs(value - reference) < bound))
    return ValidationReport(reference, tuple(rows))


def recording(fns: Sequence[NatFun]) -> tuple[tuple[NatFun, ...], dict[int, set[int]]]:
    """Wrap functions so every query is logged.

    Returns the wrapped functions and a live log mapping 1-based slot to
    the set of queried indices.  The wrappers are unmemoized so the log
    sees each distinct query; values pass through unchanged.
    """
    log: dict[int, set[int]] = {i: set() for i in range(1, len(fns) + 1)}

    def wrap(slot: int, fn: NatFun) -> NatFun:
        seen = log[slot]

        def spy(t: int) -> int:
            seen.add(t)
            return fn(t)

        return NatFun(spy, label=f"spy{slot}:{fn.label}", memoize=False)

    wrapped = tuple(wrap(i + 1, fn) for i, fn in enumerate(fns))
    return wrapped, log


def format_rational(q: Fraction) -> str:
    """Lowest-terms p/q string; integers print without the denominator."""
    return str(Fraction(q))


def parse_rational(text: str) -> Fraction:
    """Parse 'p/q' or 'p' (optional sign) into an exact rational."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc

"""Seeded random generators for terms and argument functions.

Shared by the CLI suites and the test suite so sampled checks are
reproducible from a single seed.
"""

from __future__ import annotations

from random import Random

from .gadgets import CORE
from .naming import NatFun
from .terms import Apply, Base, Node, OperatorTerm, Proj

__all__ = ["BASE_NAMES", "random_natfun", "random_term"]

BASE_NAMES = ("succ", "monus", "mul", "delta_1", "conj", "pair", "left", "right")


def random_natfun(rng: Random) -> NatFun:
    """A small total function on the naturals: constant, affine or periodic."""
    kind = rng.randrange(4)
    if kind == 0:
        return NatFun.constant(rng.randrange(9))
    if kind == 1:
        return NatFun.identity()
    if kind == 2:
        a, b = rng.randrange(4), rng.randrange(9)
        return NatFun(lambda t, _a=a, _b=b: _a * t + _b, label=f"{a}t+{b}")
    a, b, mod = rng.randrange(1, 5), rng.randrange(7), rng.randrange(2, 9)
    return NatFun(
        lambda t, _a=a, _b=b, _m=mod: (_a * t + _b) % _m,
        label=f"({a}t+{b})%{mod}",
    )


def random_term(rng: Random, k: int, m: int, max_depth: int) -> OperatorTerm:
    """A random well-formed term over the core base functions."""
    bases = [CORE.get(name) for name in BASE_NAMES]

    def node(depth: int) -> Node:
        if depth == 0:
            if k and rng.random() < 0.4:
                return Apply(rng.randrange(1, k + 1), Proj(rng.randrange(1, m + 1)))
            return Proj(rng.randrange(1, m + 1))
        roll = rng.random()
        if roll < 0.25:
            return Proj(rng.randrange(1, m + 1))
        if k and roll < 0.6:
            return Apply(rng.randrange(1, k + 1), node(depth - 1))
        fn = rng.choice(bases)
        return Base(fn, tuple(node(depth - 1) for _ in range(fn.arity)))

    return OperatorTerm(k, m, node(max_depth))

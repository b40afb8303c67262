"""Minimal s-expression reader shared by the term codec and the CLI."""

from __future__ import annotations

__all__ = ["SexprError", "parse_sexpr"]


class SexprError(ValueError):
    pass


def _tokenize(text: str) -> list[str]:
    return text.replace("(", " ( ").replace(")", " ) ").split()


def parse_sexpr(text: str):
    """Parse one s-expression into nested lists of atom strings."""
    tokens = _tokenize(text)
    if not tokens:
        raise SexprError("empty expression")
    expr, rest = _read(tokens)
    if rest:
        raise SexprError(f"trailing input after expression: {' '.join(rest)!r}")
    return expr


def _read(tokens: list[str]):
    head, rest = tokens[0], tokens[1:]
    if head == "(":
        items = []
        while True:
            if not rest:
                raise SexprError("unbalanced '('")
            if rest[0] == ")":
                return items, rest[1:]
            item, rest = _read(rest)
            items.append(item)
    if head == ")":
        raise SexprError("unbalanced ')'")
    return head, rest

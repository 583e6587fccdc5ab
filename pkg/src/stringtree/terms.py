"""Ranked terms (classical tree-automata trees) and their string-tree encoding."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from .errors import ArityMismatch, ParseError
from .tree import RESERVED, Tree


@dataclass(frozen=True)
class RankedTerm:
    symbol: str
    children: tuple[RankedTerm, ...] = ()

    def __str__(self) -> str:
        if not self.children:
            return self.symbol
        return f"{self.symbol}({','.join(map(str, self.children))})"

    def height(self) -> int:
        return 1 + max((c.height() for c in self.children), default=0)


def check_symbol(name: str) -> None:
    if len(name) != 1 or name in RESERVED or name in "(),\\" or name.isspace():
        raise ParseError(f"ranked symbol must be one non-reserved character, got {name!r}")


def check_arities(t: RankedTerm, signature: Mapping[str, int]) -> None:
    if t.symbol not in signature:
        raise ArityMismatch(f"symbol {t.symbol!r} not in signature")
    if len(t.children) != signature[t.symbol]:
        raise ArityMismatch(
            f"{t.symbol!r} has arity {signature[t.symbol]}, got {len(t.children)} arguments")
    for c in t.children:
        check_arities(c, signature)


def parse_signature(text: str) -> dict[str, int]:
    """Read ``arity NAME N`` lines; other lines are ignored."""
    sig: dict[str, int] = {}
    for line in text.splitlines():
        parts = line.split()
        if len(parts) == 3 and parts[0] == "arity":
            name, n = parts[1], parts[2]
            check_symbol(name)
            if not n.isdigit():
                raise ParseError(f"bad arity {n!r} for {name!r}")
            if name in sig and sig[name] != int(n):
                raise ArityMismatch(f"conflicting arities for {name!r}")
            sig[name] = int(n)
    return sig


_TOKEN = re.compile(r"\s*([(),]|[^\s(),])")


def parse_term(text: str, signature: Mapping[str, int] | None = None) -> RankedTerm:
    """Parse ``f(a,g(b))``.

    Without a signature, arities are inferred from first use and must stay
    consistent across the term.
    """
    tokens = _TOKEN.findall(text)
    if "".join(tokens) != re.sub(r"\s+", "", text):
        raise ParseError(f"cannot tokenize term {text!r}")
    pos = 0
    inferred: dict[str, int] = {}

    def term() -> RankedTerm:
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] in "(),":
            raise ParseError(f"expected a symbol in {text!r}")
        name = tokens[pos]
        check_symbol(name)
        pos += 1
        args: list[RankedTerm] = []
        if pos < len(tokens) and tokens[pos] == "(":
            pos += 1
            args.append(term())
            while pos < len(tokens) and tokens[pos] == ",":
                pos += 1
                args.append(term())
            if pos >= len(tokens) or tokens[pos] != ")":
                raise ParseError(f"missing ')' in {text!r}")
            pos += 1
        if name in inferred and inferred[name] != len(args):
            raise ArityMismatch(f"{name!r} used with {inferred[name]} and {len(args)} arguments")
        inferred[name] = len(args)
        return RankedTerm(name, tuple(args))

    t = term()
    if pos != len(tokens):
        raise ParseError(f"trailing input in term {text!r}")
    if signature is not None:
        check_arities(t, signature)
    return t


def term_encode(t: RankedTerm) -> Tree:
    """Constants become single-symbol trees ``<a>``; ``f(t1..tp)`` becomes ``<f τ(t1)..τ(tp)>``."""
    return Tree((t.symbol,) + tuple(term_encode(c) for c in t.children))


def term_decode(t: Tree) -> RankedTerm | None:
    if not t.items or isinstance(t.items[0], Tree):
        return None
    rest = t.items[1:]
    if not all(isinstance(c, Tree) for c in rest):
        return None
    kids = []
    for c in rest:
        d = term_decode(c)
        if d is None:
            return None
        kids.append(d)
    return RankedTerm(t.items[0], tuple(kids))

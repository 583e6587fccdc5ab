"""Classical finite string automata and string regular expressions.

Regex symbols are arbitrary hashable values, so the same machinery serves
plain alphabets and the mixed symbol/nonterminal/state alphabets that show up
in grammar conversions.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Iterator

from .errors import ParseError

Symbol = Hashable


# -- regex AST ----------------------------------------------------------------

class Regex:
    __slots__ = ()


@dataclass(frozen=True)
class Empty(Regex):
    """The empty language."""


@dataclass(frozen=True)
class Eps(Regex):
    pass


@dataclass(frozen=True)
class Sym(Regex):
    value: Symbol


@dataclass(frozen=True)
class Cat(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Alt(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Star(Regex):
    inner: Regex


EMPTY = Empty()
EPS = Eps()


def cat(*parts: Regex) -> Regex:
    out: Regex = EPS
    for p in parts:
        if isinstance(p, Empty) or isinstance(out, Empty):
            return EMPTY
        if isinstance(p, Eps):
            continue
        out = p if isinstance(out, Eps) else Cat(out, p)
    return out


def alt(*parts: Regex) -> Regex:
    out: Regex = EMPTY
    for p in parts:
        if isinstance(p, Empty) or p == out:
            continue
        out = p if isinstance(out, Empty) else Alt(out, p)
    return out


def star(r: Regex) -> Regex:
    if isinstance(r, (Empty, Eps)):
        return EPS
    if isinstance(r, Star):
        return r
    return Star(r)


def regex_symbols(r: Regex) -> set:
    if isinstance(r, Sym):
        return {r.value}
    if isinstance(r, (Cat, Alt)):
        return regex_symbols(r.left) | regex_symbols(r.right)
    if isinstance(r, Star):
        return regex_symbols(r.inner)
    return set()


def map_symbols(r: Regex, f: Callable[[Symbol], Regex]) -> Regex:
    if isinstance(r, Sym):
        return f(r.value)
    if isinstance(r, Cat):
        return cat(map_symbols(r.left, f), map_symbols(r.right, f))
    if isinstance(r, Alt):
        return alt(map_symbols(r.left, f), map_symbols(r.right, f))
    if isinstance(r, Star):
        return star(map_symbols(r.inner, f))
    return r


def format_regex(r: Regex, name: Callable[[Symbol], str] = str) -> str:
    """Render with ``|``, ``*``, juxtaposition, ``eps`` and ``empty``; tokens are space separated."""

    def go(r: Regex, prec: int) -> str:
        if isinstance(r, Empty):
            return "empty"
        if isinstance(r, Eps):
            return "eps"
        if isinstance(r, Sym):
            return name(r.value)
        if isinstance(r, Star):
            return go(r.inner, 3) + "*"
        if isinstance(r, Cat):
            s = go(r.left, 2) + " " + go(r.right, 2)
            return f"( {s} )" if prec > 2 else s
        s = go(r.left, 1) + " | " + go(r.right, 1)
        return f"( {s} )" if prec > 1 else s

    return go(r, 0)


# -- concrete syntax shared by grammar files and the CLI ----------------------

def parse_regex(text: str, classify: Callable[[str, bool], Symbol]) -> Regex:
    """Parse ``|``/``*``/parentheses/juxtaposition over word tokens.

    ``classify(token, escaped)`` maps a raw token to the symbol it denotes
    and may raise.
    Word tokens are maximal runs of letters, digits and ``_``; any other
    non-space character is a one-character token, ``\\c`` escapes ``c``.
    ``eps`` is the empty word and ``empty`` the empty language.
    """
    tokens: list[tuple[str, str]] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch == "\\":
            if i + 1 >= n:
                raise ParseError("dangling backslash in regular expression")
            tokens.append(("esc", text[i + 1]))
            i += 2
        elif ch in "()|*":
            tokens.append(("op", ch))
            i += 1
        elif ch.isalnum() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word == "eps":
                tokens.append(("eps", word))
            elif word == "empty":
                tokens.append(("empty", word))
            else:
                tokens.append(("word", word))
            i = j
        else:
            tokens.append(("sym", ch))
            i += 1
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    def union() -> Regex:
        nonlocal pos
        r = concat()
        while peek() == ("op", "|"):
            pos += 1
            r = Alt(r, concat())
        return r

    def concat() -> Regex:
        parts = []
        while True:
            kind, val = peek()
            if kind is None or (kind == "op" and val in "|)"):
                break
            parts.append(postfix())
        if not parts:
            return EPS
        r = parts[0]
        for p in parts[1:]:
            r = Cat(r, p)
        return r

    def postfix() -> Regex:
        nonlocal pos
        r = atom()
        while peek() == ("op", "*"):
            pos += 1
            r = Star(r)
        return r

    def atom() -> Regex:
        nonlocal pos
        kind, val = peek()
        pos += 1
        if kind == "op" and val == "(":
            r = union()
            if peek() != ("op", ")"):
                raise ParseError(f"missing ')' in {text!r}")
            pos += 1
            return r
        if kind == "eps":
            return EPS
        if kind == "empty":
            return EMPTY
        if kind in ("sym", "word", "esc"):
            return Sym(classify(val, kind == "esc"))
        raise ParseError(f"unexpected {val!r} in regular expression {text!r}")

    r = union()
    if pos != len(tokens):
        raise ParseError(f"unexpected {tokens[pos][1]!r} in regular expression {text!r}")
    return r


# -- finite automata ----------------------------------------------------------

@dataclass(frozen=True)
class FiniteAutomaton:
    alphabet: frozenset
    states: frozenset
    finals: frozenset
    initial: Hashable
    transitions: frozenset  # triples (q, a, p)

    def __post_init__(self):
        for name in ("alphabet", "states", "finals", "transitions"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if self.initial not in self.states or not self.finals <= self.states:
            raise ValueError("initial and final states must be states")
        for q, a, p in self.transitions:
            if q not in self.states or p not in self.states or a not in self.alphabet:
                raise ValueError(f"bad transition {(q, a, p)!r}")

    @cached_property
    def delta(self) -> dict:
        d: dict = defaultdict(set)
        for q, a, p in self.transitions:
            d[(q, a)].add(p)
        return {k: frozenset(v) for k, v in d.items()}

    def accepts(self, word: Iterable[Symbol]) -> bool:
        cur = {self.initial}
        for a in word:
            cur = {p for q in cur for p in self.delta.get((q, a), ())}
            if not cur:
                return False
        return not self.finals.isdisjoint(cur)

    def words(self, max_len: int, key: Callable = repr) -> Iterator[tuple]:
        """Accepted words of length ≤ ``max_len`` in length-lexicographic order."""
        order = sorted(self.alphabet, key=key)
        level = {(): frozenset((self.initial,))}
        for length in range(max_len + 1):
            for w in sorted(level, key=lambda w: [key(x) for x in w]):
                if not self.finals.isdisjoint(level[w]):
                    yield w
            if length == max_len:
                break
            nxt = {}
            for w, cur in level.items():
                for a in order:
                    succ = frozenset(p for q in cur for p in self.delta.get((q, a), ()))
                    if succ and self._productive_any(succ):
                        nxt[w + (a,)] = succ
            level = nxt
            if not level:
                break

    @cached_property
    def _coreachable(self) -> frozenset:
        back: dict = defaultdict(set)
        for q, _, p in self.transitions:
            back[p].add(q)
        seen = set(self.finals)
        todo = deque(self.finals)
        while todo:
            p = todo.popleft()
            for q in back[p]:
                if q not in seen:
                    seen.add(q)
                    todo.append(q)
        return frozenset(seen)

    def _productive_any(self, qs) -> bool:
        return not self._coreachable.isdisjoint(qs)

    def is_empty(self) -> bool:
        return self.initial not in self._coreachable

    def with_finals(self, finals: Iterable) -> FiniteAutomaton:
        return FiniteAutomaton(self.alphabet, self.states, frozenset(finals),
                               self.initial, self.transitions)


# -- regex -> automaton (position construction, no ε-moves) -------------------

def regex_to_nfa(r: Regex, alphabet: Iterable[Symbol] | None = None) -> FiniteAutomaton:
    """Glushkov automaton: state 0 is initial, states 1..n are the symbol positions."""
    positions: list[Symbol] = []

    def linearize(r: Regex):
        # returns (nullable, first, last, follow-pairs)
        if isinstance(r, Empty):
            return False, frozenset(), frozenset(), set()
        if isinstance(r, Eps):
            return True, frozenset(), frozenset(), set()
        if isinstance(r, Sym):
            positions.append(r.value)
            p = len(positions)
            return False, frozenset((p,)), frozenset((p,)), set()
        if isinstance(r, Star):
            _, f, l, fol = linearize(r.inner)
            fol = fol | {(x, y) for x in l for y in f}
            return True, f, l, fol
        n1, f1, l1, fol1 = linearize(r.left)
        n2, f2, l2, fol2 = linearize(r.right)
        if isinstance(r, Alt):
            return n1 or n2, f1 | f2, l1 | l2, fol1 | fol2
        first = f1 | f2 if n1 else f1
        last = l1 | l2 if n2 else l2
        return n1 and n2, first, last, fol1 | fol2 | {(x, y) for x in l1 for y in f2}

    nullable, first, last, follow = linearize(r)
    sigma = set(alphabet) if alphabet is not None else set()
    sigma |= set(positions)
    trans = {(0, positions[p - 1], p) for p in first}
    trans |= {(x, positions[y - 1], y) for x, y in follow}
    finals = set(last) | ({0} if nullable else set())
    return FiniteAutomaton(frozenset(sigma), frozenset(range(len(positions) + 1)),
                           frozenset(finals), 0, frozenset(trans))


# -- automaton -> regex (state elimination) -----------------------------------

def nfa_to_regex(fa: FiniteAutomaton, order_key: Callable = repr) -> Regex:
    """State elimination, removing states in ascending ``order_key`` order."""
    start, end = object(), object()
    edges: dict = defaultdict(lambda: EMPTY)

    def add(p, q, r):
        edges[(p, q)] = alt(edges[(p, q)], r)

    add(start, fa.initial, EPS)
    for q in fa.finals:
        add(q, end, EPS)
    for q, a, p in sorted(fa.transitions, key=lambda t: (order_key(t[0]), order_key(t[1]), order_key(t[2]))):
        add(q, p, Sym(a))
    for s in sorted(fa.states, key=order_key):
        loop = star(edges.pop((s, s), EMPTY))
        ins = [(p, r) for (p, q), r in list(edges.items()) if q == s]
        outs = [(q, r) for (p, q), r in list(edges.items()) if p == s]
        for p, _ in ins:
            edges.pop((p, s), None)
        for q, _ in outs:
            edges.pop((s, q), None)
        for p, r1 in ins:
            if isinstance(r1, Empty):
                continue
            for q, r2 in outs:
                if isinstance(r2, Empty):
                    continue
                add(p, q, cat(r1, loop, r2))
    return edges.get((start, end), EMPTY)

"""Regular string-tree grammars: rules ``N -> <e>`` with ``e`` a string regex
over symbols and nonterminals."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .automata.construct import to_pure_states
from .automata.fsta import GNFSTA, Fsta, state_label, state_sort_key
from .errors import AxiomMissing, ParseError, UnknownNonterminal
from .fa import (EMPTY, Empty, FiniteAutomaton, Regex, Sym, alt, format_regex, map_symbols,
                 nfa_to_regex, parse_regex, regex_symbols, regex_to_nfa)
from .tree import RESERVED, Tree, serialize

_IDENT = re.compile(r"[A-Za-z0-9_]+")


@dataclass(frozen=True)
class Rstg:
    """Grammar ``(Σ, N, S, R)``; ``rules`` maps each nonterminal to one regex
    (several productions for the same nonterminal are joined with ``|``)."""

    alphabet: frozenset
    nonterminals: frozenset
    start: str
    rules: dict

    def __post_init__(self):
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        object.__setattr__(self, "nonterminals", frozenset(self.nonterminals))
        if self.alphabet & self.nonterminals:
            raise ParseError(f"names used both as symbol and nonterminal: "
                             f"{sorted(self.alphabet & self.nonterminals)}")
        if self.start not in self.nonterminals:
            raise AxiomMissing(f"start symbol {self.start!r} is not a nonterminal")
        for n, e in self.rules.items():
            if n not in self.nonterminals:
                raise UnknownNonterminal(f"rule for unknown nonterminal {n!r}")
            for x in regex_symbols(e):
                if x not in self.alphabet and x not in self.nonterminals:
                    raise UnknownNonterminal(f"rule for {n!r} uses unknown name {x!r}")

    def __hash__(self):
        return hash((self.alphabet, self.nonterminals, self.start, tuple(sorted(self.rules))))

    def symbol_kind(self, x) -> str:
        return "nonterminal" if x in self.nonterminals else "symbol"


# -- text format ----------------------------------------------------------------

def parse_grammar(text: str, alphabet: Iterable[str] = ()) -> Rstg:
    """Read ``start:``, ``nonterminals:``, ``alphabet:`` and ``rule: N -> < RE >`` lines.

    A word of two or more characters is a nonterminal; a single character is
    a nonterminal when declared or defined by a rule, and a symbol otherwise.
    """
    start = None
    declared: set[str] = set()
    sigma: set[str] = set(alphabet)
    raw_rules: list[tuple[int, str, str]] = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise ParseError(f"line {no}: expected 'key: value', got {raw!r}")
        key, rest = key.strip(), rest.strip()
        if key == "start":
            start = rest
        elif key == "nonterminals":
            declared.update(rest.split())
        elif key == "alphabet":
            sigma.update(rest.split())
        elif key == "rule":
            lhs, sep, rhs = rest.partition("->")
            lhs, rhs = lhs.strip(), rhs.strip()
            if not sep or not _IDENT.fullmatch(lhs):
                raise ParseError(f"line {no}: expected 'N -> < RE >', got {raw!r}")
            if not (rhs.startswith("<") and rhs.endswith(">") and len(rhs) >= 2):
                raise ParseError(f"line {no}: right-hand side must be '< RE >'")
            raw_rules.append((no, lhs, rhs[1:-1]))
        else:
            raise ParseError(f"line {no}: unknown key {key!r}")
    if start is None:
        raise AxiomMissing("no 'start:' line")
    nonterminals = declared | {lhs for _, lhs, _ in raw_rules} | {start}
    for x in sigma:
        if len(x) != 1 or x in RESERVED:
            raise ParseError(f"alphabet entry {x!r} is not a single non-reserved character")

    def classify(tok: str, escaped: bool):
        if not escaped and tok in nonterminals:
            return tok
        if len(tok) > 1:
            raise UnknownNonterminal(f"unknown nonterminal {tok!r}")
        if tok in RESERVED:
            raise ParseError(f"reserved character {tok!r} in a rule")
        sigma.add(tok)
        return tok

    rules: dict[str, Regex] = {}
    for no, lhs, body in raw_rules:
        e = parse_regex(body, classify)
        rules[lhs] = alt(rules[lhs], e) if lhs in rules else e
    if start not in declared and start not in rules:
        raise AxiomMissing(f"start symbol {start!r} has no rule")
    return Rstg(frozenset(sigma), frozenset(nonterminals), start, rules)


def _token(x: str, nonterminals) -> str:
    if x in nonterminals:
        return x
    return x if _IDENT.fullmatch(x) else "\\" + x


def format_grammar(g: Rstg) -> str:
    out = [f"start: {g.start}",
           "nonterminals: " + " ".join(sorted(g.nonterminals))]
    if g.alphabet:
        out.append("alphabet: " + " ".join(_token(x, ()) for x in sorted(g.alphabet)))
    for n in sorted(g.rules):
        body = format_regex(g.rules[n], lambda x: _token(x, g.nonterminals))
        out.append(f"rule: {n} -> < {body} >")
    return "\n".join(out) + "\n"


# -- grammar -> automaton ---------------------------------------------------------

def grammar_to_automaton(g: Rstg) -> Fsta:
    """One position automaton per nonterminal, run side by side.

    States of the automaton for ``n`` are tagged ``(n, position)``, which keeps
    the state sets pairwise disjoint and apart from symbols and nonterminals.
    A finished child whose automaton for ``n`` ended in a final state inserts
    ``n`` into its parent.
    """
    initials, hrules, vrules, states, finals = set(), set(), set(), set(), set()
    for n in sorted(g.rules):
        fa = regex_to_nfa(g.rules[n])
        tag = {q: (n, q) for q in fa.states}
        states.update(tag.values())
        initials.add(tag[fa.initial])
        hrules.update((tag[q], x, tag[p]) for q, x, p in fa.transitions)
        vrules.update((tag[f], n) for f in fa.finals)
        if n == g.start:
            finals.update(tag[f] for f in fa.finals)
    if not initials:
        # no rules at all: nothing is generated
        initials.add((g.start, 0))
    states |= set(g.nonterminals)
    return Fsta.make(g.alphabet, initials=initials, finals=finals, hrules=hrules,
                     vrules=vrules, states=states, flavour=GNFSTA)


# -- automaton -> grammar ---------------------------------------------------------

def _nonterminal_names(states: list, sigma: frozenset) -> dict:
    labels = [state_label(q) for q in states]
    ok = len(set(labels)) == len(labels) and all(
        _IDENT.fullmatch(lab) and lab not in sigma and lab not in ("eps", "empty")
        for lab in labels)
    if ok:
        return dict(zip(states, labels))
    return {q: f"N{i}" for i, q in enumerate(states)}


def automaton_to_grammar(a: Fsta) -> Rstg:
    """Nonterminal ``n`` derives the trees a run can finish in a state that
    inserts ``n`` into its parent; the axiom derives the accepted trees."""
    if not a.is_pure():
        a = to_pure_states(a)
    sigma = a.alphabet
    pure = sorted(a.pure_states, key=state_sort_key)
    names = _nonterminal_names(pure, sigma)
    start = "S"
    k = 0
    while start in names.values() or start in sigma:
        k += 1
        start = f"S{k}"

    def rename(x):
        return x if x in sigma else names[x]

    def language(finals) -> Regex:
        out: Regex = EMPTY
        for q0 in sorted(a.initials, key=state_sort_key):
            fa = FiniteAutomaton(a.states, a.states, frozenset(finals), q0, a.hrules)
            out = alt(out, nfa_to_regex(fa, order_key=state_sort_key))
        return map_symbols(out, lambda x: Sym(rename(x)))

    rules: dict[str, Regex] = {}
    for n in pure:
        e = language({q for q in a.states if n in a.vertical(q)})
        if not isinstance(e, Empty):
            rules[names[n]] = e
    e = language(a.finals)
    if not isinstance(e, Empty):
        rules[start] = e
    return Rstg(sigma, frozenset(names.values()) | {start}, start, rules)


# -- derivations -----------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    """A nonterminal occurrence inside a sentential form."""

    name: str


def _leftmost(item) -> tuple | None:
    """Path to the leftmost nonterminal in pre-order, or None."""
    if isinstance(item, Var):
        return ()
    for i, x in enumerate(item.items):
        if isinstance(x, Var):
            return (i,)
        if isinstance(x, Tree):
            p = _leftmost(x)
            if p is not None:
                return (i,) + p
    return None


def _replace(item, path: tuple, new):
    if not path:
        return new
    i = path[0]
    items = list(item.items)
    items[i] = _replace(items[i], path[1:], new)
    return Tree(tuple(items))


def _size(item) -> int:
    return 1 if isinstance(item, Var) else item.size()


def generate(g: Rstg, max_nodes: int, max_count: int) -> list[Tree]:
    """Variable-free trees derivable from the axiom, each of size at most
    ``max_nodes``, smallest first and then by serialization."""
    automata = {n: regex_to_nfa(e, g.alphabet | g.nonterminals) for n, e in g.rules.items()}
    word_cache: dict = {}

    def words(n: str, max_len: int) -> list[tuple]:
        key = (n, max_len)
        if key not in word_cache:
            fa = automata.get(n)
            word_cache[key] = [] if fa is None else list(fa.words(max_len, key=str))
        return word_cache[key]

    found: set[Tree] = set()
    seen = {Var(g.start)}
    todo = [Var(g.start)]
    while todo:
        form = todo.pop()
        path = _leftmost(form)
        if path is None:
            found.add(form)
            continue
        at = form
        for i in path:
            at = at.items[i]
        budget = max_nodes - _size(form)
        for w in words(at.name, budget):
            node = Tree(tuple(Var(x) if x in g.nonterminals else x for x in w))
            nxt = _replace(form, path, node)
            if _size(nxt) <= max_nodes and nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return sorted(found, key=lambda t: (t.size(), serialize(t)))[:max_count]

"""Automaton constructions: pure states, subset construction, completion,
Boolean operations and the embeddings of classical automata."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from ..errors import AlphabetMismatch, FormatError, ImpureInput, NotDeterministic
from ..fa import FiniteAutomaton
from ..terms import RankedTerm, check_symbol
from .fsta import DFSTA, NFSTA, Fsta, State


def single_letter_automaton() -> Fsta:
    """Accepts the trees whose labels all use one and the same letter (plus a few empty-node shapes)."""
    return Fsta.make(
        "ab", initial="q0", finals={"a", "b", "q0"},
        hrules=[("q0", "a", "a"), ("a", "a", "a"), ("q0", "b", "b"), ("b", "b", "b")],
        flavour=NFSTA)


# -- pure states ------------------------------------------------------------

def bar(x: State) -> tuple:
    return ("~", x)


def to_pure_states(a: Fsta) -> Fsta:
    """Give every alphabet symbol a state twin so no rule uses a symbol as its
    left operand or result; the accepted language is unchanged.  An automaton
    that already has pure states is returned as is."""
    if a.is_pure():
        return a
    sigma = a.alphabet

    def b(q):
        return bar(q) if q in sigma else q

    hrules = set()
    for q, r, p in a.hrules:
        hrules.add((b(q), r, b(p)))
        hrules.add((b(q), b(r), b(p)))
    vrules = None
    if a.vrules is not None:
        vrules = frozenset((b(q), b(p)) for q, p in a.vrules)
    states = sigma | {b(q) for q in a.states}
    return Fsta(sigma, frozenset(states), frozenset(map(b, a.finals)),
                frozenset(map(b, a.initials)), frozenset(hrules), vrules, a.flavour)


# -- subset construction ------------------------------------------------------

def determinize(a: Fsta) -> Fsta:
    """Subset construction over the reachable state sets.

    Set states are frozensets of pure states; an alphabet symbol ``x`` keeps
    its name and stands for ``{x}``.  The result is deterministic and total.
    """
    if not a.is_pure():
        raise ImpureInput("determinize needs pure states; call to_pure_states first")
    sigma = a.alphabet

    def inputs(x) -> frozenset:
        if x in sigma:
            return frozenset((x,))
        return a.vertical_image(x)

    def move(left, right) -> frozenset:
        if left in sigma:
            left = frozenset((left,))
        return a.step(left, inputs(right))

    start = frozenset(a.initials)
    known: list = sorted(sigma) + [start]
    seen = set(known)
    hrules = set()
    i = 0
    # grow the state list; every new state is paired with all earlier ones
    while i < len(known):
        x = known[i]
        for j in range(i + 1):
            y = known[j]
            for left, right in ((x, y), (y, x)):
                c = move(left, right)
                hrules.add((left, right, c))
                if c not in seen:
                    seen.add(c)
                    known.append(c)
        i += 1
    finals = {q for q in known if isinstance(q, frozenset) and not q.isdisjoint(a.finals)}
    return Fsta(sigma, frozenset(known), frozenset(finals), frozenset((start,)),
                frozenset(hrules), None, DFSTA)


def _fresh(base: str, taken) -> str:
    name, k = base, 0
    while name in taken:
        k += 1
        name = f"{base}{k}"
    return name


def complete(a: Fsta) -> Fsta:
    if not a.is_deterministic():
        raise NotDeterministic("completion needs a deterministic automaton")
    if a.is_complete():
        return a
    sink = _fresh("sink", a.states)
    states = a.states | {sink}
    hrules = set(a.hrules)
    for p in states:
        for q in states:
            if (p, q) not in a.delta:
                hrules.add((p, q, sink))
    return Fsta(a.alphabet, frozenset(states), a.finals, a.initials,
                frozenset(hrules), None, DFSTA)


def to_complete_dfsta(a: Fsta) -> Fsta:
    return complete(determinize(to_pure_states(a)))


def bool_complement(a: Fsta) -> Fsta:
    d = to_complete_dfsta(a)
    return d.with_finals((d.states - d.alphabet) - d.finals)


def _product(a1: Fsta, a2: Fsta, keep) -> Fsta:
    if a1.alphabet != a2.alphabet:
        raise AlphabetMismatch("Boolean operations need automata over the same alphabet")
    d1, d2 = to_complete_dfsta(a1), to_complete_dfsta(a2)
    sigma = d1.alphabet

    def split(x):
        return (x, x) if x in sigma else x

    def join(pair):
        return pair[0] if pair[0] == pair[1] and pair[0] in sigma else pair

    start = (d1.initial, d2.initial)
    known: list = sorted(sigma) + [start]
    seen = set(known)
    hrules = set()
    i = 0
    while i < len(known):
        x = known[i]
        for j in range(i + 1):
            y = known[j]
            for left, right in ((x, y), (y, x)):
                (p1, p2), (q1, q2) = split(left), split(right)
                c = join((next(iter(d1.delta[(p1, q1)])), next(iter(d2.delta[(p2, q2)]))))
                hrules.add((left, right, c))
                if c not in seen:
                    seen.add(c)
                    known.append(c)
        i += 1
    finals = {q for q in known if q not in sigma and keep(q[0] in d1.finals, q[1] in d2.finals)}
    return Fsta(sigma, frozenset(known), frozenset(finals), frozenset((start,)),
                frozenset(hrules), None, DFSTA)


def bool_union(a1: Fsta, a2: Fsta) -> Fsta:
    return _product(a1, a2, lambda x, y: x or y)


def bool_intersect(a1: Fsta, a2: Fsta) -> Fsta:
    return _product(a1, a2, lambda x, y: x and y)


# -- embeddings of classical automata ----------------------------------------

def _state_namer(states: Iterable, sigma: frozenset, tag: str):
    if any(q in sigma for q in states):
        return lambda q: (tag, q)
    return lambda q: q


def embed_fa(fa: FiniteAutomaton) -> Fsta:
    """Accepts the single-node trees whose label the string automaton accepts."""
    sigma = frozenset(fa.alphabet)
    name = _state_namer(fa.states, sigma, "fa")
    hrules = {(name(q), a, name(p)) for q, a, p in fa.transitions}
    return Fsta.make(sigma, initial=name(fa.initial), finals=map(name, fa.finals),
                     hrules=hrules, states=map(name, fa.states), flavour=NFSTA)


def embed_fa_vertical(fa: FiniteAutomaton) -> Fsta:
    """Accepts the left-spine trees ``ω(s)`` for the strings ``s`` the automaton accepts.

    Each FA state ``q`` has a twin ``(done, q)`` marking a node that has just
    read its symbol; ``start`` is the state of every fresh node.
    """
    sigma = frozenset(fa.alphabet)
    taken = {("at", q) for q in fa.states} | {("done", q) for q in fa.states}
    start = _fresh("start", taken | sigma)
    hrules = {(("at", q), a, ("done", p)) for q, a, p in fa.transitions}
    hrules |= {(start, ("done", q), ("at", q)) for q in fa.states}
    hrules.add((start, start, ("at", fa.initial)))
    finals = {("done", q) for q in fa.finals}
    if fa.initial in fa.finals:
        finals.add(start)
    return Fsta.make(sigma, initial=start, finals=finals, hrules=hrules,
                     states=taken, flavour=NFSTA)


@dataclass(frozen=True)
class Ncfta:
    """Bottom-up tree automaton over ranked terms.

    ``rules`` holds triples ``(f, (q1, ..., qn), q)`` for ``f(q1..qn) -> q``.
    """

    signature: dict
    states: frozenset
    finals: frozenset
    rules: frozenset

    def __post_init__(self):
        for f, args, q in self.rules:
            if f not in self.signature:
                raise FormatError(f"symbol {f!r} has no declared arity")
            if len(args) != self.signature[f]:
                raise FormatError(f"rule for {f!r} has {len(args)} arguments, arity is {self.signature[f]}")
            if q not in self.states or not set(args) <= self.states:
                raise FormatError(f"rule {f}{args} -> {q} uses unknown states")
        if not self.finals <= self.states:
            raise FormatError("final states must be states")

    def __hash__(self):
        return hash((self.states, self.finals, self.rules))

    @cached_property
    def _by_symbol(self) -> dict:
        out = defaultdict(list)
        for f, args, q in self.rules:
            out[f].append((args, q))
        return out

    def end_states(self, t: RankedTerm) -> frozenset:
        kids = [self.end_states(c) for c in t.children]
        return frozenset(q for args, q in self._by_symbol.get(t.symbol, ())
                         if len(args) == len(kids) and all(x in k for x, k in zip(args, kids)))

    def accepts(self, t: RankedTerm) -> bool:
        return not self.end_states(t).isdisjoint(self.finals)


def embed_cta(c: Ncfta) -> Fsta:
    """Chain each rule ``f(q1..qp) -> q`` through fresh states: the node reads
    ``f`` and then the states its children finished in, one by one."""
    sigma = frozenset(c.signature)
    for f in sigma:
        check_symbol(f)
    name = _state_namer(c.states, sigma, "cta")
    start = _fresh("start", {name(q) for q in c.states} | sigma)
    hrules = set()
    chains = set()
    for i, (f, args, q) in enumerate(sorted(c.rules, key=repr)):
        if not args:
            hrules.add((start, f, name(q)))
            continue
        links = [("chain", i, j) for j in range(len(args))]
        chains.update(links)
        hrules.add((start, f, links[0]))
        for j, x in enumerate(args):
            nxt = links[j + 1] if j + 1 < len(args) else name(q)
            hrules.add((links[j], name(x), nxt))
    return Fsta.make(sigma, initial=start, finals=map(name, c.finals), hrules=hrules,
                     states={name(q) for q in c.states} | chains, flavour=NFSTA)


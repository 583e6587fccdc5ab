"""Finite string-tree automata (deterministic, non-deterministic, generalised)."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable

from ..errors import AlphabetMismatch, FormatError
from ..tree import RESERVED, Tree

State = Hashable

DFSTA, NFSTA, GNFSTA = "dfsta", "nfsta", "gnfsta"
FLAVOURS = (DFSTA, NFSTA, GNFSTA)


@dataclass(frozen=True)
class Fsta:
    """An automaton ``(Σ, Q, Q_f, Q_0, Δ, γ)``.

    Alphabet symbols are one-character strings and are states too.  For the
    plain flavours ``initials`` holds exactly one state and ``vrules`` is
    ``None``: a vertical move then inserts the finished child's state as is.
    ``vrules`` is a set of pairs ``(q, p)`` meaning ``p ∈ γ(q)``.
    """

    alphabet: frozenset
    states: frozenset
    finals: frozenset
    initials: frozenset
    hrules: frozenset
    vrules: frozenset | None = None
    flavour: str = NFSTA

    def __post_init__(self):
        for name in ("alphabet", "states", "finals", "initials", "hrules"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if self.vrules is not None:
            object.__setattr__(self, "vrules", frozenset(self.vrules))
        self._validate()

    @classmethod
    def make(cls, alphabet: Iterable[str], *, initial: State = None,
             initials: Iterable[State] | None = None, finals: Iterable[State] = (),
             hrules: Iterable[tuple] = (), vrules: Iterable[tuple] | None = None,
             states: Iterable[State] = (), flavour: str | None = None) -> Fsta:
        """Build an automaton, collecting the state set from everything mentioned."""
        alphabet = frozenset(alphabet)
        hrules = frozenset(tuple(r) for r in hrules)
        if initials is None:
            if initial is None:
                raise FormatError("an initial state is required")
            initials = (initial,)
        initials = frozenset(initials)
        if vrules is not None:
            vrules = frozenset(tuple(r) for r in vrules)
        if flavour is None:
            flavour = GNFSTA if vrules is not None or len(initials) != 1 else NFSTA
        if flavour == GNFSTA and vrules is None:
            vrules = frozenset()
        finals = frozenset(finals)
        qs = set(states) | alphabet | finals | initials
        for r in hrules:
            qs.update(r)
        for r in vrules or ():
            qs.update(r)
        return cls(alphabet, frozenset(qs), finals, initials, hrules, vrules, flavour)

    def _validate(self) -> None:
        for a in self.alphabet:
            if not isinstance(a, str) or len(a) != 1 or a in RESERVED:
                raise FormatError(f"alphabet symbol must be one non-reserved character: {a!r}")
        if self.flavour not in FLAVOURS:
            raise FormatError(f"unknown flavour {self.flavour!r}")
        if "/" in self.states or None in self.states:
            raise FormatError("'/' and None cannot be states")
        if not self.alphabet <= self.states:
            raise FormatError("the state set must include the alphabet")
        if not self.finals <= self.states or not self.initials <= self.states:
            raise FormatError("initial and final states must be states")
        for r in self.hrules:
            if len(r) != 3 or not set(r) <= self.states:
                raise FormatError(f"bad horizontal rule {r!r}")
        if self.flavour == GNFSTA:
            if self.vrules is None:
                raise FormatError("a generalised automaton needs a vertical rule set")
            for r in self.vrules:
                if len(r) != 2 or not set(r) <= self.states:
                    raise FormatError(f"bad vertical rule {r!r}")
        else:
            if self.vrules is not None:
                raise FormatError(f"{self.flavour} automata have no vertical rules")
            if len(self.initials) != 1:
                raise FormatError(f"{self.flavour} automata have exactly one initial state")
        if self.flavour == DFSTA and not self.is_deterministic():
            raise FormatError("dfsta declared but some (q1, q2) has several rules")

    # -- indexes ----------------------------------------------------------

    @cached_property
    def delta(self) -> dict:
        d: dict = defaultdict(set)
        for p, x, c in self.hrules:
            d[(p, x)].add(c)
        return {k: frozenset(v) for k, v in d.items()}

    @cached_property
    def vertical_targets(self) -> dict:
        g: dict = defaultdict(set)
        for q, p in self.vrules or ():
            g[q].add(p)
        return {k: frozenset(v) for k, v in g.items()}

    @property
    def generalised(self) -> bool:
        return self.vrules is not None

    @property
    def initial(self) -> State:
        if len(self.initials) != 1:
            raise ValueError("generalised automaton has a set of initial states")
        return next(iter(self.initials))

    @property
    def pure_states(self) -> frozenset:
        return self.states - self.alphabet

    def vertical(self, q: State) -> frozenset:
        """States a finished child in state ``q`` may insert into its parent."""
        if self.vrules is None:
            return frozenset((q,))
        return self.vertical_targets.get(q, frozenset())

    def vertical_image(self, qs: Iterable[State]) -> frozenset:
        out: set = set()
        for q in qs:
            out |= self.vertical(q)
        return frozenset(out)

    def step(self, current: Iterable[State], inputs: Iterable[State]) -> frozenset:
        inputs = tuple(inputs)
        out: set = set()
        for p in current:
            for x in inputs:
                out |= self.delta.get((p, x), frozenset())
        return frozenset(out)

    def is_deterministic(self) -> bool:
        if self.vrules is not None or len(self.initials) != 1:
            return False
        seen = set()
        for p, x, _ in self.hrules:
            if (p, x) in seen:
                return False
            seen.add((p, x))
        return True

    def is_complete(self) -> bool:
        return self.is_deterministic() and all(
            (p, q) in self.delta for p in self.states for q in self.states)

    def is_pure(self) -> bool:
        sigma = self.alphabet
        if (self.initials | self.finals) & sigma:
            return False
        for p, _, c in self.hrules:
            if p in sigma or c in sigma:
                return False
        for q, p in self.vrules or ():
            if q in sigma or p in sigma:
                return False
        return True

    def check_tree(self, t: Tree) -> None:
        extra = t.symbols() - self.alphabet
        if extra:
            raise AlphabetMismatch(f"symbols {sorted(extra)} are not in the alphabet")

    # -- acceptance -------------------------------------------------------

    def end_states(self, t: Tree) -> frozenset:
        """States the root label can finish in, choosing every branch freely."""
        cur = self.initials
        for item in t.items:
            if isinstance(item, Tree):
                inputs = self.vertical_image(self.end_states(item))
            else:
                inputs = (item,)
            cur = self.step(cur, inputs)
            if not cur:
                break
        return cur

    def accepts(self, t: Tree) -> bool:
        self.check_tree(t)
        return not self.end_states(t).isdisjoint(self.finals)

    def with_finals(self, finals: Iterable[State]) -> Fsta:
        return Fsta(self.alphabet, self.states, frozenset(finals), self.initials,
                    self.hrules, self.vrules, self.flavour)


def run_accept(a: Fsta, t: Tree) -> bool:
    """Acceptance by leftmost-innermost processing with subset simulation.

    Branches are independent until they meet in a common parent, so the set
    of states reachable by each child can be computed on its own and fed to
    the parent's label as a set of possible input symbols.
    """
    return a.accepts(t)


# -- labels for states -----------------------------------------------------

def state_label(q: State) -> str:
    if isinstance(q, str):
        return q
    if isinstance(q, frozenset):
        return "{" + ",".join(sorted(state_label(x) for x in q)) + "}"
    if isinstance(q, tuple):
        if len(q) == 2 and q[0] == "~":
            return "~" + state_label(q[1])
        return "(" + ",".join(state_label(x) for x in q) + ")"
    return str(q)


def state_sort_key(q: State) -> tuple:
    return (0 if isinstance(q, str) and len(q) == 1 else 1, state_label(q))

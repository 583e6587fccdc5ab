"""Line-oriented text formats for string-tree automata, string automata and
ranked tree automata."""

from __future__ import annotations

from ..errors import FormatError, ParseError
from ..fa import FiniteAutomaton, Sym, cat, map_symbols, parse_regex, regex_to_nfa
from ..terms import check_symbol
from .construct import Ncfta
from .fsta import FLAVOURS, GNFSTA, NFSTA, Fsta, state_label, state_sort_key


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise ParseError(f"line {no}: expected 'key: value', got {raw!r}")
        yield no, key.strip(), rest.strip()


def _arrow(no: int, rest: str, left: int) -> tuple[list[str], str]:
    lhs, sep, rhs = rest.partition("->")
    lhs, rhs = lhs.split(), rhs.split()
    if not sep or len(lhs) != left or len(rhs) != 1:
        raise ParseError(f"line {no}: malformed rule {rest!r}")
    return lhs, rhs[0]


def parse_fsta(text: str) -> Fsta:
    flavour = None
    alphabet: list[str] = []
    states: list[str] = []
    initials: list[str] | None = None
    finals: list[str] = []
    hrules, vrules = [], []
    for no, key, rest in _lines(text):
        if key == "flavour":
            if rest not in FLAVOURS:
                raise ParseError(f"line {no}: unknown flavour {rest!r}")
            flavour = rest
        elif key == "alphabet":
            alphabet += rest.split()
        elif key == "states":
            states += rest.split()
        elif key in ("initial", "initials"):
            initials = (initials or []) + rest.split()
        elif key == "final":
            finals += rest.split()
        elif key == "hrule":
            (q, x), p = _arrow(no, rest, 2)
            hrules.append((q, x, p))
        elif key == "vrule":
            (q,), p = _arrow(no, rest, 1)
            vrules.append((q, p))
        else:
            raise ParseError(f"line {no}: unknown key {key!r}")
    if not initials:
        raise ParseError("no initial state declared")
    for a in alphabet:
        if len(a) != 1:
            raise ParseError(f"alphabet symbol {a!r} is not a single character")
    if flavour is None:
        flavour = GNFSTA if vrules or len(initials) > 1 else NFSTA
    if vrules and flavour != GNFSTA:
        raise FormatError(f"vertical rules need flavour gnfsta, not {flavour}")
    return Fsta.make(alphabet, initials=initials, finals=finals, hrules=hrules,
                     vrules=vrules if flavour == GNFSTA else None, states=states,
                     flavour=flavour)


def state_names(a: Fsta) -> dict:
    """A printable token for every state.

    Readable labels are kept when they are unambiguous; otherwise pure states
    are renumbered ``q0``, ``q1``, ... in sorted order.
    """
    pure = sorted(a.pure_states, key=state_sort_key)
    names = {x: x for x in a.alphabet}
    labels = [state_label(q) for q in pure]
    ok = len(set(labels)) == len(labels) and all(
        lab and not any(c.isspace() for c in lab) and "->" not in lab and lab not in a.alphabet
        and not lab.startswith("#") for lab in labels)
    if ok:
        names.update(zip(pure, labels))
    else:
        names.update((q, f"q{i}") for i, q in enumerate(pure))
    return names


def format_fsta(a: Fsta) -> str:
    names = state_names(a)

    def line(key, qs):
        return f"{key}: " + " ".join(sorted(names[q] for q in qs))

    out = [f"flavour: {a.flavour}", "alphabet: " + " ".join(sorted(a.alphabet))]
    out.append(line("states", a.pure_states))
    out.append(line("initials" if a.flavour == GNFSTA else "initial", a.initials))
    out.append(line("final", a.finals))
    out += sorted(f"hrule: {names[p]} {names[x]} -> {names[c]}" for p, x, c in a.hrules)
    out += sorted(f"vrule: {names[q]} -> {names[p]}" for q, p in a.vrules or ())
    return "\n".join(out) + "\n"


# -- string automata ----------------------------------------------------------

def parse_fa(text: str) -> FiniteAutomaton:
    """``alphabet:``, ``states:``, ``initial:``, ``final:`` and ``trans: q a -> p`` lines."""
    alphabet: set = set()
    states: set = set()
    initial = None
    finals: set = set()
    trans = set()
    for no, key, rest in _lines(text):
        if key == "alphabet":
            alphabet.update(rest.split())
        elif key == "states":
            states.update(rest.split())
        elif key == "initial":
            initial = rest
        elif key == "final":
            finals.update(rest.split())
        elif key == "trans":
            (q, a), p = _arrow(no, rest, 2)
            trans.add((q, a, p))
        else:
            raise ParseError(f"line {no}: unknown key {key!r}")
    if initial is None:
        raise ParseError("no initial state declared")
    for q, a, p in trans:
        states.update((q, p))
        alphabet.add(a)
    states.add(initial)
    states |= finals
    for a in alphabet:
        if len(a) != 1:
            raise ParseError(f"alphabet symbol {a!r} is not a single character")
    return FiniteAutomaton(frozenset(alphabet), frozenset(states), frozenset(finals),
                           initial, frozenset(trans))


def fa_from_regex(text: str, alphabet=None) -> FiniteAutomaton:
    """String automaton for a regex; a multi-letter word stands for its letters in sequence."""
    r = parse_regex(text, lambda tok, escaped: tok)
    r = map_symbols(r, lambda w: cat(*(Sym(c) for c in w)))
    return regex_to_nfa(r, alphabet)


# -- ranked tree automata -----------------------------------------------------

def parse_ncfta(text: str) -> Ncfta:
    """``arity f 2`` lines, ``final: q ...`` and ``rule: f(q1,q2) -> q`` / ``rule: a -> q``."""
    signature: dict = {}
    finals: set = set()
    rules = set()
    states: set = set()
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("arity "):
            parts = line.split()
            if len(parts) != 3 or not parts[2].isdigit():
                raise ParseError(f"line {no}: malformed arity line {raw!r}")
            check_symbol(parts[1])
            signature[parts[1]] = int(parts[2])
            continue
        key, _, rest = line.partition(":")
        key = key.strip()
        if key == "final":
            finals.update(rest.split())
        elif key == "states":
            states.update(rest.split())
        elif key == "rule":
            lhs, sep, rhs = rest.partition("->")
            rhs = rhs.strip()
            lhs = lhs.strip()
            if not sep or not rhs or not lhs:
                raise ParseError(f"line {no}: malformed rule {raw!r}")
            if "(" in lhs:
                f, _, args = lhs.partition("(")
                if not args.endswith(")"):
                    raise ParseError(f"line {no}: missing ')' in {raw!r}")
                args = tuple(x.strip() for x in args[:-1].split(","))
            else:
                f, args = lhs, ()
            f = f.strip()
            if f not in signature:
                signature[f] = len(args)
            rules.add((f, args, rhs))
            states.add(rhs)
            states.update(args)
        else:
            raise ParseError(f"line {no}: unknown key {key!r}")
    states |= finals
    return Ncfta(signature, frozenset(states), frozenset(finals), frozenset(rules))


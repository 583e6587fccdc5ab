"""Regular string-tree expressions: syntax, matching with capture groups,
compilation to grammars, and substitution templates.

Every expression denotes a set of trees.  A symbol ``a`` denotes ``<a>``,
juxtaposition concatenates node contents, ``<r>`` wraps, ``r .{x} s``
replaces each ``x`` in a tree of ``r`` by some tree of ``s`` (each
occurrence chosen independently) and ``r *{x}`` iterates that replacement.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Iterable

from . import fa
from .errors import (ParseError, UnboundGroup, UndeclaredVariable, VariableInAlphabet,
                     VariableInInput)
from .grammar import Rstg
from .tree import RESERVED, Tree, concat_all


# -- AST ----------------------------------------------------------------------------

class Rste:
    __slots__ = ()


@dataclass(frozen=True)
class NullTree(Rste):
    pass


@dataclass(frozen=True)
class Symbol(Rste):
    value: str


@dataclass(frozen=True)
class Variable(Rste):
    name: str


@dataclass(frozen=True)
class Union(Rste):
    left: Rste
    right: Rste


@dataclass(frozen=True)
class HConcat(Rste):
    left: Rste
    right: Rste


@dataclass(frozen=True)
class VConcat(Rste):
    left: Rste
    var: str
    right: Rste


@dataclass(frozen=True)
class HStar(Rste):
    inner: Rste


@dataclass(frozen=True)
class VStar(Rste):
    inner: Rste
    var: str


@dataclass(frozen=True)
class Encaps(Rste):
    inner: Rste


@dataclass(frozen=True)
class AnySymbol(Rste):
    pass


@dataclass(frozen=True)
class AnyTree(Rste):
    """Any tree; ``var`` is the private variable of its vertical iteration."""

    var: str


@dataclass(frozen=True)
class Capture(Rste):
    index: int
    inner: Rste


def expand_any_tree(e: AnyTree) -> Rste:
    return VStar(HStar(Union(AnySymbol(), Variable(e.var))), e.var)


def children(e: Rste) -> tuple[Rste, ...]:
    if isinstance(e, (Union, HConcat, VConcat)):
        return (e.left, e.right)
    if isinstance(e, (HStar, VStar, Encaps, Capture)):
        return (e.inner,)
    return ()


def walk(e: Rste):
    yield e
    for c in children(e):
        yield from walk(c)


@dataclass(frozen=True)
class Expression:
    """A parsed expression with its declared variables and group count."""

    root: Rste
    variables: frozenset
    groups: int

    def symbols(self) -> set[str]:
        return {n.value for n in walk(self.root) if isinstance(n, Symbol)}


# -- parser ---------------------------------------------------------------------------

_META = set("<>()|*%@\\")


def parse_rste(text: str, variables: Iterable[str] = (),
               alphabet: Iterable[str] | None = None) -> Expression:
    """Parse an expression, optionally preceded by a ``vars: X Y`` header line.

    Whitespace between tokens is ignored; ``\\c`` gives the literal ``c``.
    """
    declared = set(variables)
    lines = text.split("\n")
    body = []
    for line in lines:
        stripped = line.strip()
        if stripped.startswith("vars:") and not body:
            declared.update(stripped[len("vars:"):].split())
        else:
            body.append(line)
    src = "\n".join(body)
    for v in declared:
        if len(v) != 1 or v in _META or v in RESERVED or v in ".{}" or v.isspace():
            raise ParseError(f"variable {v!r} must be a single ordinary character")
    if alphabet is not None:
        clash = declared & set(alphabet)
        if clash:
            raise VariableInAlphabet(f"variables {sorted(clash)} are also alphabet symbols")
    p = _Parser(src, frozenset(declared))
    root = p.parse()
    return Expression(root, frozenset(declared), p.groups)


class _Parser:
    def __init__(self, text: str, variables: frozenset):
        self.text = text
        self.pos = 0
        self.variables = variables
        self.groups = 0
        self.fresh = 0

    def error(self, msg: str):
        raise ParseError(f"{msg} at offset {self.pos} in {self.text!r}")

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, k: int = 0) -> str | None:
        self.skip()
        i = self.pos + k
        return self.text[i] if i < len(self.text) else None

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def parse(self) -> Rste:
        e = self.union()
        if self.peek() is not None:
            self.error(f"unexpected {self.peek()!r}")
        return e

    def union(self) -> Rste:
        e = self.seq()
        while self.peek() == "|":
            self.take()
            e = Union(e, self.seq())
        return e

    def starts_atom(self) -> bool:
        ch = self.peek()
        return ch is not None and ch not in "|)>*"

    def seq(self) -> Rste:
        e = None
        while self.starts_atom():
            if self.peek() == "." and self.peek(1) == "{":
                if e is None:
                    self.error("vertical concatenation needs a left operand")
                self.take()
                x = self.braced_var()
                if not self.starts_atom() or (self.peek() == "." and self.peek(1) == "{"):
                    self.error("vertical concatenation needs a right operand")
                e = VConcat(e, x, self.postfix())
            else:
                nxt = self.postfix()
                e = nxt if e is None else HConcat(e, nxt)
        return NullTree() if e is None else e

    def braced_var(self) -> str:
        if self.take() != "{":
            self.error("expected '{'")
        x = self.take()
        if x is None:
            self.error("expected a variable")
        if self.take() != "}":
            self.error("expected '}'")
        if x not in self.variables:
            raise UndeclaredVariable(f"variable {x!r} is not declared")
        return x

    def postfix(self) -> Rste:
        e = self.atom()
        while self.peek() == "*":
            self.take()
            if self.peek() == "{":
                e = VStar(e, self.braced_var())
            else:
                e = HStar(e)
        return e

    def atom(self) -> Rste:
        ch = self.take()
        if ch == "<":
            inner = self.union()
            if self.take() != ">":
                self.error("missing '>'")
            return Encaps(inner)
        if ch == "(":
            capture = True
            if self.peek() == "?" and self.peek(1) == ":":
                self.take()
                self.take()
                capture = False
            if capture:
                self.groups += 1
                index = self.groups
            inner = self.union()
            if self.take() != ")":
                self.error("missing ')'")
            return Capture(index, inner) if capture else inner
        if ch == "%":
            return AnySymbol()
        if ch == "@":
            self.fresh += 1
            return AnyTree(f"@{self.fresh}")
        if ch == "\\":
            if self.pos >= len(self.text):
                self.error("dangling backslash")
            ch = self.text[self.pos]
            self.pos += 1
            if ch in self.variables:
                raise VariableInAlphabet(f"{ch!r} is declared as a variable")
            return self.symbol(ch)
        if ch in self.variables:
            return Variable(ch)
        return self.symbol(ch)

    def symbol(self, ch: str) -> Rste:
        if ch in RESERVED:
            self.error(f"reserved character {ch!r}")
        return Symbol(ch)


# -- compiled form used for matching --------------------------------------------------

class _Node:
    __slots__ = ("kind", "a", "b", "index", "multi", "uid")

    def __init__(self, kind, a=None, b=None, index=0, multi=False):
        self.kind, self.a, self.b = kind, a, b
        self.index, self.multi = index, multi
        self.uid = 0


_NULL, _SYM, _ANY, _ALT, _CAT, _STAR, _CHILD, _NEVER, _CAP, _REF = range(10)


class Matcher:
    """Whole-tree matcher for one expression.

    Variables are resolved lexically once: an occurrence of ``x`` becomes
    "one child tree matching the expression ``x`` stands for".
    """

    def __init__(self, expr: Expression):
        self.expr = expr
        self.nodes: list[_Node] = []
        self.start = self._compile(expr.root, {}, False)

    def _new(self, *args, **kw) -> _Node:
        n = _Node(*args, **kw)
        n.uid = len(self.nodes)
        self.nodes.append(n)
        return n

    def _compile(self, e: Rste, env: dict, starred: bool) -> _Node:
        if isinstance(e, NullTree):
            return self._new(_NULL)
        if isinstance(e, Symbol):
            return self._new(_SYM, e.value)
        if isinstance(e, AnySymbol):
            return self._new(_ANY)
        if isinstance(e, Variable):
            target = env.get(e.name)
            return self._new(_NEVER) if target is None else self._new(_CHILD, target)
        if isinstance(e, Union):
            return self._new(_ALT, self._compile(e.left, env, starred),
                             self._compile(e.right, env, starred))
        if isinstance(e, HConcat):
            return self._new(_CAT, self._compile(e.left, env, starred),
                             self._compile(e.right, env, starred))
        if isinstance(e, HStar):
            return self._new(_STAR, self._compile(e.inner, env, True))
        if isinstance(e, Encaps):
            return self._new(_CHILD, self._compile(e.inner, env, starred))
        if isinstance(e, Capture):
            return self._new(_CAP, self._compile(e.inner, env, starred), index=e.index,
                             multi=starred)
        if isinstance(e, VConcat):
            right = self._compile(e.right, env, starred)
            return self._compile(e.left, {**env, e.var: right}, starred)
        if isinstance(e, AnyTree):
            return self._compile(expand_any_tree(e), env, starred)
        if isinstance(e, VStar):
            hole = self._new(_REF)  # forwards to the body once it exists
            body = self._compile(e.inner, {**env, e.var: hole}, True)
            hole.a = body
            return body
        raise TypeError(f"not an expression node: {e!r}")

    def match(self, t: Tree) -> Bindings | None:
        bad = t.symbols() & self.expr.variables
        if bad:
            raise VariableInInput(f"input contains declared variables {sorted(bad)}")
        run = _Run(self)
        limit = sys.getrecursionlimit()
        need = 50 * (t.size() + len(self.nodes)) + 1000
        if need > limit:
            sys.setrecursionlimit(need)
        if not run.member(self.start, t, 0, len(t.items)):
            return None
        groups: dict = {i: [] for i in self._multi_groups()}
        groups[0] = t
        run.extract(self.start, t, 0, len(t.items), groups)
        return Bindings(groups)

    def _multi_groups(self) -> set[int]:
        return {n.index for n in self.nodes if n.kind == _CAP and n.multi}


class _Run:
    def __init__(self, m: Matcher):
        self.m = m
        self.memo: dict = {}

    def member(self, n: _Node, t: Tree, i: int, j: int) -> bool:
        key = (n.uid, id(t), i, j)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        result = self._member(n, t, i, j)
        self.memo[key] = result
        return result

    def _member(self, n: _Node, t: Tree, i: int, j: int) -> bool:
        k = n.kind
        items = t.items
        if k == _NULL:
            return i == j
        if k == _SYM:
            return j == i + 1 and items[i] == n.a
        if k == _ANY:
            return j == i + 1 and not isinstance(items[i], Tree)
        if k == _CHILD:
            if j != i + 1 or not isinstance(items[i], Tree):
                return False
            c = items[i]
            return self.member(n.a, c, 0, len(c.items))
        if k == _NEVER:
            return False
        if k in (_CAP, _REF):
            return self.member(n.a, t, i, j)
        if k == _ALT:
            return self.member(n.a, t, i, j) or self.member(n.b, t, i, j)
        if k == _CAT:
            return any(self.member(n.a, t, i, s) and self.member(n.b, t, s, j)
                       for s in range(j, i - 1, -1))
        if k == _STAR:
            if i == j:
                return True
            return any(self.member(n.a, t, i, s) and self.member(n, t, s, j)
                       for s in range(j, i, -1))
        raise AssertionError(k)

    def extract(self, n: _Node, t: Tree, i: int, j: int, groups: dict) -> None:
        """Walk the preferred derivation, recording captured fragments."""
        k = n.kind
        if k == _CHILD:
            c = t.items[i]
            self.extract(n.a, c, 0, len(c.items), groups)
        elif k == _REF:
            self.extract(n.a, t, i, j, groups)
        elif k == _CAP:
            frag = Tree(t.items[i:j])
            if n.multi:
                groups[n.index].append(frag)
            elif n.index not in groups:
                groups[n.index] = frag
            self.extract(n.a, t, i, j, groups)
        elif k == _ALT:
            first = n.a if self.member(n.a, t, i, j) else n.b
            self.extract(first, t, i, j, groups)
        elif k == _CAT:
            for s in range(j, i - 1, -1):
                if self.member(n.a, t, i, s) and self.member(n.b, t, s, j):
                    self.extract(n.a, t, i, s, groups)
                    self.extract(n.b, t, s, j, groups)
                    return
        elif k == _STAR:
            for s in range(j, i, -1):
                if self.member(n.a, t, i, s) and self.member(n, t, s, j):
                    self.extract(n.a, t, i, s, groups)
                    self.extract(n, t, s, j, groups)
                    return


@dataclass
class Bindings:
    """Captured fragments: group 0 is the whole tree; groups under a star hold lists."""

    groups: dict = field(default_factory=dict)

    def __getitem__(self, index: int):
        return self.groups[index]

    def __contains__(self, index: int) -> bool:
        return index in self.groups

    def get(self, index: int, default=None):
        return self.groups.get(index, default)


def match(e: Expression, t: Tree) -> Bindings | None:
    return Matcher(e).match(t)


# -- compilation to a grammar ---------------------------------------------------------

def rste_to_grammar(e: Expression, alphabet: Iterable[str] = ()) -> Rstg:
    """An equivalent grammar.  ``alphabet`` fixes what ``%`` ranges over; symbols
    written in the expression are added to it."""
    sigma = (set(alphabet) | e.symbols()) - set(e.variables)
    rules: dict[str, fa.Regex] = {}
    counter = [0]

    def fresh() -> str:
        counter[0] += 1
        return f"N{counter[0]}"

    def comp(r: Rste, env: dict) -> fa.Regex:
        if isinstance(r, NullTree):
            return fa.EPS
        if isinstance(r, Symbol):
            return fa.Sym(r.value)
        if isinstance(r, Variable):
            return fa.Sym(env[r.name]) if r.name in env else fa.EMPTY
        if isinstance(r, AnySymbol):
            return fa.alt(*(fa.Sym(x) for x in sorted(sigma)))
        if isinstance(r, Union):
            return fa.alt(comp(r.left, env), comp(r.right, env))
        if isinstance(r, HConcat):
            return fa.cat(comp(r.left, env), comp(r.right, env))
        if isinstance(r, HStar):
            return fa.star(comp(r.inner, env))
        if isinstance(r, Capture):
            return comp(r.inner, env)
        if isinstance(r, Encaps):
            n = fresh()
            rules[n] = comp(r.inner, env)
            return fa.Sym(n)
        if isinstance(r, VConcat):
            n = fresh()
            rules[n] = comp(r.right, env)
            return comp(r.left, {**env, r.var: n})
        if isinstance(r, VStar):
            n = fresh()
            body = comp(r.inner, {**env, r.var: n})
            rules[n] = body
            return body
        if isinstance(r, AnyTree):
            return comp(expand_any_tree(r), env)
        raise TypeError(f"not an expression node: {r!r}")

    rules["S0"] = comp(e.root, {})
    names = {"S0"} | {f"N{k}" for k in range(1, counter[0] + 1)}
    return Rstg(frozenset(sigma), frozenset(names), "S0", rules)


# -- templates ------------------------------------------------------------------------

@dataclass(frozen=True)
class Ref:
    group: int


@dataclass(frozen=True)
class TNode:
    items: tuple


@dataclass(frozen=True)
class Template:
    """Top-level pieces are concatenated: a character ``c`` stands for ``<c>``,
    a bracketed literal for itself and ``\\n`` for group ``n``.  Inside
    brackets a reference inserts the captured fragment as a child."""

    pieces: tuple

    def refs(self) -> set[int]:
        out = set()

        def go(items):
            for x in items:
                if isinstance(x, Ref):
                    out.add(x.group)
                elif isinstance(x, TNode):
                    go(x.items)

        go(self.pieces)
        return out


def parse_template(text: str) -> Template:
    stack: list[list] = [[]]
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\\":
            if i + 1 >= len(text):
                raise ParseError("dangling backslash in template")
            nxt = text[i + 1]
            stack[-1].append(Ref(int(nxt)) if nxt.isdigit() else nxt)
            i += 2
            continue
        if ch == "<":
            stack.append([])
        elif ch == ">":
            if len(stack) == 1:
                raise ParseError(f"unmatched '>' in template {text!r}")
            node = TNode(tuple(stack.pop()))
            stack[-1].append(node)
        elif ch == "/":
            raise ParseError(f"reserved character '/' in template {text!r}")
        else:
            stack[-1].append(ch)
        i += 1
    if len(stack) != 1:
        raise ParseError(f"unclosed '<' in template {text!r}")
    return Template(tuple(stack[0]))


def _fragments(b: Bindings, group: int) -> list[Tree]:
    if group not in b:
        raise UnboundGroup(f"group {group} is not bound")
    v = b[group]
    return list(v) if isinstance(v, list) else [v]


def substitute(tpl: Template, b: Bindings) -> Tree:
    def build(node: TNode) -> Tree:
        items = []
        for x in node.items:
            if isinstance(x, TNode):
                items.append(build(x))
            elif isinstance(x, Ref):
                items.extend(_fragments(b, x.group))
            else:
                items.append(x)
        return Tree(tuple(items))

    parts = []
    for piece in tpl.pieces:
        if isinstance(piece, TNode):
            parts.append(build(piece))
        elif isinstance(piece, Ref):
            parts.extend(_fragments(b, piece.group))
        else:
            parts.append(Tree((piece,)))
    return concat_all(parts)


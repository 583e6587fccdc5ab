"""String trees: bracketed strings whose nodes hold interleaved symbols and subtrees.

A tree is a node holding an ordered sequence of items; each item is either a
symbol (a one-character ``str``) or a child :class:`Tree`.  The serialized
form is ``<`` item* ``>``, with ``\\`` escaping the reserved characters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .errors import BadEscape, ContentOutsideRoot, UnbalancedBrackets

RESERVED = frozenset("<>/")
_ESCAPABLE = frozenset("<>/\\")

Item = Union[str, "Tree"]


@dataclass(frozen=True)
class Tree:
    items: tuple = ()

    def __post_init__(self):
        if not isinstance(self.items, tuple):
            object.__setattr__(self, "items", tuple(self.items))

    @property
    def children(self) -> tuple[Tree, ...]:
        return tuple(i for i in self.items if isinstance(i, Tree))

    @property
    def label(self) -> str:
        """The node's own symbols, in order, with the children skipped."""
        return "".join(i for i in self.items if not isinstance(i, Tree))

    def is_leaf(self) -> bool:
        return not any(isinstance(i, Tree) for i in self.items)

    def is_reduced(self) -> bool:
        seen_child = False
        for item in self.items:
            if isinstance(item, Tree):
                if not item.is_reduced():
                    return False
                seen_child = True
            elif seen_child:
                return False
        return True

    def size(self) -> int:
        """Deep item count: one per bracket pair plus one per symbol."""
        return 1 + sum(i.size() if isinstance(i, Tree) else 1 for i in self.items)

    def node_count(self) -> int:
        return 1 + sum(c.node_count() for c in self.children)

    def symbols(self) -> set[str]:
        out: set[str] = set()
        for item in self.items:
            if isinstance(item, Tree):
                out |= item.symbols()
            else:
                out.add(item)
        return out

    def walk(self) -> Iterator[Tree]:
        """Pre-order traversal of the nodes."""
        yield self
        for c in self.children:
            yield from c.walk()

    def __str__(self) -> str:
        return serialize(self)

    def __repr__(self) -> str:
        return f"Tree({serialize(self)!r})"


NULL = Tree()


def leaf(label: str) -> Tree:
    return Tree(tuple(label))


def parse_tree(text: str) -> Tree:
    stack: list[list] = []
    result = None
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\\":
            if i + 1 >= n or text[i + 1] not in _ESCAPABLE:
                raise BadEscape(f"bad escape at offset {i}")
            ch = text[i + 1]
            i += 2
            if not stack:
                raise ContentOutsideRoot(f"symbol {ch!r} outside the root at offset {i - 2}")
            stack[-1].append(ch)
            continue
        i += 1
        if ch == "<":
            if result is not None and not stack:
                raise ContentOutsideRoot(f"second root at offset {i - 1}")
            stack.append([])
        elif ch == ">":
            if not stack:
                raise UnbalancedBrackets(f"unmatched '>' at offset {i - 1}")
            node = Tree(tuple(stack.pop()))
            if stack:
                stack[-1].append(node)
            else:
                result = node
        elif ch == "/":
            raise BadEscape(f"unescaped '/' at offset {i - 1}")
        else:
            if not stack:
                raise ContentOutsideRoot(f"symbol {ch!r} outside the root at offset {i - 1}")
            stack[-1].append(ch)
    if stack:
        raise UnbalancedBrackets(f"{len(stack)} unclosed '<'")
    if result is None:
        raise UnbalancedBrackets("no tree in input")
    return result


def escape_symbol(ch: str) -> str:
    return "\\" + ch if ch in _ESCAPABLE else ch


def serialize(t: Tree) -> str:
    parts: list[str] = []
    _emit(t, parts)
    return "".join(parts)


def _emit(t: Tree, out: list[str]) -> None:
    out.append("<")
    for item in t.items:
        if isinstance(item, Tree):
            _emit(item, out)
        else:
            out.append(escape_symbol(item))
    out.append(">")


def concat(u: Tree, v: Tree) -> Tree:
    return Tree(u.items + v.items)


def concat_all(trees: Iterable[Tree]) -> Tree:
    items: list = []
    for t in trees:
        items.extend(t.items)
    return Tree(tuple(items))


def encapsulate(t: Tree) -> Tree:
    return Tree((t,))


def reduce(t: Tree) -> Tree:
    symbols = [i for i in t.items if not isinstance(i, Tree)]
    children = [reduce(i) for i in t.items if isinstance(i, Tree)]
    return Tree(tuple(symbols) + tuple(children))


def equals_reduced(u: Tree, v: Tree) -> bool:
    return reduce(u) == reduce(v)


def vertical_concat(u: Tree, x: str, v: Tree) -> Tree:
    """Replace every occurrence of symbol ``x`` in ``u`` by the tree ``v``."""
    out = []
    for item in u.items:
        if isinstance(item, Tree):
            out.append(vertical_concat(item, x, v))
        elif item == x:
            out.append(v)
        else:
            out.append(item)
    return Tree(tuple(out))


def vertical_encode(s: str) -> Tree:
    t = NULL
    for ch in s:
        if ch in RESERVED:
            raise ValueError(f"reserved character {ch!r} cannot be a symbol")
        t = Tree((t, ch))
    return t


def vertical_decode(t: Tree) -> str | None:
    """Inverse of :func:`vertical_encode`; ``None`` if ``t`` is not in its image."""
    out: list[str] = []
    while t.items:
        if len(t.items) != 2 or not isinstance(t.items[0], Tree) or isinstance(t.items[1], Tree):
            return None
        out.append(t.items[1])
        t = t.items[0]
    return "".join(reversed(out))

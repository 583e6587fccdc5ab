"""Step-by-step runs: the move relation, witness traces and the brute-force oracle.

Intermediate trees live in T(Q ∪ {/}).  A :class:`RunNode` is a node whose
``state`` is the symbol written before the slash (``None`` while the label
is untouched) and whose ``items`` are the label remainder after the slash:
states and child nodes.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Iterator

from ..errors import BudgetExceeded
from ..tree import Tree, escape_symbol
from .fsta import Fsta, State, state_label, state_sort_key

INITIAL, HORIZONTAL, VERTICAL = "initial", "horizontal", "vertical"


class RunNode:
    __slots__ = ("state", "items", "_hash")

    def __init__(self, state: State | None, items: tuple):
        self.state = state
        self.items = items
        self._hash = hash((state, items))

    def __eq__(self, other):
        return (isinstance(other, RunNode) and self._hash == other._hash
                and self.state == other.state and self.items == other.items)

    def __hash__(self):
        return self._hash

    def is_leaf(self) -> bool:
        return not any(isinstance(i, RunNode) for i in self.items)

    @classmethod
    def from_tree(cls, t: Tree) -> RunNode:
        return cls(None, tuple(cls.from_tree(i) if isinstance(i, Tree) else i for i in t.items))

    def render(self) -> str:
        out = ["<"]
        if self.state is not None:
            out.append(_render_state(self.state) + "/")
        for item in self.items:
            out.append(item.render() if isinstance(item, RunNode) else _render_state(item))
        out.append(">")
        return "".join(out)

    def __repr__(self):
        return f"RunNode({self.render()!r})"


def _render_state(q: State) -> str:
    label = state_label(q)
    if isinstance(q, str) and len(q) == 1:
        return escape_symbol(q)
    return "{" + label + "}" if not label.startswith("{") else label


@dataclass(frozen=True)
class TraceStep:
    kind: str
    rule: tuple
    tree: RunNode

    def describe(self) -> str:
        if self.kind == INITIAL:
            rule = f"start {state_label(self.rule[0])}"
        elif self.kind == HORIZONTAL:
            p, x, c = map(state_label, self.rule)
            rule = f"({p}, {x}) -> {c}"
        else:
            q, p = map(state_label, self.rule)
            rule = f"{q} -> {p}"
        return f"{self.kind:<10} {rule:<24} {self.tree.render()}"


@dataclass(frozen=True)
class RunTrace:
    start: RunNode
    steps: tuple[TraceStep, ...]

    @property
    def entries(self) -> list[RunNode]:
        return [self.start] + [s.tree for s in self.steps]

    @property
    def final(self) -> RunNode:
        return self.steps[-1].tree if self.steps else self.start

    def render(self) -> str:
        lines = [f"{'input':<10} {'':<24} {self.start.render()}"]
        lines += [s.describe() for s in self.steps]
        return "\n".join(lines)


def run_length(t: Tree) -> int:
    """Length of every successful run: each node gets one initial assignment and,
    unless it is the root, one vertical move; every item costs one horizontal move."""
    nodes = t.node_count()
    symbols = t.size() - nodes
    return nodes + symbols + 2 * (nodes - 1)


def trace_run(a: Fsta, t: Tree, limit: int | None = None) -> RunTrace | None:
    a.check_tree(t)
    if not a.accepts(t):
        return None
    if limit is not None and run_length(t) > limit:
        raise BudgetExceeded(f"a successful run needs {run_length(t)} steps, budget is {limit}")
    plan = _plan(a, t, a.finals)
    return _replay(t, plan)


@dataclass
class _Plan:
    initial: State
    # per item: (input state, child plan or None, end state of child, vertical target)
    moves: list


def _sorted(qs) -> list:
    return sorted(qs, key=state_sort_key)


def _plan(a: Fsta, t: Tree, targets) -> _Plan:
    """Pick one concrete run of ``t``'s label ending in ``targets``."""
    child_ends = {}
    layers = [a.initials]
    inputs = []
    for idx, item in enumerate(t.items):
        if isinstance(item, Tree):
            ends = a.end_states(item)
            child_ends[idx] = ends
            xs = a.vertical_image(ends)
        else:
            xs = frozenset((item,))
        inputs.append(xs)
        layers.append(a.step(layers[-1], xs))
    goal = _sorted(layers[-1] & frozenset(targets))[0]
    moves = [None] * len(t.items)
    chosen = goal
    for idx in range(len(t.items) - 1, -1, -1):
        found = None
        for p in _sorted(layers[idx]):
            for x in _sorted(inputs[idx]):
                if chosen in a.delta.get((p, x), ()):
                    found = (p, x)
                    break
            if found:
                break
        p, x = found
        item = t.items[idx]
        if isinstance(item, Tree):
            sources = [q for q in _sorted(child_ends[idx]) if x in a.vertical(q)]
            q = sources[0]
            moves[idx] = (p, x, chosen, _plan(a, item, {q}), q)
        else:
            moves[idx] = (p, x, chosen, None, None)
        chosen = p
    return _Plan(chosen, moves)


def _replay(t: Tree, plan: _Plan) -> RunTrace:
    """Emit the planned run, always working on the leftmost leaf."""
    work = _to_lists(t)
    start = _freeze(work)
    steps: list[TraceStep] = []

    def node_at(path):
        node = work
        for i in path:
            node = node[1][i]
        return node

    def process(path, pl: _Plan):
        node = node_at(path)
        for idx, mv in enumerate(pl.moves):
            if mv[3] is not None:
                process(path + (idx,), mv[3])
                child = node[1][idx]
                node[1][idx] = mv[1]
                steps.append(TraceStep(VERTICAL, (child[0], mv[1]), _freeze(work)))
        node[0] = pl.initial
        steps.append(TraceStep(INITIAL, (pl.initial,), _freeze(work)))
        for mv in pl.moves:
            p, x, c = mv[0], mv[1], mv[2]
            node[0] = c
            del node[1][0]
            steps.append(TraceStep(HORIZONTAL, (p, x, c), _freeze(work)))

    process((), plan)
    return RunTrace(start, tuple(steps))


def _to_lists(t: Tree) -> list:
    return [None, [_to_lists(i) if isinstance(i, Tree) else i for i in t.items]]


def _freeze(node: list) -> RunNode:
    return RunNode(node[0], tuple(_freeze(i) if isinstance(i, list) else i for i in node[1]))


class BruteForce:
    """Exhaustive search over the move relation.

    Explores every leaf choice and every rule choice; reachability results
    are cached per intermediate tree, so one instance can answer many
    queries against the same automaton.  With ``leftmost=True`` only the
    leftmost leaf may move at each step.
    """

    def __init__(self, a: Fsta, leftmost: bool = False):
        self.a = a
        self.leftmost = leftmost
        self._memo: dict[RunNode, bool] = {}

    def accepts(self, t: Tree) -> bool:
        self.a.check_tree(t)
        limit = sys.getrecursionlimit()
        need = 4 * run_length(t) + 100
        if need > limit:
            sys.setrecursionlimit(need)
        return self._reach(RunNode.from_tree(t))

    def _reach(self, node: RunNode) -> bool:
        hit = self._memo.get(node)
        if hit is not None:
            return hit
        if node.state is not None and not node.items and node.state in self.a.finals:
            result = True
        else:
            result = False
            for kind, nxt in self.successors(node, root=True):
                if self._reach(nxt):
                    result = True
                    break
        self._memo[node] = result
        return result

    def successors(self, node: RunNode, root: bool) -> Iterator[tuple[str, object]]:
        """Yield ``("tree", node')`` for in-place moves and ``("fold", q)`` for
        a vertical move of ``node`` that leaves state ``q`` in its parent."""
        a = self.a
        if node.is_leaf():
            if node.state is None:
                if all(x in a.states for x in node.items):
                    for q in a.initials:
                        yield "tree", RunNode(q, node.items)
            elif node.items:
                for c in a.delta.get((node.state, node.items[0]), ()):
                    yield "tree", RunNode(c, node.items[1:])
            elif not root:
                for q in a.vertical(node.state):
                    yield "fold", q
            return
        items = node.items
        for idx, item in enumerate(items):
            if not isinstance(item, RunNode):
                continue
            for kind, val in self.successors(item, root=False):
                yield "tree", RunNode(node.state, items[:idx] + (val,) + items[idx + 1:])
            if self.leftmost:
                return


def brute_force_accept(a: Fsta, t: Tree, leftmost: bool = False) -> bool:
    return BruteForce(a, leftmost=leftmost).accepts(t)

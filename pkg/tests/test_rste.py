import random

import pytest

from oracles import random_tree, trees_up_to
from stringtree import (ParseError, UnboundGroup, UndeclaredVariable, VariableInAlphabet,
                        VariableInInput, parse_tree, serialize)
from stringtree.automata import BruteForce
from stringtree.grammar import generate, grammar_to_automaton
from stringtree.rste import (AnyTree, Encaps, HStar, Matcher, Symbol, Union, match, parse_rste,
                             parse_template, rste_to_grammar, substitute, walk)

P = parse_tree
SELECT = "(?:%|X|Z)* *{Z} .{X} (@ <left<@>*> <(@)> <right<@>*> @)"


def _random_expression(rng: random.Random, depth: int, scope: tuple) -> str:
    if depth == 0 or rng.random() < 0.2:
        atoms = ["a", "b", "%", "<>", "@"] + list(scope)
        return rng.choice(atoms)
    op = rng.randrange(7)
    sub = lambda s=scope: _random_expression(rng, depth - 1, s)
    if op == 0:
        return f"(?:{sub()} {sub()})"
    if op == 1:
        return f"(?:{sub()}|{sub()})"
    if op == 2:
        return f"(?:{sub()})*"
    if op == 3:
        return f"<{sub()}>"
    if op == 4:
        return f"(?:{sub(scope + ('X',))} .{{X}} {sub()})"
    if op == 5:
        return f"(?:{sub(scope + ('Y',))})*{{Y}}"
    return f"({sub()})"


def _expressions():
    fixed = ["@", "<(a|b)*>", "a*", "<a>", "(?:<X><X>) .{X} (?:<a>|<b>)", "(?:a|<X>)* *{X}",
             "<%*> <@>", "(a)* (b)*", SELECT.replace("left", "a").replace("right", "b")]
    rng = random.Random(51)
    return fixed + [_random_expression(rng, 3, ()) for _ in range(40)]


def test_parse_examples():
    e = parse_rste("@")
    assert isinstance(e.root, AnyTree)
    e = parse_rste("<(a|b)*>")
    assert isinstance(e.root, Encaps)
    inner = e.root.inner
    assert isinstance(inner, HStar)
    assert inner.inner.inner == Union(Symbol("a"), Symbol("b"))
    assert e.groups == 1
    with pytest.raises(UndeclaredVariable):
        parse_rste("%* .{X} <a>")
    with pytest.raises(VariableInAlphabet):
        parse_rste("vars: a\n%* .{a} <b>", alphabet="ab")
    for bad in ["(a", "a)", "<a", "a .{X", "*"]:
        with pytest.raises(ParseError):
            parse_rste(bad, "X")


def test_group_numbering_by_opening_bracket():
    b = match(parse_rste("((a)(b))(c)"), P("<abc>"))
    assert [serialize(b[k]) for k in range(5)] == ["<abc>", "<ab>", "<a>", "<b>", "<c>"]


def test_semantics_agree_with_compiled_automaton():
    trees = trees_up_to(6)
    for text in _expressions():
        e = parse_rste(text, "XYZ")
        matcher = Matcher(e)
        oracle = BruteForce(grammar_to_automaton(rste_to_grammar(e, "ab")), leftmost=True)
        for t in trees:
            assert (matcher.match(t) is not None) == oracle.accepts(t), (text, t)


def test_compiled_grammar_examples():
    g = rste_to_grammar(parse_rste("<a>"), "ab")
    assert generate(g, 8, 100) == [P("<<a>>")]
    # a bare symbol denotes the single-symbol tree, so X X is the two-variable node
    g = rste_to_grammar(parse_rste("vars: X\n(?:X X) .{X} (?:a|b)"), "ab")
    assert set(generate(g, 6, 100)) == {P(f"<<{x}><{y}>>") for x in "ab" for y in "ab"}
    g = rste_to_grammar(parse_rste("@"), "ab")
    assert set(generate(g, 5, 10**6)) == set(trees_up_to(5))


def test_any_tree_matches_everything():
    e = Matcher(parse_rste("@"))
    for t in trees_up_to(8, "a"):
        assert e.match(t) is not None
    rng = random.Random(52)
    for _ in range(300):
        b = e.match(random_tree(rng, 14, "ab\\<"))
        assert b is not None and set(b.groups) == {0}


def test_selection_example():
    b = match(parse_rste(SELECT, "XZ"), P("<r<<left><m><right>>>"))
    assert serialize(b[1]) == "<<left><m><right>>"
    assert serialize(b[2]) == "<m>"


def test_multiplicity():
    b = match(parse_rste("(%)*"), P("<abc>"))
    assert [serialize(x) for x in b[1]] == ["<a>", "<b>", "<c>"]
    b = match(parse_rste("(%)*"), P("<>"))
    assert b[1] == []
    b = match(parse_rste("a|(b)"), P("<a>"))
    assert 1 not in b


def _inner(t) -> str:
    return serialize(t)[1:-1]


def test_captures_are_contiguous():
    rng = random.Random(53)
    for text in _expressions():
        e = parse_rste(text, "XYZ")
        m = Matcher(e)
        for _ in range(30):
            t = random_tree(rng, 7)
            b = m.match(t)
            if b is None:
                continue
            whole = serialize(t)
            for v in b.groups.values():
                for frag in v if isinstance(v, list) else [v]:
                    assert _inner(frag) in whole


def test_encapsulation_desugaring():
    trees = trees_up_to(6)
    for r in ["a*", "@", "<a>|b", "(?:a|<X>)* *{X}"]:
        plain = Matcher(parse_rste(f"<{r}>", "X"))
        sugar = Matcher(parse_rste(f"W .{{W}} (?:{r})", "XW"))
        for t in trees:
            assert (plain.match(t) is None) == (sugar.match(t) is None)


def test_any_tree_variables_are_fresh():
    e = parse_rste("vars: X\n@ .{X} (?:@ @ <@>)")
    names = [n.var for n in walk(e.root) if isinstance(n, AnyTree)]
    assert len(names) == len(set(names)) == 4
    assert not set(names) & e.variables


def test_variable_in_input():
    m = Matcher(parse_rste("vars: X\n@ .{X} a"))
    with pytest.raises(VariableInInput):
        m.match(P("<aX>"))


def test_templates():
    b = match(parse_rste(SELECT, "XZ"), P("<r<<left><m><right>>>"))
    assert substitute(parse_template("<\\2>"), b) == P("<<m>>")
    assert substitute(parse_template("x\\2y"), b) == P("<xmy>")
    seq = match(parse_rste("(<%>)*"), P("<<a><b>>"))
    assert substitute(parse_template("\\1"), seq) == P("<<a><b>>")
    assert substitute(parse_template("<\\1>"), seq) == P("<<<a>><<b>>>")
    assert substitute(parse_template(""), seq) == P("<>")
    with pytest.raises(UnboundGroup):
        substitute(parse_template("\\3"), b)
    assert parse_template("<a\\1<\\2>>").refs() == {1, 2}
    for bad in ["<a", "a>", "\\"]:
        with pytest.raises(ParseError):
            parse_template(bad)

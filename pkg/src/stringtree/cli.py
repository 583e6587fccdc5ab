"""Command-line front end.

Exit status: 0 for success, acceptance or a match; 1 for rejection or no
match; 2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import automata as au
from .errors import StringTreeError
from .grammar import (automaton_to_grammar, format_grammar, generate, grammar_to_automaton,
                      parse_grammar)
from .program import parse_program, run_program
from .rste import Matcher, parse_rste
from .terms import parse_signature, parse_term, term_encode
from .tree import Tree, parse_tree, reduce, serialize, vertical_encode


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _chomp(text: str) -> str:
    if text.endswith("\r\n"):
        return text[:-2]
    return text[:-1] if text.endswith("\n") else text


def _tree_arg(args) -> Tree:
    if args.tree is None:
        text = sys.stdin.read()
    elif args.file:
        text = _read(args.tree)
    else:
        text = args.tree
    return parse_tree(_chomp(text))


def _automaton(path: str) -> au.Fsta:
    return au.parse_fsta(_read(path))


def _emit_fsta(a: au.Fsta) -> int:
    sys.stdout.write(au.format_fsta(a))
    return 0


def _verdict(ok: bool) -> int:
    print("accepted" if ok else "rejected")
    return 0 if ok else 1


# -- subcommands ----------------------------------------------------------------

def cmd_parse(args) -> int:
    print(serialize(_tree_arg(args)))
    return 0


def cmd_reduce(args) -> int:
    print(serialize(reduce(_tree_arg(args))))
    return 0


def cmd_accept(args) -> int:
    return _verdict(au.run_accept(_automaton(args.automaton), _tree_arg(args)))


def cmd_trace(args) -> int:
    trace = au.trace_run(_automaton(args.automaton), _tree_arg(args), limit=args.limit)
    if trace is None:
        print("rejected")
        return 1
    print(trace.render())
    return 0


def cmd_determinize(args) -> int:
    a = _automaton(args.automaton)
    if not a.is_pure():
        a = au.to_pure_states(a)
    return _emit_fsta(au.determinize(a))


def cmd_purify(args) -> int:
    return _emit_fsta(au.to_pure_states(_automaton(args.automaton)))


def cmd_complete(args) -> int:
    return _emit_fsta(au.complete(_automaton(args.automaton)))


def cmd_union(args) -> int:
    return _emit_fsta(au.bool_union(_automaton(args.first), _automaton(args.second)))


def cmd_intersect(args) -> int:
    return _emit_fsta(au.bool_intersect(_automaton(args.first), _automaton(args.second)))


def cmd_complement(args) -> int:
    return _emit_fsta(au.bool_complement(_automaton(args.automaton)))


def _string_automaton(args):
    if args.regex is not None:
        return au.fa_from_regex(args.regex, set(args.alphabet or ""))
    if args.fa is None:
        raise StringTreeError("give a string automaton file or --regex")
    return au.parse_fa(_read(args.fa))


def cmd_embed_fa(args) -> int:
    return _emit_fsta(au.embed_fa(_string_automaton(args)))


def cmd_embed_fa_vertical(args) -> int:
    return _emit_fsta(au.embed_fa_vertical(_string_automaton(args)))


def cmd_embed_cta(args) -> int:
    return _emit_fsta(au.embed_cta(au.parse_ncfta(_read(args.ncfta))))


def cmd_g2a(args) -> int:
    return _emit_fsta(grammar_to_automaton(parse_grammar(_read(args.grammar))))


def cmd_a2g(args) -> int:
    sys.stdout.write(format_grammar(automaton_to_grammar(_automaton(args.automaton))))
    return 0


def cmd_generate(args) -> int:
    for t in generate(parse_grammar(_read(args.grammar)), args.max_nodes, args.max_count):
        print(serialize(t))
    return 0


def _vars(spec: str | None) -> list[str]:
    return [v for v in (spec or "").replace(",", " ").split() if v]


def cmd_match(args) -> int:
    expr = parse_rste(args.expression, _vars(args.vars))
    b = Matcher(expr).match(_tree_arg(args))
    if b is None:
        print("no match")
        return 1
    for index in sorted(b.groups):
        value = b.groups[index]
        if isinstance(value, list):
            if not value:
                print(f"{index}[]:")
            for k, frag in enumerate(value):
                print(f"{index}[{k}]: {serialize(frag)}")
        else:
            print(f"{index}: {serialize(value)}")
    return 0


def cmd_transform(args) -> int:
    program = parse_program(_read(args.rules), _vars(args.vars))
    print(serialize(run_program(program, _tree_arg(args))))
    return 0


def cmd_encode_omega(args) -> int:
    print(serialize(vertical_encode(args.string)))
    return 0


def cmd_encode_tau(args) -> int:
    signature = parse_signature(_read(args.signature)) if args.signature else None
    print(serialize(term_encode(parse_term(args.term, signature))))
    return 0


# -- argument parsing --------------------------------------------------------------

def _add_tree(p: argparse.ArgumentParser) -> None:
    p.add_argument("tree", nargs="?", help="serialized tree (read from stdin when omitted)")
    p.add_argument("-f", "--file", action="store_true", help="treat TREE as a file name")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stringtree",
                                     description="String trees, tree automata and tree expressions.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help):
        p = sub.add_parser(name, help=help, description=help)
        p.set_defaults(func=func)
        return p

    _add_tree(add("parse", cmd_parse, "check a tree and print it in normal escaped form"))
    _add_tree(add("reduce", cmd_reduce, "move every label before the node's children"))
    for name, func, help in (("accept", cmd_accept, "test whether an automaton accepts a tree"),
                             ("trace", cmd_trace, "print one successful run step by step")):
        p = add(name, func, help)
        p.add_argument("automaton", help="automaton file")
        _add_tree(p)
        if name == "trace":
            p.add_argument("--limit", type=int, default=None, help="maximum number of steps")
    for name, func, help in (
            ("determinize", cmd_determinize, "subset construction (pure states added if needed)"),
            ("purify", cmd_purify, "rewrite to pure states"),
            ("complete", cmd_complete, "add a sink state to a deterministic automaton"),
            ("complement", cmd_complement, "automaton for the complement language"),
            ("a2g", cmd_a2g, "grammar equivalent to an automaton")):
        add(name, func, help).add_argument("automaton", help="automaton file")
    for name, func, help in (("union", cmd_union, "automaton for the union"),
                             ("intersect", cmd_intersect, "automaton for the intersection")):
        p = add(name, func, help)
        p.add_argument("first")
        p.add_argument("second")
    for name, func, help in (
            ("embed-fa", cmd_embed_fa, "tree automaton for single-node trees of a string language"),
            ("embed-fa-vertical", cmd_embed_fa_vertical,
             "tree automaton for the left-spine encodings of a string language")):
        p = add(name, func, help)
        p.add_argument("fa", nargs="?", help="string automaton file")
        p.add_argument("--regex", help="string regex instead of a file")
        p.add_argument("--alphabet", help="extra alphabet letters for --regex")
    add("embed-cta", cmd_embed_cta, "string-tree automaton for a ranked tree automaton") \
        .add_argument("ncfta", help="ranked tree automaton file")
    add("g2a", cmd_g2a, "automaton equivalent to a grammar").add_argument("grammar")
    p = add("generate", cmd_generate, "list small trees derivable from a grammar")
    p.add_argument("grammar")
    p.add_argument("--max-nodes", type=int, default=6)
    p.add_argument("--max-count", type=int, default=100)
    p = add("match", cmd_match, "match a tree against an expression and print the groups")
    p.add_argument("expression")
    _add_tree(p)
    p.add_argument("--vars", help="expression variables, e.g. X,Y")
    p = add("transform", cmd_transform, "run a rule program on a tree")
    p.add_argument("rules", help="rule file")
    _add_tree(p)
    p.add_argument("--vars", help="expression variables, e.g. X,Y")
    add("encode-omega", cmd_encode_omega, "left-spine tree of a string").add_argument("string")
    p = add("encode-tau", cmd_encode_tau, "string tree of a ranked term such as f(a,g(b))")
    p.add_argument("term")
    p.add_argument("--signature", help="file of 'arity NAME N' lines")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (StringTreeError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

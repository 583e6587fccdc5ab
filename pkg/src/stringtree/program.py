"""Rule programs: condition/action rules over named tree variables."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, ProgramError, UnboundGroup
from .rste import Expression, Matcher, Template, parse_rste, parse_template, substitute
from .tree import NULL, Tree

_RULE = re.compile(r"(\w+)\s*<-\s*match\s+(.*?)\s+in\s+(\w+)\s+then(?:\s(.*))?$")


@dataclass(frozen=True)
class Rule:
    target: str
    condition: Expression
    source: str
    action: Template


@dataclass(frozen=True)
class RuleProgram:
    variables: tuple
    rules: tuple


def parse_program(text: str, expr_vars=()) -> RuleProgram:
    """Read ``vars:``, ``exprvars:`` and
    ``rule: <target> <- match <condition> in <source> then <template>`` lines."""
    variables = ["in", "out"]
    expr_vars = set(expr_vars)
    raw = []
    for no, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, rest = stripped.partition(":")
        if not sep:
            raise ParseError(f"line {no}: expected 'key: value', got {line!r}")
        if key == "vars":
            variables += [v for v in rest.replace(",", " ").split() if v not in variables]
        elif key == "exprvars":
            expr_vars.update(rest.replace(",", " ").split())
        elif key == "rule":
            m = _RULE.match(rest.strip())
            if not m:
                raise ParseError(f"line {no}: malformed rule {line!r}")
            raw.append((no, m))
        else:
            raise ParseError(f"line {no}: unknown key {key!r}")
    rules = []
    for no, m in raw:
        target, cond, source, action = m.group(1), m.group(2), m.group(3), m.group(4) or ""
        for v in (target, source):
            if v not in variables:
                raise ProgramError(f"line {no}: undeclared program variable {v!r}")
        expr = parse_rste(cond, expr_vars)
        tpl = parse_template(action.strip())
        missing = sorted(g for g in tpl.refs() if g > expr.groups)
        if missing:
            raise UnboundGroup(f"line {no}: template refers to group {missing[0]}, "
                               f"the condition has {expr.groups}")
        rules.append(Rule(target, expr, source, tpl))
    return RuleProgram(tuple(variables), tuple(rules))


def run_program(p: RuleProgram, tree: Tree) -> Tree:
    """Run every rule once, top to bottom; the result is the final ``out``."""
    env = {v: NULL for v in p.variables}
    env["in"] = tree
    for rule in p.rules:
        b = Matcher(rule.condition).match(env[rule.source])
        if b is not None:
            env[rule.target] = substitute(rule.action, b)
    return env["out"]

import random
import shlex
import subprocess
import sys
from pathlib import Path

import pytest

from oracles import random_tree, single_letter_predicate
from stringtree.cli import build_parser, main
from stringtree.tree import parse_tree, reduce, serialize

ROOT = Path(__file__).resolve().parent.parent
CLI = f"{shlex.quote(sys.executable)} -m stringtree"
SUBCOMMANDS = {"parse", "reduce", "accept", "trace", "determinize", "purify", "complete", "union",
               "intersect", "complement", "embed-fa", "embed-fa-vertical", "embed-cta", "g2a",
               "a2g", "generate", "match", "transform", "encode-omega", "encode-tau"}


def _shell(cmd: str, stdin: str = ""):
    return subprocess.run(cmd, shell=True, input=stdin, capture_output=True, text=True, cwd=ROOT)


def test_all_subcommands_present():
    parser = build_parser()
    choices = next(a for a in parser._subparsers._group_actions).choices
    assert set(choices) == SUBCOMMANDS


def test_pipeline():
    rng = random.Random(61)
    trees = [random_tree(rng, 8) for _ in range(50)]
    for t in trees:
        p = _shell(f"{CLI} parse | {CLI} reduce | {CLI} accept samples/example6.fsta",
                   serialize(t) + "\n")
        expected = single_letter_predicate(reduce(t))
        assert p.returncode == (0 if expected else 1), (t, p.stderr)
        assert p.stdout == ("accepted\n" if expected else "rejected\n")


def test_reduce_output(capsys):
    assert main(["reduce", "<na<fir<Joe>st>m<<Bloggs>last>e>"]) == 0
    assert capsys.readouterr().out == "<name<first<Joe>><last<Bloggs>>>\n"


def test_errors_exit_2(capsys):
    assert main(["parse", "<a<b"]) == 2
    err = capsys.readouterr().err
    assert err.startswith("error: UnbalancedBrackets:")
    assert main(["accept", "samples/missing.fsta", "<a>"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_deterministic_output():
    cmds = [f"{CLI} determinize samples/example6.fsta",
            f"{CLI} union samples/only_a.fsta samples/only_b.fsta",
            f"{CLI} a2g samples/example6.fsta",
            f"{CLI} generate samples/any.grammar --max-nodes 4"]
    for cmd in cmds:
        runs = {_shell(cmd).stdout for _ in range(3)}
        assert len(runs) == 1


def test_generated_automaton_round_trips():
    p = _shell(f"{CLI} determinize samples/example6.fsta > /tmp/st_det.fsta && "
               f"{CLI} accept /tmp/st_det.fsta '<<<a>>a<aa>>' && "
               f"! {CLI} accept /tmp/st_det.fsta '<ab>'")
    assert p.returncode == 0, p.stderr


def test_match_output(capsys):
    assert main(["match", "(%)*", "<abc>"]) == 0
    assert capsys.readouterr().out == "0: <abc>\n1[0]: <a>\n1[1]: <b>\n1[2]: <c>\n"
    assert main(["match", "<a>", "<b>"]) == 1
    assert capsys.readouterr().out == "no match\n"


def test_tree_from_file(tmp_path, capsys):
    f = tmp_path / "t.tree"
    f.write_text("<a<b>c>\n")
    assert main(["reduce", "-f", str(f)]) == 0
    assert parse_tree(capsys.readouterr().out.strip()) == parse_tree("<ac<b>>")

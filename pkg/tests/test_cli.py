"""The autfix command line: grammar, subcommands, exit statuses."""

import re
import subprocess
import sys

import pytest

from autfix import stallings
from autfix.cli import run
from autfix.formats import parse_document
from autfix.free_group import parse_word

from cli_corpus import CORPUS, d


@pytest.mark.parametrize("argv,status", CORPUS, ids=[" ".join(a[:1] + [a[1].rsplit("/", 1)[-1]] + a[2:]) for a, _ in CORPUS])
def test_corpus_exit_status(argv, status):
    code, out, err = run(argv)
    assert code == status, err
    assert bool(err) == (status in (1, 4))


def test_fix_example():
    code, out, _ = run(["fix", d("one_twist.aut"), "-L", "6"])
    doc = parse_document(out)
    assert [str(w) for w in doc.subs["Fix_phi"]] == ["x", "y x y^-1"]


def test_fix_output_round_trips():
    _, out, _ = run(["fix", d("worked_pair.aut")])
    doc = parse_document(out)
    assert set(doc.subs) == {"Fix_phi", "Fix_psi", "Fix_chi"}
    _, again, _ = run(["intersect", "-", "--of", "Fix_phi", "--of", "Fix_psi"], stdin=_Stdin(out))
    inter = parse_document(again).subs["intersection"]
    assert stallings.equal_subgroups(stallings.fold(inter, 3), stallings.fold(parse_document(out).subs["Fix_chi"], 3))


class _Stdin:
    def __init__(self, text):
        self.text = text

    def read(self):
        return self.text


def test_witness_report_basis_lines_parse():
    _, out, _ = run(["witness", d("worked_pair.aut")])
    assert "attempt k=1: unequal at depth 8; distinguishing word y z^-1" in out
    assert "k: 2" in out
    for line in out.splitlines():
        if line.strip().startswith("basis:"):
            parse_word(line.split(":", 1)[1], 3)


def test_normalize_output_parses_back():
    _, out, _ = run(["normalize", d("two_vertex.graph")])
    doc = parse_document(out)
    spec = doc.graphs["T_normal"]
    assert spec.graph.ends[3] == (1, 0)
    assert spec.maps["f"].suffixes[3] == (1,) and spec.maps["g"].suffixes[3] == (-1,)


def test_render_x_squared():
    _, out, _ = run(["render", d("x_squared.sub"), "--sub", "S"])
    assert out.count('[label="x"]') == 2 and out.startswith('digraph "S"')


def test_render_graph_colours_heights():
    _, out, _ = run(["render", d("two_vertex.graph"), "--graph", "T"])
    colours = re.findall(r'label="E\d+", (?:style=bold, )?color=(\w+)', out)
    assert len(colours) == 4 and len(set(colours)) == 4


def test_error_messages_cite_location():
    _, _, err = run(["fix", d("bad_syntax.aut")])
    assert err == "syntax error: line 5, column 10: unknown letter 'q'\n"
    _, _, err = run(["normalize", d("not_triangular.graph")])
    assert "subdivide E2" in err


def test_header_required(tmp_path):
    p = tmp_path / "x.aut"
    p.write_text("aut phi:\n  x -> x\n")
    code, _, err = run(["fix", str(p)])
    assert code == 1 and "autfix-format 1" in err


def test_bad_option_exits_with_input_error():
    proc = subprocess.run([sys.executable, "-m", "autfix.cli", "fix", d("one_twist.aut"), "-L", "0"], capture_output=True, text=True)
    assert proc.returncode == 1


def test_console_entry_point_writes_output(tmp_path):
    target = tmp_path / "out.txt"
    proc = subprocess.run(
        [sys.executable, "-m", "autfix.cli", "fix", d("one_twist.aut"), "-L", "6", "-o", str(target)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout == ""
    assert "y x y^-1" in target.read_text()

import pytest

from relcm.ring import ParseError
from relcm.workspace import WorkspaceError, load_workspace, parse_workspace

from conftest import CORPUS

EXAMPLE = """\
# worked example
ring Q[u,v,w] grevlex;
let a1 = v*(1-u);
let a2 = w*(1-u);
let a3 = u;
ideal a = <a1, a2, a3>;
module R = free (0);
seq s = (a1, a2, a3);
option budget.B = 3;
"""


def error_of(text):
    with pytest.raises(ParseError) as exc:
        parse_workspace(text)
    return exc.value


def test_example_workspace_parses():
    ws = parse_workspace(EXAMPLE)
    assert list(ws.ring.variables) == ["u", "v", "w"]
    assert [str(f) for f in ws.sequence("s")] == ["-u*v + v", "-u*w + w", "u"]
    assert ws.ideal("a").equals(ws.ideal("a"))
    assert ws.options["budget.B"] == 3
    assert ws.module("R").rank == 1


def test_empty_module_list_is_valid():
    ws = parse_workspace("ring Q[x,y];\nideal m = irrelevant;\n")
    assert ws.modules == {}


def test_misspelled_variable_located():
    err = error_of("ring Q[x,y];\nlet f = x + q;\n")
    assert err.line == 2 and err.col >= 9


def test_inline_sequences():
    ws = parse_workspace(EXAMPLE)
    assert [str(f) for f in ws.sequence("a3, a1*a3")] == ["u", "-u^2*v + u*v"]


def test_coker_and_quotient():
    ws = parse_workspace("ring GF(2)[x,y,z];\nmodule C = coker [[x, y], [z, 0]] twists (0, 0);\n"
                         "module T = quotient <x*y> twist 2;\n")
    assert ws.ring.characteristic == 2
    assert ws.module("C").rank == 2
    # the twist is the generator degree
    assert [ws.module("T").hilbert(d) for d in (1, 2, 3)] == [0, 1, 3]


@pytest.mark.parametrize("text, fragment", [
    ("ring Q[x,y];\nlet f = x;\nlet f = y;\n", "duplicate name"),
    ("ring Q[x,y];\nlet x = y;\n", "clashes"),
    ("let f = x;\nring Q[x];\n", "ring must be declared first"),
    ("ring Q[x,y];\nfrobnicate f;\n", "unknown statement"),
    ("ring Q[x,y];\nlet f = x\n", "missing ';'"),
    ("ring Q[x,y];\noption budget.Q = 3;\n", "unknown option"),
    ("ring Q[x,y];\nmodule C = coker [[x, y], [x]];\n", "different lengths"),
    ("ring Q[x,y];\nmodule C = coker [[x, y], [1, x]] twists (0, 0);\n", "not homogeneous"),
    ("ring Q[x,y];\nmodule T = quotient <x + 1> twist 1;\n", "inhomogeneous"),
    ("ring GF(6)[x];\n", ""),
    ("ring Q[x,y] mod <x^2 - y>;\n", "homogeneous"),
    ("", "no ring"),
])
def test_errors(text, fragment):
    err = error_of(text)
    assert fragment in str(err)
    assert err.line >= 1 and err.col >= 1


def test_missing_object():
    ws = parse_workspace(EXAMPLE)
    with pytest.raises(WorkspaceError, match="no module named 'M'"):
        ws.module("M")
    with pytest.raises(WorkspaceError):
        ws.sequence("nope")


def test_comments_keep_positions():
    err = error_of("ring Q[x,y]; # a comment; with a semicolon\nlet f = z;\n")
    assert err.line == 2


def test_corpus_workspaces_parse():
    paths = sorted((CORPUS / "workspaces").glob("*.ws"))
    assert len(paths) >= 10
    for p in paths:
        ws = load_workspace(p)
        assert ws.ring.n >= 1

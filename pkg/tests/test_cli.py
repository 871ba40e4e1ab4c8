import json

import pytest

from textile2d import ParseError, load_fixture
from textile2d.cli import COMMANDS, main, run_command
from textile2d.cli_io import fixture_names, fixture_text, parse_spec, serialize
from importlib.resources import files

FIX = files("textile2d") / "fixtures"


def path(name):
    return str(FIX / name)


def test_fixture_names():
    assert set(fixture_names()) >= {"not_lr.spec", "one_vertex.spec", "rigid.spec", "path3.spec"}


@pytest.mark.parametrize("name", ["not_lr.spec", "one_vertex.spec", "rigid.spec", "path3.spec"])
def test_serialize_idempotent(name):
    doc = load_fixture(name)
    text = serialize(doc)
    assert serialize(parse_spec(text)) == text
    again = parse_spec(text)
    assert set(again.textiles) == set(doc.textiles)
    for t in doc.textiles:
        assert again.textile(t) == doc.textile(t)


@pytest.mark.parametrize("name", ["not_lr.spec", "one_vertex.spec", "rigid.spec", "path3.spec"])
def test_validate_every_fixture(name):
    status, out, err = run_command(["validate", "--input", path(name)])
    assert status == 0, err
    assert "valid: True" in out


BAD = [
    ("[graph F]\nvertex a\nedge x : a -> b\n", "b"),
    ("format 1\n[hom p : F -> E]\nmap a b\n", "F"),
    ("format 1\n[graph F]\nvertex a\n[graph F]\nvertex b\n", "F"),
    ("format 1\n[textile T]\nF F\nE E\np p\nq q\n", "F"),
    ("format 1\n[graph G]\nvertex a a\n", "a"),
    ("format 1\n[bogus X]\n", "bogus"),
    ("format 2\n", "format"),
]


@pytest.mark.parametrize("text,needle", BAD)
def test_parse_errors(text, needle):
    with pytest.raises(ParseError) as ei:
        parse_spec(text)
    assert ei.value.errors
    assert needle in str(ei.value)


def test_parse_error_reports_line():
    with pytest.raises(ParseError) as ei:
        parse_spec("format 1\n[graph F]\nvertex a\nedge x : a -> zz\n")
    assert ei.value.errors[0][0] == 4


def test_label_pools_disjoint():
    text = fixture_text("one_vertex.spec").replace("vertex o", "vertex u", 1)
    with pytest.raises(ParseError):
        parse_spec(text)


def test_exit_codes(tmp_path):
    assert run_command(["validate", "--input", str(tmp_path / "missing.spec")])[0] == 2
    assert run_command(["to-2graph", "--input", path("not_lr.spec")])[0] == 1
    assert run_command(["pipeline61", "--input", path("path3.spec")])[0] == 2  # no partition
    assert run_command(["nonsense"])[0] == 2
    bad = tmp_path / "bad.spec"
    bad.write_text("format 1\n[graph F]\nvertex a\nedge x : a -> q\n")
    assert run_command(["validate", "--input", str(bad)])[0] == 1


def test_machine_output():
    status, out, _ = run_command(["enum-partitions", "--input", path("rigid.spec"),
                                  "--twograph", "L", "--machine"])
    assert status == 0
    data = json.loads(out)
    assert data["summary"] == {"twograph": "L", "count": 1, "nontrivial": 0}
    status, out, _ = run_command(["to-2graph", "--input", path("not_lr.spec"), "--machine"])
    assert status == 1 and json.loads(out)["status"] == "error"


def test_pipeline_command():
    status, out, _ = run_command(["pipeline61", "--input", path("path3.spec"),
                                  "--system", "T", "--partition", "G"])
    assert status == 0
    assert "block sets EQUAL up to 3x3" in out
    assert "stage_sizes: [5, 3, 7, 7, 5]" in out


def test_output_file_and_reparse(tmp_path):
    dest = tmp_path / "out.spec"
    status, out, _ = run_command(["insplit-2g", "--input", path("path3.spec"),
                                  "--twograph", "L", "--partition", "G", "--output", str(dest)])
    assert status == 0 and "squares: 5" in out
    doc = parse_spec(dest.read_text())
    assert len(doc.twographs["L_I"].squares) == 5


def test_blocks_command_reparses(tmp_path):
    dest = tmp_path / "b.spec"
    run_command(["blocks", "--input", path("path3.spec"), "--system", "T",
                 "--size", "2x1", "--output", str(dest)])
    text = fixture_text("path3.spec") + "\n" + dest.read_text().replace("format 1", "")
    doc = parse_spec(text)
    assert len(doc.blocks["T_blocks_2x1"].blocks) == 5


@pytest.mark.parametrize("argv", [
    ["validate"], ["invert"], ["to-textile", "--twograph", "L"],
    ["equiv-check", "--system", "T", "--partition", "G"],
    ["equiv-check", "--system", "T", "--partition", "Fpart", "--start", "F"],
    ["lr-insplit", "--system", "T", "--partition", "Fpart"],
    ["main-iii", "--system", "T", "--partition", "Epart"],
    ["priyanga", "--system", "T", "--partition", "G"],
    ["compare-blocks", "--system", "T", "--other", "T", "--max-block", "2"],
])
def test_commands_deterministic(argv):
    full = [argv[0], "--input", path("path3.spec")] + argv[1:]
    a, b = run_command(full), run_command(full)
    assert a == b and a[0] == 0, a


def test_every_command_has_a_test_route():
    assert set(COMMANDS) == {"validate", "invert", "insplit-jm", "insplit-2g", "to-2graph",
                             "to-textile", "blocks", "pipeline61", "priyanga", "lr-insplit",
                             "main-iii", "equiv-check", "compare-blocks", "enum-partitions"}
    status, out, _ = run_command(["insplit-jm", "--input", path("one_vertex.spec"),
                                  "--system", "T", "--partition", "P"])
    assert status == 0 and "is_LR: False" in out


def test_main_writes(capsys):
    assert main(["to-2graph", "--input", path("path3.spec")]) == 0
    assert "[twograph" in capsys.readouterr().out

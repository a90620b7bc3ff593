"""
Tests for the command-line interface.
"""
import io
import json

import pytest

from whitehead.cli import build_parser, run

G5_TEXT = "5\n1 2\n"
F3_TEXT = "3\n"


def _last_json_line(text):
    return json.loads(text.strip().splitlines()[-1])


def test_betti_command(graph_file, capsys):
    """Test the betti subcommand on g5."""
    code = run(["betti", graph_file(G5_TEXT)])
    report = json.loads(capsys.readouterr().out)

    assert code == 0
    assert report["schema"] == 1
    assert report["betti_psout"] == [1, 10, 27, 10, 1]
    assert report["betti_psaut"] == [1, 15, 78, 155, 78, 15, 1]
    assert report["rank_histogram"] == [1, 15, 32, 12, 1]


def test_poset_command_json(graph_file, capsys):
    """Test the poset JSON export."""
    code = run(["poset", graph_file(F3_TEXT)])
    document = json.loads(capsys.readouterr().out)

    assert code == 0
    assert document["vertices"] == [1, 2, 3]
    assert document["rank_histogram"] == [1, 3]
    assert len(document["hasse_edges"]) == 3


def test_poset_command_dot(graph_file, capsys):
    """Test the DOT export."""
    code = run(["poset", graph_file(F3_TEXT), "--format", "dot"])

    assert code == 0
    assert "digraph" in capsys.readouterr().out


def test_e1_command_csv(graph_file, capsys):
    """Test the E¹ table as CSV."""
    code = run(["e1", graph_file(F3_TEXT)])
    lines = capsys.readouterr().out.splitlines()

    assert code == 0
    assert lines[0] == "p,q,dim"
    assert "0,0,4" in lines


def test_e1_command_homology(graph_file, capsys):
    """Test row homology through the CLI."""
    code = run(["e1", graph_file(F3_TEXT), "--homology", "--format", "json"])
    report = json.loads(capsys.readouterr().out)

    assert code == 0
    assert report["concentrated"] is True
    assert [row["expected_h0"] for row in report["rows"]] == [1, 3]


def test_ring_command(graph_file, capsys):
    """Test the ring census."""
    code = run(["ring", graph_file(G5_TEXT)])
    census = json.loads(capsys.readouterr().out)

    assert code == 0
    assert census["b1_size"] == census["b2_size"] == census["expected"] == 78
    assert census["phi"]["injective"] is True


def test_presentation_command(graph_file, capsys):
    """Test the text presentation."""
    code = run(["presentation", graph_file("2\n")])

    assert code == 0
    assert capsys.readouterr().out == "generators: C1:2 C2:1\n"


def test_presentation_command_json(graph_file, capsys):
    """Test the JSON presentation."""
    code = run(["presentation", graph_file(F3_TEXT), "--format", "json"])
    document = json.loads(capsys.readouterr().out)

    assert code == 0
    assert len(document["relations"]) == 9


def test_check_command(graph_file, capsys):
    """Test running selected suites."""
    code = run(["check", graph_file(F3_TEXT), "--suite", "k1_formula", "--suite", "graph_components"])
    report = json.loads(capsys.readouterr().out)

    assert code == 0
    assert [r["name"] for r in report["results"]] == ["k1_formula", "graph_components"]


def test_check_command_unknown_suite(graph_file):
    """Test that argparse rejects unknown suites."""
    with pytest.raises(SystemExit) as exc_info:
        run(["check", graph_file(F3_TEXT), "--suite", "nope"])
    assert exc_info.value.code == 2


def test_parse_error_exit_code(graph_file, capsys):
    """Test malformed input."""
    code = run(["betti", graph_file("3\n1 1\n")])
    error = _last_json_line(capsys.readouterr().err)

    assert code == 2
    assert error["error"] == "GraphParseError"
    assert error["detail"] == {"line": 2}


def test_non_utf8_file(tmp_path, capsys):
    """Test that undecodable bytes are a parse error on their line."""
    path = tmp_path / "graph.txt"
    path.write_bytes(b"5\n1 2 \xff\n")

    code = run(["betti", str(path)])
    error = _last_json_line(capsys.readouterr().err)

    assert code == 2
    assert error["error"] == "GraphParseError"
    assert error["detail"] == {"line": 2}


def test_superscript_vertex_count(graph_file, capsys):
    """Test a count made of non-decimal digits."""
    code = run(["betti", graph_file("²\n")])

    assert code == 2
    assert _last_json_line(capsys.readouterr().err)["detail"] == {"line": 1}


def test_missing_file(tmp_path, capsys):
    """Test an unreadable graph file."""
    code = run(["betti", str(tmp_path / "missing.txt")])

    assert code == 2
    assert _last_json_line(capsys.readouterr().err)["error"] == "GraphParseError"


def test_cap_exit_code(graph_file, capsys):
    """Test exceeding the element cap."""
    code = run(["poset", graph_file(G5_TEXT), "--cap", "5"])
    error = _last_json_line(capsys.readouterr().err)

    assert code == 3
    assert error["error"] == "ResourceCapError"
    assert error["detail"]["cap"] == 5


def test_stdin_input(monkeypatch, capsys):
    """Test reading the graph from stdin."""
    monkeypatch.setattr("sys.stdin", io.StringIO('{"n": 2, "edges": []}'))
    code = run(["betti", "-"])

    assert code == 0
    assert json.loads(capsys.readouterr().out)["betti_psaut"] == [1, 2]


def test_stdin_not_utf8(monkeypatch, capsys):
    """Test undecodable stdin."""
    monkeypatch.setattr("sys.stdin", io.TextIOWrapper(io.BytesIO(b"5\n\xff\n"), encoding="utf-8"))
    code = run(["betti", "-"])

    assert code == 2
    assert _last_json_line(capsys.readouterr().err)["error"] == "GraphParseError"


def test_out_file(graph_file, tmp_path, capsys):
    """Test writing output to a file."""
    out = tmp_path / "report.json"
    code = run(["betti", graph_file(F3_TEXT), "--out", str(out)])

    assert code == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text(encoding="utf-8"))["k_vector"] == [1, 3]


def test_cache_directory(graph_file, tmp_path, capsys):
    """Test that a second run reads the cached poset."""
    cache = tmp_path / "cache"
    path = graph_file(F3_TEXT)

    run(["betti", path, "--cache", str(cache)])
    first = json.loads(capsys.readouterr().out)
    run(["betti", path, "--cache", str(cache)])
    second = json.loads(capsys.readouterr().out)

    assert first["cached"] is False
    assert second["cached"] is True
    assert first["betti_psaut"] == second["betti_psaut"]
    assert list(cache.glob("poset__*.json"))


def test_version(capsys):
    """Test --version."""
    with pytest.raises(SystemExit) as exc_info:
        build_parser().parse_args(["--version"])

    assert exc_info.value.code == 0
    assert "whitehead" in capsys.readouterr().out

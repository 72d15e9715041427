from __future__ import annotations

import json

import pytest

from linforest.cli import main
from linforest.graph import SimpleGraph
from linforest.graphio import format_edgelist, parse_graph_text
from oracles import is_decomposition, star


@pytest.fixture
def write_graph(tmp_path):
    def _write(g, name="g.txt"):
        path = tmp_path / name
        path.write_text(format_edgelist(g))
        return str(path)

    return _write


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_gen_edgelist_and_json(capsys, tmp_path):
    assert main(["gen", "complete", "--n", "5"]) == 0
    assert parse_graph_text(capsys.readouterr().out) == SimpleGraph.complete(5)
    out = tmp_path / "g.json"
    assert main(["gen", "gnp", "--n", "8", "--param", "p=1/2", "--seed", "3", "--format", "json", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["spec"]["seed"] == 3 and data["n"] == 8


def test_gen_usage_errors(capsys):
    assert main(["gen", "random_regular", "--n", "7", "--param", "r=3"]) == 2
    assert main(["gen", "gnp", "--n", "5", "--param", "p"]) == 2
    with pytest.raises(SystemExit) as info:
        main(["gen", "no_such_family", "--n", "5"])
    assert info.value.code == 2


def test_check_expander_verdicts(capsys, write_graph):
    assert main(["check-expander", write_graph(SimpleGraph.complete(8)), "--nu", "1/10", "--tau", "1/5"]) == 0
    assert _json(capsys)["holds"] is True
    two = SimpleGraph.from_edges(8, [(u, v) for u in range(4) for v in range(u + 1, 4)] + [(u + 4, v + 4) for u in range(4) for v in range(u + 1, 4)])
    assert main(["check-expander", write_graph(two), "--nu", "1/10", "--tau", "1/5"]) == 1
    assert main(["check-expander", write_graph(SimpleGraph.complete(8)), "--nu", "1/10", "--tau", "1/5", "--cap", "4"]) == 3
    assert main(["check-expander", write_graph(SimpleGraph.complete(8)), "--nu", "1/10", "--tau", "1/5", "--mode", "sampled"]) == 0
    assert main(["check-expander", write_graph(SimpleGraph.complete(8)), "--nu", "x", "--tau", "1/5"]) == 2


def test_deficiency(capsys, write_graph):
    assert main(["deficiency", write_graph(star(3))]) == 0
    data = _json(capsys)
    assert data["df"] == 2
    assert main(["deficiency", write_graph(SimpleGraph.empty(20)), "--cap", "16"]) == 3
    assert _json(capsys)["df"] == 20


def test_realize(capsys):
    assert main(["realize", "3,3,3,3"]) == 0
    assert parse_graph_text(capsys.readouterr().out) == SimpleGraph.complete(4)
    assert main(["realize", "3", "3", "3"]) == 1
    assert main(["realize", "2", "1", "1", "--multigraph", "--format", "json"]) == 0
    assert _json(capsys)["multigraph"] is True
    assert main(["realize", "a", "b"]) == 2
    assert main(["realize", "1", "-1"]) == 2


def test_hamilton_modes(capsys, write_graph, tmp_path):
    k5 = write_graph(SimpleGraph.complete(5))
    assert main(["hamilton", k5, "--mode", "path", "--x", "0", "--y", "4"]) == 0
    path = _json(capsys)["path"]
    assert path[0] == 0 and path[-1] == 4 and sorted(path) == list(range(5))
    assert main(["hamilton", write_graph(star(3), "s.txt"), "--mode", "cycle"]) == 1
    assert _json(capsys)["found"] is False
    assert main(["hamilton", k5, "--mode", "decompose"]) == 0
    assert len(_json(capsys)["cycles"]) == 2
    assert main(["hamilton", write_graph(SimpleGraph.cycle(6), "c6.txt"), "--mode", "linkage", "--pairs", "0-1,3-4"]) == 1
    capsys.readouterr()
    assert main(["hamilton", k5, "--mode", "path"]) == 2
    assert main(["hamilton", k5, "--mode", "linkage"]) == 2
    assert main(["hamilton", k5, "--mode", "layout"]) == 2
    lay = tmp_path / "lay.json"
    lay.write_text(json.dumps({"paths": [[0, 1]]}))
    assert main(["hamilton", k5, "--mode", "layout", "--layout", str(lay)]) == 0
    assert sorted(_json(capsys)["paths"][0]) == list(range(5))
    lay.write_text('{"paths": [[0, 1], [1, 2]]}')
    assert main(["hamilton", k5, "--mode", "layout", "--layout", str(lay)]) == 2


def test_la(capsys, write_graph):
    g = SimpleGraph.complete(5)
    assert main(["la", write_graph(g)]) == 0
    data = _json(capsys)
    assert data["la"] == 3 and is_decomposition(g, [set(map(tuple, f)) for f in data["forests"]])
    assert main(["la", write_graph(SimpleGraph.complete(13), "k13.txt")]) == 3


def test_decompose(capsys, write_graph):
    g = SimpleGraph.complete(7)
    assert main(["decompose", write_graph(g), "--trace"]) == 0
    data = _json(capsys)
    assert data["count"] <= data["bound"] == 4 and data["status"] == "success"
    assert "trace" in data
    assert is_decomposition(g, [set(map(tuple, f)) for f in data["forests"]])
    assert main(["decompose", write_graph(g), "--format", "csv"]) == 0
    assert capsys.readouterr().out.startswith("forest,u,v")
    assert main(["decompose", write_graph(g), "--alpha", "zero"]) == 2


def test_missing_and_unparsable_input(capsys, tmp_path):
    assert main(["la", str(tmp_path / "missing.txt")]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("3 1\n0 7\n")
    assert main(["la", str(bad)]) == 2


def test_bench_and_summarize(capsys, tmp_path):
    records = tmp_path / "r.jsonl"
    argv = ["bench", "--family", "complete", "--n", "6", "--count", "2", "--records", str(records)]
    assert main(argv) == 0
    assert "complete" in capsys.readouterr().out
    assert main(["summarize", str(records), "--format", "json"]) == 0
    rows = _json(capsys)
    assert rows[0]["instances"] == 2 and rows[0]["oracle_min"] == 3
    assert main(["summarize", str(records), "--format", "csv"]) == 0
    assert capsys.readouterr().out.startswith("family,n")
    bad = tmp_path / "bad.jsonl"
    bad.write_text("nope\n")
    assert main(["summarize", str(bad)]) == 2
    assert main(["summarize", str(tmp_path / "none.jsonl")]) == 2

import json
import subprocess
import sys

import pytest

import oracles
from gencol.cli import run
from gencol.graph import generate, serialize_graph


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    out = {
        "p7": write("p7.gr", serialize_graph(generate("path", 7), "dimacs")),
        "k5": write("k5.gr", serialize_graph(generate("clique", 5), "dimacs")),
        "k4": write("k4.gr", serialize_graph(generate("clique", 4), "edgelist")),
        "grid3": write("grid3.gr", serialize_graph(generate("grid", 3, 3), "dimacs")),
        "bad": write("bad.gr", "0 1\n1 1\n"),
        "td": write("p4.td", "s td 2 3 4\nb 1 1 2 3\nb 2 3 4\nt 1 2\n"),
        "p4": write("p4.gr", serialize_graph(generate("path", 4), "edgelist")),
        "set": write("set.txt", "0 1 2 3\n"),
    }
    out["write"] = write
    out["dir"] = tmp_path
    return out


def call(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_compute_exact_wcol(files, capsys):
    code, out, _ = call(capsys, "compute", "wcol", "--graph", files["p7"], "--r", "3", "--exact")
    data = json.loads(out)
    assert code == 0 and data["exact"]
    adj = oracles.adjacency(generate("path", 7))
    assert data["value"] == oracles.order_measure(adj, data["order"], 3, "wcol") == 3


def test_compute_heuristics(files, capsys):
    for measure in ("col", "wcol", "adm", "treewidth", "treedepth", "degeneracy"):
        code, out, _ = call(capsys, "compute", measure, "--graph", files["grid3"], "--r", "2")
        assert code == 0 and "value" in json.loads(out)
    code, out, _ = call(capsys, "compute", "nabla", "--graph", files["k4"], "--r", "0")
    assert json.loads(out)["value"] == "3/2"
    code, out, _ = call(capsys, "compute", "treedepth", "--graph", files["p7"], "--r", "inf", "--exact")
    assert json.loads(out)["value"] == 3


def test_color_centered(files, capsys):
    code, out, _ = call(capsys, "color", "centered", "--graph", files["grid3"], "--p", "3")
    data = json.loads(out)
    assert code == 0 and data["verified"] and len(data["colors"]) == 9
    adj = oracles.adjacency(generate("grid", 3, 3))
    assert oracles.is_centered(adj, data["colors"], 3)
    for kind in ("exact-distance", "reach"):
        code, out, _ = call(capsys, "color", kind, "--graph", files["p7"], "--p", "3", "--r", "2")
        assert code == 0 and json.loads(out)["verified"]


def test_play_splitter_clique(files, capsys):
    code, out, _ = call(capsys, "play", "splitter", "--graph", files["k5"], "--r", "1", "--connector", "minimax")
    lines = [json.loads(x) for x in out.strip().split("\n")]
    assert code == 0 and lines[-1] == {"rounds": 5, "verified": True, "winner": "splitter"}
    assert sum("splitter" in x and "ball" in x for x in lines) == 5


def test_play_other_games(files, capsys):
    code, out, _ = call(capsys, "play", "counter", "--graph", files["p7"], "--r", "inf")
    assert code == 0 and json.loads(out)["depth"] == 3
    for game in ("agile", "inert"):
        code, out, _ = call(capsys, "play", game, "--graph", files["grid3"], "--r", "1", "--seed", "4")
        tail = json.loads(out.strip().split("\n")[-1])
        assert code == 0 and tail["verified"] and tail["winner"] == "cops"


def test_order_methods(files, capsys):
    for method in ("degeneracy", "adm", "universal", "augmentation", "partition", "exact"):
        code, out, _ = call(capsys, "order", method, "--graph", files["p7"], "--r", "2", "--r-max", "3")
        data = json.loads(out)
        assert code == 0 and sorted(data["order"]) == list(range(7)) and data["verified"]


def test_partition_decompose_cover_wideness(files, capsys):
    code, out, _ = call(capsys, "partition", "--graph", files["grid3"])
    assert code == 0 and json.loads(out)["verified"]
    code, out, _ = call(capsys, "decompose", "--graph", files["p4"], "--td", files["td"])
    data = json.loads(out)
    assert code == 0 and data["order"] == [0, 1, 2, 3] and data["adhesion"] == 1
    code, out, _ = call(capsys, "cover", "--graph", files["p7"], "--r", "1")
    assert code == 0 and json.loads(out)["verified"]
    code, out, _ = call(capsys, "wideness", "--graph", files["p7"], "--r", "2", "--m", "3", "--traces")
    data = json.loads(out)
    assert code == 0 and data["found"] and data["verified"] and data["traces"]["holds"]


def test_certify(files, capsys):
    code, out, _ = call(capsys, "certify-fanset", "--graph", files["k4"], "--k", "4", "--r", "1")
    assert code == 0 and json.loads(out)["certified"]
    code, out, _ = call(capsys, "certify", "fanset", "--graph", files["p7"], "--set", files["set"], "--k", "3", "--r", "2")
    assert code == 0 and not json.loads(out)["certified"]
    coloring = files["write"]("p3.col", "0 0\n1 0\n2 0\n")
    p3 = files["write"]("p3.gr", "0 1\n1 2\n")
    code, out, _ = call(capsys, "certify", "coloring", "--graph", p3, "--coloring", coloring, "--p", "2")
    data = json.loads(out)
    assert code == 0 and not data["centered"] and len(data["witness"]) == 2
    code, out, _ = call(capsys, "certify", "decomposition", "--graph", files["p4"], "--td", files["td"])
    assert code == 0 and json.loads(out)["width"] == 2
    code, out, _ = call(capsys, "certify", "order", "--graph", files["p7"])
    assert code == 0 and json.loads(out)["verified"]


def test_exit_codes(files, capsys):
    code, _, err = call(capsys, "compute", "wcol", "--graph", files["bad"])
    assert code == 1 and "error" in err
    code, _, err = call(capsys, "frobnicate", "--graph", files["p7"])
    assert code == 1 and "usage" in err
    code, _, _ = call(capsys, "compute", "wcol", "--graph", files["p7"], "--bogus")
    assert code == 1
    code, _, _ = call(capsys, "compute", "wcol", "--graph", str(files["dir"] / "missing.gr"))
    assert code == 1
    bad_td = files["write"]("bad.td", "s td 2 2 4\nb 1 1 2\nb 2 3 4\nt 1 2\n")
    code, _, err = call(capsys, "decompose", "--graph", files["p4"], "--td", bad_td)
    assert code == 1 and "edge coverage" in err


def test_repeated_runs_are_identical(files, capsys):
    argv = ["play", "agile", "--graph", files["grid3"], "--robber", "random", "--cops", "random", "--k", "3", "--seed", "7", "--round-cap", "15"]
    first = call(capsys, *argv)
    second = call(capsys, *argv)
    assert first == second and first[1]


def test_text_format_and_output_file(files, capsys):
    code, out, _ = call(capsys, "compute", "degeneracy", "--graph", files["k5"], "--format", "text")
    assert code == 0 and "value: 4" in out
    target = files["dir"] / "out.json"
    code, out, _ = call(capsys, "compute", "degeneracy", "--graph", files["k5"], "--output", str(target))
    assert code == 0 and out == "" and json.loads(target.read_text())["value"] == 4


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "gencol", "compute", "degeneracy", "--graph", files["p7"]],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == 1

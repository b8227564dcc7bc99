from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from oddcover.cli import main


def run(argv, stdin="", monkeypatch=None, capsys=None):
    monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def cli(monkeypatch, capsys):
    return lambda argv, stdin="": run(argv, stdin, monkeypatch, capsys)


def test_gen(cli):
    code, out, _ = cli(["gen", "complete", "5"])
    assert code == 0 and out.strip() == "D~{"


def test_gen_then_solve_k8(cli):
    _, g6, _ = cli(["gen", "complete", "8"])
    code, out, _ = cli(["solve"], g6)
    d = json.loads(out)
    assert code == 0 and d["b2"] == 4 and d["status"] == "exact" and d["certificate_k"] == 3


def test_c6_construct_and_verify(cli, tmp_path):
    _, g6, _ = cli(["gen", "cycle", "6"])
    code, out, _ = cli(["construct", "bipartite"], g6)
    d = json.loads(out)
    assert code == 0 and len(d["bicliques"]) == 2
    assert d["construction"] == {"family": "bipartite", "formula": "r2/2", "size": 2}
    (tmp_path / "g.g6").write_text(g6)
    (tmp_path / "c.json").write_text(out)
    code, out, _ = cli(["verify", "--graph", str(tmp_path / "g.g6"), "--cover", str(tmp_path / "c.json")])
    assert code == 0 and json.loads(out)["ok"]


def test_verify_missing_biclique(cli, tmp_path):
    _, out, _ = cli(["construct", "--family", "cycle 6"])
    d = json.loads(out)
    d["bicliques"].pop()
    (tmp_path / "c.json").write_text(json.dumps(d))
    code, out, _ = cli(["verify", "--family", "cycle 6", "--cover", str(tmp_path / "c.json")])
    report = json.loads(out)
    assert code == 1 and not report["ok"] and report["mismatches"]


def test_rank_and_bounds(cli):
    assert cli(["rank", "--g6", "D~{"])[1].strip() == "4"
    code, out, _ = cli(["bounds", "--family", "cycle 9"])
    d = json.loads(out)
    assert code == 0 and d["lb"] == 4 and d["ub"] == 5 and len(d["witness"]["bicliques"]) == 5


def test_text_mode_has_same_fields(cli):
    _, js, _ = cli(["bounds", "--family", "complete 7"])
    _, text, _ = cli(["bounds", "--family", "complete 7", "--format", "text"])
    assert [line.split(":")[0] for line in text.splitlines()] == list(json.loads(js))


def test_edge_list_input(cli):
    code, out, _ = cli(["solve"], "1 2\n2 3\n3 1\n")
    assert code == 0 and json.loads(out)["b2"] == 2


def test_best(cli):
    code, out, _ = cli(["construct", "--best", "--family", "triangles 2"])
    assert code == 0 and json.loads(out)["construction"]["size"] == 3


@pytest.mark.parametrize(
    "argv,stdin",
    [
        (["rank"], "D~"),
        (["rank", "--g6", "D~{", "--family", "complete 5"], ""),
        (["rank", "--family", "complete x"], ""),
        (["rank", "--family", "wheel 5"], ""),
        (["rank", "--graph", "/no/such/file"], ""),
        (["solve"], "1 1\n"),
        (["construct", "forest", "--family", "cycle 5"], ""),
    ],
)
def test_malformed_input_exit_2(cli, argv, stdin):
    code, out, err = cli(argv, stdin)
    assert code == 2 and out == "" and err.startswith("oddcover:")


def test_malformed_cover_exit_2(cli, tmp_path):
    (tmp_path / "c.json").write_text("{not json")
    assert cli(["verify", "--family", "cycle 5", "--cover", str(tmp_path / "c.json")])[0] == 2


def test_unknown_verb_rejected():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_budget_exit_3(cli):
    code, out, _ = cli(["solve", "--family", "cycle 7", "--nodes", "1"])
    assert code == 3 and json.loads(out)["status"] == "budget_exhausted"
    code, out, _ = cli(["solve", "--family", "cycle 7", "--max-k", "3"])
    assert code == 3 and json.loads(out)["status"] == "lower_bound_only"


def test_threads_flag_and_env(cli, monkeypatch):
    monkeypatch.setenv("ODDCOVER_THREADS", "2")
    code, out, _ = cli(["solve", "--family", "complete 5"])
    assert code == 0 and json.loads(out)["b2"] == 3
    code, out, _ = cli(["solve", "--family", "complete 5", "--threads", "1", "--no-deterministic"])
    assert code == 0 and json.loads(out)["b2"] == 3


MATRIX = [
    ["complete", "1"], ["complete", "6"], ["complete", "9"], ["complete", "16"],
    ["cycle", "5"], ["cycle", "8"], ["path", "7"], ["star", "4"], ["empty", "3"],
    ["triangles", "2"], ["bipartite", "2", "3"], ["Bk", "2"], ["Tk", "2"],
]


@pytest.mark.parametrize("spec", MATRIX, ids=lambda s: "-".join(s))
def test_piped_composition(spec, tmp_path):
    cmd = [sys.executable, "-m", "oddcover"]
    g6 = subprocess.run(cmd + ["gen", *spec], capture_output=True, text=True, check=True).stdout
    cover = subprocess.run(cmd + ["construct", "auto"], input=g6, capture_output=True, text=True, check=True).stdout
    (tmp_path / "g.g6").write_text(g6)
    done = subprocess.run(cmd + ["verify", "--graph", str(tmp_path / "g.g6"), "--cover", "-"],
                          input=cover, capture_output=True, text=True)
    assert done.returncode == 0, done.stdout + done.stderr

from __future__ import annotations

import io
import json
from pathlib import Path

import pytest

from bouquet_algebra import Bouquet, SignedGraph
from cli import main, parse_instance, read_runs_from_file
from conftest import SIX_VERTEX_POLY
from ribbon_core import RibbonGraph


def _run(capsys: pytest.CaptureFixture, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_instance_detects_the_kind() -> None:
    assert isinstance(parse_instance("signs: + -\nedges: 1-2"), SignedGraph)
    assert isinstance(parse_instance("v1: 1 2\nv2: 1 2"), RibbonGraph)
    assert isinstance(parse_instance("v1: 1 -1"), Bouquet)
    assert isinstance(parse_instance("1 2 1 2"), Bouquet)


def test_poly_both_methods_on_the_six_vertex_example(capsys: pytest.CaptureFixture, data_dir: Path) -> None:
    code, out, _ = _run(capsys, "poly", str(data_dir / "six_vertex_example.txt"), "--method", "both")
    assert code == 0
    assert out.splitlines() == [SIX_VERTEX_POLY, "methods agree"]


def test_poly_json_schema(capsys: pytest.CaptureFixture, data_dir: Path) -> None:
    code, out, _ = _run(capsys, "poly", str(data_dir / "six_vertex_example.txt"), "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["poly"] == {"2": 1, "3": 23, "4": 189, "5": 779, "6": 1692, "7": 1412}
    assert payload["edges"] == 12
    assert payload["method"] == "rank"
    assert payload["coeff_sum"] == 4096


def test_poly_modified_bouquet(capsys: pytest.CaptureFixture) -> None:
    code, out, _ = _run(capsys, "poly", "--text", "1 2 1 2", "--modified", "--method", "both")
    assert code == 0
    assert out.splitlines() == ["-z^2 + z", "methods agree"]


def test_poly_modified_signed_graph(capsys: pytest.CaptureFixture) -> None:
    code, out, _ = _run(capsys, "poly", "--text", "signs: -", "--modified")
    assert code == 0
    assert out.strip() == "z - 1"


def test_modified_needs_a_bouquet_or_signed_graph(capsys: pytest.CaptureFixture) -> None:
    code, _, err = _run(capsys, "poly", "--text", "v1: 1 2 / v2: 1 2", "--modified")
    assert code == 2
    assert err.startswith("error: ")


def test_poly_reads_stdin(capsys: pytest.CaptureFixture, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr("sys.stdin", io.StringIO("1 1\n"))
    code, out, _ = _run(capsys, "poly", "-")
    assert code == 0
    assert out.strip() == "z + 1"


def test_poly_cap_and_force(capsys: pytest.CaptureFixture, data_dir: Path) -> None:
    path = str(data_dir / "six_vertex_example.txt")
    code, _, err = _run(capsys, "poly", path, "--method", "bruteforce", "--bruteforce-cap", "8")
    assert code == 2
    assert "cap" in err
    code, out, _ = _run(capsys, "poly", path, "--method", "bruteforce", "--bruteforce-cap", "8", "--force")
    assert code == 0
    assert out.strip() == SIX_VERTEX_POLY


def test_poly_with_tree_override(capsys: pytest.CaptureFixture) -> None:
    code, out, _ = _run(capsys, "poly", "--text", "v1: 1 2 / v2: 1 2", "--tree", "2")
    assert code == 0
    assert out.strip() == "2z + 2"
    code, _, err = _run(capsys, "poly", "--text", "v1: 1 2 / v2: 1 2", "--tree", "1,2")
    assert code == 2
    assert "spanning tree" in err


def test_genus_reports_both_values(capsys: pytest.CaptureFixture) -> None:
    code, out, _ = _run(capsys, "genus", "--text", "1 -1", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert (payload["genus_traced"], payload["genus_rank"], payload["agree"]) == (1, 1, True)


def test_genus_of_the_six_vertex_example(capsys: pytest.CaptureFixture, data_dir: Path) -> None:
    code, out, _ = _run(capsys, "genus", str(data_dir / "six_vertex_example.txt"), "--format", "json")
    payload = json.loads(out)
    assert code == 0
    assert payload["agree"]
    assert payload["genus_traced"] == 2 - (6 - 12 + payload["faces"])


def test_genus_of_a_disconnected_graph(capsys: pytest.CaptureFixture) -> None:
    code, out, err = _run(capsys, "genus", "--text", "v1: 1 1\nv2: 2 2")
    assert code == 2
    assert out == ""
    assert err.strip() == "error: graph must be connected"


def test_parse_errors_name_the_line(capsys: pytest.CaptureFixture, tmp_path: Path) -> None:
    path = tmp_path / "bad.txt"
    path.write_text("v1: 1 2\nv2: 1 two\n", encoding="utf-8")
    code, _, err = _run(capsys, "genus", str(path))
    assert code == 2
    assert "line 2" in err


def test_missing_file(capsys: pytest.CaptureFixture, tmp_path: Path) -> None:
    code, _, err = _run(capsys, "genus", str(tmp_path / "nope.txt"))
    assert code == 2
    assert "cannot read" in err


def test_aux_and_contract(capsys: pytest.CaptureFixture) -> None:
    code, out, _ = _run(capsys, "aux", "--text", "v1: 1 2 / v2: -1 2", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["tree"] == [1]
    assert payload["bouquet"] == "2 -2"

    code, out, _ = _run(capsys, "contract", "--text", "v1: 1 2 / v2: 1 3 / v3: 2 3", "--edge", "1")
    assert code == 0
    assert out.splitlines() == ["v1: 2 3", "v2: 2 3"]


@pytest.mark.parametrize(
    "argv",
    [
        ("check", "--mode", "genus-rank", "--random", "200", "--seed", "7"),
        ("check", "--mode", "four-term-graph", "--max-size", "4"),
        ("check", "--mode", "join", "--random", "100"),
    ],
)
def test_check_modes_pass(capsys: pytest.CaptureFixture, argv) -> None:
    code, out, _ = _run(capsys, *argv)
    assert code == 0
    assert "PASS" in out


def test_check_json(capsys: pytest.CaptureFixture) -> None:
    code, out, _ = _run(capsys, "check", "--mode", "sign-relation", "--random", "10", "--seed", "3", "--format", "json")
    assert code == 0
    (report,) = json.loads(out)
    assert report["mode"] == "sign-relation"
    assert report["passed"] is True
    assert report["cases"] == 10


def test_random_is_deterministic_and_parses(capsys: pytest.CaptureFixture) -> None:
    for kind in ("bouquet", "ribbon", "signed-graph"):
        _, first, _ = _run(capsys, "random", kind, "--size", "5", "--seed", "42")
        _, second, _ = _run(capsys, "random", kind, "--size", "5", "--seed", "42")
        assert first == second
        parse_instance(first)


def test_random_rejects_impossible_sizes(capsys: pytest.CaptureFixture) -> None:
    code, _, err = _run(capsys, "random", "ribbon", "--size", "5", "--edges", "2")
    assert code == 2
    assert err.startswith("error: ")


def test_run_log(capsys: pytest.CaptureFixture, tmp_path: Path) -> None:
    log_path = tmp_path / "logs" / "runs.jsonl"
    _run(capsys, "poly", "--text", "1 1", "--log", str(log_path))
    _run(capsys, "genus", "--text", "v1: 1 1\nv2: 2 2", "--log", str(log_path))

    newest, oldest = read_runs_from_file(str(log_path))
    assert oldest["command"] == "poly"
    assert oldest["ok"] is True
    assert oldest["result"]["poly"] == {"0": 1, "1": 1}
    assert newest["command"] == "genus"
    assert newest["ok"] is False
    assert newest["result"] == {"error": "graph must be connected"}
    assert set(oldest) == {"run_id", "timestamp", "command", "input", "elapsed_ms", "ok", "result"}


def test_run_log_from_environment(capsys: pytest.CaptureFixture, monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    from settings import get_settings

    log_path = tmp_path / "env_runs.jsonl"
    monkeypatch.setenv("PETRIAL_RUN_LOG", str(log_path))
    get_settings.cache_clear()
    _run(capsys, "random", "bouquet", "--seed", "1")
    assert len(read_runs_from_file(str(log_path))) == 1


def test_modified_signed_graph_respects_the_caps(capsys: pytest.CaptureFixture) -> None:
    text = "signs: " + " ".join("+" * 14) + "\nedges: 1-2"
    code, out, err = _run(capsys, "poly", "--text", text, "--modified", "--rank-cap", "3", "--bruteforce-cap", "3")
    assert code == 2
    assert out == ""
    assert "cap" in err
    code, _, _ = _run(capsys, "poly", "--text", text, "--modified", "--rank-cap", "3", "--force")
    assert code == 0


def test_modified_signed_graph_both_engines(capsys: pytest.CaptureFixture, data_dir: Path) -> None:
    code, out, _ = _run(capsys, "poly", str(data_dir / "signed_triangle.txt"), "--modified", "--method", "both")
    assert code == 0
    assert out.splitlines()[-1] == "methods agree"


def test_tree_override_on_a_bouquet(capsys: pytest.CaptureFixture) -> None:
    code, _, err = _run(capsys, "poly", "--text", "1 1", "--tree", "1")
    assert code == 2
    assert "loop" in err


def test_runs_lists_the_log_newest_first(capsys: pytest.CaptureFixture, tmp_path: Path) -> None:
    log_path = str(tmp_path / "runs.jsonl")
    _run(capsys, "poly", "--text", "1 1", "--log", log_path)
    _run(capsys, "genus", "--text", "v1: 1 1\nv2: 2 2", "--log", log_path)

    code, out, _ = _run(capsys, "runs", "--log", log_path)
    assert code == 0
    newest, oldest = out.splitlines()
    assert "genus" in newest and "FAILED" in newest
    assert "poly" in oldest and " ok " in oldest

    code, out, _ = _run(capsys, "runs", "--log", log_path, "--limit", "1", "--format", "json")
    assert [r["command"] for r in json.loads(out)] == ["genus"]
    assert len(read_runs_from_file(log_path)) == 2


def test_runs_needs_a_log(capsys: pytest.CaptureFixture) -> None:
    code, _, err = _run(capsys, "runs")
    assert code == 2
    assert "run log" in err

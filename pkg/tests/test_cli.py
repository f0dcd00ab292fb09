import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from melonclass import cli

GOLDEN = Path(__file__).parent / "golden"


def run_cli(capsys, *argv) -> tuple[int, str]:
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_family_examples(capsys):
    code, out = run_cli(capsys, "family", "b", "--m", "3")
    assert code == 0 and out == "[4, 8, 5, 1]\n"
    code, out = run_cli(capsys, "family", "f", "--m", "0")
    assert code == 0 and out == "[]\n"
    code, out = run_cli(capsys, "family", "h", "--m", "4", "--basis", "T")
    assert code == 0 and out == "[0, 1, -1, 1]\n"
    code, out = run_cli(capsys, "family", "g", "--m", "4", "--n", "2")
    assert code == 0 and out == "[2, 4, 4, 1]\n"


def test_family_usage_errors():
    with pytest.raises(SystemExit) as exc:
        cli.main(["family", "z", "--m", "3"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["family", "f", "--m", "-2"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["family", "f", "--m", "3", "--basis", "Q"])
    assert exc.value.code == 2


def test_tables_golden_bytes(capsys):
    for which, name in (("ulc", "tables_ulc.md"), ("ulcm", "tables_ulcm.md")):
        code, out = run_cli(capsys, "tables", "--m", "1..10",
                            "--which", which, "--format", "md")
        assert code == 0
        assert out == (GOLDEN / name).read_text()


def test_tables_json(capsys):
    code, out = run_cli(capsys, "tables", "--m", "3..4", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["families"]["b"][0]["coefficients"] == [4, 8, 5, 1]
    assert data["families"]["f"][1]["failing_degrees"] == [2]
    assert data["families"]["f"][1]["verdict"] is False


def test_tables_conjectured_failing_range(capsys):
    # every degree 4..m-2 fails ULC for f and h up to m = 100
    code, out = run_cli(capsys, "tables", "--m", "4..100", "--format", "json")
    data = json.loads(out)
    for fam_name in ("f", "h"):
        for row in data["families"][fam_name]:
            m, fails = row["m"], set(row["failing_degrees"])
            assert set(range(4, m - 1)) <= fails, (fam_name, m)


def _write_construction(tmp_path, stages) -> str:
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"stages": stages}))
    return str(path)


def test_class_command(tmp_path, capsys):
    path = _write_construction(tmp_path, [
        {"bananas": [5], "parent_stage": 0, "parent_banana": 1}])
    code, out = run_cli(capsys, "class", path)
    assert code == 0 and out == "[6, 23, 36, 27, 9, 1]\n"

    code, out = run_cli(capsys, "class", path, "--verify", "2,3")
    assert code == 0
    assert out.splitlines()[1:] == [
        "q=2: counted 6, expected 6 -> match",
        "q=3: counted 102, expected 102 -> match"]

    code, out = run_cli(capsys, "class", path, "--format", "json",
                        "--verify", "2")
    payload = json.loads(out)
    assert payload["coefficients"] == [6, 23, 36, 27, 9, 1]
    assert payload["verify"] == [
        {"q": 2, "counted": 6, "expected": 6, "match": True}]


def test_class_matches_necklace_closed_form(tmp_path, capsys):
    from melonclass import families as fam
    path = _write_construction(tmp_path, [
        {"bananas": [3], "parent_stage": 0, "parent_banana": 1},
        {"bananas": [2] * 6, "parent_stage": 1, "parent_banana": 1}])
    code, out = run_cli(capsys, "class", path)
    assert code == 0
    expected = list(fam.necklace_class(2, 7).poly.coeffs)
    assert out.strip() == "[" + ", ".join(map(str, expected)) + "]"


def test_class_invalid_construction(tmp_path, capsys):
    path = _write_construction(tmp_path, [
        {"bananas": [3], "parent_stage": 1, "parent_banana": 1}])
    code = cli.main(["class", path])
    err = capsys.readouterr().err
    assert code == 3
    assert "stage 1" in err


def test_class_malformed_json(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert cli.main(["class", str(path)]) == 3
    path.write_text('{"stages": [{"bananas": [2]}]}')
    assert cli.main(["class", str(path)]) == 3
    capsys.readouterr()


def test_class_budget_exceeded(tmp_path, capsys):
    path = _write_construction(tmp_path, [
        {"bananas": [10], "parent_stage": 0, "parent_banana": 1}])
    code = cli.main(["class", path, "--verify", "5", "--budget", "100"])
    capsys.readouterr()
    assert code == 4


def test_necklace_command(capsys):
    code, out = run_cli(capsys, "necklace", "clasped", "--m", "2", "--n", "2")
    assert code == 0 and out == "[4, 8, 5, 1]\n"
    code, out = run_cli(capsys, "necklace", "plain", "--m", "1", "--n", "5")
    assert code == 0 and out == "[16, 48, 56, 32, 9, 1]\n"


def test_necklace_verify(capsys):
    code, out = run_cli(capsys, "necklace", "clasped", "--m", "3", "--n", "4",
                        "--verify", "2,3")
    assert code == 0
    lines = out.splitlines()
    assert lines[1] == "construction recursion: match"
    assert lines[2].endswith("match") and lines[3].endswith("match")
    # degree-10 class: coefficients list has 11 entries
    assert len(json.loads(lines[0])) == 11


def test_necklace_verify_json(capsys):
    code, out = run_cli(capsys, "necklace", "plain", "--m", "2", "--n", "4",
                        "--verify", "2", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["construction_match"] is True
    assert payload["verify"][0]["match"] is True


def test_necklace_usage(capsys):
    code = cli.main(["necklace", "plain", "--m", "0", "--n", "3"])
    capsys.readouterr()
    assert code == 2


def test_search_deterministic(capsys):
    code, out1 = run_cli(capsys, "search", "--max-edges", "4")
    assert code == 0
    code, out2 = run_cli(capsys, "search", "--max-edges", "4")
    r1, r2 = json.loads(out1), json.loads(out2)
    assert r1["constructions_checked"] == 23
    assert r1["edge_bound"] == 4
    assert r1["counterexamples"] == []
    r1.pop("elapsed"), r2.pop("elapsed")
    assert r1 == r2


def test_search_workers_match_single(capsys):
    code, single = run_cli(capsys, "search", "--max-edges", "5")
    assert code == 0
    code, multi = run_cli(capsys, "search", "--max-edges", "5",
                          "--workers", "3")
    assert code == 0
    a, b = json.loads(single), json.loads(multi)
    a.pop("elapsed"), b.pop("elapsed")
    assert a == b


def test_oracle_command(tmp_path, capsys):
    path = tmp_path / "g.txt"
    path.write_text("0 1\n0 1\n0 1\n")
    code, out = run_cli(capsys, "oracle", str(path), "--verify", "2,3")
    assert code == 0
    assert "q=2: 4 complement points" in out
    assert "q=3: 18 complement points" in out

    code, out = run_cli(capsys, "oracle", str(path), "--format", "json")
    payload = json.loads(out)
    assert payload == {"vertices": 2, "edges": 3,
                       "counts": {"2": 4, "3": 18, "5": 100}}


def test_oracle_errors(tmp_path, capsys):
    path = tmp_path / "g.txt"
    path.write_text("0 1\nbogus\n")
    assert cli.main(["oracle", str(path)]) == 3
    path.write_text("0 1\n2 3\n")
    assert cli.main(["oracle", str(path)]) == 3  # disconnected
    path.write_text("0 1\n0 1\n")
    assert cli.main(["oracle", str(path), "--budget", "3"]) == 4
    capsys.readouterr()
    with pytest.raises(SystemExit) as exc:
        cli.main(["oracle", str(path), "--verify", "6"])
    assert exc.value.code == 2


def test_env_budget(tmp_path, capsys):
    path = tmp_path / "g.txt"
    path.write_text("0 1\n0 1\n")
    os.environ["MELON_BUDGET"] = "3"
    try:
        assert cli.main(["oracle", str(path)]) == 4
        # explicit flag wins over the environment
        assert cli.main(["oracle", str(path), "--budget", "1000"]) == 0
    finally:
        del os.environ["MELON_BUDGET"]
    capsys.readouterr()


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "melonclass",
                           "family", "b", "--m", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "[2, 3, 1]\n"

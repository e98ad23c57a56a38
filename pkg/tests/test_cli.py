import json
from fractions import Fraction

import pytest

from conftest import X1_COLS, X2_COLS, X3_COLS, X4_COLS
from latmaj.design_core import parse_design, project, random_balanced, read_design, write_design
from latmaj.latmaj import main


@pytest.fixture
def design_files(tmp_path, table1):
    paths = {}
    for name, cols in (("x1", X1_COLS), ("x2", X2_COLS), ("x3", X3_COLS), ("x4", X4_COLS)):
        path = tmp_path / f"{name}.txt"
        write_design(path, project(table1, cols))
        paths[name] = str(path)
    return paths


def run_json(capsys, argv):
    assert main(argv) == 0
    return json.loads(capsys.readouterr().out)


def test_validate_bundled_design(capsys):
    assert main(["validate", "@table1"]) == 0
    assert "Plan valide" in capsys.readouterr().out


def test_validate_unbalanced_file(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("0 0\n1 0\n", encoding="utf-8")
    assert main(["validate", str(path)]) == 1
    assert "Colonne 2" in capsys.readouterr().err


def test_missing_file(capsys):
    assert main(["validate", "/nonexistent/plan.txt"]) == 1
    assert "Erreur" in capsys.readouterr().err


def test_non_utf8_design_file(tmp_path, capsys):
    path = tmp_path / "latin1.txt"
    path.write_bytes(b"0 1\n1 0\n# \xe9\xff\n")
    assert main(["validate", str(path)]) == 1
    assert "UTF-8" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    [],
    ["bounds", "--n", "27"],
    ["improve", "@table3", "--tie-policy", "sideways"],
    ["gen", "--n", "x", "--s", "2", "--q", "2", "--seed", "0"],
    ["gen", "--n", "4", "--s", "2", "--q", "2", "--seed", "-1"],
    ["improve", "@table3", "--seed", "-3"],
])
def test_usage_errors(argv):
    assert main(argv) == 2


def test_version(capsys):
    assert main(["--version"]) == 0
    assert "latmaj" in capsys.readouterr().out


def test_bounds_human_output(capsys):
    assert main(["bounds", "--n", "27", "--s", "4", "--q", "3", "--kernel", "variance"]) == 0
    assert "Borne (variance): 0.1775" in capsys.readouterr().out


def test_bounds_json(capsys):
    payload = run_json(capsys, ["bounds", "--n", "27", "--s", "4", "--q", "3",
                                "--kernel", "exp:golden", "--json"])
    assert payload["kernel"] == "exp:golden"
    assert float(payload["bound"]) == pytest.approx(648.93, abs=0.01)
    assert payload["beta_bar"] == "16/13"
    assert payload["m"] == 351
    assert payload["cl2_bound"] is None
    assert payload["wl2_bound"] is not None
    assert [float(v) for v in payload["astar"][:3]] == [0, -2, 4]


def test_bad_kernel_spec(capsys):
    argv = ["bounds", "--n", "27", "--s", "4", "--q", "3", "--kernel", "power:x"]
    assert main(argv) == 1
    assert "position 6" in capsys.readouterr().err


def test_pc_json_with_profile(capsys):
    payload = run_json(capsys, ["pc", "@table3", "--json", "--profile"])
    assert payload["sum"] == 72
    assert payload["beta_bar"] == "18/7"
    assert payload["beta_bar_decimal"] == "2.57142857143"
    assert payload["pc"][:7] == [5, 3, 1, 1, 3, 5, 0]
    assert len(payload["profile"]) == 28
    assert payload["profile"][11]["benchmark"] == 24
    assert payload["profile"][-1] == {"k": 28, "design": 72, "benchmark": 72}


def test_compare(design_files, capsys):
    assert main(["compare", design_files["x1"], design_files["x4"]]) == 0
    out = capsys.readouterr().out
    assert "gauche strictement majorisé par droite" in out
    assert "témoin" in out

    payload = run_json(capsys, ["compare", design_files["x1"], design_files["x2"], "--json"])
    assert payload["left"] == "x1"
    assert payload["relation"] == "incomparable"
    assert payload["witness"] is None

    payload = run_json(capsys, ["compare", design_files["x3"], design_files["x4"], "--json"])
    assert payload["relation"] == "left_majorized_strict"


def test_rank_projections(capsys):
    payload = run_json(capsys, ["rank", "@table1", "--choose", "4", "--kernel", "exp:golden", "--json"])
    assert payload["pool_size"] == 70
    assert payload["majorants"] == []
    dominated = {item["design"] for item in payload["inadmissible"]}
    assert {"{ABDF}", "{ADEF}"} <= dominated
    assert "{ACGH}" in payload["admissible"]
    assert payload["ranking"][0] == {"rank": 1, "design": "{ACGH}",
                                     "value": payload["ranking"][0]["value"]}
    assert len(payload["ranking"]) == len(payload["admissible"])


def test_rank_files(design_files, capsys):
    files = [design_files[name] for name in ("x1", "x2", "x3", "x4")]
    payload = run_json(capsys, ["rank", *files, "--kernel", "exp:golden", "--json"])
    assert payload["admissible"] == ["x1", "x2"]
    assert {item["design"] for item in payload["inadmissible"]} == {"x3", "x4"}
    assert [item["design"] for item in payload["ranking"]] == ["x1", "x2"]
    assert float(payload["ranking"][0]["value"]) == pytest.approx(683.4102, abs=1e-4)


def test_rank_json_is_deterministic(capsys, monkeypatch):
    argv = ["rank", "@table1", "--choose", "3", "--kernel", "power:pi", "--json"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    monkeypatch.setenv("LATMAJ_THREADS", "4")
    assert main(argv) == 0
    assert capsys.readouterr().out == first


def test_rank_choose_needs_single_file(design_files, capsys):
    assert main(["rank", design_files["x1"], design_files["x2"], "--choose", "2"]) == 1


def test_criteria_json(design_files, capsys):
    payload = run_json(capsys, ["criteria", design_files["x1"], "--kernel", "variance",
                                "--kernel", "exp:golden", "--json"])
    assert payload["design"] == {"name": "x1", "n": 27, "s": 4, "q": 3}
    assert [Fraction(v).limit_denominator(100) for v in payload["gwp"]["values"]] == \
        [0, 0, Fraction(10, 9), Fraction(8, 9)]
    assert payload["psi_c"]["values"] == ["0", "0", "30", "18"]
    assert payload["e_s2"] is None
    assert payload["cl2"] is None
    assert float(payload["wl2"]["value"]) == pytest.approx(0.4242, abs=5e-5)
    assert payload["categorical_d2"]["params"]["a"] == "0.25"
    assert [item["kernel"] for item in payload["schur"]] == ["variance", "exp:golden"]
    assert float(payload["schur"][0]["value"]) == pytest.approx(108 / 169)


def test_criteria_human_output(capsys):
    assert main(["criteria", "@table3", "--disc-a", "0.5", "--disc-b", "-0.25"]) == 0
    out = capsys.readouterr().out
    assert "Ave(χ²)" in out
    assert "E(s²)" in out


def test_criteria_invalid_discrepancy_params(capsys):
    assert main(["criteria", "@table3", "--disc-a", "0.25", "--disc-b", "0.5"]) == 1


def test_improve_writes_design_and_trace(tmp_path, capsys):
    out, trace = tmp_path / "better.txt", tmp_path / "trace.jsonl"
    argv = ["improve", "@table3", "--kernel", "quadratic", "--out", str(out), "--trace", str(trace)]
    assert main(argv) == 0
    improved = read_design(out)
    assert improved.params == (8, 6, 2)

    records = [json.loads(line) for line in trace.read_text(encoding="utf-8").splitlines()]
    assert records[0] == {"iter": 1, "i": 1, "t": 8, "j": 4, "delta": "-20", "psi": "224"}
    assert records[-1]["terminated"] == "local_optimum"
    assert records[-1]["bound"] == "192"
    assert "Plan amélioré" in capsys.readouterr().out


def test_improve_is_deterministic(tmp_path, monkeypatch):
    argv = ["improve", "@table3", "--restarts", "6", "--seed", "17", "--kernel", "exp:2"]
    outputs = []
    for threads in ("1", "3"):
        monkeypatch.setenv("LATMAJ_THREADS", threads)
        path = tmp_path / f"out{threads}.txt"
        trace = tmp_path / f"trace{threads}.jsonl"
        assert main([*argv, "--out", str(path), "--trace", str(trace)]) == 0
        outputs.append((path.read_bytes(), trace.read_bytes()))
    assert outputs[0] == outputs[1]


def test_gen_is_deterministic(tmp_path, capsys):
    paths = [tmp_path / "a.txt", tmp_path / "b.txt"]
    for path in paths:
        assert main(["gen", "--n", "12", "--s", "4", "--q", "3", "--seed", "7", "--out", str(path)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    capsys.readouterr()

    assert main(["gen", "--n", "12", "--s", "4", "--q", "3", "--seed", "7"]) == 0
    printed = parse_design(capsys.readouterr().out)
    assert printed == random_balanced(12, 4, 3, seed=7)


def test_gen_rejects_bad_parameters(capsys):
    assert main(["gen", "--n", "10", "--s", "2", "--q", "3", "--seed", "0"]) == 1


def test_unwritable_output(tmp_path, capsys):
    assert main(["gen", "--n", "4", "--s", "2", "--q", "2", "--seed", "1", "--out", str(tmp_path)]) == 1
    assert main(["improve", "@table3", "--trace", str(tmp_path)]) == 1
    assert "Erreur" in capsys.readouterr().err


def test_subdesigns(capsys):
    payload = run_json(capsys, ["subdesigns", "@table1", "--choose", "4", "--json"])
    assert payload["count"] == 70
    assert payload["subsets"][0] == {"design": "{ABCD}", "columns": [1, 2, 3, 4]}

    assert main(["subdesigns", "@table1", "--choose", "2", "--list"]) == 0
    assert "28 sous-plans" in capsys.readouterr().out


def test_config(capsys):
    assert main(["config"]) == 0
    assert "Configuration latmaj" in capsys.readouterr().out

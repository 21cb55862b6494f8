import json

import pytest

from chow_engine.cli import main

EXAMPLE = "D{0,1}^3 * D{0,1,2,3,4}^2 * D{0,1,2,3,4,5}"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json", "--no-timing")
    return code, json.loads(out) if out.strip() else None, err


def test_flats_u23(capsys):
    code, data, _ = run_json(capsys, "--uniform", "2", "3", "flats")
    assert code == 0 and data["results"]["flat_count"] == 5


def test_flats_boolean3(capsys):
    code, data, _ = run_json(capsys, "--boolean", "3", "flats")
    assert data["results"]["flat_count"] == 8


def test_bad_flats_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"ground_set": 3, "flats": [[], [0], [1], [0, 1, 2]]}))
    code, out, err = run(capsys, "--flats", str(path), "flats")
    assert code == 2 and "axiom (2)" in err


def test_charpoly_boolean5(capsys):
    code, data, _ = run_json(capsys, "--boolean", "5", "charpoly")
    assert data["results"]["mu"] == [1, 4, 6, 4, 1]
    assert data["results"]["chi_coefficients"] == [1, -5, 10, -10, 5, -1]


def test_charpoly_k4(capsys):
    code, data, _ = run_json(capsys, "--builtin", "k4", "charpoly")
    assert data["results"]["reduced"] == "λ^2 - 5λ + 6" and data["results"]["mu"] == [1, 5, 6]


def test_charpoly_loopy(capsys, tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"n_vertices": 2, "edges": [[0, 0], [0, 1]]}))
    code, data, err = run_json(capsys, "--graph", str(path), "charpoly")
    assert code == 0 and data["results"]["chi"] == "0" and data["results"]["mu"] is None
    assert "loop" in err


def test_degree_worked_example(capsys):
    code, data, _ = run_json(capsys, "--boolean", "7", "degree", EXAMPLE, "--trace")
    assert code == 0 and data["results"]["degree"] == -4
    assert sum(t["value"] for t in data["results"]["trace"]) == -4
    assert [1, 2, 1, 1] in [t["interval_factors"] for t in data["results"]["trace"]]


def test_degree_oracle_guard_and_rewrite(capsys):
    code, _, err = run(capsys, "--boolean", "7", "degree", EXAMPLE, "--oracle")
    assert code == 3 and "341796" in err
    code, data, _ = run_json(capsys, "--boolean", "7", "degree", EXAMPLE, "--oracle", "--oracle-method", "rewrite")
    assert code == 0 and data["results"]["oracle"] == -4


def test_degree_complete_flag_and_incomparable(capsys):
    code, data, _ = run_json(capsys, "--boolean", "3", "degree", "D{0} * D{0,1}", "--oracle")
    assert data["results"]["degree"] == 1 == data["results"]["oracle"]
    code, data, _ = run_json(capsys, "--boolean", "3", "degree", "D{0} * D{1}", "--oracle")
    assert data["results"]["degree"] == 0


def test_degree_wrong_degree_warns(capsys):
    code, data, err = run_json(capsys, "--boolean", "3", "degree", "D{0}")
    assert code == 0 and data["results"]["degree"] == 0 and "degree" in err


def test_degree_unknown_flat(capsys):
    code, _, err = run(capsys, "--uniform", "2", "3", "degree", "D{0,1}")
    assert code == 2 and "{0,1}" in err


def test_psi_degree(capsys):
    assert run_json(capsys, "--boolean", "7", "psi-degree", "2", "4")[1]["results"]["degree"] == 15
    assert run_json(capsys, "--boolean", "7", "psi-degree", "2", "3")[1]["results"]["degree"] == 0
    assert run_json(capsys, "--uniform", "3", "4", "psi-degree", "--minus", "{0,1}", "{2,3}")[1]["results"]["degree"] == 1
    assert run_json(capsys, "--uniform", "3", "4", "psi-degree", "--minus", "{1}", "E")[1]["results"]["degree"] == 0


def test_volume_modes(capsys, tmp_path):
    y = tmp_path / "y.json"
    y.write_text(json.dumps({"n": 3, "y": {"0,1,2": 1}}))
    code, data, _ = run_json(capsys, "--boolean", "3", "volume", "--postnikov", str(y))
    assert code == 0 and data["results"]["postnikov"] == "1/2" == data["results"]["eval"]
    x = tmp_path / "x.json"
    x.write_text(json.dumps({"n": 3, "x": {}}))
    assert run_json(capsys, "--boolean", "3", "volume", "--eval", str(x))[1]["results"]["volume"] == "0"
    x.write_text(json.dumps({"n": 3, "x": {"0": 2, "0,1": 1, "0,2": 1}}))
    y.write_text(json.dumps({"n": 3, "y": {"0,1": 1, "0,2": 1}}))
    assert run_json(capsys, "--boolean", "3", "volume", "--eval", str(x))[1]["results"]["volume"] == "1"
    assert run_json(capsys, "--boolean", "3", "volume", "--postnikov", str(y))[1]["results"]["postnikov"] == "1"
    code, data, _ = run_json(capsys, "--boolean", "3", "volume", "--symbolic")
    assert data["results"]["denominator_factorial"] == 2


def test_verify_pd(capsys):
    code, data, _ = run_json(capsys, "--boolean", "4", "verify", "--pd")
    assert code == 0
    assert all(abs(c["det"]) == 1 and c["triangular"] for c in data["results"]["poincare"])


def test_verify_oracle_samples(capsys):
    code, data, _ = run_json(capsys, "--uniform", "3", "5", "verify", "--oracle", "--samples", "500", "--seed", "7")
    assert code == 0 and data["results"]["oracle"]["agree"] == 500 == data["results"]["oracle"]["checked"]


def test_verify_all_fano(capsys):
    code, data, _ = run_json(capsys, "--builtin", "fano", "verify", "--all")
    assert code == 0 and data["results"]["pass"]


def test_verify_fano_matrix_file(capsys, tmp_path):
    path = tmp_path / "fano.json"
    path.write_text(json.dumps({"rows": 3, "cols": 7, "modulus": 2,
                                "entries": [[1, 0, 0, 1, 1, 0, 1], [0, 1, 0, 1, 0, 1, 1], [0, 0, 1, 0, 1, 1, 1]]}))
    assert run(capsys, "--matrix", str(path), "verify", "--all")[0] == 0


def test_deterministic_json(capsys):
    argv = ("--uniform", "3", "5", "verify", "--oracle", "--samples", "50", "--seed", "3", "--json", "--no-timing")
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second


def test_export_roundtrip(capsys, tmp_path):
    code, data, _ = run_json(capsys, "--builtin", "k4", "export")
    path = tmp_path / "k4.json"
    path.write_text(json.dumps(data["results"]))
    assert run_json(capsys, "--flats", str(path), "flats")[1]["results"]["flat_count"] == 15


@pytest.mark.parametrize("argv", [[], ["--boolean", "3"], ["--boolean", "3", "--uniform", "2", "3", "flats"],
                                  ["--builtin", "nope", "flats"], ["--boolean", "3", "verify"]])
def test_input_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2

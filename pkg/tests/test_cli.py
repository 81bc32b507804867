import json

import pytest

from emptysimplex.cli import run


def run_json(capsys, *argv):
    code = run([*argv, "--format", "json", "-q"])
    out = capsys.readouterr().out
    return code, json.loads(out) if out else None


def test_simplex(capsys):
    code, data = run_json(capsys, "simplex", "-k", "2", "-m", "2")
    assert code == 0
    assert data["schema_version"] == 1 and data["command"] == "simplex"
    assert data["delta"] == [1, 0, 1, 0]
    assert data["vertices"][-1] == [1, 1, 2]


def test_a_accepts_commas_and_spaces(capsys):
    _, one = run_json(capsys, "simplex", "-k", "3", "-m", "5", "-a", "1,2")
    _, two = run_json(capsys, "simplex", "-k", "3", "-m", "5", "-a", "1", "2")
    assert one == two and one["params"]["a"] == [1, 2]


def test_points(capsys):
    code, data = run_json(capsys, "points", "-k", "2", "-m", "3", "--count-only")
    assert code == 0 and "points" not in data
    assert data["count"] == data["ehrhart_from_delta"]
    assert data["decomposition"]["ok"]


def test_idp(capsys):
    code, data = run_json(capsys, "idp", "-k", "2", "-m", "3")
    assert code == 0
    assert [r["idp"] for r in data["rows"]] == [False, True, True]
    assert "witness" in data["rows"][0]


def test_gb(capsys):
    code, data = run_json(capsys, "gb", "-k", "2", "-m", "2", "--show-basis")
    assert code == 0 and data["verdict"] == "RUT certified"
    assert set(data["basis"]) == {"G11", "G12", "G13", "G2"}


def test_gb_rejects_other_a(capsys):
    assert run(["gb", "-k", "2", "-m", "5", "-a", "2", "-q"]) == 2
    assert "a = (1, ..., 1)" in capsys.readouterr().err


def test_budget_error(capsys):
    assert run(["gb", "-k", "4", "-m", "2", "-q"]) == 2
    assert "budget" in capsys.readouterr().err


def test_parameter_error_names_constraint(capsys):
    assert run(["simplex", "-k", "2", "-m", "4", "-a", "2"]) == 2
    assert "gcd(a_i, m) == 1" in capsys.readouterr().err


def test_bad_a_is_usage_error(capsys):
    assert run(["simplex", "-k", "2", "-m", "5", "-a", "x"]) == 2


def test_missing_arguments_exit_2():
    with pytest.raises(SystemExit) as info:
        run(["simplex", "-k", "2"])
    assert info.value.code == 2


def test_triangulate(capsys):
    code, data = run_json(capsys, "triangulate", "-k", "2", "-m", "2")
    assert code == 0
    assert data["report"]["cells"] == 16 and data["witness"] is None


def test_obstruct_and_verify(capsys, tmp_path):
    path = tmp_path / "cert.json"
    assert run(["obstruct", "-k", "2", "-m", "5", "-a", "2", "--format", "json", "-q", "-o", str(path)]) == 0
    code, data = run_json(capsys, "verify-certificate", str(path))
    assert code == 0 and data["ok"]
    cert = json.loads(path.read_text())
    cert["adjacent_pairs"][0]["q"] = [0, 0, 0]
    path.write_text(json.dumps(cert))
    code, data = run_json(capsys, "verify-certificate", str(path))
    assert code == 1 and data["problems"]


def test_obstruct_hypothesis_not_met(capsys):
    assert run(["obstruct", "-k", "2", "-m", "5", "-a", "1"]) == 2
    assert "hypothesis not met" in capsys.readouterr().err


def test_unreadable_certificate(capsys, tmp_path):
    assert run(["verify-certificate", str(tmp_path / "none.json")]) == 2


def test_json_output_is_deterministic(capsys):
    outs = []
    for _ in range(2):
        run(["obstruct", "-k", "3", "-m", "5", "-a", "1", "2", "--format", "json", "-q"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


def test_text_output(capsys):
    assert run(["simplex", "-k", "2", "-m", "2", "-q"]) == 0
    out = capsys.readouterr().out
    assert "delta_text: 1 + t^2" in out


def test_progress_goes_to_stderr(capsys):
    run(["idp", "-k", "2", "-m", "2", "--format", "json"])
    captured = capsys.readouterr()
    assert "[idp] n = 1" in captured.err
    json.loads(captured.out)

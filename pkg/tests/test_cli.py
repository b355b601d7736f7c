from __future__ import annotations

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from fmethod.cli import main
from fmethod.config import ConfigError, RunConfig, parse_weight_items


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out.strip().splitlines()
    return code, json.loads(out[-1]), out[:-1]


def test_fourier(capsys):
    assert run(capsys, "fourier", "d1")[2] == ["-zeta1"]
    assert run(capsys, "fourier", "z1*d1")[2] == ["-zeta1*dzeta1 - 1"]
    code, status, body = run(capsys, "fourier", "1")
    assert (code, body, status["status"]) == (0, ["1"], "ok")


def test_fourier_parse_error(capsys):
    code, status, _ = run(capsys, "fourier", "z1 + + (")
    assert code == 2 and "position" in status["message"]


def test_solve_rankin_cohen(capsys, tmp_path):
    out = tmp_path / "rc.json"
    code, status, _ = run(capsys, "solve", "rankin_cohen", "--degree-max", "4", "--out", str(out))
    assert code == 0
    assert status["solutions"] == 5 and status["degrees"] == [0, 1, 2, 3, 4]
    data = json.loads(out.read_text())
    assert data["kind"] == "SolveResult"
    assert [sv["degree"] for sv in data["singular_vectors"]] == [0, 1, 2, 3, 4]


def test_solve_juhl_even(capsys):
    code, status, _ = run(capsys, "solve", "juhl", "--n", "3", "--degree-max", "2",
                          "--parity", "even", "--format", "text")
    assert code == 0 and status["degrees"] == [0, 2]


def test_solve_without_solutions(capsys):
    code, status, _ = run(capsys, "solve", "rankin_cohen", "--degree-max", "0",
                          "--weights", "nu=k1+k2+2")
    assert code == 3 and status["status"] == "no_solutions"


def test_solve_fixed_weights(capsys):
    code, status, body = run(capsys, "solve", "rankin_cohen", "--n", "1",
                             "--weights", "k1=4", "k2=6", "--format", "text")
    assert code == 0 and status["degrees"] == [1]
    assert any("psi_1 = 3*zeta1 - 2*zeta2" in line for line in body)


def test_verify_round_trip(capsys, tmp_path):
    out = tmp_path / "rc2.json"
    assert run(capsys, "solve", "rankin_cohen", "--n", "2", "--out", str(out))[0] == 0
    code, status, _ = run(capsys, "verify", str(out), "--setting", "rankin_cohen")
    assert code == 0 and status["failing"] == []
    data = json.loads(out.read_text())
    op = data["singular_vectors"][0]["operator"]
    op["operator"][0]["coeff_matrix"] = _bump(op["operator"][0]["coeff_matrix"])
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(op))
    code, status, _ = run(capsys, "verify", str(bad), "--setting", "rankin_cohen")
    assert code == 1
    assert status["failing"] and all(f.startswith("rankin_cohen-d2:") for f in status["failing"])


def _bump(matrix):
    # 1x1 fiber matrix holding a rational function; add 1 to its numerator
    num = matrix[0][0]["num"]
    const = [t for t in num if not any(t["exponents"])]
    if const:
        const[0]["coeff"] = str(Fraction(const[0]["coeff"]) + 1)
    else:
        num.append({"exponents": [0] * len(matrix[0][0]["vars"]), "coeff": "1/1"})
    return matrix


def test_verify_identity_and_plain_derivative(capsys):
    code, status, _ = run(capsys, "verify", "identity", "--setting", "juhl", "--n", "3")
    assert code == 0
    code, status, _ = run(capsys, "verify", "--setting", "rankin_cohen", "--expr", "dx")
    assert code == 1 and status["failing"]
    assert all(f.endswith(":E") for f in status["failing"])


def test_verify_missing_file(capsys, tmp_path):
    code, status, _ = run(capsys, "verify", str(tmp_path / "nope.json"), "--setting", "rankin_cohen")
    assert code == 2 and status["field"] == "operator"


def test_compare(capsys):
    code, status, _ = run(capsys, "compare", "rankin_cohen", "--n", "3")
    assert code == 0 and status["proportional"] and status["scalar"]
    code, status, _ = run(capsys, "compare", "juhl", "--n", "4", "--delta", "2")
    assert code == 0 and status["proportional"]


def test_compare_odd_delta(capsys):
    code, status, _ = run(capsys, "compare", "juhl", "--n", "3", "--delta", "3")
    assert code == 2 and status["status"] == "unsupported"
    assert "odd" in status["message"]


def test_invalid_configs(capsys):
    code, status, _ = run(capsys, "solve", "juhl")
    assert code == 2 and status["field"] == "n"
    code, status, _ = run(capsys, "solve", "rankin_cohen", "--weights", "q=3")
    assert code == 2 and status["field"] == "weights.q"
    code, status, _ = run(capsys, "solve", "rankin_cohen", "--jobs", "0")
    assert code == 2 and status["field"] == "jobs"
    code, status, _ = run(capsys, "bogus")
    assert code == 2


def test_dump_setting(capsys):
    code, status, body = run(capsys, "dump-setting", "juhl", "--n", "3")
    assert code == 0 and status["dim"] == 10
    data = json.loads("\n".join(body))
    assert data["coordinates"] == ["x1", "x2", "x3"]
    assert data["restriction"]["x3"] == "0"


def test_config_round_trip():
    cfg = RunConfig(setting="juhl", n=4, delta=2, degree_max=6,
                    weights=parse_weight_items(["lam=sym", "nu=lam+2"]),
                    parity="even", jobs=3, format="text", out="x.json",
                    test_degree=5, samples=4, seed=9).validate()
    assert RunConfig.from_ini(cfg.to_ini()) == cfg
    assert RunConfig.from_ini(RunConfig().to_ini()) == RunConfig()


def test_config_errors():
    with pytest.raises(ConfigError) as info:
        RunConfig.from_ini("[solver]\ndegree_max = many\n")
    assert info.value.field == "degree_max"
    with pytest.raises(ConfigError) as info:
        RunConfig.from_ini("[solver]\nspeed = 3\n")
    assert info.value.field == "solver.speed"
    with pytest.raises(ConfigError):
        RunConfig(format="xml").validate()
    with pytest.raises(ConfigError):
        parse_weight_items(["k1"])


def test_flags_override_config_file(capsys, tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text(RunConfig(setting="juhl", n=2, degree_max=1).to_ini())
    code, status, _ = run(capsys, "solve", "--config", str(ini), "--degree-max", "3")
    assert code == 0 and status["degrees"] == [0, 1, 2, 3]


def test_artifacts_identical_across_jobs(capsys, tmp_path):
    outs = []
    for jobs in ("1", "4", "1"):
        out = tmp_path / f"j{jobs}-{len(outs)}.json"
        code, _, _ = run(capsys, "solve", "juhl", "--n", "3", "--degree-max", "4",
                         "--jobs", jobs, "--out", str(out))
        assert code == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fmethod", "fourier", "d1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "-zeta1"
    assert json.loads(proc.stdout.splitlines()[-1])["exit_code"] == 0

import json
import math
import subprocess
import sys

import pytest

from gelfand_lab.cli import main

LINE = "algebra Line ;\ngenerator x : selfadjoint ;\n"
DISK = "algebra Disk ;\ngenerator z : free ;\n"
NIL = "algebra Nil ;\ngenerator x : selfadjoint ;\nrelation x^2 ;\n"


@pytest.fixture()
def files(tmp_path):
    paths = {}
    for name, text in (("line", LINE), ("disk", DISK), ("nil", NIL)):
        f = tmp_path / f"{name}.star"
        f.write_text(text, encoding="utf-8")
        paths[name] = str(f)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out), err


def test_parse_text_and_json(files, capsys):
    code, out, _ = run(capsys, "parse", files["disk"])
    assert code == 0
    assert "generator z : free (partner adj(z))" in out
    code, doc, _ = run_json(capsys, "parse", files["disk"])
    assert code == 0
    assert doc["schema"] == "gelfand-lab/1"
    assert doc["command"] == "parse"
    assert len(doc["inputs_digest"]["sha256"]) == 64
    assert doc["presentation"]["mode"] == "star-algebra"


def test_parse_error_exit_one(files, capsys, tmp_path):
    bad = tmp_path / "bad.star"
    bad.write_text("algebra ;", encoding="utf-8")
    code, out, err = run(capsys, "parse", str(bad))
    assert code == 1
    assert "error:" in err
    code, _, err = run(capsys, "parse", str(tmp_path / "missing.star"))
    assert code == 1


def test_usage_error_exit_one(files, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["parse", files["line"], "--nonsense"])
    assert exc.value.code == 1


def test_free_and_underlying(files, capsys, tmp_path):
    plain = tmp_path / "plain.alg"
    plain.write_text("algebra P ;\ngenerator x : free ;\n", encoding="utf-8")
    code, doc, _ = run_json(capsys, "free", str(plain))
    assert code == 0
    names = [g["name"] for g in doc["result"]["generators"]]
    assert names == ["x", "adj(x)"]
    code, doc, _ = run_json(capsys, "underlying", files["disk"])
    assert code == 0
    assert all(g["kind"] == "plain" for g in doc["result"]["generators"])


def test_spectrum_check_verdicts(files, capsys):
    code, doc, _ = run_json(capsys, "spectrum-check", files["line"],
                            "--char", "x = 2.5")
    assert code == 0
    assert doc["valid"] is True
    code, doc, _ = run_json(capsys, "spectrum-check", files["line"],
                            "--char", "x = (0+1i)")
    assert code == 2
    assert doc["valid"] is False
    assert doc["violation"] == "reality"


def test_eval_exact_value(files, capsys):
    code, doc, _ = run_json(capsys, "eval", files["disk"],
                            "--poly", "z*adj(z)",
                            "--char", "z = (1/2+1/2i)")
    assert code == 0
    assert doc["value"] == "1/2"
    assert doc["exact"] is True


def test_eval_invalid_character_exit_two(files, capsys):
    code, out, err = run(capsys, "eval", files["line"],
                         "--poly", "x", "--char", "x = (0+1i)")
    assert code == 2
    assert "error:" in err


def test_pushforward(files, capsys):
    code, doc, _ = run_json(capsys, "pushforward",
                            "--source", files["line"],
                            "--target", files["line"],
                            "--map", "x -> x^2",
                            "--char", "x = 3")
    assert code == 0
    assert doc["pushforward"]["x"] == "9"


def test_nilpotent_with_radical_sampling(files, capsys):
    code, doc, _ = run_json(capsys, "nilpotent", files["nil"], "--poly", "x")
    assert code == 0
    assert doc["nilpotent"] is True and doc["exponent"] == 2
    code, doc, _ = run_json(capsys, "nilpotent", files["line"], "--poly", "x",
                            "--box", "x = [-1, 1]", "--samples", "50",
                            "--seed", "9")
    assert code == 0
    assert doc["nilpotent"] is False
    assert doc["radical"]["vanishes"] is False
    assert doc["radical"]["witness"] is not None


def test_seminorm_report(files, capsys):
    code, doc, _ = run_json(capsys, "seminorm", files["line"],
                            "--poly", "x^2 - 1", "--box", "x = [0, 2]")
    assert code == 0
    assert doc["lower"] == 3.0
    assert doc["upper"] == 5.0
    assert doc["upper_exact"] == "5"
    assert doc["exact"] is True


def test_approx_fixed_degree(capsys):
    code, doc, _ = run_json(capsys, "approx", "--target", "square",
                            "--degree", "2")
    assert code == 0
    assert doc["poly"] == "1/2*t^2 + 1/2*t"
    assert doc["error"]["lower"] == 0.125
    assert doc["error"]["upper"] == 0.125


def test_approx_epsilon_search(capsys):
    code, doc, _ = run_json(capsys, "approx", "--target", "abs-shift",
                            "--epsilon", "0.08", "--resolution", "501")
    assert code == 0
    assert doc["achieved"] is True
    assert doc["error"]["upper"] <= 0.08
    code, _, err = run(capsys, "approx", "--target", "square")
    assert code == 1
    assert "--degree" in err


def test_wirtinger(files, capsys):
    code, doc, _ = run_json(capsys, "wirtinger", files["disk"],
                            "--poly", "z^2 + z*adj(z)")
    assert code == 0
    assert doc["derivative"] == "z"
    assert doc["holomorphic"] is False
    code, doc, _ = run_json(capsys, "wirtinger", files["disk"],
                            "--poly", "z^3 - 2")
    assert doc["holomorphic"] is True


def test_state_check(files, capsys):
    code, doc, _ = run_json(capsys, "state-check", files["line"],
                            "--state", "gaussian", "--degree", "3")
    assert code == 0
    assert doc["kind"] == "analytic"
    assert doc["gram_psd"] is True
    assert doc["rank"] == 4
    code, doc, _ = run_json(
        capsys, "state-check", files["line"],
        "--state", "state atomic { (x = 1) : 1/2 ; (x = -1) : 1/2 }",
        "--degree", "4")
    assert code == 0
    assert doc["rank"] == 2 and doc["null_dimension"] == 3


def test_state_check_invalid_support_exit_two(files, capsys):
    code, _, err = run(capsys, "state-check", files["nil"],
                       "--state", "state atomic { (x = 1) : 1 }")
    assert code == 2


def test_gns_hermite_golden(files, capsys):
    code, doc, _ = run_json(capsys, "gns", files["line"],
                            "--state", "gaussian", "--degree", "5")
    assert code == 0
    assert doc["basis"] == ["1", "x", "x^2", "x^3", "x^4", "x^5"]
    assert doc["rank"] == 6
    assert doc["gram"][0][:3] == ["1", "0", "1"]
    # last orthonormal vector is He_5 / sqrt(120)
    last = doc["orthonormal"][5]
    norm = math.sqrt(120.0)
    expected = [0.0, 15 / norm, 0.0, -10 / norm, 0.0, 1 / norm]
    for got, want in zip(last, expected):
        assert got[0] == pytest.approx(want, abs=1e-10)
        assert got[1] == pytest.approx(0.0, abs=1e-12)
    matrix = doc["operators"]["x"]["matrix"]
    for i in range(6):
        for j in range(6):
            expected_entry = math.sqrt(max(i, j)) if abs(i - j) == 1 else 0.0
            assert matrix[i][j][0] == pytest.approx(expected_entry, abs=1e-10)


def test_gns_two_point_null_section(files, capsys):
    code, doc, _ = run_json(
        capsys, "gns", files["line"],
        "--state", "state atomic { (x = 1) : 1/2 ; (x = -1) : 1/2 }",
        "--degree", "4")
    assert code == 0
    assert doc["null_space"] == ["x^2 - 1", "x^3 - x", "x^4 - 1"]
    eigs = doc["operators"]["x"]["eigenvalues"]
    assert [e[0] for e in eigs] == pytest.approx([-1.0, 1.0], abs=1e-10)


def test_json_determinism(files, capsys):
    argv = ["gns", files["line"], "--state", "gaussian", "--degree", "4",
            "--json"]
    code1 = main(list(argv))
    out1 = capsys.readouterr().out
    code2 = main(list(argv))
    out2 = capsys.readouterr().out
    assert code1 == code2 == 0
    assert out1 == out2
    argv = ["nilpotent", files["line"], "--poly", "x", "--box", "x = [-1, 1]",
            "--samples", "100", "--seed", "4", "--json"]
    main(list(argv))
    out1 = capsys.readouterr().out
    main(list(argv))
    out2 = capsys.readouterr().out
    assert out1 == out2


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "gelfand_lab.cli", "parse", files["line"]],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "generator x : selfadjoint" in proc.stdout


def test_stdin_input(capsys, monkeypatch):
    import io
    monkeypatch.setattr(sys, "stdin", io.StringIO(LINE))
    code, out, _ = run(capsys, "parse", "-")
    assert code == 0
    assert "selfadjoint" in out

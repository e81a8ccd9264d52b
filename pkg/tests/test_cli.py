import json

import pytest

from hofmom.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_charpoly_q3(capsys):
    code, out = run(capsys, "charpoly", "--q", "3")
    assert code == 0
    assert json.loads(out)["a"] == [-1, 6]


def test_charpoly_q4(capsys):
    code, out = run(capsys, "charpoly", "--q", "4")
    assert code == 0
    assert json.loads(out)["a"] == [-1, 8, -4]


def test_charpoly_q1(capsys):
    code, out = run(capsys, "charpoly", "--q", "1")
    assert code == 0
    assert json.loads(out)["a"] == [-1]


def test_edges_q1(capsys):
    code, out = run(capsys, "edges", "--q", "1")
    payload = json.loads(out)
    assert code == 0
    assert payload["e_plus"] == ["4.0"] and payload["e_minus"] == ["-4.0"]


def test_edges_q4_has_double_root(capsys):
    code, out = run(capsys, "edges", "--q", "4")
    payload = json.loads(out)
    assert code == 0
    assert payload["e_plus"].count("0.0") == 2


def test_edges_csv_format(capsys):
    code, out = run(capsys, "edges", "--q", "3", "--format", "csv")
    lines = out.strip().split("\n")
    assert code == 0
    assert lines[0] == "r,e_plus,e_minus"
    assert len(lines) == 4


def test_moment_small_sweep(capsys):
    code, out = run(capsys, "moment", "--kind", "alternating", "--n", "3",
                    "--q", "9,15,21", "--precision", "128")
    payload = json.loads(out)
    assert code == 0
    ext = float(payload["extrapolated"])
    assert abs(ext - 967.04) / 967.04 < 0.01
    assert float(payload["reference"]) == pytest.approx(967.037422715, rel=1e-9)


def test_moment_csv_sweep(capsys):
    code, out = run(capsys, "moment", "--kind", "bandwidth", "--q", "3,5,7",
                    "--format", "csv", "--precision", "128")
    lines = out.strip().split("\n")
    assert code == 0
    assert lines[0] == "kind,n,k,q,raw,scaled"
    assert len(lines) == 4


def test_deterministic_output(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["moment", "--kind", "half", "--n", "2", "--q", "9,15,21",
                 "--precision", "128", "--out", str(a)]) == 0
    assert main(["moment", "--kind", "half", "--n", "2", "--q", "9,15,21",
                 "--precision", "128", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_limit_n1(capsys):
    code, out = run(capsys, "limit", "--n", "1")
    payload = json.loads(out)
    assert code == 0
    assert float(payload["value"]) == pytest.approx(9.32994892899, rel=1e-10)
    assert payload["spread"] < 1e-12
    assert abs(float(payload["integral_relative_deviation"])) < 1e-6


def test_limit_even_n_reports_euler_route(capsys):
    code, out = run(capsys, "limit", "--n", "2")
    payload = json.loads(out)
    assert code == 0
    assert float(payload["via_euler_identity"]) == pytest.approx(
        float(payload["value"]), rel=1e-10)


def test_butterfly(capsys, tmp_path):
    out_path = tmp_path / "bands.csv"
    assert main(["butterfly", "--qmax", "5", "--out", str(out_path)]) == 0
    lines = out_path.read_text().strip().split("\n")
    assert lines[0] == "p,q,band,e_lo,e_hi,validated"
    # sum over reduced p/q of q bands: q=1:1, q=2:2, q=3:2*3, q=4:2*4, q=5:4*5
    assert len(lines) - 1 == 1 + 2 + 6 + 8 + 20
    assert any(line.endswith(",0") for line in lines[1:])  # p>1 rows flagged


def test_verify_quick(capsys):
    code, out = run(capsys, "verify", "--level", "quick", "--precision", "128")
    payload = json.loads(out)
    assert code == 0
    assert payload["passed"] is True
    assert len(payload["identities"]) == 6


def test_bad_arguments_exit_3(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["edges", "--nonsense"])
    assert exc.value.code == 3


def test_invalid_flux_exit_3(capsys):
    assert main(["charpoly", "--p", "2", "--q", "4"]) == 3

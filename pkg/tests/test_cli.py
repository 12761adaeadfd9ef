import json
import math

import pytest

from nsapprox.cli import main
from nsapprox.exact import Z
from nsapprox.smith import LaurentMatrix


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def data_rows(text):
    return [line for line in text.splitlines() if line and not line.startswith("#")]


def test_ns_builtins(capsys):
    code, out, _ = run(capsys, "ns", "counterexample")
    assert code == 0 and json.loads(out)["display"] == "1"
    code, out, _ = run(capsys, "ns", "dinf-xt")
    assert json.loads(out)["ns_number"] == {"type": "infinity_plus"}


def test_ns_matrix_file(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(json.dumps(LaurentMatrix([[Z, 1], [1, Z]]).to_json()))
    code, out, _ = run(capsys, "ns", str(path))
    doc = json.loads(out)
    assert code == 0 and doc["display"] == "1" and doc["invariant_factors"] == ["1", "z^2 - 1"]
    path.write_text(json.dumps(LaurentMatrix([[Z - 2]]).to_json()))
    _, out, _ = run(capsys, "ns", str(path))
    assert json.loads(out)["display"] == "inf+"


def test_alpha_closed_form(capsys):
    code, out, _ = run(capsys, "alpha", "z-1", "--levels", "3..10")
    rows = data_rows(out)
    assert code == 0 and rows[0] == "i,group_order,rank,sigma_plus,m_plus,alpha,flags"
    for row in rows[1:]:
        i, _, _, _, _, alpha, flags = row.split(",")
        if int(i) == 6:
            assert "alpha_undefined" in flags
        else:
            expected = math.log(2 / int(i)) / math.log(2 * math.sin(math.pi / int(i)))
            assert float(alpha) == pytest.approx(expected, rel=1e-9)


def test_alpha_group_dense_checked(tmp_path, capsys):
    code, out, _ = run(capsys, "alpha", "z-1", "--group", "ZxZ2", "--level-list", "2,5", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and all("dense_checked" in s["flags"] for s in doc["samples"])
    assert doc["samples"][0]["group_order"] == 4


def test_sdf(capsys, tmp_path):
    out_path = tmp_path / "sdf.tsv"
    code, _, _ = run(capsys, "sdf", "z-1", "--level", "2", "--out", str(out_path))
    assert code == 0 and data_rows(out_path.read_text()) == ["0.0\t0.5", "2.0\t1.0"]


def test_output_is_deterministic(capsys):
    first = run(capsys, "alpha", "counterexample", "--levels", "50..60")[1]
    assert run(capsys, "alpha", "counterexample", "--levels", "50..60")[1] == first


def test_counterexample_small(capsys):
    code, out, _ = run(capsys, "counterexample", "--n-max", "1000", "--i-max", "5000", "--baker-D", "10")
    assert code == 0
    assert "Baker floor with D = 10.0: 1/11" in out
    assert "i =      393" in out


def test_net_json(capsys):
    code, out, _ = run(capsys, "net", "z-1", "--i-max", "3000", "--K-set", "1,2,3,5", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["net_estimate"]["liminf_est"] > 1


@pytest.mark.parametrize("argv, code", [
    (["net", "dinf-xt"], 4),
    (["alpha", "missing.json", "--levels", "1..3"], 2),
    (["alpha", "z-1", "--levels", "3-9"], 2),
    (["alpha", "z-1"], 2),
    (["ns", "z-1", "--group", "Q8"], 2),
    (["alpha", "z-1", "--levels", "3..4", "--tol-rank", "2"], 2),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_bad_json(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{")
    assert run(capsys, "ns", str(path))[0] == 2
    path.write_text(json.dumps({"rows": 1, "cols": 1, "entries": [[[[0, 2, 4, 0, 1]]]]}))
    assert run(capsys, "ns", str(path))[0] == 2


def test_precision_failure_exit_code(monkeypatch, capsys):
    from nsapprox import cli
    from nsapprox.errors import PrecisionError

    def boom(*args, **kw):
        raise PrecisionError("forced")

    monkeypatch.setattr(cli, "ns_number_matrix", boom)
    assert run(capsys, "ns", "z-1")[0] == 3

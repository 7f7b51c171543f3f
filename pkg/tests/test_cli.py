"""Command-line surface: outputs, formats, exit codes."""

import json

from qbern.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_beta_symbolic(capsys):
    code, out, _ = run(capsys, "beta", "--n", "1", "--backend", "symbolic")
    assert code == 0
    payload = json.loads(out)
    assert payload["value"] == {"num": ["-1"], "den": ["1", "1"]}
    assert payload["rendered"] == "(-1)/(1 + q)"


def test_beta_zero(capsys):
    code, out, _ = run(capsys, "beta", "--n", "0")
    assert code == 0
    assert json.loads(out)["value"] == {"num": ["1"], "den": ["1"]}


def test_beta_padic_payload(capsys):
    code, out, _ = run(capsys, "beta", "--n", "2", "--backend", "padic", "--p", "3")
    assert code == 0
    payload = json.loads(out)
    assert payload["backend"] == "padic"
    assert payload["certified_precision"] > 0
    assert payload["value"]["p"] == 3


def test_beta_precision_exhausted_exit(capsys):
    code, _, err = run(capsys, "beta", "--n", "5", "--backend", "padic",
                       "--p", "3", "--q", "1+p", "--precision", "4")
    assert code == 2
    assert "step" in err


def test_xi_command(capsys):
    code, out, _ = run(capsys, "xi", "--n", "2")
    assert code == 0
    assert json.loads(out)["value"] == {"num": ["-1"], "den": ["-1", "0", "1"]}


def test_beta_poly(capsys):
    code, out, _ = run(capsys, "beta-poly", "--n", "2", "--x", "0")
    assert code == 0
    assert json.loads(out)["value"] == {"num": ["0", "1"], "den": ["1", "2", "2", "1"]}


def test_bernstein_command(capsys):
    code, out, _ = run(capsys, "bernstein", "--k", "0", "--n", "3", "--x", "0")
    assert code == 0
    assert json.loads(out)["value"] == {"num": ["1"], "den": ["1"]}


def test_integrate_constant(capsys):
    code, out, _ = run(capsys, "integrate", "--backend", "padic", "--p", "3",
                       "--integrand", '{"type":"bracket_power","offset":0,"power":0}')
    assert code == 0
    payload = json.loads(out)
    assert payload["level"] == 1
    assert payload["value"]["digits"][0] == 1


def test_integrate_bracket_power(capsys):
    code, out, _ = run(capsys, "integrate", "--backend", "padic", "--p", "3",
                       "--target-valuation", "6",
                       "--integrand", '{"type":"bracket_power","offset":0,"power":2}')
    assert code == 0
    assert json.loads(out)["stabilization_valuation"] >= 6


def test_integrate_budget_exit(capsys):
    code, _, err = run(capsys, "integrate", "--backend", "padic", "--p", "3",
                       "--level-cap", "3", "--target-valuation", "6",
                       "--integrand", '{"type":"custom_hash","seed":7}')
    assert code == 3
    assert "level cap" in err


def test_integrate_requires_padic(capsys):
    code, _, err = run(capsys, "integrate",
                       "--integrand", '{"type":"bracket_power","offset":0,"power":1}')
    assert code == 2


def test_verify_small_grid(capsys, tmp_path):
    grid = {
        "backend": "symbolic",
        "identities": [
            {"identity": "PROP2", "params": {"n": 2}},
            {"identity": "PROP2", "params": {"n": 1}},
            {"identity": "THM3", "params": {"n": 4}},
        ],
    }
    path = tmp_path / "grid.json"
    path.write_text(json.dumps(grid))
    code, out, _ = run(capsys, "verify", "--grid", str(path))
    assert code == 0
    lines = out.strip().split("\n")
    assert len(lines) == 4  # three reports plus the summary
    reports = [json.loads(line) for line in lines[:-1]]
    assert reports[1]["domain_ok"] is False
    summary = json.loads(lines[-1])["summary"]
    assert summary["failed"] == 0
    assert summary["skipped_out_of_domain"] == 1


def test_verify_malformed_grid(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _, err = run(capsys, "verify", "--grid", str(path))
    assert code == 2


def test_verify_byte_identical(capsys, tmp_path):
    grid = {"backend": "symbolic",
            "identities": [{"identity": "EQ7", "params": {"n": 3}}]}
    path = tmp_path / "grid.json"
    path.write_text(json.dumps(grid))
    _, first, _ = run(capsys, "verify", "--grid", str(path))
    _, second, _ = run(capsys, "verify", "--grid", str(path))
    assert first == second


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest", "--p", "3")
    assert code == 0
    assert '"summary"' in out


def test_selftest_corrupt(capsys):
    code, out, _ = run(capsys, "selftest", "--p", "3", "--corrupt")
    assert code == 1
    lines = out.strip().split("\n")
    summary = json.loads(lines[-1])["summary"]
    assert summary["failed"] >= 1


def test_table_beta_csv(capsys):
    code, out, _ = run(capsys, "table", "--kind", "beta", "--range", "0:2",
                       "--format", "csv", "--at-one")
    assert code == 0
    assert out.splitlines() == [
        "n,backend,value,value_at_q1",
        "0,symbolic,(1)/(1),1",
        "1,symbolic,(-1)/(1 + q),-1/2",
        "2,symbolic,(q)/(1 + 2*q + 2*q^2 + q^3),1/6",
    ]


def test_table_empty_range(capsys):
    code, out, _ = run(capsys, "table", "--kind", "beta", "--range", "3:2",
                       "--format", "csv")
    assert code == 0
    assert out.strip() == "n,backend,value"


def test_table_bernstein_json(capsys):
    code, out, _ = run(capsys, "table", "--kind", "bernstein", "--range", "1:2",
                       "--x", "2")
    assert code == 0
    payload = json.loads(out)
    assert len(payload["rows"]) == 2 + 3


def test_table_integral(capsys):
    code, out, _ = run(capsys, "table", "--kind", "integral", "--range", "0:4",
                       "--k", "1")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert [r["n"] for r in rows] == [1, 2, 3, 4]


def test_table_bad_range(capsys):
    code, _, err = run(capsys, "table", "--kind", "beta", "--range", "zz")
    assert code == 2


def test_out_file(capsys, tmp_path):
    target = tmp_path / "beta.json"
    code, out, _ = run(capsys, "beta", "--n", "1", "--out", str(target))
    assert code == 0
    assert out == ""
    assert json.loads(target.read_text())["rendered"] == "(-1)/(1 + q)"


def test_symbolic_rejects_q_literal(capsys):
    code, _, err = run(capsys, "beta", "--n", "1", "--q", "3/2")
    assert code == 2

"""End-to-end runs of ``courantkit <command> <model-file>`` over the bundled models."""

import json

import pytest
import sympy

from courantkit.cli import main
from courantkit.model import load_model
from courantkit.runner import EXIT_FAIL, EXIT_INPUT, EXIT_PASS, RunFlags, run_command
from courantkit.scalars import ScalarRing

from conftest import MODELS_DIR


def model(name: str) -> str:
    return str(MODELS_DIR / f"{name}.model")


def porcelain(capsys, *argv) -> dict:
    code = main([*argv, "--porcelain"])
    payload = json.loads(capsys.readouterr().out)
    assert payload['exit_code'] == code
    return payload


def clause_status(payload: dict, check: str, clause: str) -> str:
    for report in payload['reports']:
        if report['check'] == check:
            for c in report['clauses']:
                if c['name'] == clause:
                    return c['status']
    raise KeyError((check, clause))


class TestExitCodes:
    @pytest.mark.parametrize("argv", [
        ["validate", model("plane")],
        ["courant-check", model("plane")],
        ["mc-residual", model("plane"), "--graph-of", "H"],
        ["dirac-check", model("plane"), "--h", "tangent"],
        ["dirac-check", model("plane"), "--graph-of", "H"],
        ["hamiltonian", model("plane"), "--pi", "sym", "--omega", "omega"],
        ["morphism-check", model("algebra_pairs")],
        ["bialgebroid-check", model("algebra_pairs"), "--double", "g-pair"],
        ["null-dirac", model("null_dirac_r4"), "--h", "d1"],
        ["dual-pair", model("null_dirac_r4"), "--pi", "pi", "--h", "d1"],
        ["reduce-check", model("null_dirac_r4"), "--pi", "pi", "--h", "d1"],
    ], ids=lambda argv: " ".join(a.rsplit("/", 1)[-1] for a in argv))
    def test_passing(self, argv, capsys):
        assert main(argv) == EXIT_PASS
        assert "🏁 PASS" in capsys.readouterr().out

    @pytest.mark.parametrize("argv", [
        ["bialgebroid-check", model("algebra_pairs"), "--double", "heis-pair"],
        ["null-dirac", model("null_dirac_r4"), "--h", "d1", "d3x"],
        ["reduce-check", model("null_dirac_r4"), "--pi", "pi", "--h", "d1", "d3x"],
    ])
    def test_failing(self, argv, capsys):
        assert main(argv) == EXIT_FAIL
        assert "🏁 FAIL" in capsys.readouterr().out

    def test_missing_file(self, tmp_path, capsys):
        assert main(["validate", str(tmp_path / "absent.model")]) == EXIT_INPUT
        assert "error" in capsys.readouterr().out

    def test_syntax_error(self, tmp_path, capsys):
        path = tmp_path / "bad.model"
        path.write_text('[base]\ncoordinates = ["x"\n')
        payload = porcelain(capsys, "validate", str(path))
        assert payload['exit_code'] == EXIT_INPUT
        assert "line 2" in payload['error']

    def test_unknown_double(self, capsys):
        assert main(["courant-check", model("plane"), "--double", "nope"]) == EXIT_INPUT

    def test_ambiguous_double(self, capsys):
        assert main(["courant-check", model("algebra_pairs")]) == EXIT_INPUT

    def test_bad_workers(self, capsys):
        assert main(["validate", model("plane"), "--workers", "0"]) == EXIT_INPUT


class TestReports:
    def test_anomaly_on_heisenberg_pair(self, capsys):
        payload = porcelain(capsys, "anomaly", model("algebra_pairs"), "--double", "heis-pair")
        assert payload['exit_code'] == EXIT_FAIL
        assert clause_status(payload, "anomaly", "residual") == "pass"
        assert clause_status(payload, "anomaly", "compatibility") == "fail"
        assert payload['outputs']['triples'] == 20

    def test_compose_plus_outputs(self, capsys):
        payload = porcelain(capsys, "compose", model("compose_r4"), "--u", "U", "--v", "V")
        assert payload['exit_code'] == EXIT_PASS
        ring = ScalarRing(("x1", "x2", "x3", "x4"))
        x1 = ring.symbols[0]
        value = ring.parse(payload['outputs']['W[1,2]'])
        assert sympy.simplify(value - x1 / (x1 + 1)) == 0
        assert clause_status(payload, "compose-plus", "inverse-identity") == "pass"

    def test_null_dirac_witnesses(self, capsys):
        payload = porcelain(capsys, "null-dirac", model("null_dirac_r4"), "--h", "d1", "d3x")
        (report,) = payload['reports']
        clauses = {c['name']: c for c in report['clauses']}
        assert clauses["h closure"]['residuals'] == [{'witness': "[S1,S2]", 'value': "[4]: 1"}]
        assert clauses["h^perp closure"]['residuals'] == [{'witness': "[S1,S2]", 'value': "[3]: 1"}]

    def test_dual_pair_output(self, capsys):
        payload = porcelain(capsys, "dual-pair", model("null_dirac_r4"), "--pi", "pi", "--h", "d1")
        assert len(payload['outputs']['Dbar']) == 3

    def test_hamiltonian_nijenhuis(self, capsys):
        payload = porcelain(capsys, "hamiltonian", model("plane"), "--pi", "sym", "--omega", "omega")
        assert payload['outputs']['induced'] == "0"
        assert payload['outputs']['nijenhuis']['compatible'] is True

    def test_hamiltonian_induced_algebroid(self, capsys):
        payload = porcelain(capsys, "hamiltonian", model("plane"), "--graph-of", "H")
        assert payload['exit_code'] == EXIT_PASS
        assert payload['outputs']['induced_anchor'] == ["(0, 1)", "(-1, 0)"]

    def test_text_report_layout(self, capsys):
        main(["morphism-check", model("algebra_pairs")])
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("$ courantkit morphism-check")
        assert lines[1] == "✅ morphism-to-algebra [id]"
        assert lines[-1] == "🏁 PASS: 1/1 clauses passed (exit 0)"

    def test_deterministic(self, capsys):
        argv = ["null-dirac", model("null_dirac_r4"), "--h", "d1", "d3x", "--porcelain"]
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        assert capsys.readouterr().out == first


class TestRunCommand:
    def test_unknown_command(self):
        doc = load_model(model("plane"))
        out = run_command(doc, "frobnicate")
        assert out.exit_code == EXIT_INPUT
        assert out.status == "error"

    def test_identities_flag(self):
        doc = load_model(model("plane"))
        out = run_command(doc, "courant-check", RunFlags(identities=True))
        assert [r.check for r in out.reports] == ["courant-axioms", "identities"]
        assert out.exit_code == EXIT_PASS

    def test_unknown_tensor(self):
        doc = load_model(model("algebra_pairs"))
        out = run_command(doc, "mc-residual", RunFlags(double="heis-pair", graph_of="missing"))
        assert out.exit_code == EXIT_INPUT

    def test_summary(self):
        doc = load_model(model("plane"))
        summary = run_command(doc, "validate").get_summary()
        assert summary['status'] == "pass"
        assert summary['clauses'] == summary['passed']

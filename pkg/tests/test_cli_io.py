import json
from pathlib import Path

import numpy as np
import pytest

from curv4 import io
from curv4.cli import main
from curv4.core import biortho_spectrum
from curv4.errors import ValidationError
from curv4.models import MODEL_ARITY, ModelSpec, make_operator
from curv4.numerics import RngStream
from curv4.models import random_bianchi

DATA = Path(__file__).parent / "data"


class TestTensorFiles:
    @pytest.mark.parametrize("name", sorted(MODEL_ARITY))
    def test_save_load_round_trip_is_bitwise(self, tmp_path, name):
        op = make_operator(ModelSpec(name, seed=4))
        path = tmp_path / f"{name}.json"
        io.save_tensor(path, op, meta={"model": name})
        back = io.load(path)
        assert np.array_equal(back.matrix, op.matrix)
        assert back.bianchi == op.bianchi

    def test_components_file(self, tmp_path):
        path = tmp_path / "t.json"
        path.write_text(json.dumps({
            "format": "curv4-v1",
            "components": [[1, 2, 1, 2, 1.0]],
        }))
        op = io.load(path, project_bianchi=True)
        assert op.matrix[0, 0] == 1.0

    def test_missing_format_key(self, tmp_path):
        path = tmp_path / "t.json"
        path.write_text(json.dumps({"matrix": np.eye(6).tolist()}))
        with pytest.raises(ValidationError, match="format"):
            io.load(path)

    def test_both_matrix_and_components(self, tmp_path):
        path = tmp_path / "t.json"
        path.write_text(json.dumps({
            "format": "curv4-v1",
            "matrix": np.eye(6).tolist(),
            "components": [[1, 2, 1, 2, 1.0]],
        }))
        with pytest.raises(ValidationError, match="exactly one"):
            io.load(path)

    def test_wrong_convention_rejected(self, tmp_path):
        path = tmp_path / "t.json"
        doc = io.tensor_to_dict(make_operator(ModelSpec("sphere")))
        doc["convention"] = dict(doc["convention"], star="identity")
        path.write_text(json.dumps(doc))
        with pytest.raises(ValidationError, match="convention"):
            io.load(path)

    def test_bad_json(self, tmp_path):
        path = tmp_path / "t.json"
        path.write_text("{not json")
        with pytest.raises(ValidationError, match="JSON"):
            io.load(path)

    def test_wrong_shape(self, tmp_path):
        path = tmp_path / "t.json"
        path.write_text(json.dumps({"format": "curv4-v1", "matrix": [[1.0, 0.0], [0.0, 1.0]]}))
        with pytest.raises(ValidationError, match="6x6"):
            io.load(path)

    def test_asymmetric_matrix_names_worst_pair(self, tmp_path):
        m = np.eye(6)
        m[0, 5] = 0.25  # not mirrored
        path = tmp_path / "t.json"
        path.write_text(json.dumps({"format": "curv4-v1", "matrix": m.tolist()}))
        with pytest.raises(ValidationError, match=r"\(0,5\)"):
            io.load(path)

    def test_bianchi_violation_requires_flag(self, tmp_path):
        m = np.eye(6)
        m[0, 5] = m[5, 0] = 0.5
        path = tmp_path / "t.json"
        path.write_text(json.dumps({"format": "curv4-v1", "matrix": m.tolist()}))
        with pytest.raises(ValidationError, match="Bianchi"):
            io.load(path)
        op = io.load(path, project_bianchi=True)
        assert abs(op.bianchi) <= 1e-12


class TestCliEmitAnalyze:
    def test_emit_then_analyze_product(self, tmp_path, capsys):
        tensor = tmp_path / "product.json"
        assert main(["emit", "--model", "product:1,1", "--out", str(tensor)]) == 0
        report = tmp_path / "report.json"
        assert main(["analyze", str(tensor), "--json", "--out", str(report)]) == 0
        doc = json.loads(report.read_text())
        assert doc["biortho_spectrum"] == {"k1": 0.0, "k2": 0.0, "k3": 1.0}
        assert not doc["hypothesis_A"]["holds"]
        assert not doc["hypothesis_B"]["holds"]

    def test_emit_to_stdout(self, capsys):
        assert main(["emit", "--model", "sphere:2"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["format"] == "curv4-v1"
        assert doc["matrix"][0][0] == 0.25

    def test_emit_random_is_seed_reproducible(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        main(["emit", "--model", "random_bianchi:1", "--seed", "5", "--out", str(a)])
        main(["emit", "--model", "random_bianchi:1", "--seed", "5", "--out", str(b)])
        assert a.read_text() == b.read_text()

    def test_analyze_model_cp2_with_oracle(self, capsys):
        code = main(["analyze", "--model", "cp2", "--run-oracle", "--json",
                     "--samples", "4000", "--refine", "80"])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["hypothesis_A"]["margin"] == 0.0
        assert doc["nnic"]["margin_plus"] == pytest.approx(0.0, abs=1e-12)
        assert doc["nnic"]["margin_minus"] == pytest.approx(4.0, abs=1e-12)
        assert abs(doc["iso_min"]["value"]) <= 1e-4

    def test_text_and_json_share_values(self, capsys):
        main(["analyze", "--model", "r_times_s3:1", "--json"])
        doc = json.loads(capsys.readouterr().out)
        main(["analyze", "--model", "r_times_s3:1"])
        text = capsys.readouterr().out
        for value in (doc["s"], doc["biortho_spectrum"]["k1"], doc["hypothesis_A"]["margin"]):
            assert repr(value) in text

    def test_analyze_report_roundtrip(self, tmp_path):
        out = tmp_path / "r.json"
        main(["analyze", "--model", "sphere:1", "--json", "--out", str(out)])
        doc = io.load_report(out)
        assert io.dumps_document(doc) == out.read_text()

    def test_analyze_requires_exactly_one_source(self, capsys):
        assert main(["analyze"]) == 1
        assert main(["analyze", "x.json", "--model", "sphere"]) == 1

    def test_unknown_model_is_input_error(self, capsys):
        assert main(["emit", "--model", "banana", "--out", "/tmp/x.json"]) == 1
        assert "unknown model" in capsys.readouterr().err

    def test_unwritable_output_is_input_error(self, tmp_path, capsys):
        target = tmp_path / "missing_dir" / "x.json"
        assert main(["emit", "--model", "sphere", "--out", str(target)]) == 1

    def test_missing_input_file(self, tmp_path, capsys):
        assert main(["analyze", str(tmp_path / "nope.json")]) == 1

    def test_bad_flag_is_input_error(self, capsys):
        assert main(["analyze", "--model", "sphere", "--definitely-not-a-flag"]) == 1

    def test_project_bianchi_flag(self, tmp_path):
        m = np.eye(6)
        m[0, 5] = m[5, 0] = 0.5
        tensor = tmp_path / "t.json"
        tensor.write_text(json.dumps({"format": "curv4-v1", "matrix": m.tolist()}))
        assert main(["analyze", str(tensor)]) == 1
        assert main(["analyze", str(tensor), "--project-bianchi"]) == 0


class TestCliVerify:
    ARGS = ["verify", "--trials", "4", "--seed", "11", "--samples", "3000",
            "--refine", "120", "--json"]

    def test_small_verify_passes(self, capsys):
        assert main(self.ARGS) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["passed"] is True
        assert doc["summary"]["oracle_pass"] == 4
        assert len(doc["records"]) == 4

    def test_byte_identical_across_runs_and_workers(self, capsys):
        assert main(self.ARGS + ["--workers", "1"]) == 0
        first = capsys.readouterr().out
        assert main(self.ARGS + ["--workers", "3"]) == 0
        second = capsys.readouterr().out
        assert first == second

    def test_text_mode_summarizes(self, capsys):
        args = [a for a in self.ARGS if a != "--json"]
        assert main(args) == 0
        out = capsys.readouterr().out
        assert "4 trials" in out and "result: PASS" in out

    def test_starved_oracle_fails_with_exit_2(self, capsys):
        code = main(["verify", "--trials", "2", "--seed", "11",
                     "--samples", "8", "--refine", "0"])
        assert code == 2
        assert "result: FAIL" in capsys.readouterr().out


class TestCliScan:
    def test_scan_rows_and_summary(self, capsys):
        assert main(["scan", "--model", "random_bianchi:1", "--trials", "20",
                     "--seed", "3"]) == 0
        lines = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
        header, rows, summary = lines[0], lines[1:-1], lines[-1]
        assert header["format"] == "curv4-scan-v1"
        assert len(rows) == 20
        assert {"s", "k1", "k2", "k3", "w3_plus", "w3_minus",
                "hypothesis_A", "hypothesis_B", "nnic"} <= set(rows[0])
        assert summary["type"] == "summary"
        assert summary["frac_nnic"] == pytest.approx(
            sum(r["nnic"] for r in rows) / len(rows))

    def test_scan_rows_match_direct_computation(self, capsys):
        assert main(["scan", "--model", "random_bianchi:1", "--trials", "3",
                     "--seed", "9"]) == 0
        rows = [json.loads(line) for line in capsys.readouterr().out.splitlines()][1:-1]
        from curv4.verify import trial_operator

        for row in rows:
            sp = biortho_spectrum(trial_operator(9, row["trial"]))
            assert row["k1"] == sp.k1 and row["k3"] == sp.k3

    def test_scan_deterministic_across_workers(self, tmp_path):
        a, b = tmp_path / "a.ndjson", tmp_path / "b.ndjson"
        main(["scan", "--trials", "16", "--seed", "2", "--workers", "1", "--out", str(a)])
        main(["scan", "--trials", "16", "--seed", "2", "--workers", "4", "--out", str(b)])
        assert a.read_text() == b.read_text()

    def test_scan_deterministic_model_repeats_rows(self, capsys):
        assert main(["scan", "--model", "cp2", "--trials", "3", "--seed", "1"]) == 0
        rows = [json.loads(line) for line in capsys.readouterr().out.splitlines()][1:-1]
        assert all(row["k3"] == 4.0 for row in rows)


class TestReportSerialization:
    def test_verification_document_shape(self):
        from curv4.oracle import OracleConfig
        from curv4.verify import run_verification

        rep = run_verification(trials=2, seed=1,
                               oracle=OracleConfig(samples=2000, refine_iters=40))
        doc = io.verification_to_dict(rep)
        assert doc["format"] == "curv4-verify-v1"
        assert doc["config"]["trials"] == 2
        assert "workers" not in doc["config"]

    def test_extremum_witness_serialization(self):
        from curv4.analyzer import AnalyzeConfig, analyze
        from curv4.oracle import OracleConfig

        cfg = AnalyzeConfig(run_oracle=True,
                            oracle=OracleConfig(samples=1500, refine_iters=30, seed=2))
        doc = io.report_to_dict(analyze(random_bianchi(RngStream(8)), cfg))
        witness = doc["sectional_extrema"]["min"]["witness"]
        assert witness["type"] == "plane"
        u = np.array(witness["u"])
        assert abs(np.linalg.norm(u) - 1.0) <= 1e-9
        assert doc["iso_min"]["witness"]["type"] == "frame"

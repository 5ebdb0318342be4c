"""Tensor and report file formats (JSON, self-describing, reproducible).

All floats are serialized with Python's shortest-round-trip repr, so files
round-trip bit-for-bit and re-running a command with the echoed configuration
reproduces identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import __version__
from .analyzer import PinchingReport
from .core import BASIS_LABELS, CurvatureOperator, Plane, from_components, from_matrix
from .errors import ValidationError
from .oracle import ExtremumResult, OracleConfig
from .verify import ScanReport, VerificationReport

TENSOR_FORMAT = "curv4-v1"
REPORT_FORMAT = "curv4-report-v1"
SCAN_FORMAT = "curv4-scan-v1"
VERIFY_FORMAT = "curv4-verify-v1"

CONVENTION = {
    "basis": list(BASIS_LABELS),
    "sign": "K(ei,ej)=R(ij,ij)",
    "star": "antidiagonal signed",
}


def dumps_document(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def dumps_record(rec: dict) -> str:
    return json.dumps(rec, sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# tensor files


def tensor_to_dict(op: CurvatureOperator, meta: dict | None = None) -> dict:
    doc = {
        "format": TENSOR_FORMAT,
        "convention": CONVENTION,
        "matrix": [[float(x) for x in row] for row in op.matrix],
    }
    if meta:
        doc["meta"] = meta
    return doc


def save_tensor(path, op: CurvatureOperator, meta: dict | None = None) -> None:
    Path(path).write_text(dumps_document(tensor_to_dict(op, meta)))


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ValidationError(message)


def tensor_from_dict(doc: dict, project_bianchi: bool = False,
                     tolerance: float = 1e-9) -> CurvatureOperator:
    _require(isinstance(doc, dict), "tensor file must contain a JSON object")
    _require(doc.get("format") == TENSOR_FORMAT,
             f"unsupported tensor format {doc.get('format')!r}; expected {TENSOR_FORMAT!r}")
    convention = doc.get("convention")
    if convention is not None:
        _require(convention == CONVENTION,
                 "tensor file declares a different basis/sign/star convention")
    has_matrix = "matrix" in doc
    has_components = "components" in doc
    _require(has_matrix != has_components,
             "tensor file must contain exactly one of 'matrix' or 'components'")
    if has_matrix:
        matrix = np.asarray(doc["matrix"], dtype=float)
        _require(matrix.shape == (6, 6), f"matrix must be 6x6, got shape {matrix.shape}")
        return from_matrix(matrix, project_bianchi=project_bianchi, tolerance=tolerance)
    components = doc["components"]
    _require(isinstance(components, list) and
             all(isinstance(c, (list, tuple)) and len(c) == 5 for c in components),
             "components must be a list of [i, j, k, l, value] entries")
    return from_components(components, project_bianchi=project_bianchi, tolerance=tolerance)


def load(path, project_bianchi: bool = False, tolerance: float = 1e-9) -> CurvatureOperator:
    """Load and validate a tensor file."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON: {exc}") from None
    return tensor_from_dict(doc, project_bianchi=project_bianchi, tolerance=tolerance)


# ---------------------------------------------------------------------------
# report serialization


def _extremum_to_dict(res: ExtremumResult) -> dict:
    witness = res.witness
    if isinstance(witness, Plane):
        wit = {"type": "plane",
               "u": [float(x) for x in witness.u],
               "v": [float(x) for x in witness.v]}
    else:
        wit = {"type": "frame",
               "rows": [[float(x) for x in row] for row in np.asarray(witness)]}
    return {"value": res.value, "witness": wit,
            "samples_used": res.samples_used, "converged": res.converged}


def _oracle_to_dict(cfg: OracleConfig, include_seed: bool = True) -> dict:
    doc = {"samples": cfg.samples, "refine_iters": cfg.refine_iters,
           "restarts": cfg.restarts, "step_init": cfg.step_init,
           "step_decay": cfg.step_decay}
    if include_seed:
        doc["seed"] = cfg.seed
    return doc


def report_to_dict(report: PinchingReport) -> dict:
    doc = {
        "format": REPORT_FORMAT,
        "tool_version": __version__,
        "config": {
            "source": report.config.source,
            "tolerance": report.config.tolerance,
            "project_bianchi": report.config.project_bianchi,
            "run_oracle": report.config.run_oracle,
            "oracle": _oracle_to_dict(report.config.oracle),
        },
        "s": report.s,
        "bianchi_residual": report.bianchi_residual,
        "weyl_plus": list(report.weyl_plus),
        "weyl_minus": list(report.weyl_minus),
        "biortho_spectrum": {"k1": report.spectrum.k1, "k2": report.spectrum.k2,
                             "k3": report.spectrum.k3},
        "hypothesis_A": {"holds": report.hypothesis_a.holds,
                         "margin": report.hypothesis_a.margin},
        "hypothesis_B": {"holds": report.hypothesis_b.holds,
                         "margin": report.hypothesis_b.margin},
        "nnic": {"holds": report.nnic.holds,
                 "margin_plus": report.nnic.margin_plus,
                 "margin_minus": report.nnic.margin_minus},
        "scalar_positive": report.scalar_positive,
        "chain": {
            "applicable": report.chain.applicable,
            "reason": report.chain.reason,
            "all_satisfied": report.chain.all_satisfied,
            "steps": [
                {"label": s.label, "lhs": s.lhs, "relation": s.relation,
                 "rhs": s.rhs, "satisfied": s.satisfied, "slack": s.slack}
                for s in report.chain.steps
            ],
        },
        "classification_hints": list(report.hints),
        "sectional_extrema": None,
        "conjecture_check": None,
        "iso_min": None,
        "footer": report.footer,
    }
    if report.sectional_extrema is not None:
        lo, hi = report.sectional_extrema
        doc["sectional_extrema"] = {"min": _extremum_to_dict(lo),
                                    "max": _extremum_to_dict(hi)}
    if report.conjecture is not None:
        doc["conjecture_check"] = {"margin": report.conjecture.margin,
                             "holds": report.conjecture.holds,
                             "boundary": report.conjecture.boundary}
    if report.iso_min is not None:
        doc["iso_min"] = _extremum_to_dict(report.iso_min)
    return doc


def load_report(path) -> dict:
    doc = json.loads(Path(path).read_text())
    _require(isinstance(doc, dict) and doc.get("format") == REPORT_FORMAT,
             f"{path}: not a {REPORT_FORMAT} document")
    return doc


# ---------------------------------------------------------------------------
# verification and scan serialization


def verification_to_dict(report: VerificationReport) -> dict:
    return {
        "format": VERIFY_FORMAT,
        "tool_version": __version__,
        "config": {
            "trials": report.trials,
            "seed": report.seed,
            "scale": report.scale,
            "oracle": _oracle_to_dict(report.oracle, include_seed=False),
        },
        "records": [
            {"trial": rec.index, "s": rec.s,
             "k1": rec.k1, "k2": rec.k2, "k3": rec.k3,
             "oracle_min": rec.oracle_min, "oracle_max": rec.oracle_max,
             "identity_ok": rec.identity_ok,
             "oracle_min_ok": rec.oracle_min_ok, "oracle_max_ok": rec.oracle_max_ok,
             "sound_ok": rec.sound_ok,
             "chain_applicable": rec.chain_applicable,
             "nnic_ok": rec.nnic_ok, "chain_ok": rec.chain_ok,
             "failures": list(rec.failures)}
            for rec in report.records
        ],
        "summary": {
            "trials": report.trials,
            "failures": report.failure_count,
            "oracle_pass": sum(r.oracle_min_ok and r.oracle_max_ok and r.sound_ok
                               for r in report.records),
            "identity_pass": sum(r.identity_ok for r in report.records),
            "chain_applicable": sum(r.chain_applicable for r in report.records),
            "chain_pass": sum(r.nnic_ok and r.chain_ok
                              for r in report.records if r.chain_applicable),
        },
        "passed": report.passed,
    }


def scan_to_lines(report: ScanReport) -> list[str]:
    """Line-delimited records: header, one row per tensor, then a summary."""
    lines = [dumps_record({"type": "header", "format": SCAN_FORMAT,
                           "tool_version": __version__,
                           "model": report.model, "trials": report.trials,
                           "seed": report.seed})]
    for row in report.rows:
        lines.append(dumps_record({
            "type": "row", "trial": row.index, "s": row.s,
            "k1": row.k1, "k2": row.k2, "k3": row.k3,
            "w3_plus": row.w3_plus, "w3_minus": row.w3_minus,
            "hypothesis_A": row.hypothesis_a, "hypothesis_B": row.hypothesis_b,
            "nnic": row.nnic}))
    lines.append(dumps_record({"type": "summary", **report.summary()}))
    return lines

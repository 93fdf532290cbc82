"""Artifact writers and readers: CSV tables and JSON reports.

All serialization is deterministic: dict keys are sorted, floats go through
repr (shortest round-trip form), and no timestamps or environment data are
recorded, so reruns produce byte-identical files. Readers validate headers
and raise SchemaError naming the first missing column.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass

import numpy as np

from .errors import SchemaError

TRAJECTORY_COLUMNS = ["t", "x", "u"]
CONVERGENCE_COLUMNS = ["h", "dt", "sup_error", "order"]
SCAN_COLUMNS = ["ratio", "verdict", "ladder_floor", "barrier_ok"]


@dataclass
class Artifact:
    """A named payload an experiment wants written under its output dir.

    kind selects the writer: 'trajectory' (times, nodes, values),
    'convergence' (row dicts), 'scan' (row dicts), 'json' (any payload).
    """

    kind: str
    name: str
    payload: object


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_trajectory_csv(path: str, times, nodes, values) -> None:
    """One row per node per stored time slice, columns t, x, u."""
    times = np.asarray(times, dtype=float)
    nodes = np.asarray(nodes, dtype=float)
    values = np.asarray(values, dtype=float)
    if values.shape != (times.size, nodes.size):
        raise ValueError(
            f"values shape {values.shape} does not match "
            f"{times.size} times x {nodes.size} nodes"
        )
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRAJECTORY_COLUMNS)
        for i, t in enumerate(times):
            for j, x in enumerate(nodes):
                writer.writerow([_fmt(t), _fmt(x), _fmt(values[i, j])])


def _validate_header(header: list[str], required: list[str], path: str) -> None:
    for col in required:
        if col not in header:
            raise SchemaError(f"{path}: missing column {col!r} (header {header})")


def read_trajectory_csv(path: str):
    """Inverse of write_trajectory_csv: returns (times, nodes, values)."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty file, no header row")
        _validate_header(list(reader.fieldnames), TRAJECTORY_COLUMNS, path)
        ts, xs, us = [], [], []
        for row in reader:
            ts.append(float(row["t"]))
            xs.append(float(row["x"]))
            us.append(float(row["u"]))
    times = np.unique(ts)
    nodes = np.unique(xs)
    values = np.full((times.size, nodes.size), np.nan)
    ti = np.searchsorted(times, ts)
    xi = np.searchsorted(nodes, xs)
    values[ti, xi] = us
    if np.any(np.isnan(values)):
        raise SchemaError(f"{path}: rows do not fill a complete (t, x) product grid")
    return times, nodes, values


def write_convergence_csv(path: str, rows: list[dict]) -> None:
    """Columns h, dt, sup_error, order; order may be None on rows where the
    three-point difference estimate is not yet defined."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CONVERGENCE_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(row.get(col)) for col in CONVERGENCE_COLUMNS])


def read_convergence_csv(path: str) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty file, no header row")
        _validate_header(list(reader.fieldnames), CONVERGENCE_COLUMNS, path)
        out = []
        for row in reader:
            out.append(
                {
                    "h": float(row["h"]),
                    "dt": float(row["dt"]),
                    "sup_error": float(row["sup_error"]),
                    "order": float(row["order"]) if row["order"] else None,
                }
            )
        return out


def write_scan_csv(path: str, rows: list[dict]) -> None:
    """Columns ratio, verdict, ladder_floor, barrier_ok (one row per ratio)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SCAN_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(row.get(col)) for col in SCAN_COLUMNS])


def read_scan_csv(path: str) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty file, no header row")
        _validate_header(list(reader.fieldnames), SCAN_COLUMNS, path)
        return [
            {
                "ratio": float(row["ratio"]),
                "verdict": row["verdict"],
                "ladder_floor": float(row["ladder_floor"]),
                "barrier_ok": row["barrier_ok"] == "true",
            }
            for row in reader
        ]


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def write_json(path: str, payload) -> None:
    with open(path, "w") as fh:
        json.dump(_jsonable(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def ladder_payload(report, cross_ref: list[str] | None = None) -> dict:
    """JSON view of a LadderReport; cross_ref optionally names certificate
    files written alongside."""
    payload = {
        "eps_sequence": report.eps_sequence,
        "final_sup_norms": report.final_sup_norms,
        "sup_gaps": report.sup_gaps,
        "worst_gap": report.worst_gap,
        "extrapolated_final_sup": report.extrapolated_final_sup,
        "verdict": report.verdict,
        "compat_defects": report.compat_defects,
        "tol_cmp": report.tol_cmp,
        "tol_trivial": report.tol_trivial,
        "nontrivial_floor": report.nontrivial_floor,
        "notes": report.notes,
    }
    if cross_ref is not None:
        payload["certificates"] = list(cross_ref)
    return payload


def certificate_payload(candidate, report) -> dict:
    """JSON view of a certified barrier candidate plus its residual report."""
    params = {
        k: v
        for k, v in vars(candidate).items()
        if isinstance(v, (int, float, str))
    }
    return {
        "family": candidate.family,
        "params": params,
        "window": list(report.window),
        "verdict": report.verdict,
        "margin": report.margin,
        "interior": [report.interior_min, report.interior_max],
        "boundary": [report.boundary_min, report.boundary_max],
        "boundary_gap_0": list(report.boundary_gap_0),
        "boundary_gap_1": list(report.boundary_gap_1),
        "initial_above": report.initial_above,
        "initial_below": report.initial_below,
        "tol": report.tol,
    }


def outcome_payload(outcome) -> dict:
    return {
        "name": outcome.name,
        "parameters": outcome.parameters,
        "checks": [
            {
                "description": c.description,
                "kind": c.kind,
                "measured": _jsonable(c.measured),
                "threshold": c.threshold,
                "passed": bool(c.passed),
            }
            for c in outcome.checks
        ],
        "overall": outcome.overall,
    }


def write_artifacts(out_dir: str, artifacts: list[Artifact]) -> list[str]:
    """Write each artifact under out_dir; returns the relative file names."""
    os.makedirs(out_dir, exist_ok=True)
    names = []
    for art in artifacts:
        path = os.path.join(out_dir, art.name)
        if art.kind == "trajectory":
            times, nodes, values = art.payload
            write_trajectory_csv(path, times, nodes, values)
        elif art.kind == "convergence":
            write_convergence_csv(path, art.payload)
        elif art.kind == "scan":
            write_scan_csv(path, art.payload)
        elif art.kind == "json":
            write_json(path, art.payload)
        else:
            raise ValueError(f"unknown artifact kind {art.kind!r}")
        names.append(art.name)
    return names


def write_outcome(out_dir: str, outcome) -> str:
    """Write an experiment outcome and its artifacts under out_dir; returns
    the outcome.json path."""
    os.makedirs(out_dir, exist_ok=True)
    write_artifacts(out_dir, outcome.artifacts)
    path = os.path.join(out_dir, "outcome.json")
    write_json(path, outcome_payload(outcome))
    return path


def write_error(out_dir: str, exc: BaseException) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "error.json")
    write_json(path, {"error": type(exc).__name__, "message": str(exc)})
    return path

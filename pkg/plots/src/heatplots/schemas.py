"""Readers for the solver's result files.

Everything here parses the documented artifact layouts straight from disk;
nothing imports the solver package, so figures can be rendered anywhere the
result files happen to live. Readers raise SchemaError naming the first
missing column or key.
"""

from __future__ import annotations

import csv
import json
import os

import numpy as np

TRAJECTORY_COLUMNS = ("t", "x", "u")
CONVERGENCE_COLUMNS = ("h", "dt", "sup_error", "order")
SCAN_COLUMNS = ("ratio", "verdict", "ladder_floor", "barrier_ok")
LADDER_KEYS = ("eps_sequence", "final_sup_norms", "extrapolated_final_sup", "verdict")
CERTIFICATE_KEYS = ("family", "params", "verdict", "margin")


class SchemaError(ValueError):
    """An input file is missing, empty, or does not match its layout."""


def _rows(path: str, required: tuple[str, ...]) -> list[dict]:
    if not os.path.exists(path):
        raise SchemaError(f"{path}: no such file")
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty file, no header row")
        for col in required:
            if col not in reader.fieldnames:
                raise SchemaError(
                    f"{path}: missing column {col!r} (header {list(reader.fieldnames)})"
                )
        return list(reader)


def read_trajectory(path: str):
    """Returns (times, nodes, values) with values.shape == (n_times, n_nodes).

    The file must cover a complete (t, x) product grid, one row per point.
    """
    rows = _rows(path, TRAJECTORY_COLUMNS)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    ts = [float(r["t"]) for r in rows]
    xs = [float(r["x"]) for r in rows]
    us = [float(r["u"]) for r in rows]
    times = np.unique(ts)
    nodes = np.unique(xs)
    values = np.full((times.size, nodes.size), np.nan)
    values[np.searchsorted(times, ts), np.searchsorted(nodes, xs)] = us
    if np.any(np.isnan(values)):
        raise SchemaError(f"{path}: rows do not fill a complete (t, x) product grid")
    return times, nodes, values


def read_convergence(path: str) -> list[dict]:
    rows = _rows(path, CONVERGENCE_COLUMNS)
    return [
        {
            "h": float(r["h"]),
            "dt": float(r["dt"]),
            "sup_error": float(r["sup_error"]),
            "order": float(r["order"]) if r["order"] else None,
        }
        for r in rows
    ]


def read_scan(path: str) -> list[dict]:
    rows = _rows(path, SCAN_COLUMNS)
    return [
        {
            "ratio": float(r["ratio"]),
            "verdict": r["verdict"],
            "ladder_floor": float(r["ladder_floor"]),
            "barrier_ok": r["barrier_ok"] == "true",
        }
        for r in rows
    ]


def _load_json(path: str, required: tuple[str, ...]) -> dict:
    if not os.path.exists(path):
        raise SchemaError(f"{path}: no such file")
    with open(path) as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(payload, dict):
        raise SchemaError(f"{path}: expected a JSON object")
    for key in required:
        if key not in payload:
            raise SchemaError(f"{path}: missing key {key!r}")
    return payload


def load_ladder(path: str) -> dict:
    return _load_json(path, LADDER_KEYS)


def load_certificate(path: str) -> dict:
    return _load_json(path, CERTIFICATE_KEYS)

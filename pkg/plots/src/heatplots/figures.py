"""Figure builders for the five supported kinds.

Figures are assembled through the object API (no pyplot state), so parallel
rendering into distinct output files is safe. Arrays are handed to matplotlib
exactly as read from the input files; log scaling and the like happen on the
axes, never on the data.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import matplotlib
import numpy as np
from matplotlib.figure import Figure

from .schemas import (
    SchemaError,
    load_ladder,
    read_convergence,
    read_scan,
    read_trajectory,
)

# fixed hash salt so SVG element ids do not depend on object addresses
matplotlib.rcParams["svg.hashsalt"] = "heatplots"

KINDS = ("snapshot", "ladder", "overlay", "scan", "convergence")

VERDICT_COLORS = {
    "trivial": "tab:blue",
    "inconclusive": "tab:gray",
    "nontrivial": "tab:red",
}


@dataclass
class FigureRequest:
    kind: str
    inputs: list[str]
    output: str
    options: dict = field(default_factory=dict)


def _stem(path: str) -> str:
    return os.path.splitext(os.path.basename(path))[0]


def _snapshot(ax, request: FigureRequest) -> None:
    times, nodes, values = read_trajectory(request.inputs[0])
    max_curves = int(request.options.get("max_curves", 8))
    if max_curves < 1:
        raise ValueError(f"max_curves must be >= 1, got {max_curves}")
    picks = np.unique(np.linspace(0, times.size - 1, max_curves).round().astype(int))
    for i in picks:
        ax.plot(nodes, values[i], label=f"t = {times[i]:g}")
    ax.set_xlabel("x")
    ax.set_ylabel("u")
    ax.set_title(_stem(request.inputs[0]))
    ax.legend(fontsize="small")


def _nearest_slice(path: str, target: float | None):
    times, nodes, values = read_trajectory(path)
    idx = times.size - 1 if target is None else int(np.argmin(np.abs(times - target)))
    return float(times[idx]), nodes, values[idx]


def _overlay(ax, request: FigureRequest) -> None:
    target = request.options.get("time")
    t_sol, nodes, profile = _nearest_slice(request.inputs[0], target)
    ax.plot(nodes, profile, lw=2, label=f"solution, t = {t_sol:g}")
    for path in request.inputs[1:]:
        t_bar, xs, vals = _nearest_slice(path, target if target is not None else t_sol)
        ax.plot(xs, vals, ls="--", label=f"{_stem(path)}, t = {t_bar:g}")
    ax.set_xlabel("x")
    ax.set_ylabel("u")
    ax.set_title("solution vs certified barriers")
    ax.legend(fontsize="small")


def _ladder(ax, request: FigureRequest) -> None:
    payload = load_ladder(request.inputs[0])
    eps = np.asarray(payload["eps_sequence"], dtype=float)
    sups = np.asarray(payload["final_sup_norms"], dtype=float)
    ax.plot(eps, sups, "o-", label="final sup norm")
    limit = float(payload["extrapolated_final_sup"])
    if limit > 0.0:
        ax.axhline(limit, ls=":", color="black", label=f"extrapolated {limit:.3e}")
    ax.set_xscale("log", base=2)
    if np.all(sups > 0.0):
        ax.set_yscale("log")
    # rungs shrink eps, so read the ladder left to right toward the limit
    ax.invert_xaxis()
    ax.set_xlabel("eps")
    ax.set_ylabel("sup |u| at the horizon")
    ax.set_title(f"verdict: {payload['verdict']}")
    ax.legend(fontsize="small")


def _scan(ax, request: FigureRequest) -> None:
    rows = read_scan(request.inputs[0])
    if not rows:
        raise SchemaError(f"{request.inputs[0]}: no data rows")
    for verdict, color in VERDICT_COLORS.items():
        group = [r for r in rows if r["verdict"] == verdict]
        if not group:
            continue
        ax.scatter(
            [r["ratio"] for r in group],
            [r["ladder_floor"] for r in group],
            # open marker where the barrier cross-check did not certify
            facecolors=[color if r["barrier_ok"] else "none" for r in group],
            edgecolors=color,
            label=verdict,
        )
    ax.set_xscale("log")
    if all(r["ladder_floor"] > 0.0 for r in rows):
        ax.set_yscale("log")
    ax.set_xlabel("boundary / absorption strength ratio")
    ax.set_ylabel("ladder floor")
    ax.set_title("threshold scan verdicts")
    ax.legend(fontsize="small")


def _convergence(ax, request: FigureRequest) -> None:
    for path in request.inputs:
        rows = read_convergence(path)
        if not rows:
            raise SchemaError(f"{path}: no data rows")
        hs = [r["h"] for r in rows]
        # the refined quantity is whichever column actually varies
        xs = hs if len(set(hs)) > 1 else [r["dt"] for r in rows]
        xlabel = "h" if xs is hs else "dt"
        errs = [r["sup_error"] for r in rows]
        orders = [r["order"] for r in rows if r["order"] is not None]
        label = _stem(path)
        if orders:
            label = f"{label} (order {np.mean(orders):.2f})"
        ax.plot(xs, errs, "o-", label=label)
        ax.set_xlabel(xlabel)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_ylabel("sup error")
    ax.set_title("refinement study")
    ax.legend(fontsize="small")


_BUILDERS = {
    "snapshot": (_snapshot, 1, 1),
    "ladder": (_ladder, 1, 1),
    "overlay": (_overlay, 2, None),
    "scan": (_scan, 1, 1),
    "convergence": (_convergence, 1, None),
}


def build_figure(request: FigureRequest) -> Figure:
    """Assemble the figure without writing it; render() saves the file."""
    if request.kind not in _BUILDERS:
        raise ValueError(f"unknown figure kind {request.kind!r}; options: {sorted(_BUILDERS)}")
    builder, lo, hi = _BUILDERS[request.kind]
    n = len(request.inputs)
    if n < lo or (hi is not None and n > hi):
        want = f"exactly {lo}" if hi == lo else f"at least {lo}"
        raise ValueError(f"{request.kind} takes {want} input file(s), got {n}")
    fig = Figure(figsize=(6.4, 4.4))
    builder(fig.subplots(), request)
    fig.tight_layout()
    return fig


def render(request: FigureRequest) -> str:
    """Write the figure to request.output (format from the extension) and
    return the path. Output bytes are deterministic for fixed inputs."""
    fmt = os.path.splitext(request.output)[1].lstrip(".").lower()
    if fmt not in {"png", "svg"}:
        raise ValueError(f"output must end in .png or .svg, got {request.output!r}")
    fig = build_figure(request)
    parent = os.path.dirname(request.output)
    if parent:
        os.makedirs(parent, exist_ok=True)
    # strip the run date (svg) and pin the software tag (png): rerenders of
    # the same inputs must be byte identical
    metadata = {"Date": None} if fmt == "svg" else {"Software": "heatplots"}
    fig.savefig(request.output, dpi=150, metadata=metadata)
    return request.output

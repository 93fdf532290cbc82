"""Command line front end.

Configs are flat text files, one `section.key = value` per line, `#` starts a
comment. Every key must belong to the command being run; a stray key is a
config error reported with its line number. Exit codes: 0 all checks passed,
1 a numerical check failed, 2 the config or construction was rejected.
"""

from __future__ import annotations

import argparse
import inspect
import os
import sys

import numpy as np

from .barriers import (
    ZeroCandidate,
    build_exp_supersolution,
    build_extinction_barrier,
    build_layer_subsolution,
    build_strict_supersolution,
    certifies_subsolution,
    classify_candidate,
)
from .errors import (
    CertificationSearchError,
    ConfigError,
    ConstructionError,
    NonconvergenceError,
    OrderingError,
    PositivityViolationError,
)
from .experiments import EXPERIMENTS, ExperimentOutcome
from .fd_solver import StepScheme, solve
from .grid import build_grid, time_grid_for_horizon
from .io import (
    Artifact,
    certificate_payload,
    ladder_payload,
    write_artifacts,
    write_error,
    write_json,
    write_outcome,
)
from .ladder import run_ladder
from .presets import ORACLES, PRESETS, run_oracle, run_preset
from .problem import Coefficient, InitialDatum, Kernel, ProblemSpec

_CHECK_FAILURES = (
    OrderingError,
    PositivityViolationError,
    NonconvergenceError,
    CertificationSearchError,
)
_CONFIG_FAILURES = (ConfigError, ConstructionError)


# ---------------------------------------------------------------------------
# flat config files


class FlatConfig:
    """Parsed `section.key = value` file; tracks which keys were consumed so
    leftovers can be reported as unknown."""

    def __init__(self, entries: dict[str, tuple[str, int]]):
        self.entries = entries
        self.used: set[str] = set()

    @classmethod
    def parse(cls, text: str) -> "FlatConfig":
        entries: dict[str, tuple[str, int]] = {}
        for ln, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {ln}: expected 'section.key = value', got {raw.strip()!r}")
            key, value = line.split("=", 1)
            key, value = key.strip(), value.strip()
            if "." not in key:
                raise ConfigError(f"line {ln}: keys are namespaced 'section.key', got {key!r}")
            if key in entries:
                raise ConfigError(f"line {ln}: duplicate key {key}")
            entries[key] = (value, ln)
        return cls(entries)

    @classmethod
    def load(cls, path: str) -> "FlatConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                return cls.parse(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc

    def has(self, key: str) -> bool:
        return key in self.entries

    def raw(self, key: str, default=None) -> str | None:
        if key not in self.entries:
            return default
        self.used.add(key)
        return self.entries[key][0]

    def get_float(self, key, default=None, positive=False, nonnegative=False) -> float:
        raw = self.raw(key)
        if raw is None:
            if default is None:
                raise ConfigError(f"{key} is required")
            return default
        try:
            value = float(raw)
        except ValueError:
            raise ConfigError(f"{key} must be a number, got {raw!r}") from None
        if positive and not value > 0.0:
            raise ConfigError(f"{key} must be > 0, got {value}")
        if nonnegative and value < 0.0:
            raise ConfigError(f"{key} must be >= 0, got {value}")
        return value

    def get_int(self, key, default=None, positive=False) -> int:
        raw = self.raw(key)
        if raw is None:
            if default is None:
                raise ConfigError(f"{key} is required")
            return default
        try:
            value = int(raw)
        except ValueError:
            raise ConfigError(f"{key} must be an integer, got {raw!r}") from None
        if positive and not value > 0:
            raise ConfigError(f"{key} must be > 0, got {value}")
        return value

    def get_str(self, key, default=None) -> str:
        raw = self.raw(key)
        if raw is None:
            if default is None:
                raise ConfigError(f"{key} is required")
            return default
        return raw

    def get_datum(self, key) -> InitialDatum:
        raw = self.raw(key)
        if raw is None:
            raise ConfigError(f"{key} is required")
        return parse_datum(raw, key)

    def assert_consumed(self) -> None:
        for key, (_, ln) in self.entries.items():
            if key not in self.used:
                raise ConfigError(f"line {ln}: unknown key {key} for this command")


def parse_datum(text: str, where: str) -> InitialDatum:
    """Initial datum syntax: constant:V | cosine:a,b | bump:lo,hi,amp | affine:a,b."""
    kind, sep, rest = text.partition(":")
    if not sep:
        raise ConfigError(f"{where}: expected 'kind:args', got {text!r}")
    try:
        args = [float(s) for s in rest.split(",")] if rest.strip() else []
    except ValueError:
        raise ConfigError(f"{where}: arguments of {kind!r} must be numbers, got {rest!r}") from None
    arity = {"constant": 1, "cosine": 2, "bump": 3, "affine": 2}
    if kind not in arity:
        raise ConfigError(f"{where}: unknown datum kind {kind!r}; options: {sorted(arity)}")
    if len(args) != arity[kind]:
        raise ConfigError(f"{where}: {kind} takes {arity[kind]} arguments, got {len(args)}")
    return getattr(InitialDatum, kind)(*args)


def build_problem(cfg: FlatConfig) -> ProblemSpec:
    return ProblemSpec(
        p=cfg.get_float("problem.p", positive=True),
        l=cfg.get_float("problem.l", positive=True),
        c=Coefficient.constant(cfg.get_float("problem.c", nonnegative=True)),
        k=Kernel.constant(cfg.get_float("problem.k", nonnegative=True)),
        u0=cfg.get_datum("problem.u0"),
        T=cfg.get_float("problem.T", positive=True),
    )


def build_scheme(cfg: FlatConfig) -> StepScheme:
    return StepScheme(
        fp_tol=cfg.get_float("scheme.fp_tol", default=1e-10, positive=True),
        fp_max=cfg.get_int("scheme.fp_max", default=50, positive=True),
        tol_pos=cfg.get_float("scheme.tol_pos", default=1e-10, positive=True),
    )


# ---------------------------------------------------------------------------
# commands


def cmd_solve(args) -> int:
    cfg = FlatConfig.load(args.config)
    spec = build_problem(cfg)
    grid = build_grid(cfg.get_int("grid.n_cells", positive=True))
    tgrid = time_grid_for_horizon(spec.T, cfg.get_float("time.dt", positive=True))
    eps = cfg.get_float("solve.eps", default=0.0, nonnegative=True)
    stride = cfg.get_int("solve.store_stride", default=1, positive=True)
    scheme = build_scheme(cfg)
    cfg.assert_consumed()
    traj = solve(spec, grid, tgrid, eps=eps, scheme=scheme, store_stride=stride)
    write_artifacts(
        args.out,
        [Artifact("trajectory", "trajectory.csv", (traj.stored_times, grid.nodes, traj.values))],
    )
    summary = {
        "eps": eps,
        "n_cells": grid.n_cells,
        "dt": tgrid.dt,
        "horizon": tgrid.horizon,
        "final_sup": float(np.max(traj.final())),
        "final_min": float(np.min(traj.final())),
        "final_mass": traj.mass(len(traj.stored_times) - 1),
        "stored_slices": len(traj.stored_times),
    }
    write_json(os.path.join(args.out, "solve.json"), summary)
    print(f"solved to t={tgrid.horizon}: sup={summary['final_sup']:.6e}")
    return 0


def cmd_ladder(args) -> int:
    cfg = FlatConfig.load(args.config)
    spec = build_problem(cfg)
    grid = build_grid(cfg.get_int("grid.n_cells", positive=True))
    tgrid = time_grid_for_horizon(spec.T, cfg.get_float("time.dt", positive=True))
    eps0 = cfg.get_float("ladder.eps0", positive=True)
    rungs = cfg.get_int("ladder.rungs", positive=True)
    stride = cfg.get_int("ladder.store_stride", default=1, positive=True)
    tol_cmp = cfg.get_float("ladder.tol_cmp", default=1e-6, positive=True)
    tol_trivial = cfg.get_float("ladder.tol_trivial", default=1e-3, positive=True)
    floor = cfg.get_float("ladder.nontrivial_floor", default=1e-2, positive=True)
    scheme = build_scheme(cfg)
    cfg.assert_consumed()
    report = run_ladder(
        spec, grid, tgrid, eps0=eps0, rungs=rungs, scheme=scheme, store_stride=stride,
        tol_cmp=tol_cmp, tol_trivial=tol_trivial, nontrivial_floor=floor,
    )
    write_artifacts(args.out, [Artifact("json", "ladder.json", ladder_payload(report))])
    print(f"ladder verdict: {report.verdict} (extrapolated sup {report.extrapolated_final_sup:.3e})")
    return 0


_CERTIFY_TARGETS = {
    "layer_sub": ("subsolution",),
    "strict_super": ("strict_supersolution",),
    "extinction": ("supersolution", "strict_supersolution"),
    "exp_super": ("supersolution", "strict_supersolution"),
    "zero": ("solution",),
}


def _build_candidate(family: str, spec: ProblemSpec, cfg: FlatConfig):
    if family == "layer_sub":
        return build_layer_subsolution(
            spec,
            amplitude=cfg.get_float("candidate.amplitude", positive=True),
            xi0=cfg.get_float("candidate.xi0", positive=True),
            alpha=cfg.get_float("candidate.alpha", positive=True),
            beta=cfg.get_float("candidate.beta", positive=True),
            t_start=cfg.get_float("candidate.t_start", default=0.0, nonnegative=True),
            t_window=cfg.get_float("candidate.t_window", positive=True),
        )
    if family == "strict_super":
        return build_strict_supersolution(
            spec,
            eps=cfg.get_float("candidate.eps", positive=True),
            amplitude=cfg.get_float("candidate.amplitude", positive=True),
            xi0=cfg.get_float("candidate.xi0", positive=True),
            gamma=cfg.get_float("candidate.gamma", positive=True),
            horizon=cfg.get_float("candidate.horizon", default=spec.T, positive=True),
        )
    if family == "extinction":
        return build_extinction_barrier(
            spec,
            eps=cfg.get_float("candidate.eps", positive=True),
            xi0=cfg.get_float("candidate.xi0", positive=True),
            gamma=cfg.get_float("candidate.gamma", positive=True),
            mu=cfg.get_float("candidate.mu", positive=True),
            horizon=cfg.get_float("candidate.horizon", default=spec.T, positive=True),
            amplitude=cfg.get_float("candidate.amplitude", default=1.0, positive=True),
        )
    if family == "exp_super":
        return build_exp_supersolution(
            spec,
            m0=cfg.get_float("candidate.m0", positive=True),
            horizon=cfg.get_float("candidate.horizon", default=spec.T, positive=True),
            eps=cfg.get_float("candidate.eps", default=0.0, nonnegative=True),
        )
    if family == "zero":
        return ZeroCandidate(cfg.get_float("candidate.horizon", default=spec.T, positive=True))
    raise ConfigError(f"unknown barrier family {family!r}; options: {sorted(_CERTIFY_TARGETS)}")


def cmd_certify(args) -> int:
    cfg = FlatConfig.load(args.config)
    spec = build_problem(cfg)
    candidate = _build_candidate(args.family, spec, cfg)
    cfg.assert_consumed()
    report = classify_candidate(spec, candidate)
    # sampled curve in the trajectory schema so downstream tooling can draw
    # the barrier next to a solution without reimplementing the formulas
    nodes = build_grid(64).nodes
    lo, hi = candidate.window
    sample_times = np.linspace(lo, hi, 9)
    profile = np.stack([candidate.value(nodes, float(t)) for t in sample_times])
    write_artifacts(
        args.out,
        [
            Artifact("json", "certificate.json", certificate_payload(candidate, report)),
            Artifact("trajectory", "profile.csv", (sample_times, nodes, profile)),
        ],
    )
    targets = _CERTIFY_TARGETS[args.family]
    # a subsolution certificate is also served by the stronger verdicts
    certified = report.verdict in targets or (
        args.family == "layer_sub" and certifies_subsolution(report)
    )
    # the candidate must also start on the correct side of the datum
    if args.family == "layer_sub":
        certified = certified and report.initial_below >= -report.tol
    elif args.family == "zero":
        certified = certified and (
            min(report.initial_above, report.initial_below) >= -report.tol
        )
    else:
        certified = certified and report.initial_above >= -report.tol
    print(f"{args.family}: verdict {report.verdict} (margin {report.margin:.3e})")
    return 0 if certified else 1


def _print_outcome(outcome: ExperimentOutcome) -> None:
    for c in outcome.checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"[{c.kind}] {status} {c.description}: {c.measured} (want {c.threshold})")
    print(f"{'PASS' if outcome.overall else 'FAIL'} {outcome.name}")


def _experiment_from_config(cfg: FlatConfig) -> ExperimentOutcome:
    name = cfg.get_str("experiment.name")
    if name not in EXPERIMENTS:
        raise ConfigError(f"experiment.name {name!r} unknown; options: {sorted(EXPERIMENTS)}")
    runner = EXPERIMENTS[name]
    params = inspect.signature(runner).parameters
    overrides = {}
    for key, (raw, ln) in list(cfg.entries.items()):
        if not key.startswith("experiment.") or key == "experiment.name":
            continue
        pname = key.split(".", 1)[1]
        if pname not in params:
            raise ConfigError(f"line {ln}: {key} is not a parameter of {name}")
        default = params[pname].default
        cfg.used.add(key)
        if isinstance(default, bool):
            if raw not in ("true", "false"):
                raise ConfigError(f"{key} must be true or false, got {raw!r}")
            overrides[pname] = raw == "true"
        elif isinstance(default, int):
            overrides[pname] = cfg.get_int(key)
        elif isinstance(default, float):
            overrides[pname] = cfg.get_float(key)
        elif isinstance(default, tuple):
            try:
                overrides[pname] = tuple(float(s) for s in raw.split(","))
            except ValueError:
                raise ConfigError(f"{key} must be a comma list of numbers, got {raw!r}") from None
        elif isinstance(default, str):
            overrides[pname] = raw
        else:
            raise ConfigError(f"{key} cannot be set from a config file")
    cfg.assert_consumed()
    return runner(**overrides)


def cmd_experiment(args) -> int:
    if args.preset:
        outcome = run_preset(args.preset)
    else:
        outcome = _experiment_from_config(FlatConfig.load(args.config))
    out_dir = os.path.join(args.out, outcome.name)
    write_outcome(out_dir, outcome)
    _print_outcome(outcome)
    return 0 if outcome.overall else 1


def cmd_oracle(args) -> int:
    outcome = run_oracle(args.name)
    write_outcome(os.path.join(args.out, outcome.name), outcome)
    _print_outcome(outcome)
    return 0 if outcome.overall else 1


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heatlab",
        description="Numerical laboratory for a heat equation with power "
        "absorption and a nonlinear nonlocal boundary flux.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="march one problem and store the trajectory")
    ps.add_argument("config")
    ps.add_argument("--out", required=True)
    ps.set_defaults(handler=cmd_solve)

    pl = sub.add_parser("ladder", help="run the dyadic regularization ladder")
    pl.add_argument("config")
    pl.add_argument("--out", required=True)
    pl.set_defaults(handler=cmd_ladder)

    pc = sub.add_parser("certify", help="build a barrier candidate and classify it")
    pc.add_argument("family", choices=sorted(_CERTIFY_TARGETS))
    pc.add_argument("config")
    pc.add_argument("--out", required=True)
    pc.set_defaults(handler=cmd_certify)

    pe = sub.add_parser("experiment", help="run a named study end to end")
    group = pe.add_mutually_exclusive_group(required=True)
    group.add_argument("config", nargs="?")
    group.add_argument("--preset", choices=sorted(PRESETS))
    pe.add_argument("--out", required=True)
    pe.set_defaults(handler=cmd_experiment)

    po = sub.add_parser("oracle", help="run a solver validation oracle")
    po.add_argument("name", choices=sorted(ORACLES))
    po.add_argument("--out", required=True)
    po.set_defaults(handler=cmd_oracle)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except _CONFIG_FAILURES as exc:
        print(f"error: {exc}", file=sys.stderr)
        if getattr(args, "out", None):
            write_error(args.out, exc)
        return 2
    except _CHECK_FAILURES as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        if getattr(args, "out", None):
            write_error(args.out, exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())

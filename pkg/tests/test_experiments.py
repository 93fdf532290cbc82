"""Experiment drivers: hypothesis guards, default runs (shared with the
acceptance gate through the session cache), alternate parameter points, and
stability of the headline verdicts under one grid refinement."""

import numpy as np
import pytest

from heatlab import ConfigError
from heatlab.experiments import (
    COMPARISON_PAIRS,
    EXPERIMENTS,
    compare_pair,
    run_absorption_oracle,
    run_comparison,
    run_experiment,
    run_extinction,
    run_nonuniqueness,
    run_positivity,
    run_threshold_scan,
    run_trivial_uniqueness,
    run_uniqueness_probe,
)
from heatlab.fd_solver import StepScheme
from heatlab.grid import build_grid, time_grid_for_horizon
from heatlab.problem import Coefficient, InitialDatum, Kernel, ProblemSpec


def make_spec(p=1.0, l=1.0, c=1.0, k=1.0, u0=None, T=0.1):
    return ProblemSpec(
        p=p,
        l=l,
        c=Coefficient.constant(c),
        k=Kernel.constant(k),
        u0=u0 if u0 is not None else InitialDatum.constant(1.0),
        T=T,
    )


def test_registry_names():
    assert set(EXPERIMENTS) == {
        "comparison-suite",
        "positivity",
        "nonuniqueness-a",
        "uniqueness-trivial-a",
        "threshold-scan",
        "extinction",
        "uniqueness-probe",
        "crossval",
        "heat-oracle",
        "absorption-oracle",
    }
    with pytest.raises(ConfigError):
        run_experiment("bogus")


# --- default parameter points (shared with the acceptance gate) ---


def test_comparison_suite_defaults(preset_outcome):
    outcome = preset_outcome("comparison-suite")
    assert outcome.overall
    # one check per pair plus the summary line
    pair_checks = [c for c in outcome.checks if c.kind == "conclusion"]
    assert len(pair_checks) == len(COMPARISON_PAIRS) + 1
    assert all(c.measured <= 1e-6 for c in pair_checks[:-1])


def test_positivity_defaults(preset_outcome):
    outcome = preset_outcome("positivity")
    assert outcome.overall
    assert any(c.kind == "hypothesis" for c in outcome.checks)
    # strictly positive from the first time step on
    assert outcome.parameters["min_location_t"] >= outcome.parameters["dt"]


def test_nonuniqueness_defaults(preset_outcome):
    outcome = preset_outcome("nonuniqueness-a")
    assert outcome.overall
    assert outcome.parameters["shrink_rounds"] == 2
    names = {a.name for a in outcome.artifacts}
    assert {"certificate_layer.json", "ladder.json", "certificate_zero.json",
            "trajectory_smallest_eps.csv"} <= names


def test_trivial_uniqueness_defaults(preset_outcome):
    outcome = preset_outcome("uniqueness-trivial-a")
    assert outcome.overall
    assert outcome.parameters["gamma"] == pytest.approx(0.2)
    sups = outcome.parameters["barrier_sups"]
    assert len(sups) == 3
    # sup scales exactly linearly in the barrier eps
    np.testing.assert_allclose(np.diff(np.log(np.asarray(sups))), np.log(0.5), atol=1e-9)


def test_threshold_scan_defaults(preset_outcome):
    outcome = preset_outcome("threshold-scan")
    assert outcome.overall
    scan = next(a for a in outcome.artifacts if a.name == "scan.csv")
    verdicts = [row["verdict"] for row in scan.payload]
    assert verdicts == ["trivial", "trivial", "inconclusive", "nontrivial", "nontrivial"]
    assert sum(v == "inconclusive" for v in verdicts) <= 1


def test_extinction_defaults(preset_outcome):
    outcome = preset_outcome("extinction")
    assert outcome.overall
    assert outcome.parameters["extinction_time"] == pytest.approx(0.3)


def test_crossval_defaults(preset_outcome):
    outcome = preset_outcome("crossval")
    assert outcome.overall
    ref = next(c for c in outcome.checks if c.description == "reference discrepancy")
    assert ref.measured <= 5e-3


def test_uniqueness_probes_default(preset_outcome):
    for name in ("uniqueness-probe-a", "uniqueness-probe-b"):
        outcome = preset_outcome(name)
        assert outcome.overall
        assert all(c.measured <= 5e-3 for c in outcome.checks if c.kind == "conclusion")


def test_oracles_default(oracle_outcome):
    assert oracle_outcome("heat").overall
    assert oracle_outcome("absorption").overall


# --- hypothesis guards reject out-of-regime parameters up front ---


def test_nonuniqueness_rejects_wrong_regime():
    with pytest.raises(ConfigError):
        run_nonuniqueness(p=0.5, l=0.75)
    with pytest.raises(ConfigError):
        run_nonuniqueness(k0=0.0)


def test_trivial_uniqueness_rejects_wrong_regime():
    with pytest.raises(ConfigError):
        run_trivial_uniqueness(p=0.75, l=0.5)
    with pytest.raises(ConfigError):
        run_trivial_uniqueness(p=0.5, l=0.5)
    with pytest.raises(ConfigError):
        run_trivial_uniqueness(c0=0.0)


def test_positivity_rejects_vacuous_or_unsafe_setups():
    with pytest.raises(ConfigError):
        run_positivity(datum=InitialDatum.constant(0.0))
    with pytest.raises(ConfigError):
        run_positivity(p=0.5, c0=1.0)
    with pytest.raises(ConfigError):
        run_positivity(datum=InitialDatum.cosine(0.0, 1.0))


def test_positivity_sublinear_without_absorption_is_allowed():
    outcome = run_positivity(p=0.5, c0=0.0, n_cells=32, dt=2e-3, horizon=0.1)
    assert outcome.overall


def test_threshold_scan_rejects_bad_ratios_and_exponent():
    with pytest.raises(ConfigError):
        run_threshold_scan(exponent=1.2)
    with pytest.raises(ConfigError):
        run_threshold_scan(ratios=(0.1, float("inf")))
    with pytest.raises(ConfigError):
        run_threshold_scan(ratios=(0.1, -1.0))


def test_extinction_rejects_bad_inputs():
    with pytest.raises(ConfigError):
        run_extinction(l=1.0)
    with pytest.raises(ConfigError):
        run_extinction(mu=-1.0)
    with pytest.raises(ConfigError):
        run_extinction(initial="junk")


def test_probe_rejects_unknown_case_and_zero_touching_data():
    with pytest.raises(ConfigError):
        run_uniqueness_probe(case="unknown")
    with pytest.raises(ConfigError):
        run_uniqueness_probe(
            case="sub-linear-flux-positive-data",
            datum=InitialDatum.bump(0.2, 0.4, 1.0),
        )


def test_absorption_oracle_guards_the_extinction_time():
    with pytest.raises(ConfigError):
        run_absorption_oracle(horizon=2.5)


# --- direct comparison harness ---


def test_compare_pair_identical_specs_gap_zero():
    spec = make_spec()
    grid = build_grid(16)
    tgrid = time_grid_for_horizon(0.05, 5e-3)
    gap = compare_pair(spec, spec, grid, tgrid, StepScheme(fp_tol=1e-12, fp_max=200))
    assert gap == 0.0


def test_compare_pair_orientation_is_automatic():
    grid = build_grid(16)
    tgrid = time_grid_for_horizon(0.05, 5e-3)
    scheme = StepScheme(fp_tol=1e-12, fp_max=200)
    low = make_spec(u0=InitialDatum.cosine(0.5, 0.2))
    high = make_spec(u0=InitialDatum.cosine(0.9, 0.2))
    g1 = compare_pair(low, high, grid, tgrid, scheme)
    g2 = compare_pair(high, low, grid, tgrid, scheme)
    assert g1 == g2
    assert g1 <= 1e-6


def test_compare_pair_rejects_crossing_data():
    grid = build_grid(16)
    tgrid = time_grid_for_horizon(0.05, 5e-3)
    a = make_spec(u0=InitialDatum.cosine(0.5, 0.3))
    b = make_spec(u0=InitialDatum.cosine(0.5, -0.3))
    with pytest.raises(ConfigError):
        compare_pair(a, b, grid, tgrid, StepScheme())


def test_compare_pair_sublinear_flux_needs_positive_dominated_datum():
    grid = build_grid(16)
    tgrid = time_grid_for_horizon(0.05, 5e-3)
    low = make_spec(l=0.5, u0=InitialDatum.constant(0.0))
    high = make_spec(l=0.5, u0=InitialDatum.bump(0.2, 0.6, 0.5))
    with pytest.raises(ConfigError):
        compare_pair(low, high, grid, tgrid, StepScheme())


# --- alternate admissible corners from the regime map ---


def test_nonuniqueness_superlinear_absorption_corner():
    # p = 2, l = 3/4: the positive branch develops slowly, so the ladder
    # needs a longer horizon and more rungs to stabilize
    outcome = run_nonuniqueness(p=2.0, l=0.75, horizon=2.0, rungs=7)
    assert outcome.overall
    verdict = next(c for c in outcome.checks if c.description == "ladder verdict")
    assert verdict.measured == "nontrivial"


def test_trivial_uniqueness_second_corner():
    outcome = run_trivial_uniqueness(p=0.25, l=0.5, c0=2.0)
    assert outcome.overall
    assert outcome.parameters["gamma"] == pytest.approx(0.325)


def test_extinction_from_zero_initial_state():
    outcome = run_extinction(initial="zero")
    assert outcome.overall


# --- headline verdicts survive one uniform refinement (h/2, dt/4) ---


def test_nonuniqueness_verdict_stable_under_refinement():
    outcome = run_nonuniqueness(n_cells=96, dt=5e-4)
    assert outcome.overall
    verdict = next(c for c in outcome.checks if c.description == "ladder verdict")
    assert verdict.measured == "nontrivial"


def test_trivial_uniqueness_verdict_stable_under_refinement():
    outcome = run_trivial_uniqueness(n_cells=96, dt=5e-4)
    assert outcome.overall


def test_positivity_stable_under_refinement():
    outcome = run_positivity(n_cells=128, dt=2.5e-4)
    assert outcome.overall


def test_extinction_stable_under_refinement():
    outcome = run_extinction(n_cells=128, dt=2.5e-4)
    assert outcome.overall


def test_threshold_scan_verdicts_stable_under_refinement():
    outcome = run_threshold_scan(n_cells=96, dt=5e-4)
    assert outcome.overall
    scan = next(a for a in outcome.artifacts if a.name == "scan.csv")
    verdicts = [row["verdict"] for row in scan.payload]
    assert verdicts == ["trivial", "trivial", "inconclusive", "nontrivial", "nontrivial"]


def test_comparison_suite_stable_under_refinement():
    outcome = run_comparison(n_cells=96, dt=5e-4)
    assert outcome.overall

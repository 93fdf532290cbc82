import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heatlab import CertificationSearchError, ConfigError, ConstructionError
from heatlab.barriers import (
    ZeroCandidate,
    apriori_sup_bound,
    build_exp_supersolution,
    build_extinction_barrier,
    build_layer_subsolution,
    build_strict_supersolution,
    certifies_subsolution,
    certifies_supersolution,
    classify_candidate,
    layer_amplitude_window,
    shrink_to_admissible,
    strict_amplitude_window,
)
from heatlab.problem import Coefficient, InitialDatum, Kernel, ProblemSpec, positive_power


def make_spec(p, l, c=1.0, k=1.0, u0=0.0, T=0.5):
    return ProblemSpec(
        p=p,
        l=l,
        c=Coefficient.constant(c),
        k=Kernel.constant(k),
        u0=InitialDatum.constant(u0),
        T=T,
    )


def test_exp_supersolution_growth_and_window():
    # l = 1, k = 1, m0 = 1: the boundary feasibility B >= 1 + B/12 first
    # holds at B = 2, and the certified window is 1/(2B)
    spec = make_spec(2.0, 1.0, u0=1.0)
    barrier = build_exp_supersolution(spec, m0=1.0, horizon=1.0)
    assert barrier.growth == 2.0
    assert barrier.horizon == 0.25
    report = classify_candidate(spec, barrier)
    assert certifies_supersolution(report)
    assert report.margin == pytest.approx(0.8333, rel=1e-3)
    assert barrier.sup_bound(0.25) == pytest.approx(4.0774, rel=1e-3)


def test_exp_supersolution_without_flux_needs_no_growth_margin():
    barrier = build_exp_supersolution(make_spec(2.0, 1.0, k=0.0, u0=1.0), m0=1.0, horizon=1.0)
    assert barrier.growth == 1.0
    assert barrier.horizon == 0.5


def test_exp_supersolution_rejects_bad_m0():
    spec = make_spec(2.0, 1.0, u0=1.0)
    with pytest.raises(ConstructionError):
        build_exp_supersolution(spec, m0=0.0, horizon=1.0)
    with pytest.raises(ConstructionError):
        build_exp_supersolution(spec, m0=0.1, horizon=1.0, eps=0.5)


def test_apriori_bound_chains_windows():
    spec = make_spec(2.0, 1.0, u0=1.0)
    assert apriori_sup_bound(spec, 1.0, 0.25) == pytest.approx(4.0774, rel=1e-3)
    assert apriori_sup_bound(spec, 1.0, 0.5) == pytest.approx(16.6254, rel=1e-3)


def test_layer_exponent_window_p_at_least_one():
    # l = 1/2: alpha must exceed 2 (open), beta must exceed 2, no upper edges
    spec = make_spec(1.0, 0.5)
    with pytest.raises(ConstructionError):
        build_layer_subsolution(spec, 1.0, 0.225, alpha=2.0, beta=3.0, t_window=0.0125)
    with pytest.raises(ConstructionError):
        build_layer_subsolution(spec, 1.0, 0.225, alpha=3.0, beta=2.0, t_window=0.0125)
    cand = build_layer_subsolution(spec, 1.0, 0.225, alpha=3.0, beta=3.0, t_window=0.0125)
    assert classify_candidate(spec, cand).verdict == "subsolution"


def test_layer_exponent_window_sublinear_absorption():
    # p = 1/2, l = 1/4: alpha in (4/3, 2] (closed top), beta in (2, 4) (open top)
    spec = make_spec(0.5, 0.25)
    lo, hi = layer_amplitude_window(spec, xi0=0.3, t_window=0.04, alpha=2.0, beta=3.9)
    cand = build_layer_subsolution(
        spec, 0.5 * (lo + hi), 0.3, alpha=2.0, beta=3.9, t_window=0.04
    )
    assert classify_candidate(spec, cand).verdict == "subsolution"
    for alpha, beta in [(1.3, 3.0), (2.1, 3.0), (2.0, 4.0), (2.0, 4.5)]:
        with pytest.raises(ConstructionError):
            build_layer_subsolution(spec, 0.01, 0.3, alpha=alpha, beta=beta, t_window=0.04)


def test_layer_matched_exponents_collapse_the_window():
    # p == l: only alpha = 1/(1-l) survives, and beta may sit at 2/(1-p)
    spec = make_spec(0.5, 0.5)
    lo, hi = layer_amplitude_window(spec, xi0=1.0, t_window=0.04)
    assert lo == pytest.approx(0.01, rel=1e-6)
    assert hi == pytest.approx(1.0 / 36.0, rel=1e-6)
    cand = build_layer_subsolution(
        spec, 0.5 * (lo + hi), 1.0, alpha=2.0, beta=4.0, t_window=0.04
    )
    assert classify_candidate(spec, cand).verdict == "subsolution"
    with pytest.raises(ConstructionError):
        build_layer_subsolution(spec, 0.015, 1.0, alpha=2.2, beta=4.0, t_window=0.04)


def test_layer_amplitude_window_empty_cases():
    with pytest.raises(ConstructionError):
        layer_amplitude_window(make_spec(1.5, 0.5), xi0=1.0, t_window=0.04)
    with pytest.raises(ConstructionError):
        layer_amplitude_window(make_spec(0.5, 0.5, k=0.0), xi0=1.0, t_window=0.04)
    # a tiny kernel starves the boundary side until no amplitude fits
    with pytest.raises(ConstructionError):
        layer_amplitude_window(make_spec(0.5, 0.5, c=50.0, k=1e-6), xi0=1.0, t_window=0.04)


def test_layer_geometry_guards():
    spec = make_spec(1.0, 0.5)
    with pytest.raises(ConstructionError):
        build_layer_subsolution(spec, 1.0, 0.0, alpha=3.0, beta=3.0, t_window=0.0125)
    # support must stay clear of the midpoint: xi0 * sqrt(t_window) < 1/2
    with pytest.raises(ConstructionError):
        build_layer_subsolution(spec, 1.0, 2.0, alpha=3.0, beta=3.0, t_window=0.09)


def test_layer_boundary_ratio_vanishes_toward_onset():
    # the normal-derivative side falls faster than the flux side as the
    # window opens, which is what makes the subsolution inequality close
    spec = make_spec(1.0, 0.5)
    cand = build_layer_subsolution(spec, 1.0, 0.225, alpha=3.0, beta=3.0, t_window=0.0125)
    ys = np.linspace(0.0, 1.0, 20001)
    ratios = []
    for sigma in np.geomspace(1e-4 * cand.t_window, cand.t_window, 9):
        nd = cand.normal_derivative(0, cand.t_start + sigma)
        flux = np.trapezoid(positive_power(cand.value(ys, cand.t_start + sigma), spec.l), ys)
        ratios.append(nd / flux)
    ratios = np.asarray(ratios)
    assert np.all(np.diff(ratios) > 0.0)
    assert ratios[0] < 0.01 * ratios[-1]
    assert ratios[-1] < 1.0


def test_strict_supersolution_window_and_scaling():
    spec = make_spec(0.5, 0.5, c=2.0, k=0.5)
    lo, hi = strict_amplitude_window(spec, 0.25, 0.5)
    assert lo == pytest.approx(1.0 / 144.0, rel=1e-9)
    assert hi == pytest.approx(1.0 / 36.0, rel=1e-9)
    cand = build_strict_supersolution(spec, eps=0.05, amplitude=hi, xi0=1.0, gamma=0.25, horizon=0.5)
    assert classify_candidate(spec, cand).verdict == "strict_supersolution"
    # sup scales linearly in eps at fixed shape
    half = build_strict_supersolution(spec, eps=0.025, amplitude=hi, xi0=1.0, gamma=0.25, horizon=0.5)
    assert half.sup_value() / cand.sup_value() == 0.5


def test_strict_supersolution_exponent_guards():
    spec = make_spec(0.5, 0.75)
    for gamma in (0.125, 0.25, 0.5):
        with pytest.raises(ConstructionError):
            build_strict_supersolution(spec, eps=0.1, amplitude=1.0, xi0=0.0035, gamma=gamma, horizon=0.5)
    matched = make_spec(0.5, 0.5, c=2.0, k=0.5)
    with pytest.raises(ConstructionError):
        build_strict_supersolution(matched, eps=0.05, amplitude=0.02, xi0=1.0, gamma=0.2, horizon=0.5)
    with pytest.raises(ConstructionError):
        build_strict_supersolution(make_spec(0.75, 0.5), eps=0.1, amplitude=1.0, xi0=0.1, gamma=0.2, horizon=0.5)


def test_strict_amplitude_window_needs_absorption():
    with pytest.raises(ConstructionError):
        strict_amplitude_window(make_spec(0.5, 0.5, c=0.0), 0.25, 0.5)
    with pytest.raises(ConstructionError):
        strict_amplitude_window(make_spec(0.5, 0.5, c=0.5, k=50.0), 0.25, 0.5)


def test_extinction_barrier_support_collapses():
    spec = make_spec(0.5, 0.75, c=40.0)
    barrier = build_extinction_barrier(spec, eps=0.025, xi0=0.9, gamma=0.2, mu=3.0, horizon=0.45)
    assert barrier.extinction_time == pytest.approx(0.3)
    report = classify_candidate(spec, barrier)
    assert certifies_supersolution(report)
    xs = np.linspace(0.0, 1.0, 4001)
    assert float(np.min(barrier.value(xs, 0.0))) >= 0.0
    # two boundary layers whose heads move inward at speed mu * eps^gamma
    width = lambda t: sum(hi - lo for lo, hi in barrier.support(t))
    assert width(0.2) < width(0.1) < width(0.0)
    # past the extinction time the barrier is identically zero
    assert float(np.max(np.abs(barrier.value(xs, 0.31)))) == 0.0
    assert barrier.support(0.31) == []


def test_extinction_barrier_needs_absorption_to_outrun_the_edge():
    spec = make_spec(0.5, 0.75, c=40.0)
    with pytest.raises(ConstructionError):
        build_extinction_barrier(spec, eps=0.025, xi0=0.9, gamma=0.2, mu=1e4, horizon=0.45)
    with pytest.raises(ConstructionError):
        build_extinction_barrier(make_spec(0.5, 0.75, c=0.0), eps=0.025, xi0=0.9, gamma=0.2, mu=3.0, horizon=0.45)


@given(p=st.floats(0.3, 2.0), l=st.floats(0.3, 2.0))
@settings(deadline=None, max_examples=25)
def test_zero_candidate_is_a_solution_for_zero_data(p, l):
    # powers of the zero state vanish for every admissible exponent pair, so
    # the zero candidate certifies from both sides at once
    spec = make_spec(p, l)
    report = classify_candidate(spec, ZeroCandidate(horizon=0.3))
    assert report.verdict == "solution"
    assert certifies_subsolution(report)
    assert certifies_supersolution(report)


def test_zero_candidate_reports_initial_ordering():
    # verdicts cover the differential inequalities; the datum comparison is
    # reported separately so callers can reject a barrier that starts on the
    # wrong side
    report = classify_candidate(make_spec(1.0, 1.0, u0=1.0), ZeroCandidate(horizon=0.3))
    assert report.verdict == "solution"
    assert report.initial_above < 0.0
    assert report.initial_below >= 0.0


def test_shrink_finds_the_certified_layer_geometry():
    candidate, report, trace = shrink_to_admissible(
        make_spec(1.0, 0.5),
        "layer_sub",
        {"amplitude": 1.0, "xi0": 0.45, "alpha": 3.0, "beta": 3.0,
         "t_start": 0.0, "t_window": 0.05},
    )
    assert len(trace) == 2
    assert candidate.xi0 == pytest.approx(0.225)
    assert candidate.t_window == pytest.approx(0.0125)
    assert report.verdict == "subsolution"
    assert report.margin > 0.0


def test_shrink_finds_the_certified_strict_geometry():
    candidate, report, trace = shrink_to_admissible(
        make_spec(0.5, 0.75),
        "strict_super",
        {"eps": 0.1, "amplitude": 1.0, "xi0": 0.45, "gamma": 0.2, "horizon": 0.5},
    )
    assert len(trace) == 8
    assert candidate.xi0 == pytest.approx(0.45 / 128.0)
    assert report.verdict == "strict_supersolution"
    assert report.margin > 0.0


def test_shrink_failure_carries_the_trace():
    # without boundary flux no layer can satisfy the flux inequality at any
    # geometry, so the search must fail and say what it tried
    with pytest.raises(CertificationSearchError) as err:
        shrink_to_admissible(
            make_spec(1.0, 0.5, k=0.0),
            "layer_sub",
            {"amplitude": 1.0, "xi0": 0.45, "alpha": 3.0, "beta": 3.0,
             "t_start": 0.0, "t_window": 0.05},
        )
    assert err.value.trace
    with pytest.raises(ConfigError):
        shrink_to_admissible(make_spec(1.0, 0.5), "exp_super", {})

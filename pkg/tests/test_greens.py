import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heatlab import ConfigError, ContractionError
from heatlab.greens import (
    build_kernel,
    contraction_estimate,
    kernel_eval,
    picard_chain,
    picard_solve,
)
from heatlab.grid import build_grid
from heatlab.problem import Coefficient, InitialDatum, Kernel, ProblemSpec


def make_spec(p=2.0, l=1.0, c=1.0, k=0.0, u0=None, T=0.1):
    return ProblemSpec(
        p=p,
        l=l,
        c=Coefficient.constant(c),
        k=Kernel.constant(k),
        u0=u0 if u0 is not None else InitialDatum.cosine(1.0, 0.25),
        T=T,
    )


def test_kernel_truncation_time_shrinks_with_more_modes():
    few = build_kernel(n_modes=16)
    many = build_kernel(n_modes=64)
    assert many.t_min < few.t_min
    with pytest.raises(ConfigError):
        build_kernel(n_modes=0)


def test_kernel_eval_rejects_early_times():
    kern = build_kernel(n_modes=64)
    from heatlab.errors import KernelDomainError

    with pytest.raises(KernelDomainError):
        kernel_eval(kern, 0.5, 0.5, kern.t_min / 2.0)


@given(
    x=st.floats(0.0, 1.0),
    y=st.floats(0.0, 1.0),
    t_scale=st.floats(1.0, 50.0),
)
@settings(deadline=None, max_examples=100)
def test_kernel_symmetry_is_exact(x, y, t_scale):
    kern = build_kernel(n_modes=64)
    t = kern.t_min * t_scale
    gxy = kernel_eval(kern, x, y, t).item()
    gyx = kernel_eval(kern, y, x, t).item()
    # every term of the cosine sum is a commutative product, so the two
    # evaluations are bitwise identical
    assert gxy == gyx


@given(x=st.floats(0.0, 1.0), t_scale=st.floats(1.0, 50.0))
@settings(deadline=None, max_examples=100)
def test_kernel_unit_mass(x, t_scale):
    # trapezoid is exact for the cosine modes when 2 * n_cells exceeds the
    # mode count, so the quadrature sees the true unit mass
    kern = build_kernel(n_modes=64)
    grid = build_grid(101)
    t = kern.t_min * t_scale
    row = kernel_eval(kern, x, grid.nodes, t)[0]
    assert float(grid.quad_weights @ row) == pytest.approx(1.0, abs=1e-10)


def test_kernel_positivity_at_trusted_times():
    kern = build_kernel(n_modes=64)
    grid = build_grid(101)
    vals = kernel_eval(kern, grid.nodes, grid.nodes, kern.t_min)
    assert float(np.min(vals)) > -1e-8


def test_contraction_estimate_pinned_values():
    assert contraction_estimate(make_spec(p=1.0, c=0.0), 0.1, 2.0, 0.5) == 0.0
    # p = 1: theta = 1, constant c integrates exactly
    assert contraction_estimate(make_spec(p=1.0, c=1.0), 0.1, 2.0, 0.5) == 0.5
    # p = 2: theta = 2 * m_bound
    assert contraction_estimate(make_spec(p=2.0, c=1.0), 0.1, 2.0, 0.25) == 1.0
    # p < 1 with eps = 0: not Lipschitz at the floor
    assert contraction_estimate(make_spec(p=0.5), 0.0, 2.0, 0.5) == np.inf


def test_contraction_estimate_nonconstant_coefficient():
    spec = ProblemSpec(
        p=1.0,
        l=1.0,
        c=Coefficient.separable(lambda xs: 1.0 + xs, lambda t: 1.0),
        k=Kernel.constant(0.0),
        u0=InitialDatum.constant(1.0),
        T=0.5,
    )
    assert contraction_estimate(spec, 0.1, 2.0, 0.5) == pytest.approx(1.0, abs=1e-12)


def test_picard_requires_positive_eps_and_nonempty_slab():
    spec = make_spec()
    grid = build_grid(40)
    with pytest.raises(ConfigError):
        picard_solve(spec, grid, 0.0, 0.1, 2, eps=0.0)
    with pytest.raises(ConfigError):
        picard_solve(spec, grid, 0.1, 0.1, 2, eps=0.1)
    with pytest.raises(ConfigError):
        picard_solve(spec, grid, 0.0, 0.1, 0, eps=0.1)


def test_picard_rejects_sub_interval_too_short_for_modes():
    spec = make_spec()
    grid = build_grid(101)
    with pytest.raises(ConfigError):
        picard_solve(spec, grid, 0.0, 1e-5, 1, eps=0.1)


def test_picard_reproduces_free_decay():
    # c = 0, k = 0: the fixed point is the explicit mode solution
    spec = make_spec(c=0.0, u0=InitialDatum.cosine(1.0, 0.5))
    grid = build_grid(40)
    res = picard_solve(spec, grid, 0.0, 0.1, 2, eps=0.1)
    exact = 1.1 + 0.5 * np.exp(-np.pi**2 * 0.1) * np.cos(np.pi * grid.nodes)
    assert float(np.max(np.abs(res.final() - exact))) <= 1e-12
    assert res.iterations <= 3


@given(
    eps=st.floats(0.02, 0.3),
    t_span=st.floats(0.04, 0.12),
    amp=st.floats(0.5, 1.2),
)
@settings(deadline=None, max_examples=20)
def test_picard_contracts_at_certified_rate(eps, t_span, amp):
    # with k = 0 the certified factor covers the whole absorption map on
    # [0, m_bound]; successive sup changes must shrink at least that fast
    spec = make_spec(u0=InitialDatum.cosine(amp, 0.25 * amp))
    grid = build_grid(40)
    res = picard_solve(spec, grid, 0.0, t_span, 2, eps=eps)
    assert res.theta_bound < 1.0
    deltas = res.delta_history
    assert deltas.size == res.iterations
    for d0, d1 in zip(deltas[:-1], deltas[1:]):
        if d0 > 1e-11:
            assert d1 <= res.theta_bound * d0 * (1.0 + 1e-6) + 1e-14


def test_picard_long_slab_fails_contraction():
    spec = make_spec()
    grid = build_grid(40)
    with pytest.raises(ContractionError):
        picard_solve(spec, grid, 0.0, 1.0, 4, eps=0.1)


def test_picard_chain_matches_single_slab():
    spec = make_spec()
    grid = build_grid(40)
    one = picard_solve(spec, grid, 0.0, 0.1, 4, eps=0.1)
    chained = picard_chain(spec, grid, 0.1, n_slabs=2, n_sub=2, eps=0.1)
    assert chained.times[0] == 0.0
    assert chained.times[-1] == pytest.approx(0.1)
    gap = float(np.max(np.abs(chained.final() - one.final())))
    assert gap <= 5e-4
    assert chained.delta_history.size > 0


def test_picard_chain_splits_long_horizons():
    # the 1.0-long slab fails outright; the a-priori bound at t = 1 is about
    # 12.5, so theta < 1 needs slabs shorter than 0.04
    spec = make_spec()
    grid = build_grid(40)
    res = picard_chain(spec, grid, 1.0, n_slabs=30, n_sub=2, eps=0.1)
    assert res.theta_bound < 1.0
    assert res.times[-1] == pytest.approx(1.0)
    with pytest.raises(ConfigError):
        picard_chain(spec, grid, 1.0, n_slabs=0, n_sub=2, eps=0.1)

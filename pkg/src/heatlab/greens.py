"""Neumann heat kernel on (0,1) and a Picard (Duhamel) verification solver.

The kernel is the cosine-mode sum

    G(x, y, t) = 1 + 2 sum_{m=1..M} exp(-m^2 pi^2 t) cos(m pi x) cos(m pi y),

trusted only for t >= t_min, where the dropped tail is below tail_tol.
picard_solve represents the solution of the regularized problem through the
Duhamel formula (initial term + volume absorption term + boundary flux term)
and iterates it to a fixed point; it is an independent discretization used to
cross-check the finite-difference marcher. The boundary terms keep their
singular short-time content through analytic per-mode time weights plus an
explicit high-mode tail for the most recent sub-interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ContractionError, KernelDomainError
from .grid import SpatialGrid, integrate
from .problem import ProblemSpec, positive_power, regularize_initial


@dataclass(frozen=True)
class NeumannKernel:
    """Truncated cosine expansion of the Neumann heat kernel."""

    n_modes: int
    tail_tol: float
    t_min: float


def build_kernel(n_modes: int = 64, tail_tol: float = 1e-10) -> NeumannKernel:
    """Compute the smallest trusted time for the truncated kernel: the dropped
    tail is bounded by 2 exp(-(M+1)^2 pi^2 t) / (1 - exp(-pi^2 t))."""
    if n_modes < 1:
        raise ConfigError(f"n_modes must be positive, got {n_modes}")

    def tail(t: float) -> float:
        return 2.0 * math.exp(-((n_modes + 1) ** 2) * math.pi**2 * t) / (
            1.0 - math.exp(-math.pi**2 * t)
        )

    lo, hi = 1e-12, 1.0
    if tail(hi) > tail_tol:
        raise ConfigError("tail tolerance unreachable at t=1; increase n_modes")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if tail(mid) <= tail_tol:
            hi = mid
        else:
            lo = mid
        if hi - lo < 1e-15 * hi:
            break
    return NeumannKernel(n_modes=n_modes, tail_tol=tail_tol, t_min=hi)


def kernel_eval(
    kernel: NeumannKernel, x: np.ndarray | float, y: np.ndarray | float, t: float
) -> np.ndarray:
    """Pointwise G(x, y, t) on the outer product of x and y nodes."""
    if t < kernel.t_min:
        raise KernelDomainError(
            f"t={t:.3e} is below the trusted truncation time {kernel.t_min:.3e}"
        )
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    y_arr = np.atleast_1d(np.asarray(y, dtype=float))
    m = np.arange(1, kernel.n_modes + 1)
    decay = np.exp(-(m**2) * np.pi**2 * t)
    cx = np.cos(np.pi * np.outer(m, x_arr))
    cy = np.cos(np.pi * np.outer(m, y_arr))
    # associate the x-y product first so swapping the arguments transposes
    # the result bitwise (commutativity of the elementwise product)
    return 1.0 + 2.0 * np.einsum("m,mij->ij", decay, cx[:, :, None] * cy[:, None, :])


def contraction_estimate(
    spec: ProblemSpec, eps: float, m_bound: float, t_span: float, n_samples: int = 65
) -> float:
    """Upper bound on the absorption-term contraction factor of the Duhamel
    map on a slab of length t_span for iterates with values in [eps, m_bound]:

        theta * sup_x integral_0^T integral_0^1 G(x, y; T - tau) c(y, tau) dy dtau

    with theta = p * max(eps^(p-1), m_bound^(p-1)). The kernel has unit mass
    in y, so the double integral equals c*T exactly for constant c and is
    bounded by the time integral of sup_y c otherwise. Infinite when p < 1 and
    eps = 0 (the absorption is not Lipschitz at zero)."""
    p = spec.p
    theta = p * max(
        eps ** (p - 1.0) if eps > 0.0 else (math.inf if p < 1.0 else 0.0),
        m_bound ** (p - 1.0),
    )
    if spec.c.kind == "constant":
        integral = float(spec.c(0.5, 0.0)) * t_span
    else:
        xs = np.linspace(0.0, 1.0, n_samples)
        ts = np.linspace(0.0, t_span, 129)
        sups = np.array([float(np.max(np.asarray(spec.c(xs, t)))) for t in ts])
        integral = float(np.trapezoid(sups, ts))
    return theta * integral


@dataclass
class PicardResult:
    """Fixed point of the Duhamel map on a slab (or a chain of slabs)."""

    times: np.ndarray
    values: np.ndarray
    iterations: int
    last_delta: float
    delta_history: np.ndarray
    theta_bound: float
    n_modes: int

    def final(self) -> np.ndarray:
        return self.values[-1]


def _default_m_bound(spec: ProblemSpec, eps: float, t_span: float) -> float:
    from .barriers import build_exp_supersolution

    xs = np.linspace(0.0, 1.0, 257)
    m0 = float(np.max(np.asarray(spec.u0(xs)))) + eps
    barrier = build_exp_supersolution(spec, m0=max(m0, eps), horizon=t_span)
    return barrier.sup_bound(t_span)


def picard_solve(
    spec: ProblemSpec,
    grid: SpatialGrid,
    t0: float,
    t_end: float,
    n_sub: int,
    eps: float,
    initial_state: np.ndarray | None = None,
    m_bound: float | None = None,
    n_modes: int | None = None,
    tol: float = 1e-10,
    max_iter: int = 200,
    require_contraction: bool = True,
) -> PicardResult:
    """Picard-iterate the Duhamel representation on the slab [t0, t_end] with
    n_sub uniform source sub-intervals. initial_state defaults to the lifted
    datum u0 + eps; m_bound defaults to an exponential supersolution bound."""
    if t_end <= t0:
        raise ConfigError(f"slab [{t0}, {t_end}] is empty")
    if n_sub < 1:
        raise ConfigError(f"n_sub must be >= 1, got {n_sub}")
    if eps <= 0.0:
        raise ConfigError(
            f"picard_solve works on the regularized problem and needs eps > 0, got {eps}"
        )
    delta_t = (t_end - t0) / n_sub
    n_nodes = grid.n_nodes
    if initial_state is None:
        initial_state = regularize_initial(spec, grid, eps)
    initial_state = np.asarray(initial_state, dtype=float)
    if m_bound is None:
        m_bound = _default_m_bound(spec, eps, t_end - t0)
    theta = contraction_estimate(spec, eps, m_bound, t_end - t0)
    if require_contraction and not theta < 1.0:
        raise ContractionError(
            f"contraction bound {theta:.3f} >= 1 on slab length {t_end - t0:.3e}; "
            "use shorter slabs (picard_chain) or supply a tighter m_bound"
        )

    m_eff = min(n_modes if n_modes is not None else 64, grid.n_cells - 1)
    # high-mode boundary tail for the most recent sub-interval must be
    # essentially saturated beyond the retained modes
    if (m_eff + 1) ** 2 * math.pi**2 * delta_t < 3.0:
        raise ConfigError(
            "sub-interval too short for the retained mode count; increase n_modes "
            "or use fewer sub-intervals per slab"
        )

    nodes = grid.nodes
    modes = np.arange(m_eff + 1)
    lam = (modes * np.pi) ** 2
    cos_mat = np.cos(np.pi * np.outer(modes, nodes))  # (M+1, n_nodes)
    analysis_scale = np.where(modes == 0, 1.0, 2.0)
    analysis = analysis_scale[:, None] * (cos_mat * grid.quad_weights[None, :])
    decay = np.exp(-lam * delta_t)
    with np.errstate(divide="ignore", invalid="ignore"):
        w_last = np.where(lam > 0.0, (1.0 - decay) / np.where(lam > 0.0, lam, 1.0), delta_t)
    sign_right = np.where(modes % 2 == 0, 1.0, -1.0)

    # boundary tail beyond m_eff for the most recent sub-interval: explicit
    # modes until lam*delta_t >= 40, analytic saturated remainder after that
    m_sat = max(m_eff + 1, math.ceil(math.sqrt(40.0 / delta_t) / math.pi))
    extra = np.arange(m_eff + 1, m_sat + 1)
    lam_x = (extra * np.pi) ** 2
    w_extra = (1.0 - np.exp(-lam_x * delta_t)) / lam_x
    cos_x = np.cos(np.pi * np.outer(extra, nodes))
    sgn_x = np.where(extra % 2 == 0, 1.0, -1.0)
    poly = 1.0 / 6.0 - nodes / 2.0 + nodes**2 / 4.0
    all_m = np.arange(1, m_sat + 1)
    partial_left = np.cos(np.pi * np.outer(all_m, nodes)) / (all_m**2 * np.pi**2)[:, None]
    tail_left = 2.0 * (poly - partial_left.sum(axis=0)) + 2.0 * (w_extra[:, None] * cos_x).sum(
        axis=0
    )
    poly_r = 1.0 / 6.0 - (1.0 - nodes) / 2.0 + (1.0 - nodes) ** 2 / 4.0
    partial_right = (
        np.cos(np.pi * np.outer(all_m, 1.0 - nodes)) / (all_m**2 * np.pi**2)[:, None]
    )
    tail_right = 2.0 * (poly_r - partial_right.sum(axis=0)) + 2.0 * (
        (w_extra * sgn_x)[:, None] * cos_x
    ).sum(axis=0)

    times = t0 + delta_t * np.arange(n_sub + 1)
    u0_hat = analysis @ initial_state
    c_rows = np.vstack([np.asarray(spec.c(nodes, t), dtype=float) for t in times])
    k_rows = [
        (
            np.asarray(spec.k(0, nodes, t), dtype=float),
            np.asarray(spec.k(1, nodes, t), dtype=float),
        )
        for t in times
    ]
    eps_p = positive_power(eps, spec.p)

    u = np.tile(initial_state, (n_sub + 1, 1))
    delta = math.inf
    growth_streak = 0
    prev_delta = math.inf
    iterations = 0
    deltas = []
    for iterations in range(1, max_iter + 1):
        source_hat = np.empty((n_sub + 1, m_eff + 1))
        flux = np.empty((n_sub + 1, 2))
        for j in range(n_sub + 1):
            up = positive_power(u[j], spec.p)
            ul = positive_power(u[j], spec.l)
            source_hat[j] = analysis @ (c_rows[j] * (eps_p - up))
            flux[j, 0] = integrate(grid, k_rows[j][0] * ul)
            flux[j, 1] = integrate(grid, k_rows[j][1] * ul)
        new = np.empty_like(u)
        new[0] = initial_state
        conv = np.zeros(m_eff + 1)
        for n in range(1, n_sub + 1):
            s_mid = 0.5 * (source_hat[n - 1] + source_hat[n])
            g_mid = 0.5 * (flux[n - 1] + flux[n])
            q = w_last * (
                s_mid + analysis_scale * (g_mid[0] + sign_right * g_mid[1])
            )
            conv = decay * conv + q
            coef = decay**n * u0_hat + conv
            new[n] = cos_mat.T @ coef + tail_left * g_mid[0] + tail_right * g_mid[1]
        delta = float(np.max(np.abs(new - u)))
        deltas.append(delta)
        u = new
        if delta < tol:
            break
        if float(np.max(np.abs(u))) > 1.05 * m_bound:
            raise ContractionError(
                f"Picard iterate escaped the assumed bound {m_bound:.3g}"
            )
        if delta > prev_delta:
            growth_streak += 1
            if growth_streak >= 3:
                raise ContractionError(
                    f"Picard increments grew 3 times in a row (last {delta:.3e})"
                )
        else:
            growth_streak = 0
        prev_delta = delta

    return PicardResult(
        times=times,
        values=u,
        iterations=iterations,
        last_delta=delta,
        delta_history=np.asarray(deltas),
        theta_bound=theta,
        n_modes=m_eff,
    )


def picard_chain(
    spec: ProblemSpec,
    grid: SpatialGrid,
    t_end: float,
    n_slabs: int,
    n_sub: int,
    eps: float,
    m_bound: float | None = None,
    n_modes: int | None = None,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> PicardResult:
    """Chain picard_solve over n_slabs equal slabs covering [0, t_end], each
    restarted from the previous slab's final state."""
    if n_slabs < 1:
        raise ConfigError(f"n_slabs must be >= 1, got {n_slabs}")
    edges = np.linspace(0.0, t_end, n_slabs + 1)
    if m_bound is None:
        m_bound = _default_m_bound(spec, eps, t_end)
    state = regularize_initial(spec, grid, eps)
    all_times = [np.array([0.0])]
    all_values = [state[None, :]]
    total_iters = 0
    worst_delta = 0.0
    worst_theta = 0.0
    last_modes = 0
    for s in range(n_slabs):
        res = picard_solve(
            spec,
            grid,
            float(edges[s]),
            float(edges[s + 1]),
            n_sub,
            eps,
            initial_state=state,
            m_bound=m_bound,
            n_modes=n_modes,
            tol=tol,
            max_iter=max_iter,
        )
        state = res.final()
        all_times.append(res.times[1:])
        all_values.append(res.values[1:])
        total_iters += res.iterations
        worst_delta = max(worst_delta, res.last_delta)
        worst_theta = max(worst_theta, res.theta_bound)
        last_modes = res.n_modes
        last_history = res.delta_history
    return PicardResult(
        times=np.concatenate(all_times),
        values=np.vstack(all_values),
        iterations=total_iters,
        last_delta=worst_delta,
        delta_history=last_history,
        theta_bound=worst_theta,
        n_modes=last_modes,
    )

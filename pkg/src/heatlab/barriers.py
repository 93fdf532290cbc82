"""Analytic barrier families (sub- and supersolutions) and their numerical
certification.

All families are symmetric in s = min(x, 1-x) and vanish outside a layer at
the two boundary points (except the exponential bound, which lives on the
whole interval). Builders validate the defining inequalities with named
errors; classify_candidate independently samples the interior residual

    R = u_t - u_xx + c (u_+)^p

and the boundary defect

    D = du/dnu - integral k (u_+)^l dy

of the limit problem and assigns a verdict (subsolution needs R <= 0 and
D <= 0; supersolution needs both >= 0; a strict supersolution additionally
needs D strictly positive). The zero-extension of every family is exact for
the limit problem, so sampling is restricted to the support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import CertificationSearchError, ConfigError, ConstructionError
from .problem import ProblemSpec, positive_power


_GL_NODES, _GL_WEIGHTS = leggauss(64)


def _fold(x: np.ndarray) -> np.ndarray:
    """Distance to the nearest endpoint, s = min(x, 1-x)."""
    return np.minimum(x, 1.0 - x)


def _sample_max(values) -> float:
    return float(np.max(np.asarray(values)))


def _sample_min(values) -> float:
    return float(np.min(np.asarray(values)))


def _coeff_bounds(spec: ProblemSpec, t_lo: float, t_hi: float, n: int = 129):
    """Sampled bounds (c_min, c_max, k_min, k_max) on the time window."""
    xs = np.linspace(0.0, 1.0, n)
    ts = np.linspace(t_lo, t_hi, 17)
    c_vals = [np.asarray(spec.c(xs, t)) for t in ts]
    k_vals = [np.asarray(spec.k(end, xs, t)) for t in ts for end in (0, 1)]
    return (
        min(_sample_min(v) for v in c_vals),
        max(_sample_max(v) for v in c_vals),
        min(_sample_min(v) for v in k_vals),
        max(_sample_max(v) for v in k_vals),
    )


class BarrierCandidate:
    """Interface shared by the analytic families. Implementations provide
    exact values and derivatives plus the support geometry per time."""

    family: str = "abstract"
    window: tuple[float, float] = (0.0, 0.0)

    def value(self, x: np.ndarray, t: float) -> np.ndarray:
        raise NotImplementedError

    def time_derivative(self, x: np.ndarray, t: float) -> np.ndarray:
        raise NotImplementedError

    def second_space_derivative(self, x: np.ndarray, t: float) -> np.ndarray:
        raise NotImplementedError

    def normal_derivative(self, end: int, t: float) -> float:
        raise NotImplementedError

    def support(self, t: float) -> list[tuple[float, float]]:
        raise NotImplementedError

    def sample_times(self, n: int) -> np.ndarray:
        t0, t1 = self.window
        return np.linspace(t0, t1, n)


@dataclass
class ZeroCandidate(BarrierCandidate):
    """The identically-zero state; a solution of the limit problem."""

    horizon: float
    family: str = "zero"

    def __post_init__(self) -> None:
        self.window = (0.0, self.horizon)

    def value(self, x, t):
        return np.zeros_like(np.asarray(x, dtype=float))

    def time_derivative(self, x, t):
        return np.zeros_like(np.asarray(x, dtype=float))

    def second_space_derivative(self, x, t):
        return np.zeros_like(np.asarray(x, dtype=float))

    def normal_derivative(self, end, t):
        return 0.0

    def support(self, t):
        return []


@dataclass
class ExpSupersolution(BarrierCandidate):
    """w(x,t) = m0 * exp(2 B t) * (1 + B (x - 1/2)^2), an a-priori upper
    bound growing exponentially; valid on [0, horizon]."""

    m0: float
    growth: float
    horizon: float
    family: str = "exp_super"

    def __post_init__(self) -> None:
        self.window = (0.0, self.horizon)

    def _psi(self, x):
        return 1.0 + self.growth * (np.asarray(x, dtype=float) - 0.5) ** 2

    def value(self, x, t):
        return self.m0 * math.exp(2.0 * self.growth * t) * self._psi(x)

    def time_derivative(self, x, t):
        return 2.0 * self.growth * self.value(x, t)

    def second_space_derivative(self, x, t):
        shape = np.ones_like(np.asarray(x, dtype=float))
        return self.m0 * math.exp(2.0 * self.growth * t) * 2.0 * self.growth * shape

    def normal_derivative(self, end, t):
        return self.m0 * self.growth * math.exp(2.0 * self.growth * t)

    def support(self, t):
        return [(0.0, 1.0)]

    def sup_bound(self, t: float) -> float:
        """Certified sup bound at time t <= horizon."""
        return self.m0 * math.exp(2.0 * self.growth * t) * (1.0 + self.growth / 4.0)


@dataclass
class LayerSubsolution(BarrierCandidate):
    """u(x,t) = A sigma^alpha (xi0 - s/sqrt(sigma))_+^beta with
    sigma = t - t_start; zero for t <= t_start. Grows out of nothing at the
    two boundary points, witnessing a nontrivial solution above zero data."""

    amplitude: float
    xi0: float
    alpha: float
    beta: float
    t_start: float
    t_window: float
    family: str = "layer_sub"

    def __post_init__(self) -> None:
        self.window = (self.t_start, self.t_start + self.t_window)

    def _tau(self, x, t):
        sigma = t - self.t_start
        if sigma <= 0.0:
            return np.zeros_like(np.asarray(x, dtype=float)), 0.0
        return np.maximum(self.xi0 - _fold(np.asarray(x, dtype=float)) / math.sqrt(sigma), 0.0), sigma

    def value(self, x, t):
        tau, sigma = self._tau(x, t)
        if sigma <= 0.0:
            return tau
        return self.amplitude * sigma**self.alpha * tau**self.beta

    def time_derivative(self, x, t):
        tau, sigma = self._tau(x, t)
        if sigma <= 0.0:
            return tau
        s = _fold(np.asarray(x, dtype=float))
        a, al, be = self.amplitude, self.alpha, self.beta
        on = tau > 0.0
        out = np.zeros_like(tau)
        out[on] = (
            al * a * sigma ** (al - 1.0) * tau[on] ** be
            + 0.5 * be * a * s[on] * sigma ** (al - 1.5) * tau[on] ** (be - 1.0)
        )
        return out

    def second_space_derivative(self, x, t):
        tau, sigma = self._tau(x, t)
        if sigma <= 0.0:
            return tau
        a, al, be = self.amplitude, self.alpha, self.beta
        on = tau > 0.0
        out = np.zeros_like(tau)
        out[on] = be * (be - 1.0) * a * sigma ** (al - 1.0) * tau[on] ** (be - 2.0)
        return out

    def normal_derivative(self, end, t):
        sigma = t - self.t_start
        if sigma <= 0.0:
            return 0.0
        return (
            self.beta
            * self.amplitude
            * sigma ** (self.alpha - 0.5)
            * self.xi0 ** (self.beta - 1.0)
        )

    def support(self, t):
        sigma = t - self.t_start
        if sigma <= 0.0:
            return []
        edge = min(self.xi0 * math.sqrt(sigma), 0.5 - 1e-12)
        return [(0.0, edge), (1.0 - edge, 1.0)]

    def sample_times(self, n: int) -> np.ndarray:
        # margins degenerate at sigma -> 0, so sample geometrically toward it
        sigmas = np.geomspace(self.t_window * 1e-8, self.t_window, n)
        return self.t_start + sigmas


@dataclass
class StrictSupersolution(BarrierCandidate):
    """Static profile u(x) = eps * A * (xi0 - eps^-gamma s)_+^(1/gamma); a
    supersolution family whose sup scales linearly in eps, witnessing that
    only the trivial solution can sit below it."""

    eps: float
    amplitude: float
    xi0: float
    gamma: float
    horizon: float
    family: str = "strict_super"

    def __post_init__(self) -> None:
        self.window = (0.0, self.horizon)

    def _tau(self, x):
        return np.maximum(
            self.xi0 - self.eps ** (-self.gamma) * _fold(np.asarray(x, dtype=float)), 0.0
        )

    def value(self, x, t):
        return self.eps * self.amplitude * self._tau(x) ** (1.0 / self.gamma)

    def time_derivative(self, x, t):
        return np.zeros_like(np.asarray(x, dtype=float))

    def second_space_derivative(self, x, t):
        tau = self._tau(x)
        g = self.gamma
        on = tau > 0.0
        out = np.zeros_like(tau)
        out[on] = (
            self.amplitude
            * (1.0 / g)
            * (1.0 / g - 1.0)
            * self.eps ** (1.0 - 2.0 * g)
            * tau[on] ** (1.0 / g - 2.0)
        )
        return out

    def normal_derivative(self, end, t):
        g = self.gamma
        return (
            (self.amplitude / g)
            * self.eps ** (1.0 - g)
            * self.xi0 ** (1.0 / g - 1.0)
        )

    def support(self, t):
        edge = self.eps**self.gamma * self.xi0
        return [(0.0, edge), (1.0 - edge, 1.0)]

    def sup_value(self) -> float:
        return self.eps * self.amplitude * self.xi0 ** (1.0 / self.gamma)


@dataclass
class ExtinctionBarrier(BarrierCandidate):
    """u(x,t) = eps * A * (xi0 - eps^-gamma s - mu t)_+^(1/gamma); its support
    collapses at t = xi0 / mu, certifying extinction in finite time."""

    eps: float
    xi0: float
    gamma: float
    mu: float
    horizon: float
    amplitude: float = 1.0
    family: str = "extinction_barrier"

    def __post_init__(self) -> None:
        self.window = (0.0, self.horizon)

    @property
    def extinction_time(self) -> float:
        return self.xi0 / self.mu

    def _tau(self, x, t):
        return np.maximum(
            self.xi0 - self.eps ** (-self.gamma) * _fold(np.asarray(x, dtype=float)) - self.mu * t,
            0.0,
        )

    def value(self, x, t):
        return self.eps * self.amplitude * self._tau(x, t) ** (1.0 / self.gamma)

    def time_derivative(self, x, t):
        tau = self._tau(x, t)
        on = tau > 0.0
        out = np.zeros_like(tau)
        out[on] = (
            -self.eps * self.amplitude * (self.mu / self.gamma) * tau[on] ** (1.0 / self.gamma - 1.0)
        )
        return out

    def second_space_derivative(self, x, t):
        tau = self._tau(x, t)
        g = self.gamma
        on = tau > 0.0
        out = np.zeros_like(tau)
        out[on] = (
            self.amplitude
            * (1.0 / g)
            * (1.0 / g - 1.0)
            * self.eps ** (1.0 - 2.0 * g)
            * tau[on] ** (1.0 / g - 2.0)
        )
        return out

    def normal_derivative(self, end, t):
        head = max(self.xi0 - self.mu * t, 0.0)
        if head == 0.0:
            return 0.0
        g = self.gamma
        return (self.amplitude / g) * self.eps ** (1.0 - g) * head ** (1.0 / g - 1.0)

    def support(self, t):
        head = self.xi0 - self.mu * t
        if head <= 0.0:
            return []
        edge = self.eps**self.gamma * head
        return [(0.0, edge), (1.0 - edge, 1.0)]


def _psi_integral(growth: float, l: float) -> float:
    """integral over (0,1) of (1 + B (y-1/2)^2)^l by Gauss quadrature."""
    ys = 0.5 + 0.5 * _GL_NODES
    return 0.5 * float(np.sum(_GL_WEIGHTS * (1.0 + growth * (ys - 0.5) ** 2) ** l))


def build_exp_supersolution(
    spec: ProblemSpec, m0: float, horizon: float, eps: float = 0.0
) -> ExpSupersolution:
    """Pick a growth rate B closing both inequalities for
    w = m0 e^{2Bt}(1 + B(x-1/2)^2): the interior holds for any B > 0 (and for
    the eps-shifted absorption whenever m0 >= eps); the boundary requires the
    normal derivative B to dominate a * integral (1 + B(y-1/2)^2)^l dy with
    a = k_max m0^{l-1} max(1, e^{l-1}), both sides per unit of the shared
    amplitude factor. B is found by monotone doubling from 1; the certified
    window is capped at min(1/(2B), 1)."""
    if m0 <= 0.0:
        raise ConstructionError(f"initial bound m0 must be positive, got {m0}")
    if eps > 0.0 and m0 < eps:
        raise ConstructionError(
            f"m0={m0} < eps={eps}: the shifted absorption inequality needs m0 >= eps"
        )
    _, _, _, k_max = _coeff_bounds(spec, 0.0, max(horizon, 1.0))
    if k_max < 0.0:
        raise ConstructionError("boundary kernel must be nonnegative")
    l = spec.l
    a = k_max * m0 ** (l - 1.0) * max(1.0, math.exp(l - 1.0))
    # doubling suffices for l <= 1 (the feasible set is an upward ray);
    # for l > 1 it is a bounded window, so refine with a geometric ladder
    candidates = [2.0**j for j in range(0, 41)]
    if l > 1.0:
        candidates = sorted(set(candidates + [2.0 ** (j / 8.0) for j in range(0, 321)]))
    growth = None
    for b in candidates:
        if b >= a * _psi_integral(b, l):
            growth = b
            break
    if growth is None:
        raise ConstructionError(
            f"boundary feasibility B >= a * integral(psi^l) has no root for "
            f"a={a:.3g}, l={l}; no quadratic-profile exponential bound exists here"
        )
    valid = min(horizon, 1.0 / (2.0 * growth), 1.0)
    return ExpSupersolution(m0=m0, growth=growth, horizon=valid)


def apriori_sup_bound(spec: ProblemSpec, m0: float, t_span: float, eps: float = 0.0) -> float:
    """Sup bound at t_span, chaining exponential bounds across their validity
    windows when the boundary exponent exceeds 1."""
    remaining = t_span
    bound = m0
    for _ in range(200):
        barrier = build_exp_supersolution(spec, bound, remaining, eps=eps)
        step = min(remaining, barrier.horizon)
        bound = barrier.sup_bound(step)
        remaining -= step
        if remaining <= 1e-15:
            return bound
    raise ConstructionError(
        f"a-priori bound did not reach t={t_span} in 200 windows (last bound {bound:.3g})"
    )


def build_layer_subsolution(
    spec: ProblemSpec,
    amplitude: float,
    xi0: float,
    alpha: float,
    beta: float,
    t_start: float = 0.0,
    t_window: float = 0.1,
) -> LayerSubsolution:
    """Validate and build the boundary-layer subsolution. The checks mirror
    the closure argument: exponent windows, support geometry, boundary flux
    inequality at the worst time, and the interior inequality on a dense
    profile grid."""
    p, l = spec.p, spec.l
    if not l < 1.0:
        raise ConstructionError(f"layer construction needs boundary exponent l < 1, got l={l}")
    tol = 1e-9
    matched = abs(p - l) <= 1e-12
    lo_a = 1.0 / (1.0 - l)
    hi_a = 1.0 / (1.0 - p) if p < 1.0 else math.inf
    # the window is open at its left edge (alpha > 1/(1-l)) and, for p < 1,
    # closed at 1/(1-p); when p == l it collapses to the single matched point
    if matched:
        if abs(alpha - lo_a) > tol * max(1.0, lo_a):
            raise ConstructionError(
                f"alpha={alpha} must equal 1/(1-l)={lo_a:.6g} when p == l"
            )
    elif not (alpha > lo_a + tol and alpha <= hi_a + tol):
        raise ConstructionError(
            f"alpha={alpha} outside the window (1/(1-l), 1/(1-p)] = ({lo_a:.6g}, {hi_a:.6g}]"
        )
    hi_b = 2.0 / (1.0 - p) if p < 1.0 else math.inf
    if not beta > 2.0 + tol:
        raise ConstructionError(f"beta={beta} must exceed 2")
    # for p < 1 the window is open at 2/(1-p), except that the matched case
    # p == l admits that endpoint exactly
    if p < 1.0:
        at_edge = abs(beta - hi_b) <= tol * max(1.0, hi_b)
        if beta > hi_b + tol or (at_edge and not matched):
            raise ConstructionError(
                f"beta={beta} outside the window (2, 2/(1-p)) = (2, {hi_b:.6g})"
            )
    if amplitude <= 0.0 or xi0 <= 0.0 or t_window <= 0.0 or t_start < 0.0:
        raise ConstructionError("amplitude, xi0, t_window must be positive, t_start >= 0")
    if xi0 * math.sqrt(t_window) >= 0.5:
        raise ConstructionError(
            f"support reaches the midpoint: xi0*sqrt(t_window)={xi0 * math.sqrt(t_window):.4g} >= 1/2"
        )

    c_min, c_max, k_min, k_max = _coeff_bounds(spec, t_start, t_start + t_window)
    if k_min <= 0.0:
        raise ConstructionError(
            f"boundary kernel must be strictly positive on the window (min {k_min:.3g})"
        )

    # boundary: beta xi0^(beta-1) sigma^g <= 2 k_min A^(l-1) xi0^(beta l + 1)/(beta l + 1),
    # g = alpha (1-l) - 1 >= 0, worst at sigma = t_window
    g = alpha * (1.0 - l) - 1.0
    lhs = beta * xi0 ** (beta - 1.0) * t_window ** max(g, 0.0)
    rhs = 2.0 * k_min * amplitude ** (l - 1.0) * xi0 ** (beta * l + 1.0) / (beta * l + 1.0)
    if lhs > rhs:
        raise ConstructionError(
            f"boundary flux inequality fails: normal-derivative side {lhs:.4g} exceeds "
            f"flux side {rhs:.4g}; shrink t_window or xi0, or lower the amplitude"
        )

    # interior: alpha tau^2 + (beta/2)(xi0 - tau) tau
    #           + c_max A^(p-1) T^e tau^(beta p - beta + 2) <= beta (beta - 1)
    e = alpha * (p - 1.0) + 1.0
    q = beta * p - beta + 2.0
    taus = np.linspace(0.0, xi0, 8193)
    profile = (
        alpha * taus**2
        + 0.5 * beta * (xi0 - taus) * taus
        + c_max * amplitude ** (p - 1.0) * t_window**e * taus**q
    )
    worst = float(np.max(profile)) - beta * (beta - 1.0)
    if worst > 0.0:
        raise ConstructionError(
            f"interior inequality fails by {worst:.4g}; shrink xi0 or t_window"
        )
    return LayerSubsolution(
        amplitude=amplitude, xi0=xi0, alpha=alpha, beta=beta, t_start=t_start, t_window=t_window
    )


def build_strict_supersolution(
    spec: ProblemSpec,
    eps: float,
    amplitude: float,
    xi0: float,
    gamma: float,
    horizon: float,
) -> StrictSupersolution:
    """Validate and build the static strict supersolution. gamma must lie in
    [(1-l)/2, (1-p)/2] (a single point when p == l); the support width
    eps^gamma * xi0 must stay below 1/2; the interior inequality
    c (u)^p >= u_ss and the strict boundary inequality are checked with the
    sampled coefficient bounds."""
    p, l = spec.p, spec.l
    if not l < 1.0:
        raise ConstructionError(f"construction needs l < 1, got l={l}")
    if p > l + 1e-12:
        raise ConstructionError(f"construction needs p <= l, got p={p} > l={l}")
    g_lo, g_hi = (1.0 - l) / 2.0, (1.0 - p) / 2.0
    tol = 1e-9
    if abs(p - l) <= 1e-12:
        # the window collapses; only the matched exponent remains admissible
        if abs(gamma - g_lo) > tol:
            raise ConstructionError(
                f"gamma={gamma} must equal (1-l)/2={g_lo:.6g} when p == l"
            )
    elif not (g_lo + tol < gamma < g_hi - tol):
        raise ConstructionError(
            f"gamma={gamma} outside the open window ((1-l)/2, (1-p)/2) = "
            f"({g_lo:.6g}, {g_hi:.6g})"
        )
    if not 0.0 < eps < 1.0:
        raise ConstructionError(f"eps must lie in (0, 1), got {eps}")
    if amplitude <= 0.0 or xi0 <= 0.0 or horizon <= 0.0:
        raise ConstructionError("amplitude, xi0, horizon must be positive")
    if eps**gamma * xi0 >= 0.5:
        raise ConstructionError(
            f"support reaches the midpoint: eps^gamma*xi0={eps ** gamma * xi0:.4g} >= 1/2"
        )
    c_min, _, _, k_max = _coeff_bounds(spec, 0.0, horizon)
    if c_min <= 0.0:
        raise ConstructionError(
            f"absorption coefficient must be strictly positive (min {c_min:.3g})"
        )

    # interior: c_min eps^p A^p tau^(p/g) >= ((1-g)/g^2) A eps^(1-2g) tau^(1/g-2);
    # worst at tau = xi0 since the ratio falls with tau
    lhs_int = c_min * eps**p * amplitude**p * xi0 ** (p / gamma)
    rhs_int = (
        ((1.0 - gamma) / gamma**2)
        * amplitude
        * eps ** (1.0 - 2.0 * gamma)
        * xi0 ** (1.0 / gamma - 2.0)
    )
    if lhs_int < rhs_int:
        raise ConstructionError(
            f"interior inequality fails: absorption side {lhs_int:.4g} below curvature "
            f"side {rhs_int:.4g}; lower the amplitude or xi0"
        )

    # boundary, strictly: (A/g) eps^(1-g) xi0^(1/g-1) > 2 k_max A^l eps^(l+g)
    #                     xi0^(l/g+1) / (l/g+1)
    lhs_b = (amplitude / gamma) * eps ** (1.0 - gamma) * xi0 ** (1.0 / gamma - 1.0)
    rhs_b = (
        2.0
        * k_max
        * amplitude**l
        * eps ** (l + gamma)
        * xi0 ** (l / gamma + 1.0)
        / (l / gamma + 1.0)
    )
    if not lhs_b > rhs_b:
        raise ConstructionError(
            f"strict boundary inequality fails: normal derivative {lhs_b:.4g} does not "
            f"exceed the flux bound {rhs_b:.4g}; raise the amplitude"
        )
    return StrictSupersolution(
        eps=eps, amplitude=amplitude, xi0=xi0, gamma=gamma, horizon=horizon
    )


def build_extinction_barrier(
    spec: ProblemSpec,
    eps: float,
    xi0: float,
    gamma: float,
    mu: float,
    horizon: float,
    amplitude: float = 1.0,
) -> ExtinctionBarrier:
    """Validate and build the shrinking-support supersolution. On top of the
    static construction's requirements, the absorption must also pay for the
    inward motion of the support edge (the mu term)."""
    p, l = spec.p, spec.l
    if not l < 1.0 or p > l + 1e-12:
        raise ConstructionError(f"construction needs p <= l < 1, got p={p}, l={l}")
    g_lo, g_hi = (1.0 - l) / 2.0, (1.0 - p) / 2.0
    tol = 1e-9
    if abs(p - l) <= 1e-12:
        if abs(gamma - g_lo) > tol:
            raise ConstructionError(
                f"gamma={gamma} must equal (1-l)/2={g_lo:.6g} when p == l"
            )
    elif not (g_lo + tol < gamma < g_hi - tol):
        raise ConstructionError(
            f"gamma={gamma} outside the open window ((1-l)/2, (1-p)/2) = "
            f"({g_lo:.6g}, {g_hi:.6g})"
        )
    if not 0.0 < eps < 1.0:
        raise ConstructionError(f"eps must lie in (0, 1), got {eps}")
    if min(xi0, gamma, mu, horizon, amplitude) <= 0.0:
        raise ConstructionError("xi0, gamma, mu, horizon, amplitude must be positive")
    if eps**gamma * xi0 >= 0.5:
        raise ConstructionError(
            f"support reaches the midpoint: eps^gamma*xi0={eps ** gamma * xi0:.4g} >= 1/2"
        )
    c_min, _, _, k_max = _coeff_bounds(spec, 0.0, horizon)
    if c_min <= 0.0:
        raise ConstructionError(
            f"absorption coefficient must be strictly positive (min {c_min:.3g})"
        )

    # interior with the moving edge: on a dense tau grid up to xi0,
    # c_min eps^p A^p tau^(p/g) >= ((1-g)/g^2) A eps^(1-2g) tau^(1/g-2)
    #                              + (mu/g) eps A tau^(1/g-1)
    taus = np.linspace(0.0, xi0, 8193)[1:]
    lhs = c_min * eps**p * amplitude**p * taus ** (p / gamma)
    rhs = ((1.0 - gamma) / gamma**2) * amplitude * eps ** (1.0 - 2.0 * gamma) * taus ** (
        1.0 / gamma - 2.0
    ) + (mu / gamma) * eps * amplitude * taus ** (1.0 / gamma - 1.0)
    gap = float(np.min(lhs - rhs))
    if gap < 0.0:
        raise ConstructionError(
            f"interior inequality fails by {-gap:.4g}; raise the absorption floor, "
            "lower mu, or shrink xi0"
        )

    # boundary on the shrinking head tau0(t) = xi0 - mu t, worst at t = 0
    heads = np.linspace(0.0, xi0, 1025)[1:]
    lhs_b = (amplitude / gamma) * eps ** (1.0 - gamma) * heads ** (1.0 / gamma - 1.0)
    rhs_b = (
        2.0
        * k_max
        * amplitude**l
        * eps ** (l + gamma)
        * heads ** (l / gamma + 1.0)
        / (l / gamma + 1.0)
    )
    gap_b = float(np.min(lhs_b - rhs_b))
    if gap_b < 0.0:
        raise ConstructionError(
            f"boundary inequality fails by {-gap_b:.4g} on the shrinking head"
        )
    return ExtinctionBarrier(
        eps=eps, xi0=xi0, gamma=gamma, mu=mu, horizon=horizon, amplitude=amplitude
    )


def layer_amplitude_window(
    spec: ProblemSpec,
    xi0: float,
    t_window: float,
    t_start: float = 0.0,
    alpha: float | None = None,
    beta: float | None = None,
) -> tuple[float, float]:
    """Amplitude window [A_lo, A_hi] for the layer subsolution at the given
    exponents (defaults: the matched endpoints alpha = 1/(1-l),
    beta = 2/(1-l)). Raises ConstructionError when the window is empty."""
    p, l = spec.p, spec.l
    if not (l < 1.0 and p < 1.0):
        raise ConstructionError("amplitude window needs p < 1 and l < 1")
    if alpha is None:
        alpha = 1.0 / (1.0 - l)
    if beta is None:
        beta = 2.0 / (1.0 - l)
    c_min, c_max, k_min, k_max = _coeff_bounds(spec, t_start, t_start + t_window)
    if k_min <= 0.0:
        raise ConstructionError("boundary kernel must be strictly positive")
    taus = np.linspace(0.0, xi0, 8193)
    drift = float(np.max(alpha * taus**2 + 0.5 * beta * (xi0 - taus) * taus))
    margin = beta * (beta - 1.0) - drift
    if margin <= 0.0:
        raise ConstructionError(
            f"interior margin {margin:.4g} <= 0 at xi0={xi0}; shrink xi0"
        )
    e = alpha * (p - 1.0) + 1.0
    q = beta * p - beta + 2.0
    a_lo = (c_max * t_window**e * xi0**q / margin) ** (1.0 / (1.0 - p))
    g = alpha * (1.0 - l) - 1.0
    a_hi = (
        2.0
        * k_min
        * xi0 ** (beta * l + 2.0 - beta)
        / (t_window ** max(g, 0.0) * beta * (beta * l + 1.0))
    ) ** (1.0 / (1.0 - l))
    if a_lo > a_hi:
        raise ConstructionError(
            f"amplitude window empty: interior needs A >= {a_lo:.4g} but the boundary "
            f"allows at most {a_hi:.4g}"
        )
    return a_lo, a_hi


def strict_amplitude_window(spec: ProblemSpec, gamma: float, horizon: float) -> tuple[float, float]:
    """Amplitude window (A_lo, A_hi] for the static strict supersolution at
    the matched exponent gamma = (1-l)/2: the boundary needs
    A^(1-l) > 2 k_max gamma^2/(l+gamma), the interior allows
    A^(1-l) <= c_min gamma^2/(1-gamma)."""
    l = spec.l
    c_min, _, _, k_max = _coeff_bounds(spec, 0.0, horizon)
    if c_min <= 0.0:
        raise ConstructionError("absorption coefficient must be strictly positive")
    lo = (2.0 * k_max * gamma**2 / (l + gamma)) ** (1.0 / (1.0 - l))
    hi = (c_min * gamma**2 / (1.0 - gamma)) ** (1.0 / (1.0 - l))
    if not lo < hi:
        raise ConstructionError(
            f"amplitude window empty: boundary needs A > {lo:.4g} but the interior "
            f"allows at most {hi:.4g}"
        )
    return lo, hi


@dataclass
class ResidualReport:
    """Sampled margins of a candidate against the limit problem.

    boundary_gap_0 / boundary_gap_1 hold (min, max) of the boundary defect at
    each endpoint over the sampled times; margin is the smallest slack of the
    inequalities that certify the verdict (negative for 'neither')."""

    family: str
    verdict: str
    interior_min: float
    interior_max: float
    boundary_min: float
    boundary_max: float
    boundary_gap_0: tuple[float, float]
    boundary_gap_1: tuple[float, float]
    initial_above: float
    initial_below: float
    margin: float
    n_space: int
    n_time: int
    tol: float
    strict_margin: float
    window: tuple[float, float]


def certifies_subsolution(report: "ResidualReport") -> bool:
    return report.verdict in ("subsolution", "solution")


def certifies_supersolution(report: "ResidualReport") -> bool:
    return report.verdict in ("supersolution", "strict_supersolution", "solution")


def _flux_integral(spec: ProblemSpec, candidate: BarrierCandidate, end: int, t: float) -> float:
    """integral k(end, y, t) * candidate(y, t)^l dy by per-piece Gauss
    quadrature over the support (the integrand vanishes elsewhere)."""
    total = 0.0
    for lo, hi in candidate.support(t):
        if hi <= lo:
            continue
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        ys = mid + half * _GL_NODES
        vals = positive_power(candidate.value(ys, t), spec.l)
        total += half * float(
            np.sum(_GL_WEIGHTS * np.asarray(spec.k(end, ys, t), dtype=float) * vals)
        )
    return total


def classify_candidate(
    spec: ProblemSpec,
    candidate: BarrierCandidate,
    grid=None,
    times=None,
    n_space: int = 257,
    n_time: int = 33,
    tol: float = 1e-10,
    strict_margin: float = 0.0,
) -> ResidualReport:
    """Sample the interior residual and boundary defect of the limit problem
    over the candidate's support and classify it.

    subsolution: R <= tol and D <= tol everywhere sampled;
    supersolution: R >= -tol and D >= -tol;
    strict_supersolution: supersolution with min D > strict_margin;
    solution: both directions hold; neither: none of the above.

    Passing a grid raises the per-piece sampling density to at least four
    points per solver cell; passing explicit times overrides the candidate's
    own (possibly nonuniform) time sampling.
    """
    if grid is not None:
        n_space = max(n_space, 4 * grid.n_cells + 1)
    if times is None:
        times = candidate.sample_times(n_time)
    else:
        times = np.asarray(times, dtype=float)
        n_time = times.size
    interior_lo, interior_hi = math.inf, -math.inf
    gap_ends = {0: [math.inf, -math.inf], 1: [math.inf, -math.inf]}
    saw_interior = False
    for t in times:
        for end in (0, 1):
            defect = candidate.normal_derivative(end, t) - _flux_integral(
                spec, candidate, end, t
            )
            gap_ends[end][0] = min(gap_ends[end][0], defect)
            gap_ends[end][1] = max(gap_ends[end][1], defect)
        for lo, hi in candidate.support(t):
            if hi <= lo:
                continue
            xs = np.linspace(lo, hi, n_space + 2)[1:-1]
            resid = (
                candidate.time_derivative(xs, t)
                - candidate.second_space_derivative(xs, t)
                + np.asarray(spec.c(xs, t), dtype=float)
                * positive_power(candidate.value(xs, t), spec.p)
            )
            interior_lo = min(interior_lo, float(np.min(resid)))
            interior_hi = max(interior_hi, float(np.max(resid)))
            saw_interior = True
    if not saw_interior:
        interior_lo = interior_hi = 0.0
    boundary_lo = min(gap_ends[0][0], gap_ends[1][0])
    boundary_hi = max(gap_ends[0][1], gap_ends[1][1])

    t0 = candidate.window[0]
    xs0 = np.linspace(0.0, 1.0, 1025)
    gap = np.asarray(candidate.value(xs0, t0), dtype=float) - np.asarray(
        spec.u0(xs0), dtype=float
    )
    initial_above = float(np.min(gap))
    initial_below = float(np.min(-gap))

    sub_margin = min(-interior_hi, -boundary_hi)
    super_margin = min(interior_lo, boundary_lo)
    sub_ok = sub_margin >= -tol
    super_ok = super_margin >= -tol
    if sub_ok and super_ok:
        verdict = "solution"
        margin = max(sub_margin, super_margin)
    elif sub_ok:
        verdict = "subsolution"
        margin = sub_margin
    elif super_ok:
        verdict = "strict_supersolution" if boundary_lo > strict_margin else "supersolution"
        margin = super_margin
    else:
        verdict = "neither"
        margin = max(sub_margin, super_margin)
    return ResidualReport(
        family=candidate.family,
        verdict=verdict,
        interior_min=interior_lo,
        interior_max=interior_hi,
        boundary_min=boundary_lo,
        boundary_max=boundary_hi,
        boundary_gap_0=(gap_ends[0][0], gap_ends[0][1]),
        boundary_gap_1=(gap_ends[1][0], gap_ends[1][1]),
        initial_above=initial_above,
        initial_below=initial_below,
        margin=margin,
        n_space=n_space,
        n_time=n_time,
        tol=tol,
        strict_margin=strict_margin,
        window=candidate.window,
    )


def shrink_to_admissible(
    spec: ProblemSpec,
    family: str,
    params: dict,
    max_rounds: int = 40,
    xi0_floor: float = 1e-6,
    classify_kwargs: dict | None = None,
) -> tuple[BarrierCandidate, ResidualReport, list[dict]]:
    """Shrink the geometric parameters until a candidate both builds and is
    certified by classify_candidate (subsolution for layer_sub, strict
    supersolution for strict_super): the layer family shrinks (t_window/4,
    xi0/2) per round; the static family shrinks xi0/2. Returns the candidate,
    its residual report, and the attempt trace, or raises
    CertificationSearchError with the trace attached."""
    if family not in ("layer_sub", "strict_super"):
        raise ConfigError(f"shrink search supports layer_sub and strict_super, not {family!r}")
    wanted = certifies_subsolution if family == "layer_sub" else certifies_supersolution
    trial = dict(params)
    trace: list[dict] = []
    for _ in range(max_rounds):
        candidate = None
        try:
            if family == "layer_sub":
                candidate = build_layer_subsolution(spec, **trial)
            else:
                candidate = build_strict_supersolution(spec, **trial)
        except ConstructionError as exc:
            trace.append({"params": dict(trial), "outcome": f"construction: {exc}"})
        if candidate is not None:
            report = classify_candidate(spec, candidate, **(classify_kwargs or {}))
            strict_needed = family == "strict_super"
            certified = wanted(report) and (
                not strict_needed or report.verdict == "strict_supersolution"
            )
            trace.append({"params": dict(trial), "outcome": f"verdict: {report.verdict}"})
            if certified:
                return candidate, report, trace
        if family == "layer_sub":
            trial["t_window"] = trial["t_window"] / 4.0
            trial["xi0"] = trial["xi0"] / 2.0
        else:
            trial["xi0"] = trial["xi0"] / 2.0
        if trial["xi0"] < xi0_floor:
            raise CertificationSearchError(
                f"shrink search hit the xi0 floor {xi0_floor:g} without certification",
                trace=trace,
            )
    raise CertificationSearchError(
        f"shrink search exhausted {max_rounds} rounds without certification", trace=trace
    )

"""Problem data: coefficients, boundary kernel, initial datum, and the full
problem description for

    u_t = u_xx - c(x,t) * u^p          on (0,1) x (0,T],
    du/dnu(x,t) = integral_0^1 k(x,y,t) u(y,t)^l dy   at x in {0,1},
    u(x,0) = u0(x),

with outward normal nu (-x at the left end, +x at the right end). Powers of
the state are taken on the positive part throughout, matching the
regularized formulation the solver discretizes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigError
from .grid import SpatialGrid, integrate, normal_derivative


def positive_power(values: np.ndarray | float, exponent: float) -> np.ndarray | float:
    """(v_+)^exponent, elementwise; safe for fractional exponents."""
    return np.maximum(values, 0.0) ** exponent


@dataclass(frozen=True)
class Coefficient:
    """Scalar field on [0,1] x [0,T]. Kinds: constant, separable, tabulated.

    separable evaluates space(x) * time(t); tabulated linearly interpolates a
    time-independent table (programmatic use only).
    """

    kind: str
    value: float = 0.0
    space: Callable[[np.ndarray], np.ndarray] | None = None
    time: Callable[[float], float] | None = None
    x_table: np.ndarray | None = None
    v_table: np.ndarray | None = None

    @classmethod
    def constant(cls, value: float) -> "Coefficient":
        return cls(kind="constant", value=float(value))

    @classmethod
    def separable(
        cls,
        space: Callable[[np.ndarray], np.ndarray],
        time: Callable[[float], float],
    ) -> "Coefficient":
        return cls(kind="separable", space=space, time=time)

    @classmethod
    def tabulated(cls, x: np.ndarray, values: np.ndarray) -> "Coefficient":
        x = np.asarray(x, dtype=float)
        values = np.asarray(values, dtype=float)
        if x.ndim != 1 or x.shape != values.shape:
            raise ConfigError("tabulated coefficient needs matching 1-d x and value arrays")
        if x[0] > 0.0 or x[-1] < 1.0 or np.any(np.diff(x) <= 0):
            raise ConfigError("tabulated x nodes must increase and cover [0, 1]")
        return cls(kind="tabulated", x_table=x, v_table=values)

    def __call__(self, x: np.ndarray | float, t: float) -> np.ndarray | float:
        if self.kind == "constant":
            return self.value * np.ones_like(np.asarray(x, dtype=float))
        if self.kind == "separable":
            return np.asarray(self.space(np.asarray(x, dtype=float)), dtype=float) * float(
                self.time(t)
            )
        if self.kind == "tabulated":
            return np.interp(np.asarray(x, dtype=float), self.x_table, self.v_table)
        raise ConfigError(f"unknown coefficient kind {self.kind!r}")


@dataclass(frozen=True)
class Kernel:
    """Boundary flux kernel k(end, y, t), end 0 = left, end 1 = right.

    Kinds: constant; separable with per-end weights, k = w_end * space(y) * time(t);
    custom with an arbitrary callable (end, y, t) -> array over y.
    """

    kind: str
    value: float = 0.0
    space: Callable[[np.ndarray], np.ndarray] | None = None
    time: Callable[[float], float] | None = None
    end_weights: tuple[float, float] = (1.0, 1.0)
    func: Callable[[int, np.ndarray, float], np.ndarray] | None = None

    @classmethod
    def constant(cls, value: float) -> "Kernel":
        return cls(kind="constant", value=float(value))

    @classmethod
    def separable(
        cls,
        space: Callable[[np.ndarray], np.ndarray],
        time: Callable[[float], float],
        end_weights: tuple[float, float] = (1.0, 1.0),
    ) -> "Kernel":
        return cls(kind="separable", space=space, time=time, end_weights=end_weights)

    @classmethod
    def custom(cls, func: Callable[[int, np.ndarray, float], np.ndarray]) -> "Kernel":
        return cls(kind="custom", func=func)

    def __call__(self, end: int, y: np.ndarray | float, t: float) -> np.ndarray | float:
        if end not in (0, 1):
            raise ValueError(f"end must be 0 or 1, got {end!r}")
        y_arr = np.asarray(y, dtype=float)
        if self.kind == "constant":
            return self.value * np.ones_like(y_arr)
        if self.kind == "separable":
            return (
                self.end_weights[end]
                * np.asarray(self.space(y_arr), dtype=float)
                * float(self.time(t))
            )
        if self.kind == "custom":
            return np.asarray(self.func(end, y_arr, t), dtype=float)
        raise ConfigError(f"unknown kernel kind {self.kind!r}")


@dataclass(frozen=True)
class InitialDatum:
    """Initial profile on [0,1].

    cosine: a + b*cos(pi x). bump: baseline plus a smooth compactly supported
    bump of height amp on (lo, hi). affine: a + b*x.
    """

    kind: str
    params: tuple[float, ...] = ()
    func: Callable[[np.ndarray], np.ndarray] | None = None

    @classmethod
    def constant(cls, value: float) -> "InitialDatum":
        return cls(kind="constant", params=(float(value),))

    @classmethod
    def cosine(cls, a: float, b: float) -> "InitialDatum":
        return cls(kind="cosine", params=(float(a), float(b)))

    @classmethod
    def bump(cls, lo: float, hi: float, amp: float, baseline: float = 0.0) -> "InitialDatum":
        if not 0.0 <= lo < hi <= 1.0:
            raise ConfigError(f"bump support [{lo}, {hi}] must sit inside [0, 1]")
        return cls(kind="bump", params=(float(lo), float(hi), float(amp), float(baseline)))

    @classmethod
    def affine(cls, a: float, b: float) -> "InitialDatum":
        return cls(kind="affine", params=(float(a), float(b)))

    @classmethod
    def custom(cls, func: Callable[[np.ndarray], np.ndarray]) -> "InitialDatum":
        return cls(kind="custom", func=func)

    def __call__(self, x: np.ndarray | float) -> np.ndarray | float:
        x_arr = np.asarray(x, dtype=float)
        if self.kind == "constant":
            return self.params[0] * np.ones_like(x_arr)
        if self.kind == "cosine":
            a, b = self.params
            return a + b * np.cos(np.pi * x_arr)
        if self.kind == "bump":
            lo, hi, amp, baseline = self.params
            s = (2.0 * x_arr - (lo + hi)) / (hi - lo)
            out = np.full_like(x_arr, baseline)
            inside = np.abs(s) < 1.0
            # peak normalized to amp at the midpoint
            out[inside] += amp * np.exp(1.0 - 1.0 / (1.0 - s[inside] ** 2))
            return out
        if self.kind == "affine":
            a, b = self.params
            return a + b * x_arr
        if self.kind == "custom":
            return np.asarray(self.func(x_arr), dtype=float)
        raise ConfigError(f"unknown initial datum kind {self.kind!r}")


@dataclass(frozen=True)
class ProblemSpec:
    """Complete problem description: exponents, coefficients, datum, horizon."""

    p: float
    l: float
    c: Coefficient
    k: Kernel
    u0: InitialDatum
    T: float

    def validate(self, strict: bool = True, n_samples: int = 129) -> None:
        """Check exponents and horizon; with strict=True also sample-check
        nonnegativity of c, k, and u0 (the solver itself does not enforce it)."""
        if not self.p > 0.0:
            raise ConfigError(f"absorption exponent p must be positive, got {self.p}")
        if not self.l > 0.0:
            raise ConfigError(f"boundary exponent l must be positive, got {self.l}")
        if not self.T > 0.0:
            raise ConfigError(f"horizon T must be positive, got {self.T}")
        if not strict:
            return
        xs = np.linspace(0.0, 1.0, n_samples)
        ts = np.linspace(0.0, self.T, 9)
        for t in ts:
            if np.any(np.asarray(self.c(xs, t)) < 0.0):
                raise ConfigError(f"absorption coefficient is negative at t={t}")
            for end in (0, 1):
                if np.any(np.asarray(self.k(end, xs, t)) < 0.0):
                    raise ConfigError(f"boundary kernel is negative at end {end}, t={t}")
        if np.any(np.asarray(self.u0(xs)) < 0.0):
            raise ConfigError("initial datum is negative somewhere on [0, 1]")


def compatibility_residual(
    spec: ProblemSpec, grid: SpatialGrid, eps: float = 0.0
) -> tuple[float, float]:
    """Defect of the boundary condition at t=0 for the (optionally lifted)
    initial datum: outward normal derivative minus the nonlocal flux, at each end."""
    u = np.asarray(spec.u0(grid.nodes), dtype=float) + eps
    ul = positive_power(u, spec.l)
    residuals = []
    for end in (0, 1):
        dn = normal_derivative(grid, u, end)
        flux = integrate(grid, np.asarray(spec.k(end, grid.nodes, 0.0)) * ul)
        residuals.append(dn - flux)
    return residuals[0], residuals[1]


def regularize_initial(spec: ProblemSpec, grid: SpatialGrid, eps: float) -> np.ndarray:
    """Nodal initial values of the eps-regularized problem, u0 + eps."""
    if not 0.0 <= eps < 1.0:
        raise ConfigError(f"regularization eps must lie in [0, 1), got {eps}")
    return np.asarray(spec.u0(grid.nodes), dtype=float) + eps

"""Spatial and temporal grids on the unit interval.

The spatial grid is the uniform node set x_i = i*h, i = 0..n_cells, with
trapezoid quadrature weights (half weight at the two endpoints). All
trajectory arrays in the package are indexed by these nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform node grid on [0, 1] with trapezoid quadrature weights."""

    n_cells: int
    h: float
    nodes: np.ndarray
    quad_weights: np.ndarray

    def __post_init__(self) -> None:
        self.nodes.setflags(write=False)
        self.quad_weights.setflags(write=False)

    @property
    def n_nodes(self) -> int:
        return self.n_cells + 1


def build_grid(n_cells: int) -> SpatialGrid:
    """Build the uniform grid with n_cells cells (n_cells + 1 nodes)."""
    if not isinstance(n_cells, (int, np.integer)):
        raise ConfigError(f"n_cells must be an integer, got {n_cells!r}")
    if n_cells < 4:
        raise ConfigError(f"n_cells must be at least 4, got {n_cells}")
    h = 1.0 / n_cells
    nodes = np.linspace(0.0, 1.0, n_cells + 1)
    weights = np.full(n_cells + 1, h)
    weights[0] = weights[-1] = 0.5 * h
    return SpatialGrid(n_cells=int(n_cells), h=h, nodes=nodes, quad_weights=weights)


def integrate(grid: SpatialGrid, values: np.ndarray) -> float:
    """Trapezoid quadrature of nodal values over [0, 1]."""
    values = np.asarray(values, dtype=float)
    if values.shape != grid.nodes.shape:
        raise ValueError(
            f"values shape {values.shape} does not match grid with {grid.n_nodes} nodes"
        )
    return float(grid.quad_weights @ values)


def normal_derivative(grid: SpatialGrid, values: np.ndarray, end: int) -> float:
    """Outward normal derivative at an endpoint via one-sided 3-point stencils.

    end=0 is the left endpoint (outward normal -x), end=1 the right (+x).
    """
    values = np.asarray(values, dtype=float)
    if values.shape != grid.nodes.shape:
        raise ValueError(
            f"values shape {values.shape} does not match grid with {grid.n_nodes} nodes"
        )
    h = grid.h
    if end == 0:
        return float(-(-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h))
    if end == 1:
        return float((3.0 * values[-1] - 4.0 * values[-2] + values[-3]) / (2.0 * h))
    raise ValueError(f"end must be 0 or 1, got {end!r}")


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid from t0 with n_steps steps of size dt."""

    t0: float
    dt: float
    n_steps: int

    def __post_init__(self) -> None:
        if self.dt <= 0.0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if self.n_steps < 1:
            raise ConfigError(f"n_steps must be at least 1, got {self.n_steps}")

    @property
    def horizon(self) -> float:
        return self.t0 + self.dt * self.n_steps

    def times(self) -> np.ndarray:
        """All time levels including t0, length n_steps + 1."""
        return self.t0 + self.dt * np.arange(self.n_steps + 1)


def time_grid_for_horizon(t_final: float, dt: float, t0: float = 0.0) -> TimeGrid:
    """Time grid covering [t0, t_final]; requires the horizon be a whole
    number of steps (within roundoff) so stored times are exact."""
    if t_final <= t0:
        raise ConfigError(f"t_final={t_final} must exceed t0={t0}")
    span = t_final - t0
    n_steps = int(round(span / dt))
    if n_steps < 1 or abs(n_steps * dt - span) > 1e-9 * max(1.0, span):
        raise ConfigError(
            f"horizon {span} is not an integer multiple of dt={dt}"
        )
    return TimeGrid(t0=t0, dt=dt, n_steps=n_steps)

"""Uniform-grid functions on an interval: Lp quadrature norms, repeated
integration, finite differencing and affine rescaling.

Every object in this module is immutable after construction and every
operation is a pure function, so concurrent use needs no synchronization.

Quadrature conventions
----------------------
* Lp norms use composite Simpson (odd node counts; an even count gets a
  parabolic correction panel at the right end).
* Antiderivatives use a cumulative 4-point panel rule that is exact for
  quadratic integrands everywhere and cubic ones away from the ends, so a
  double integration is exact for polynomial data of degree <= 1 and is
  O(h^4) for smooth data.
* Second derivatives use central differences with 4-point one-sided O(h^2)
  stencils at the endpoints (exact for quadratics).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

__all__ = [
    "Interval",
    "Grid",
    "GridFunction",
    "default_grid",
    "lp_norm",
    "antiderivative",
    "second_antiderivative",
    "second_derivative",
    "rescale",
    "endpoint_chord",
]

#: Panels per unit interval length used by :func:`default_grid`; can be
#: overridden with the PBIHARM_GRID_UNIT environment variable.
DEFAULT_PANELS_PER_UNIT = 2048

GRID_ENV_VAR = "PBIHARM_GRID_UNIT"


@dataclass(frozen=True)
class Interval:
    """Open interval (a, b) with positive length."""

    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError("interval endpoints must be finite")
        if not self.a < self.b:
            raise ValueError(f"interval requires a < b, got ({self.a}, {self.b})")

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)

    def __str__(self):
        return f"({self.a}, {self.b})"


@dataclass(frozen=True)
class Grid:
    """Uniform grid with m nodes on an interval, endpoints included."""

    interval: Interval
    m: int

    def __post_init__(self):
        if self.m < 3:
            raise ValueError(f"grid needs at least 3 nodes, got {self.m}")

    @property
    def h(self) -> float:
        return self.interval.length / (self.m - 1)

    @cached_property
    def nodes(self) -> np.ndarray:
        x = np.linspace(self.interval.a, self.interval.b, self.m)
        x.flags.writeable = False
        return x


def default_grid(interval: Interval, panels_per_unit: int | None = None) -> Grid:
    """Default grid for an interval: panel count scales with the length and
    is rounded up so the node count is odd (Simpson-compatible)."""
    if panels_per_unit is None:
        panels_per_unit = int(os.environ.get(GRID_ENV_VAR, DEFAULT_PANELS_PER_UNIT))
    if panels_per_unit < 4:
        raise ValueError("panels_per_unit must be at least 4")
    panels = max(4, math.ceil(panels_per_unit * interval.length))
    if panels % 2:
        panels += 1
    return Grid(interval, panels + 1)


@dataclass(frozen=True)
class GridFunction:
    """Real function sampled on a uniform grid (the universal value carrier).

    Values are validated to be finite and stored read-only.
    """

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.m,):
            raise ValueError(
                f"values shape {v.shape} does not match grid with {self.grid.m} nodes"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("grid function values must be finite")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, grid: Grid, fn) -> "GridFunction":
        return cls(grid, np.asarray(fn(grid.nodes), dtype=float))

    @property
    def interval(self) -> Interval:
        return self.grid.interval


def _check_lp_exponent(p: float) -> float:
    p = float(p)
    if not math.isfinite(p) or p <= 1.0:
        raise ValueError(f"Lp exponent must satisfy 1 < p < inf, got {p}")
    return p


def _quad_weights(m: int, h: float) -> np.ndarray:
    """Composite Simpson weights; an even node count blends in a 3-point
    parabolic rule for the final panel."""
    if m % 2:
        w = np.full(m, 2.0)
        w[1::2] = 4.0
        w[0] = w[-1] = 1.0
        return w * (h / 3.0)
    w = _quad_weights(m - 1, h)
    w = np.append(w, 0.0)
    # parabola through the last three nodes, integrated over the last panel
    w[-3] += -h / 12.0
    w[-2] += 8.0 * h / 12.0
    w[-1] += 5.0 * h / 12.0
    return w


def lp_norm(f: GridFunction, p: float) -> float:
    """Quadrature approximation of the Lp norm (integral of |f|^p)^(1/p).

    Nonnegative, and zero exactly when all node values vanish.
    """
    p = _check_lp_exponent(p)
    w = _quad_weights(f.grid.m, f.grid.h)
    return float(np.dot(w, np.abs(f.values) ** p) ** (1.0 / p))


def _cumint(values: np.ndarray, h: float) -> np.ndarray:
    """Cumulative integral along the last axis; 4-point panel rule, exact for
    quadratic integrands (cubic in the interior)."""
    g = values
    m = g.shape[-1]
    inc = np.empty_like(g, dtype=float)
    inc[..., 0] = 0.0
    if m >= 4:
        inc[..., 1] = h / 12.0 * (5.0 * g[..., 0] + 8.0 * g[..., 1] - g[..., 2])
        inc[..., 2:-1] = h / 24.0 * (
            -g[..., :-3] + 13.0 * g[..., 1:-2] + 13.0 * g[..., 2:-1] - g[..., 3:]
        )
        inc[..., -1] = h / 12.0 * (-g[..., -3] + 8.0 * g[..., -2] + 5.0 * g[..., -1])
    else:  # m == 3
        inc[..., 1] = h / 12.0 * (5.0 * g[..., 0] + 8.0 * g[..., 1] - g[..., 2])
        inc[..., 2] = h / 12.0 * (-g[..., 0] + 8.0 * g[..., 1] + 5.0 * g[..., 2])
    return np.cumsum(inc, axis=-1)


def antiderivative(f: GridFunction, c0: float = 0.0) -> GridFunction:
    """First antiderivative with value c0 at the left endpoint."""
    return GridFunction(f.grid, c0 + _cumint(f.values, f.grid.h))


def second_antiderivative(g: GridFunction, c0: float, c1: float) -> GridFunction:
    """Twice-integrated g: returns u with u(a) = c0 and u'(a) = c1.

    Exact for g polynomial of degree <= 1; O(h^4) for smooth g, so the
    discrete second derivative of the result reproduces g well within the
    O(h^2) differencing tolerance.
    """
    h = g.grid.h
    d1 = c1 + _cumint(g.values, h)
    u = c0 + _cumint(d1, h)
    return GridFunction(g.grid, u)


def second_derivative(u: GridFunction) -> GridFunction:
    """Central second differences; one-sided 4-point O(h^2) stencils at the
    endpoints. Exact for quadratics."""
    m = u.grid.m
    if m < 5:
        raise ValueError("second_derivative needs a grid with at least 5 nodes")
    v = u.values
    h2 = u.grid.h ** 2
    out = np.empty(m)
    out[1:-1] = (v[:-2] - 2.0 * v[1:-1] + v[2:]) / h2
    out[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2
    out[-1] = (2.0 * v[-1] - 5.0 * v[-2] + 4.0 * v[-3] - v[-4]) / h2
    return GridFunction(u.grid, out)


def rescale(f: GridFunction, target: Interval) -> GridFunction:
    """Pull f back under the increasing affine bijection onto ``target``.

    Node values are carried over unchanged (the i-th node of the source maps
    to the i-th node of the target), so sign patterns and monotonicity of the
    node sequence are preserved.
    """
    grid = Grid(target, f.grid.m)
    return GridFunction(grid, f.values)


def endpoint_chord(f: GridFunction) -> GridFunction:
    """Affine interpolant through the two endpoint values of f."""
    x = f.grid.nodes
    a, b = f.interval.a, f.interval.b
    fa, fb = f.values[0], f.values[-1]
    return GridFunction(f.grid, fa + (fb - fa) * ((x - a) / (b - a)))

"""Variational extremal constants of the one-dimensional fourth-order
(p-biharmonic) problem.

Each constant is the supremum of ``||N(u)||_p / ||u''||_p`` over a class of
functions on an interval, where N is the kind's numerator transform:

====== ============================== =========================== =========
kind   admissible class               numerator N(u)              value
====== ============================== =========================== =========
J0     u(a) = u(b) = 0                u                           |I|^2 * J0(0,1)
JA     u(a) = 0 (free right end)      u                           4 * J0(I)
JB     u(b) = 0 (free left end)       u                           4 * J0(I)
APLUS  u(b) = u'(b) = 0               u - u(a)                    = JA(I)
AMINUS u(a) = u'(a) = 0               u - u(b)                    = JB(I)
BCONST none (quotient by affine)      u - chord(u)                = J0(I)
====== ============================== =========================== =========

For JA/JB the literal one-point constraint admits near-affine functions with
arbitrarily large ratio; the supremum is only meaningful with the natural
free-end condition u' = 0 at the unconstrained endpoint, which is what the
solver imposes (it is also what makes APLUS/AMINUS equalities hold).

The maximizer solves (|u''|^(p-2) u'')'' = lambda |N(u)|^(p-2) N(u) with the
kind's essential plus natural conditions.  The solver runs a normalized
inverse-power fixed point on that equation: map r = |N(u)|^(p-2) N(u) back
through two integrations (the w-step solves w'' = r with the natural
conditions on w = |u''|^(p-2) u'', the u-step integrates the dualized w with
the essential conditions), then renormalize ||u''||_p = 1.  For p = 2 this is
exact inverse power iteration.  No differencing is used anywhere: the second
derivative of every iterate is known by construction, so the computed value
carries only the O(h^4) quadrature error of the cumulative rule.

Solvers are pure given (p, interval, grid, tol); concurrent solves share no
mutable state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .numgrid import (
    Grid,
    GridFunction,
    Interval,
    _cumint,
    _quad_weights,
    default_grid,
    endpoint_chord,
    lp_norm,
)

__all__ = [
    "ExtremalKind",
    "ExtremalSolution",
    "ConvergenceError",
    "solve_extremal",
    "solve_j0",
    "solve_ja",
    "solve_jb",
    "solve_aplus",
    "solve_aminus",
    "b_constant",
    "best_constant_shift",
    "odd_extension",
    "P_MIN",
    "P_MAX",
]

# Pointwise weights |u|^(p-2) over/underflow outside this range.
P_MIN = 1.05
P_MAX = 50.0

DEFAULT_TOL = 1e-8
MAX_ITERATIONS = 10_000


class ExtremalKind(Enum):
    J0 = "j0"
    JA = "ja"
    JB = "jb"
    APLUS = "aplus"
    AMINUS = "aminus"
    BCONST = "bconst"


@dataclass(frozen=True)
class ExtremalSolution:
    """A computed extremal constant with its maximizer.

    ``value`` is the supremum (units length^2), ``eigenvalue = value**(-p)``.
    ``extremal`` is normalized so that ``lp_norm(extremal_dd, p) == 1``;
    ``extremal_d1``/``extremal_dd`` are its first/second derivatives as built
    by the iteration (not by differencing), so the defining ratio evaluated
    from the stored fields reproduces ``value`` to rounding.
    """

    kind: ExtremalKind
    p: float
    interval: Interval
    value: float
    eigenvalue: float
    extremal: GridFunction
    residual: float
    iterations: int
    extremal_d1: GridFunction
    extremal_dd: GridFunction

    def ratio(self) -> float:
        """||N(extremal)||_p / ||extremal''||_p from the stored fields."""
        num = _numerator(self.kind, self.extremal.values, self.extremal.grid)
        f = GridFunction(self.extremal.grid, num)
        return lp_norm(f, self.p) / lp_norm(self.extremal_dd, self.p)


class ConvergenceError(RuntimeError):
    """Fixed-point iteration did not reach the requested tolerance."""

    def __init__(self, kind, residual, value, iterations):
        super().__init__(
            f"{kind.value} iteration stalled at residual {residual:.3e} "
            f"(value {value:.12g}) after {iterations} iterations"
        )
        self.kind = kind
        self.residual = residual
        self.value = value
        self.iterations = iterations


def _check_p(p: float) -> float:
    p = float(p)
    if not (P_MIN <= p <= P_MAX):
        raise ValueError(
            f"exponent p must lie in [{P_MIN}, {P_MAX}] for stable weights, got {p}"
        )
    return p


def _numerator(kind: ExtremalKind, u: np.ndarray, grid: Grid) -> np.ndarray:
    if kind in (ExtremalKind.J0, ExtremalKind.JA, ExtremalKind.JB):
        return u
    if kind is ExtremalKind.APLUS:
        return u - u[0]
    if kind is ExtremalKind.AMINUS:
        return u - u[-1]
    # BCONST: subtract the affine interpolant through the endpoint values
    chord = endpoint_chord(GridFunction(grid, u))
    return u - chord.values


def _w_step(kind: ExtremalKind, r: np.ndarray, h: float, span: np.ndarray) -> np.ndarray:
    """Solve w'' = r with the kind's natural conditions on w."""
    d1 = _cumint(r, h)
    if kind in (ExtremalKind.J0, ExtremalKind.BCONST):
        w = _cumint(d1, h)                 # w(a) = 0
        return w - w[-1] * span            # w(b) = 0
    if kind in (ExtremalKind.JA, ExtremalKind.APLUS):
        d1 = d1 - d1[-1]                   # w'(b) = 0
        return _cumint(d1, h)              # w(a) = 0
    # JB / AMINUS: w'(a) = 0 already (integration constant zero)
    w = _cumint(d1, h)
    return w - w[-1]                       # w(b) = 0


def _initial_profile(kind: ExtremalKind, t: np.ndarray) -> np.ndarray:
    if kind in (ExtremalKind.J0, ExtremalKind.BCONST):
        return np.sin(np.pi * t)
    if kind is ExtremalKind.JA:
        return np.sin(0.5 * np.pi * t)     # quarter wave, increasing
    if kind is ExtremalKind.JB:
        return np.cos(0.5 * np.pi * t)
    if kind is ExtremalKind.AMINUS:
        return 1.0 - np.cos(0.5 * np.pi * t)
    return 1.0 - np.sin(0.5 * np.pi * t)   # APLUS


def solve_extremal(
    kind: ExtremalKind,
    p: float,
    interval: Interval,
    grid: Grid | None = None,
    tol: float = DEFAULT_TOL,
    max_iter: int = MAX_ITERATIONS,
) -> ExtremalSolution:
    """Compute one extremal constant by normalized inverse-power iteration.

    Parameters
    ----------
    kind : ExtremalKind
        Which variational quotient to maximize.
    p : float
        Lp exponent, restricted to [P_MIN, P_MAX].
    interval : Interval
        Domain of the problem.
    grid : Grid, optional
        Discretization; defaults to ~2048 panels per unit length.
    tol : float
        Stop when the relative change of the value drops below tol.
    max_iter : int
        Iteration cap; exceeding it raises ConvergenceError.

    Raises
    ------
    ConvergenceError
        If the value has not stabilized within ``max_iter`` iterations.
    """
    p = _check_p(p)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if grid is None:
        grid = default_grid(interval)
    if grid.interval != interval:
        raise ValueError("grid interval does not match the requested interval")

    h = grid.h
    x = grid.nodes
    span = (x - interval.a) / interval.length      # 0 at a, 1 at b
    w = _quad_weights(grid.m, h)
    q_exp = 1.0 / (p - 1.0)                        # dual exponent minus one

    def norm(vals):
        return float(np.dot(w, np.abs(vals) ** p) ** (1.0 / p))

    u = _initial_profile(kind, span)
    d1 = np.zeros_like(u)
    d2 = np.zeros_like(u)
    value = norm(_numerator(kind, u, grid))
    residual = math.inf

    for it in range(1, max_iter + 1):
        f = _numerator(kind, u, grid)
        r = np.sign(f) * np.abs(f) ** (p - 1.0)
        wfun = _w_step(kind, r, h, span)
        d2 = np.sign(wfun) * np.abs(wfun) ** q_exp
        u, d1 = _u_integrate(kind, d2, h, span, interval.length)
        s = norm(d2)
        if s < 1e-300:
            raise ConvergenceError(kind, math.inf, value, it)
        u = u / s
        d1 = d1 / s
        d2 = d2 / s
        new_value = norm(_numerator(kind, u, grid))
        residual = abs(new_value - value) / new_value
        value = new_value
        if residual < tol:
            break
    else:
        raise ConvergenceError(kind, residual, value, max_iter)

    # deterministic sign: numerator function nonnegative on balance
    if float(np.dot(w, _numerator(kind, u, grid))) < 0.0:
        u, d1, d2 = -u, -d1, -d2

    return ExtremalSolution(
        kind=kind,
        p=p,
        interval=interval,
        value=value,
        eigenvalue=value ** (-p),
        extremal=GridFunction(grid, u),
        residual=residual,
        iterations=it,
        extremal_d1=GridFunction(grid, d1),
        extremal_dd=GridFunction(grid, d2),
    )


def _u_integrate(kind, g, h, span, length):
    """Integrate u'' = g twice with the kind's essential conditions; returns
    (u, u') with every imposed condition exact at its node."""
    d1 = _cumint(g, h)
    if kind is ExtremalKind.J0:
        u = _cumint(d1, h)
        c1 = -u[-1] / length               # u(b) = 0
        return u + c1 * (span * length), d1 + c1
    if kind is ExtremalKind.JA:
        d1 = d1 - d1[-1]                   # u'(b) = 0
        return _cumint(d1, h), d1          # u(a) = 0
    if kind is ExtremalKind.JB:
        u = _cumint(d1, h)                 # u'(a) = 0
        return u - u[-1], d1               # u(b) = 0
    if kind is ExtremalKind.AMINUS:
        return _cumint(d1, h), d1          # u(a) = u'(a) = 0
    if kind is ExtremalKind.APLUS:
        d1 = d1 - d1[-1]                   # u'(b) = 0
        u = _cumint(d1, h)
        return u - u[-1], d1               # u(b) = 0
    # BCONST: subtract the chord so the effective function kills affine parts
    u = _cumint(d1, h)
    slope = (u[-1] - u[0]) / length
    return u - u[0] - slope * (span * length), d1 - slope


def solve_j0(p, interval, grid=None, tol=DEFAULT_TOL, max_iter=MAX_ITERATIONS):
    """Largest ||u||_p / ||u''||_p over functions vanishing at both endpoints.

    The maximizer is one-signed and symmetric about the interval midpoint
    with zero derivative there.
    """
    return solve_extremal(ExtremalKind.J0, p, interval, grid, tol, max_iter)


def solve_ja(p, interval, grid=None, tol=DEFAULT_TOL, max_iter=MAX_ITERATIONS):
    """Largest ratio over functions pinned at the left endpoint only.

    The maximizer increases from u(a) = 0 and has zero slope and curvature
    at the free right endpoint.
    """
    return solve_extremal(ExtremalKind.JA, p, interval, grid, tol, max_iter)


def solve_jb(p, interval, grid=None, tol=DEFAULT_TOL, max_iter=MAX_ITERATIONS):
    """Mirror image of :func:`solve_ja`: pinned at the right endpoint."""
    return solve_extremal(ExtremalKind.JB, p, interval, grid, tol, max_iter)


def solve_aplus(p, interval, grid=None, tol=DEFAULT_TOL, max_iter=MAX_ITERATIONS):
    """Largest ||u - u(a)||_p / ||u''||_p over u with u(b) = u'(b) = 0.

    Computed directly from this definition; equality with :func:`solve_ja`
    is an emergent cross-check, not built in.
    """
    return solve_extremal(ExtremalKind.APLUS, p, interval, grid, tol, max_iter)


def solve_aminus(p, interval, grid=None, tol=DEFAULT_TOL, max_iter=MAX_ITERATIONS):
    """Largest ||u - u(b)||_p / ||u''||_p over u with u(a) = u'(a) = 0."""
    return solve_extremal(ExtremalKind.AMINUS, p, interval, grid, tol, max_iter)


def b_constant(p, interval, grid=None, tol=DEFAULT_TOL, max_iter=MAX_ITERATIONS):
    """Largest ||u - chord(u)||_p / ||u''||_p over all u with u'' != 0, where
    chord(u) is the affine interpolant through the endpoint values.

    Computed directly with the interpolant; agreement with :func:`solve_j0`
    is a cross-check.
    """
    return solve_extremal(ExtremalKind.BCONST, p, interval, grid, tol, max_iter)


def best_constant_shift(f: GridFunction, p: float) -> tuple[float, float]:
    """Minimize ||f - lambda||_p over real shifts lambda.

    The objective is strictly convex in lambda, so the minimizer is the
    unique root of sum w_i |f_i - lambda|^(p-1) sign(f_i - lambda) = 0.
    Returns (lambda_star, minimum norm).  For f odd about the interval
    midpoint the minimizer is zero and the minimum is ||f||_p.
    """
    from .numgrid import _check_lp_exponent

    p = _check_lp_exponent(p)
    v = f.values
    w = _quad_weights(f.grid.m, f.grid.h)

    lo, hi = float(np.min(v)), float(np.max(v))
    if hi - lo < 1e-15 * (1.0 + abs(hi)):
        return lo, 0.0

    def balance(lam):
        d = v - lam
        return float(np.dot(w, np.sign(d) * np.abs(d) ** (p - 1.0)))

    pad = 1e-9 * (hi - lo)
    lam = brentq(balance, lo - pad, hi + pad, xtol=1e-14, rtol=8.9e-16)
    shifted = GridFunction(f.grid, v - lam)
    return float(lam), lp_norm(shifted, p)


def odd_extension(sol: ExtremalSolution) -> GridFunction:
    """Odd extension of the left-pinned extremal from (0, 1) to (-1, 1).

    The extension vanishes at the origin, has zero slope at both new
    endpoints and a one-signed derivative inside; its restriction to (-1, 0)
    maximizes the right-pinned problem there.
    """
    grid, phi, _, _ = _odd_extension_arrays(sol)
    return GridFunction(grid, phi)


def _odd_extension_arrays(sol: ExtremalSolution):
    """(grid on (-1,1), values, first derivative, second derivative) of the
    odd extension; derivatives come from the stored solver fields."""
    if sol.kind is not ExtremalKind.JA:
        raise ValueError("odd extension is defined for the left-pinned kind only")
    iv = sol.interval
    if not (iv.a == 0.0 and iv.b == 1.0):
        raise ValueError(f"odd extension expects the interval (0, 1), got {iv}")
    u = sol.extremal.values
    d1 = sol.extremal_d1.values
    d2 = sol.extremal_dd.values
    m = sol.extremal.grid.m
    grid = Grid(Interval(-1.0, 1.0), 2 * m - 1)
    phi = np.concatenate([-u[::-1][:-1], u])
    phi1 = np.concatenate([d1[::-1][:-1], d1])
    phi2 = np.concatenate([-d2[::-1][:-1], d2])
    return grid, phi, phi1, phi2

"""Two-sided bound certificates for s-numbers of the second-order Sobolev
embeddings and the order-2 Volterra operator.

Upper side: a partition of the interval (half-length boundary cells) carries
a rank-n interpolation operator K -- constant on boundary cells, affine on
interior cells.  The worst ratio ||f - Kf||_p / ||f''||_p over admissible f
is bounded by cellwise extremal constants, giving

    a_{n+1}  <=  |I|^2 / n^2        * B(0,1)   (both endpoints pinned)
    a_{n+1}  <=  |I|^2 / (n-1/2)^2  * B(0,1)   (left endpoint pinned; also
                                                the order-2 Volterra operator
                                                through its double-integration
                                                factorization)

Lower side: on a uniform n-cell partition, glue rescaled copies of the
odd-extended left-pinned extremal into an n-dimensional subspace on which
every element satisfies ||h||_p / ||h''||_p >= (|I|/n)^2 B(0,1), giving the
matching Bernstein-number lower bound.

Certificates draw seeded random admissible functions (upper) or coefficient
vectors (lower) and check the inequalities empirically at a 1e-3 relative
tolerance that absorbs quadrature error; per-trial RNGs are derived from
(seed, trial index) so results are reproducible bit-for-bit regardless of
evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .numgrid import (
    Grid,
    GridFunction,
    Interval,
    _cumint,
    _quad_weights,
    DEFAULT_PANELS_PER_UNIT,
    GRID_ENV_VAR,
)
from .extremal import b_constant, solve_j0, solve_ja, _check_p, _odd_extension_arrays

import os

__all__ = [
    "TargetOperator",
    "PartitionKind",
    "PartitionScheme",
    "BoundSide",
    "BoundCertificate",
    "TableRow",
    "SNumberTable",
    "partition_upper",
    "partition_lower",
    "interpolation_K",
    "upper_bound_value",
    "lower_bound_value",
    "certify_upper",
    "certify_lower",
    "upper_tightness_ratio",
    "bernstein_subspace",
    "bernstein_ratio",
    "snumber_table",
    "reference_constant",
]

CERTIFICATE_REL_TOL = 1e-3
_N_MODES = 12          # band limit of random draws
_DEGENERATE = 1e-12    # ||f''||_p below this forces a redraw
_REDRAW_CAP = 100


class TargetOperator(Enum):
    E_FULL = "e"    # embedding, both endpoints pinned to first order
    E_A = "ea"      # embedding, left endpoint pinned to first order
    T2 = "t2"       # order-2 Volterra operator (shares the E_A scheme)


class PartitionKind(Enum):
    UPPER_W0 = "upper-w0"
    UPPER_WA = "upper-wa"
    LOWER_UNIFORM = "lower-uniform"


class BoundSide(Enum):
    UPPER = "upper"
    LOWER = "lower"


@dataclass(frozen=True)
class PartitionScheme:
    """Interval breakpoints realizing one of the proof partitions.

    UPPER_W0 has n+1 cells with half-length first and last cells
    (2|I_0| = 2|I_n| = |I_i| = |I|/n); UPPER_WA has n cells with a
    half-length first cell (2|I_0| = |I_i| = |I|/(n-1/2)); LOWER_UNIFORM
    has n equal cells.
    """

    target: TargetOperator
    n: int
    breakpoints: np.ndarray
    kind: PartitionKind

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        if bp.ndim != 1 or bp.size < 2:
            raise ValueError("breakpoints must be a 1-d sequence of length >= 2")
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        expected = {
            PartitionKind.UPPER_W0: self.n + 2,
            PartitionKind.UPPER_WA: self.n + 1,
            PartitionKind.LOWER_UNIFORM: self.n + 1,
        }[self.kind]
        if bp.size != expected:
            raise ValueError(
                f"{self.kind.value} partition at n={self.n} needs {expected} "
                f"breakpoints, got {bp.size}"
            )
        bp = bp.copy()
        bp.flags.writeable = False
        object.__setattr__(self, "breakpoints", bp)

    @property
    def interval(self) -> Interval:
        return Interval(float(self.breakpoints[0]), float(self.breakpoints[-1]))

    @property
    def cell_count(self) -> int:
        return self.breakpoints.size - 1

    def cells(self) -> list[tuple[float, float]]:
        bp = self.breakpoints
        return [(float(bp[i]), float(bp[i + 1])) for i in range(bp.size - 1)]


def partition_upper(target: TargetOperator, interval: Interval, n: int) -> PartitionScheme:
    """Breakpoints of the upper-bound partition for the target at index n.

    Both-ends-pinned target: a, a + |I|/(2n), then steps of |I|/n, ending at
    b (n+1 cells, half-length boundary cells).  Left-pinned target and the
    Volterra operator: a, then odd multiples of |I|/(2n-1) up to b (n cells,
    half-length first cell).
    """
    if n < 1:
        raise ValueError("partition index n must be at least 1")
    a, L = interval.a, interval.length
    if target is TargetOperator.E_FULL:
        bp = np.empty(n + 2)
        bp[0] = a
        bp[1:-1] = a + L / (2.0 * n) + np.arange(n) * (L / n)
        bp[-1] = interval.b
        return PartitionScheme(target, n, bp, PartitionKind.UPPER_W0)
    # left-pinned scheme; the Volterra target is redirected here through its
    # double-integration factorization
    bp = np.empty(n + 1)
    bp[0] = a
    bp[1:] = a + (2.0 * np.arange(1, n + 1) - 1.0) * (L / (2.0 * n - 1.0))
    bp[-1] = interval.b
    return PartitionScheme(target, n, bp, PartitionKind.UPPER_WA)


def partition_lower(target: TargetOperator, interval: Interval, n: int) -> PartitionScheme:
    """Uniform n-cell partition carrying the lower-bound subspace."""
    if n < 1:
        raise ValueError("partition index n must be at least 1")
    bp = interval.a + np.arange(n + 1) * (interval.length / n)
    bp[-1] = interval.b
    return PartitionScheme(target, n, bp, PartitionKind.LOWER_UNIFORM)


def _cell_assignment(bp: np.ndarray, x: np.ndarray) -> np.ndarray:
    # node on a cell boundary belongs to the cell starting there (left-closed);
    # immaterial to Lp integrals, fixed for determinism
    cell = np.searchsorted(bp, x, side="right") - 1
    return np.clip(cell, 0, bp.size - 2)


def _apply_K(F: np.ndarray, scheme: PartitionScheme, grid: Grid) -> np.ndarray:
    """Rank-n interpolation operator applied to each row of F."""
    bp = scheme.breakpoints
    x = grid.nodes
    idx = np.rint((bp - grid.interval.a) / grid.h).astype(int)
    aligned = np.all(np.abs(x[np.clip(idx, 0, grid.m - 1)] - bp)
                     <= 1e-9 * (1.0 + np.abs(bp)))
    if aligned:
        fbp = F[:, idx]
    else:
        fbp = np.vstack([np.interp(bp, x, row) for row in F])
    slopes = (fbp[:, 1:] - fbp[:, :-1]) / np.diff(bp)[None, :]
    cell = _cell_assignment(bp, x)
    KF = fbp[:, cell] + slopes[:, cell] * (x - bp[cell])[None, :]
    KF[:, cell == 0] = fbp[:, 0][:, None]
    if scheme.kind is PartitionKind.UPPER_W0:
        KF[:, cell == scheme.cell_count - 1] = fbp[:, -1][:, None]
    return KF


def interpolation_K(f: GridFunction, scheme: PartitionScheme) -> GridFunction:
    """Piecewise interpolant: the constant f(a) on the first cell (and f(b)
    on the last cell for the both-ends scheme), the affine interpolant
    through the cell endpoint values on every other cell.

    Reproduces exactly any function that is affine on each interior cell and
    constant on the boundary cells; its range has dimension n.
    """
    if scheme.kind is PartitionKind.LOWER_UNIFORM:
        raise ValueError("interpolation operator is defined for upper schemes only")
    if f.interval != scheme.interval:
        raise ValueError("grid function and partition live on different intervals")
    K = _apply_K(f.values[None, :], scheme, f.grid)[0]
    return GridFunction(f.grid, K)


def _b01_value(p: float) -> float:
    panels = int(os.environ.get(GRID_ENV_VAR, DEFAULT_PANELS_PER_UNIT))
    return _b01_cached(float(p), panels)


@lru_cache(maxsize=None)
def _b01_cached(p: float, panels: int) -> float:
    grid = Grid(Interval(0.0, 1.0), panels + 1 + (panels % 2))
    return b_constant(p, Interval(0.0, 1.0), grid).value


def reference_constant(p: float) -> float:
    """B(0,1) for this exponent, computed from the chord-interpolant
    variational problem on the unit interval (cached)."""
    return _b01_value(_check_p(p))


def upper_bound_value(
    target: TargetOperator, interval: Interval, n: int, p: float, B01: float
) -> float:
    """Upper bound for the (n+1)-st approximation number.

    |I|^2/n^2 * B01 for the both-ends-pinned embedding;
    |I|^2/(n-1/2)^2 * B01 for the left-pinned embedding and the Volterra
    operator.
    """
    if n < 1:
        raise ValueError("bound index n must be at least 1")
    L = interval.length
    if target is TargetOperator.E_FULL:
        return L * L / (n * n) * B01
    return L * L / ((n - 0.5) ** 2) * B01


def lower_bound_value(interval: Interval, n: int, B01: float) -> float:
    """Bernstein-subspace lower bound (|I|/n)^2 * B01 (all targets)."""
    if n < 1:
        raise ValueError("bound index n must be at least 1")
    return (interval.length / n) ** 2 * B01


@dataclass(frozen=True)
class BoundCertificate:
    """One side of an s-number bound with its empirical verification.

    Upper side: passed means the worst observed ratio stayed below
    bound_value * (1 + 1e-3).  Lower side: every trial ratio stayed above
    bound_value * (1 - 1e-3).  margin is the relative slack of the worst
    trial (positive when strictly inside the bound).
    """

    target: TargetOperator
    side: BoundSide
    n: int
    p: float
    bound_value: float
    trials: int
    seed: int
    worst_ratio: float
    margin: float
    passed: bool


def _panels_per_unit(override: int | None = None) -> int:
    if override is not None:
        return override
    return int(os.environ.get(GRID_ENV_VAR, DEFAULT_PANELS_PER_UNIT))


def _upper_grid(target, interval, n, panels_per_unit=None):
    q = 2 * n if target is TargetOperator.E_FULL else 2 * (2 * n - 1)
    base = _panels_per_unit(panels_per_unit) * interval.length
    M = q * max(2, math.ceil(base / q))
    return Grid(interval, M + 1)


def _lower_grid(interval, n, panels_per_unit=None):
    base = _panels_per_unit(panels_per_unit) * interval.length
    Mc = 4 * max(2, math.ceil(base / (4 * n)))
    return Grid(interval, n * Mc + 1)


def _lp_rows(V: np.ndarray, w: np.ndarray, p: float) -> np.ndarray:
    return (np.abs(V) ** p @ w) ** (1.0 / p)


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(trial,)))


def _draw_curvatures(grid: Grid, p: float, trials: int, seed: int,
                     w: np.ndarray) -> np.ndarray:
    """Seeded band-limited second-derivative draws, one row per trial."""
    t = (grid.nodes - grid.interval.a) / grid.interval.length
    ks = np.arange(1, _N_MODES + 1)
    table = np.vstack([
        np.ones_like(t),
        np.cos(np.pi * np.outer(ks, t)),
        np.sin(np.pi * np.outer(ks, t)),
    ])
    ncoef = table.shape[0]
    C = np.empty((trials, ncoef))
    for trial in range(trials):
        rng = _trial_rng(seed, trial)
        for attempt in range(_REDRAW_CAP):
            c = rng.standard_normal(ncoef)
            row = c @ table
            if _lp_rows(row[None, :], w, p)[0] >= _DEGENERATE:
                C[trial] = c
                break
        else:
            raise RuntimeError(f"degenerate draw persisted for trial {trial}")
    return C @ table


def certify_upper(
    target: TargetOperator,
    interval: Interval,
    n: int,
    p: float,
    trials: int,
    seed: int,
    grid: Grid | None = None,
    B01: float | None = None,
) -> BoundCertificate:
    """Empirically certify the upper bound at partition index n.

    Draws seeded random admissible functions (double integrals of
    band-limited curvature; for the both-ends target the two right-endpoint
    constraints are projected out of the curvature first), applies the rank-n
    interpolation operator and records the worst ratio
    ||f - Kf||_p / ||f''||_p against the bound.
    """
    p = _check_p(p)
    if trials < 1:
        raise ValueError("trials must be at least 1")
    scheme = partition_upper(target, interval, n)
    if grid is None:
        grid = _upper_grid(target, interval, n)
    if grid.interval != interval:
        raise ValueError("grid interval does not match")
    if B01 is None:
        B01 = _b01_value(p)
    bound = upper_bound_value(target, interval, n, p, B01)

    h = grid.h
    w = _quad_weights(grid.m, h)
    G = _draw_curvatures(grid, p, trials, seed, w)

    if target is TargetOperator.E_FULL:
        # project out the discrete constraints f'(b) = 0 and f(b) = 0
        t = (grid.nodes - interval.a) / interval.length
        ones = np.ones_like(t)
        c11 = _cumint(ones, h)[-1]
        c21 = _cumint(_cumint(ones, h), h)[-1]
        c12 = _cumint(t, h)[-1]
        c22 = _cumint(_cumint(t, h), h)[-1]
        S1 = _cumint(G, h)
        S2 = _cumint(S1, h)
        r1 = S1[:, -1]
        r2 = S2[:, -1]
        det = c11 * c22 - c12 * c21
        A = (r1 * c22 - r2 * c12) / det
        B = (c11 * r2 - c21 * r1) / det
        G = G - A[:, None] * ones[None, :] - B[:, None] * t[None, :]

    F = _cumint(_cumint(G, h), h)
    KF = _apply_K(F, scheme, grid)
    ratios = _lp_rows(F - KF, w, p) / _lp_rows(G, w, p)

    worst = float(np.max(ratios))
    passed = worst <= bound * (1.0 + CERTIFICATE_REL_TOL)
    return BoundCertificate(
        target=target, side=BoundSide.UPPER, n=n, p=p, bound_value=bound,
        trials=trials, seed=seed, worst_ratio=worst,
        margin=1.0 - worst / bound, passed=passed,
    )


def upper_tightness_ratio(
    target: TargetOperator,
    interval: Interval,
    n: int,
    p: float,
    grid: Grid | None = None,
) -> tuple[float, float]:
    """Equality witness for the upper certificate: the cellwise extremal,
    extended by zero from one interior cell, achieves the bound.

    Returns (witness ratio, bound value); their quotient approaches 1 within
    quadrature accuracy.  Requires n >= 2 (an interior cell must exist).
    """
    p = _check_p(p)
    if n < 2:
        raise ValueError("the tightness witness needs an interior cell (n >= 2)")
    scheme = partition_upper(target, interval, n)
    if grid is None:
        grid = _upper_grid(target, interval, n)
    bp = scheme.breakpoints
    cell_idx = min(max(1, scheme.cell_count // 2), scheme.cell_count - 2)
    if scheme.kind is PartitionKind.UPPER_WA:
        cell_idx = min(max(1, scheme.cell_count // 2), scheme.cell_count - 1)
    lo, hi = float(bp[cell_idx]), float(bp[cell_idx + 1])
    i0 = int(round((lo - interval.a) / grid.h))
    i1 = int(round((hi - interval.a) / grid.h))
    if not (abs(interval.a + i0 * grid.h - lo) < 1e-9
            and abs(interval.a + i1 * grid.h - hi) < 1e-9):
        raise ValueError("grid does not resolve the partition breakpoints")
    cell_grid = Grid(Interval(lo, hi), i1 - i0 + 1)
    sol = solve_j0(p, Interval(lo, hi), cell_grid)

    F = np.zeros((1, grid.m))
    F[0, i0:i1 + 1] = sol.extremal.values
    w = _quad_weights(grid.m, grid.h)
    KF = _apply_K(F, scheme, grid)
    num = _lp_rows(F - KF, w, p)[0]
    wc = _quad_weights(cell_grid.m, cell_grid.h)
    den = _lp_rows(sol.extremal_dd.values[None, :], wc, p)[0]
    bound = upper_bound_value(target, interval, n, p, _b01_value(p))
    return float(num / den), bound


# ---------------------------------------------------------------------------
# Bernstein subspace (lower side)

@lru_cache(maxsize=None)
def _unit_pinned_solution(p: float, m: int):
    return solve_ja(p, Interval(0.0, 1.0), Grid(Interval(0.0, 1.0), m))


def _bernstein_blocks(interval: Interval, n: int, p: float, grid: Grid):
    """Per-cell arrays (values, first and second derivative) of the rescaled
    odd-extended extremal, normalized to unit curvature norm on its cell.

    All cells are congruent, so a single block triple serves every cell.
    """
    Mc = (grid.m - 1) // n
    if n * Mc != grid.m - 1 or Mc % 2:
        raise ValueError("grid panels must split evenly (an even count per cell)")
    sol = _unit_pinned_solution(p, Mc // 2 + 1)
    _, phi, phi1, phi2 = _odd_extension_arrays(sol)

    ell = interval.length / n          # cell length
    c = 0.5 * ell                      # half-width: the (-1,1) template scale
    h_cell = ell / Mc
    w_cell = _quad_weights(Mc + 1, h_cell)
    raw2 = phi2 / (c * c)
    nrm = float(np.dot(w_cell, np.abs(raw2) ** p) ** (1.0 / p))
    scale = 1.0 / nrm
    return phi * scale, (phi1 / c) * scale, raw2 * scale


def _bernstein_basis_rows(target, interval, n, p, grid):
    """(P1, P2, blkints): glued derivative/curvature rows per cell plus the
    exact per-cell integral functionals used for the closing constraint."""
    f_blk, f1_blk, f2_blk = _bernstein_blocks(interval, n, p, grid)
    Mc = (grid.m - 1) // n
    P1 = np.zeros((n, grid.m))
    P2 = np.zeros((n, grid.m))
    for i in range(n):
        sl = slice(i * Mc, (i + 1) * Mc + 1)
        P1[i, sl] = f1_blk
        P2[i, sl] = f2_blk
    blkints = _cumint(P1, grid.h)[:, -1]
    return P1, P2, blkints


def _complete_alpha(target, alpha_free: np.ndarray, blkints: np.ndarray) -> np.ndarray:
    """For the both-ends target append the coefficient that closes h at b."""
    if target is TargetOperator.E_FULL:
        last = -(alpha_free @ blkints[:-1]) / blkints[-1]
        return np.concatenate([alpha_free, np.atleast_1d(last)], axis=-1)
    return alpha_free


def _bernstein_dim(target: TargetOperator, n: int) -> int:
    if target is TargetOperator.E_FULL:
        if n < 2:
            raise ValueError("the both-ends subspace needs n >= 2")
        return n - 1
    if n < 1:
        raise ValueError("the subspace needs n >= 1")
    return n


def bernstein_subspace(
    target: TargetOperator,
    interval: Interval,
    n: int,
    p: float,
    grid: Grid | None = None,
) -> list[GridFunction]:
    """Basis of the glued-extremal subspace on the uniform n-cell partition.

    Each basis function integrates one cell's rescaled extremal derivative
    (unit curvature norm per cell); for the both-ends target the final
    coefficient is the linear functional of the free ones that closes the
    function at b, so the dimension is n-1 there and n otherwise.
    """
    p = _check_p(p)
    dim = _bernstein_dim(target, n)
    if grid is None:
        grid = _lower_grid(interval, n)
    P1, _, blkints = _bernstein_basis_rows(target, interval, n, p, grid)
    basis = []
    for i in range(dim):
        e = np.zeros(dim)
        e[i] = 1.0
        alpha = _complete_alpha(target, e, blkints)
        hvals = _cumint(alpha @ P1, grid.h)
        basis.append(GridFunction(grid, hvals))
    return basis


def bernstein_ratio(
    target: TargetOperator,
    interval: Interval,
    n: int,
    p: float,
    alpha,
    grid: Grid | None = None,
) -> float:
    """Ratio ||h||_p / ||h''||_p of the glued function with the given full
    coefficient vector (length n; no closing constraint is applied)."""
    p = _check_p(p)
    if grid is None:
        grid = _lower_grid(interval, n)
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (n,):
        raise ValueError(f"alpha must have length {n}")
    P1, P2, _ = _bernstein_basis_rows(target, interval, n, p, grid)
    w = _quad_weights(grid.m, grid.h)
    H = _cumint((alpha[None, :] @ P1), grid.h)
    H2 = alpha[None, :] @ P2
    return float(_lp_rows(H, w, p)[0] / _lp_rows(H2, w, p)[0])


def certify_lower(
    target: TargetOperator,
    interval: Interval,
    n: int,
    p: float,
    trials: int,
    seed: int,
    grid: Grid | None = None,
    B01: float | None = None,
) -> BoundCertificate:
    """Empirically certify the lower bound at partition index n: every
    seeded unit-sphere coefficient vector must produce a subspace function
    whose ratio stays above (|I|/n)^2 B(0,1) within tolerance."""
    p = _check_p(p)
    if trials < 1:
        raise ValueError("trials must be at least 1")
    dim = _bernstein_dim(target, n)
    if grid is None:
        grid = _lower_grid(interval, n)
    if grid.interval != interval:
        raise ValueError("grid interval does not match")
    if B01 is None:
        B01 = _b01_value(p)
    bound = lower_bound_value(interval, n, B01)

    P1, P2, blkints = _bernstein_basis_rows(target, interval, n, p, grid)
    A = np.empty((trials, dim))
    for trial in range(trials):
        rng = _trial_rng(seed, trial)
        for attempt in range(_REDRAW_CAP):
            v = rng.standard_normal(dim)
            nv = np.linalg.norm(v)
            if nv >= _DEGENERATE:
                A[trial] = v / nv
                break
        else:
            raise RuntimeError(f"degenerate draw persisted for trial {trial}")
    if target is TargetOperator.E_FULL:
        last = -(A @ blkints[:-1]) / blkints[-1]
        A = np.hstack([A, last[:, None]])

    w = _quad_weights(grid.m, grid.h)
    H = _cumint(A @ P1, grid.h)
    H2 = A @ P2
    ratios = _lp_rows(H, w, p) / _lp_rows(H2, w, p)

    worst = float(np.min(ratios))
    passed = worst >= bound * (1.0 - CERTIFICATE_REL_TOL)
    return BoundCertificate(
        target=target, side=BoundSide.LOWER, n=n, p=p, bound_value=bound,
        trials=trials, seed=seed, worst_ratio=worst,
        margin=worst / bound - 1.0, passed=passed,
    )


# ---------------------------------------------------------------------------
# Bracket table

@dataclass(frozen=True)
class TableRow:
    n: int
    lower: float
    upper: float
    oracle: float | None = None
    n2_oracle: float | None = None


@dataclass(frozen=True)
class SNumberTable:
    """Per-index bracket rows, optionally annotated with oracle values.

    Row n brackets the n-th approximation number:
    both-ends target: (|I|/(n+1))^2 B <= a_n <= (|I|/(n-1))^2 B;
    left-pinned and Volterra targets: (|I|/n)^2 B <= a_n <= (|I|/(n-3/2))^2 B.
    n^2 * a_n converges to the shared limit |I|^2 B(0,1).
    """

    target: TargetOperator
    p: float
    interval: Interval
    rows: tuple
    limit: float    # |I|^2 B(0,1), the asymptote of n^2 a_n

    def __iter__(self):
        return iter(self.rows)


def snumber_table(
    target: TargetOperator,
    interval: Interval,
    p: float,
    n_min: int,
    n_max: int,
    oracle=None,
) -> SNumberTable:
    """Bracket table for indices n_min..n_max (n_min >= 2 so every row's
    upper denominator is positive).  ``oracle`` optionally supplies one
    value per row (e.g. p = 2 singular values) and fills the n^2-scaled
    column used for asymptotic inspection."""
    p = _check_p(p)
    if not 2 <= n_min <= n_max:
        raise ValueError("need 2 <= n_min <= n_max")
    if oracle is not None and len(oracle) != n_max - n_min + 1:
        raise ValueError("oracle sequence must supply one value per row")
    B01 = _b01_value(p)
    L = interval.length
    rows = []
    for i, n in enumerate(range(n_min, n_max + 1)):
        if target is TargetOperator.E_FULL:
            lower = (L / (n + 1)) ** 2 * B01
            upper = (L / (n - 1)) ** 2 * B01
        else:
            lower = (L / n) ** 2 * B01
            upper = (L / (n - 1.5)) ** 2 * B01
        s = float(oracle[i]) if oracle is not None else None
        rows.append(TableRow(
            n=n, lower=lower, upper=upper, oracle=s,
            n2_oracle=(n * n * s) if s is not None else None,
        ))
    return SNumberTable(target=target, p=p, interval=interval,
                        rows=tuple(rows), limit=L * L * B01)

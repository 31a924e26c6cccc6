import math

import numpy as np
import pytest

from pbiharm.numgrid import Grid, GridFunction, Interval
from pbiharm.bounds import (
    BoundSide,
    PartitionKind,
    TargetOperator,
    bernstein_ratio,
    bernstein_subspace,
    certify_lower,
    certify_upper,
    interpolation_K,
    lower_bound_value,
    partition_lower,
    partition_upper,
    reference_constant,
    snumber_table,
    upper_bound_value,
    upper_tightness_ratio,
    _bernstein_blocks,
    _lower_grid,
    _quad_weights,
)

UNIT = Interval(0.0, 1.0)
E = TargetOperator.E_FULL
EA = TargetOperator.E_A
T2 = TargetOperator.T2


def test_partition_both_ends_n2():
    s = partition_upper(E, UNIT, 2)
    assert s.kind is PartitionKind.UPPER_W0
    np.testing.assert_allclose(s.breakpoints, [0.0, 0.25, 0.75, 1.0], atol=1e-15)


def test_partition_left_pinned_n2():
    s = partition_upper(EA, UNIT, 2)
    assert s.kind is PartitionKind.UPPER_WA
    np.testing.assert_allclose(s.breakpoints, [0.0, 1.0 / 3.0, 1.0], atol=1e-15)
    lengths = np.diff(s.breakpoints)
    assert lengths[0] == pytest.approx(lengths[1] / 2.0, rel=1e-14)


def test_partition_both_ends_n1():
    s = partition_upper(E, UNIT, 1)
    np.testing.assert_allclose(s.breakpoints, [0.0, 0.5, 1.0], atol=1e-15)


def test_partition_cell_identities():
    for n in (2, 5, 9):
        s = partition_upper(E, UNIT, n)
        lengths = np.diff(s.breakpoints)
        # boundary cells are exactly half the interior length
        assert lengths[0] == pytest.approx(1.0 / (2 * n), rel=1e-13)
        assert lengths[-1] == pytest.approx(1.0 / (2 * n), rel=1e-13)
        np.testing.assert_allclose(lengths[1:-1], 1.0 / n, rtol=1e-13)
        assert abs(lengths.sum() - 1.0) < 1e-12

        sa = partition_upper(EA, UNIT, n)
        la = np.diff(sa.breakpoints)
        assert la[0] == pytest.approx(1.0 / (2 * n - 1), rel=1e-13)
        np.testing.assert_allclose(la[1:], 2.0 / (2 * n - 1), rtol=1e-13)
        assert abs(la.sum() - 1.0) < 1e-12


def test_partition_t2_uses_left_pinned_scheme():
    s = partition_upper(T2, UNIT, 4)
    sa = partition_upper(EA, UNIT, 4)
    assert s.kind is PartitionKind.UPPER_WA
    np.testing.assert_array_equal(s.breakpoints, sa.breakpoints)
    assert s.target is T2


def test_partition_lower_uniform():
    s = partition_lower(E, UNIT, 4)
    np.testing.assert_allclose(s.breakpoints, [0.0, 0.25, 0.5, 0.75, 1.0], atol=1e-15)


def test_partition_rejects_bad_n():
    with pytest.raises(ValueError):
        partition_upper(E, UNIT, 0)
    with pytest.raises(ValueError):
        partition_lower(E, UNIT, 0)


def test_interpolation_reproduces_affine_on_interior_cells():
    s = partition_upper(EA, UNIT, 3)
    g = Grid(UNIT, 2 * (2 * 3 - 1) * 40 + 1)
    x = g.nodes
    f = GridFunction(g, 2.0 * x + 1.0)
    K = interpolation_K(f, s)
    interior = x >= s.breakpoints[1]
    assert np.max(np.abs(K.values[interior] - f.values[interior])) < 1e-12


def test_interpolation_zero_boundary_cells():
    s = partition_upper(E, UNIT, 3)
    g = Grid(UNIT, 601)
    x = g.nodes
    f = GridFunction(g, x * (1.0 - x))  # exactly zero at both endpoints
    K = interpolation_K(f, s)
    assert np.all(K.values[x < s.breakpoints[1]] == 0.0)
    assert np.all(K.values[x >= s.breakpoints[-2]] == 0.0)


def test_interpolation_parabola_example():
    s = partition_upper(E, UNIT, 2)
    g = Grid(UNIT, 2049)
    x = g.nodes
    f = GridFunction(g, x * (1.0 - x))
    K = interpolation_K(f, s)
    # boundary nodes follow the left-closed cell assignment
    mid = (x >= 0.25) & (x < 0.75)
    assert np.max(np.abs(K.values[mid] - 3.0 / 16.0)) < 1e-12
    assert np.all(K.values[x < 0.25] == 0.0)
    assert np.all(K.values[x >= 0.75] == 0.0)


def test_interpolation_rejects_lower_scheme_and_mismatch():
    s = partition_lower(E, UNIT, 3)
    f = GridFunction(Grid(UNIT, 301), np.zeros(301))
    with pytest.raises(ValueError):
        interpolation_K(f, s)
    s2 = partition_upper(E, Interval(0.0, 2.0), 3)
    with pytest.raises(ValueError):
        interpolation_K(f, s2)


def test_bound_values():
    b01 = math.pi ** -2
    assert upper_bound_value(E, UNIT, 4, 2.0, b01) == pytest.approx(
        1.0 / (16.0 * math.pi ** 2), rel=1e-12
    )
    assert upper_bound_value(EA, UNIT, 2, 2.0, b01) == pytest.approx(
        b01 / 2.25, rel=1e-12
    )
    assert upper_bound_value(T2, UNIT, 2, 2.0, b01) == upper_bound_value(
        EA, UNIT, 2, 2.0, b01
    )
    # doubling the interval quadruples every bound
    I2 = Interval(0.0, 2.0)
    for target in (E, EA):
        assert upper_bound_value(target, I2, 5, 2.0, b01) == pytest.approx(
            4.0 * upper_bound_value(target, UNIT, 5, 2.0, b01), rel=1e-14
        )
    assert lower_bound_value(I2, 5, b01) == pytest.approx(
        4.0 * lower_bound_value(UNIT, 5, b01), rel=1e-14
    )
    with pytest.raises(ValueError):
        upper_bound_value(E, UNIT, 0, 2.0, b01)


def test_reference_constant_matches_hilbert_value():
    assert reference_constant(2.0) == pytest.approx(math.pi ** -2, abs=1e-9)


def test_certify_upper_passes_and_is_deterministic():
    c1 = certify_upper(E, UNIT, 3, 2.0, 100, seed=11)
    c2 = certify_upper(E, UNIT, 3, 2.0, 100, seed=11)
    assert c1 == c2
    assert c1.passed and c1.side is BoundSide.UPPER
    assert c1.worst_ratio <= c1.bound_value * (1.0 + 1e-3)
    assert c1.margin > 0.0
    # a different seed explores different draws but still passes
    c3 = certify_upper(E, UNIT, 3, 2.0, 100, seed=12)
    assert c3.passed and c3.worst_ratio != c1.worst_ratio


def test_certify_upper_single_cell_reduction():
    # n = 1 has only half-length boundary cells
    assert certify_upper(E, UNIT, 1, 2.0, 60, seed=5).passed


def test_certify_upper_left_pinned_targets():
    ca = certify_upper(EA, UNIT, 2, 1.5, 60, seed=3)
    ct = certify_upper(T2, UNIT, 2, 1.5, 60, seed=3)
    assert ca.passed and ct.passed
    assert ca.bound_value == ct.bound_value


def test_certify_upper_validation():
    with pytest.raises(ValueError):
        certify_upper(E, UNIT, 3, 2.0, 0, seed=1)


def test_upper_tightness_witness():
    for target, n, p in ((E, 3, 2.0), (EA, 2, 3.0), (E, 5, 1.5)):
        ratio, bound = upper_tightness_ratio(target, UNIT, n, p)
        assert ratio >= 0.99 * bound
        assert ratio <= bound * (1.0 + 1e-3)
    with pytest.raises(ValueError):
        upper_tightness_ratio(E, UNIT, 1, 2.0)


def test_certify_lower_passes_and_is_deterministic():
    c1 = certify_lower(E, UNIT, 4, 2.0, 100, seed=42)
    c2 = certify_lower(E, UNIT, 4, 2.0, 100, seed=42)
    assert c1 == c2
    assert c1.passed and c1.side is BoundSide.LOWER
    assert c1.worst_ratio >= c1.bound_value * (1.0 - 1e-3)


def test_certify_lower_single_basis():
    c = certify_lower(EA, UNIT, 1, 2.0, 30, seed=9)
    assert c.passed
    assert c.worst_ratio >= c.bound_value * (1.0 - 1e-3)


def test_certify_lower_needs_two_cells_for_both_ends():
    with pytest.raises(ValueError):
        certify_lower(E, UNIT, 1, 2.0, 10, seed=0)


def test_bernstein_subspace_dimensions():
    basis = bernstein_subspace(E, UNIT, 2, 2.0)
    assert len(basis) == 1
    h = basis[0].values
    assert h[0] == 0.0 and abs(h[-1]) < 1e-12

    basis = bernstein_subspace(EA, UNIT, 3, 2.0)
    assert len(basis) == 3
    for b in basis:
        assert b.values[0] == 0.0
    # no closing constraint: some basis member ends away from zero
    assert max(abs(b.values[-1]) for b in basis) > 1e-3


def test_bernstein_blocks_unit_curvature():
    for n, p in ((3, 2.0), (5, 1.5)):
        grid = _lower_grid(UNIT, n)
        _, _, f2 = _bernstein_blocks(UNIT, n, p, grid)
        mc = (grid.m - 1) // n
        w = _quad_weights(mc + 1, (1.0 / n) / mc)
        assert np.dot(w, np.abs(f2) ** p) ** (1.0 / p) == pytest.approx(1.0, rel=1e-12)


def test_single_cell_ratio_exceeds_bound():
    # the glued function with one active cell carries the cell constant and a
    # constant tail, so its ratio sits strictly above the bound; at p = 2 on a
    # single cell the exact value is sqrt(3) * B(0,1)
    r = bernstein_ratio(EA, UNIT, 1, 2.0, [1.0])
    assert r == pytest.approx(math.sqrt(3.0) / math.pi ** 2, rel=1e-6)
    assert r >= lower_bound_value(UNIT, 1, reference_constant(2.0))
    for n in (3, 5):
        alpha = np.zeros(n)
        alpha[n // 2] = 1.0
        r = bernstein_ratio(EA, UNIT, n, 2.0, alpha)
        assert r >= lower_bound_value(UNIT, n, reference_constant(2.0)) * (1 - 1e-9)


def test_bernstein_ratio_validation():
    with pytest.raises(ValueError):
        bernstein_ratio(EA, UNIT, 3, 2.0, [1.0, 0.0])


def test_snumber_table_rows():
    b01 = reference_constant(2.0)
    tab = snumber_table(E, UNIT, 2.0, 10, 10)
    row = tab.rows[0]
    assert row.lower == pytest.approx(b01 / 121.0, rel=1e-12)
    assert row.upper == pytest.approx(b01 / 81.0, rel=1e-12)

    tab = snumber_table(T2, UNIT, 2.0, 10, 10)
    row = tab.rows[0]
    assert row.lower == pytest.approx(b01 / 100.0, rel=1e-12)
    assert row.upper == pytest.approx(b01 / 72.25, rel=1e-12)
    assert tab.limit == pytest.approx(b01, rel=1e-14)


def test_snumber_table_bracket_shape():
    for target in (E, EA, T2):
        for p in (1.5, 2.0, 3.0):
            tab = snumber_table(target, UNIT, p, 2, 30)
            lowers = np.array([r.lower for r in tab.rows])
            uppers = np.array([r.upper for r in tab.rows])
            assert np.all(lowers <= uppers)
            assert np.all(np.diff(lowers) < 0) and np.all(np.diff(uppers) < 0)


def test_snumber_table_ratio_tends_to_one():
    tab = snumber_table(E, UNIT, 2.0, 100, 100)
    row = tab.rows[0]
    assert row.lower / row.upper == pytest.approx((99.0 / 101.0) ** 2, rel=1e-12)


def test_snumber_table_scaled_bounds_converge():
    # n^2 * bound approaches the limit like O(1/n); the upper deviation
    # (2n-1)/(n-1)^2 only drops below 3/n from n = 5 on
    b01 = reference_constant(2.0)
    tab = snumber_table(E, UNIT, 2.0, 4, 30)
    for row in tab.rows:
        n = row.n
        assert abs(n * n * row.lower / b01 - 1.0) <= 3.0 / n
        if n >= 5:
            assert abs(n * n * row.upper / b01 - 1.0) <= 3.0 / n


def test_snumber_table_oracle_column():
    oracle = [0.01, 0.005, 0.003]
    tab = snumber_table(T2, UNIT, 2.0, 2, 4, oracle)
    assert tab.rows[1].oracle == 0.005
    assert tab.rows[1].n2_oracle == pytest.approx(9 * 0.005)
    with pytest.raises(ValueError):
        snumber_table(T2, UNIT, 2.0, 2, 4, [0.01])
    with pytest.raises(ValueError):
        snumber_table(T2, UNIT, 2.0, 1, 4)


def test_certified_bounds_consistent_across_sides():
    # matching-index consistency: the lower certificate bound never exceeds
    # the upper certificate bound for the same partition index
    for p in (1.5, 2.0, 3.0):
        b01 = reference_constant(p)
        for n in (2, 5, 10, 30):
            lo = lower_bound_value(UNIT, n, b01)
            for target in (E, EA):
                # equality at matching index for the both-ends target
                assert lo <= upper_bound_value(target, UNIT, n, p, b01) * (1 + 1e-12)

import math

import numpy as np
import pytest

from pbiharm.numgrid import Grid, Interval, default_grid
from pbiharm.operators import (
    OperatorKind,
    SingularSpectrum,
    check_factorization,
    gamma_p,
    svd_snumbers,
    t1_reference,
    volterra_matrix,
)

UNIT = Interval(0.0, 1.0)


def test_order_validation():
    g = Grid(UNIT, 101)
    with pytest.raises(ValueError):
        volterra_matrix(3, g, 2.0)
    with pytest.raises(ValueError):
        volterra_matrix(1, g, 1.0)


def test_order1_integrates_constant():
    g = Grid(Interval(0.5, 2.0), 201)
    op = volterra_matrix(1, g, 2.0)
    out = op.apply(np.ones(g.m))
    assert np.max(np.abs(out - (g.nodes - 0.5))) < 1e-12


def test_order2_integrates_constant():
    g = Grid(Interval(0.25, 1.25), 201)
    op = volterra_matrix(2, g, 2.0)
    out = op.apply(np.ones(g.m))
    assert np.max(np.abs(out - 0.5 * (g.nodes - 0.25) ** 2)) < 1e-12


def test_order2_cubic_image():
    g = Grid(UNIT, 2049)
    op = volterra_matrix(2, g, 2.0)
    out = op.apply(6.0 * g.nodes)
    assert np.max(np.abs(out - g.nodes ** 3)) < 1e-6


def test_matrix_matches_structured_action():
    g = Grid(UNIT, 151)
    rng = np.random.default_rng(0)
    v = rng.standard_normal(g.m)
    for order in (1, 2):
        op = volterra_matrix(order, g, 2.0)
        assert np.max(np.abs(op.matrix @ v - op.apply(v))) < 1e-13
        assert np.max(np.abs(op.matrix.T @ v - op.apply_adjoint(v))) < 1e-13


def test_causality():
    g = Grid(UNIT, 301)
    op = volterra_matrix(2, g, 2.0)
    rng = np.random.default_rng(1)
    f = rng.standard_normal(g.m)
    cut = 150
    f2 = f.copy()
    f2[cut + 1:] += rng.standard_normal(g.m - cut - 1)
    a, b = op.apply(f), op.apply(f2)
    assert np.array_equal(a[: cut + 1], b[: cut + 1])
    assert np.max(np.abs(np.triu(op.matrix, 1))) == 0.0
    assert np.all(op.matrix[0] == 0.0)


def test_svd_requires_p2():
    op = volterra_matrix(1, Grid(UNIT, 101), 3.0)
    with pytest.raises(ValueError):
        svd_snumbers(op)


def test_svd_dense_vs_iterative():
    op = volterra_matrix(2, Grid(UNIT, 201), 2.0)
    dense = svd_snumbers(op).values[:6]
    iterative = svd_snumbers(op, k=6).values
    assert np.max(np.abs(dense - iterative) / dense) < 1e-12
    with pytest.raises(ValueError):
        svd_snumbers(op, k=0)


def test_spectrum_validation():
    with pytest.raises(ValueError):
        SingularSpectrum(values=np.array([1.0, 2.0]), grid_size=10)
    s = SingularSpectrum(values=np.array([2.0, 1.0]), grid_size=10)
    assert s.value(2) == 1.0


def test_t1_classical_spectrum():
    op = volterra_matrix(1, Grid(UNIT, 2001), 2.0)
    s = svd_snumbers(op, k=10).values
    n = np.arange(1, 11)
    # classical singular values 1/((n - 1/2) pi)
    assert np.max(np.abs(s * (n - 0.5) * math.pi - 1.0)) < 5e-4
    assert np.max(np.abs(s / s[0] - 1.0 / (2 * n - 1.0))) < 1e-2


def test_t2_interval_scaling():
    s1 = svd_snumbers(volterra_matrix(2, Grid(UNIT, 1001), 2.0), k=5).values
    s2 = svd_snumbers(volterra_matrix(2, Grid(Interval(0.0, 2.0), 1001), 2.0), k=5).values
    assert np.max(np.abs(s2 - 4.0 * s1) / s2) < 1e-10


def test_gamma_constant():
    assert gamma_p(2.0) == pytest.approx(1.0 / math.pi, rel=1e-14)
    for eps in (1e-6, -1e-6):
        assert gamma_p(2.0 + eps) == pytest.approx(1.0 / math.pi, abs=1e-5)
    with pytest.raises(ValueError):
        gamma_p(1.0)


def test_t1_reference_values():
    assert t1_reference(2.0, UNIT, 1) == pytest.approx(2.0 / math.pi, rel=1e-14)
    assert t1_reference(2.0, UNIT, 5) == pytest.approx(1.0 / (4.5 * math.pi), rel=1e-14)
    assert t1_reference(2.0, Interval(0.0, 3.0), 1) == pytest.approx(6.0 / math.pi, rel=1e-14)
    with pytest.raises(ValueError):
        t1_reference(2.0, UNIT, 0)


def test_t1_reference_against_oracle():
    op = volterra_matrix(1, Grid(UNIT, 2001), 2.0)
    s = svd_snumbers(op, k=5).values
    for n in range(1, 6):
        assert s[n - 1] == pytest.approx(t1_reference(2.0, UNIT, n), rel=1e-3)


def test_factorization_identities():
    rep = check_factorization(default_grid(UNIT), trials=5, seed=7)
    assert rep.passed
    assert rep.max_left_value == 0.0
    assert rep.max_left_slope <= 1e-6
    assert rep.max_isometry_deviation <= 1e-6
    assert rep.max_roundtrip_error <= 1e-4
    # deterministic given the seed
    rep2 = check_factorization(default_grid(UNIT), trials=5, seed=7)
    assert rep == rep2
    with pytest.raises(ValueError):
        check_factorization(default_grid(UNIT), trials=0, seed=1)

"""Gendered dyadic cubes: partition rule, bad-cube bound, overlap count."""

import numpy as np
import pytest

from surfspline import (
    DensityField,
    DyadicCube,
    DyadicParams,
    UndersampledDensity,
    bad_cube_bound_check,
    certify_self_majorization,
    classify,
    enumerate_cubes,
    genders,
    geometric_tail_bound,
    max_overlap,
    overlap_count,
)


def test_genders():
    assert genders(1) == [(1,)]
    assert len(genders(2)) == 3
    assert (0, 0) not in genders(2)
    assert len(genders(3)) == 7


def test_cube_geometry():
    cube = DyadicCube(2, (3, -1), (1, 0))
    assert cube.side == 0.25
    assert cube.corner.tolist() == [0.75, -0.25]
    parent = cube.parent()
    assert parent.level == 1 and parent.gender == cube.gender
    assert parent.corner_index == (1, -1)


def test_params_validation():
    with pytest.raises(ValueError):
        DyadicParams(gamma=0.5, sigma=1.0, two_k=4.0)
    with pytest.raises(ValueError):
        DyadicParams(gamma=2.0, sigma=4.0, two_k=4.0)  # sigma = 2k boundary


def test_enumerate_cubes_counts():
    cubes = enumerate_cubes((np.zeros(1), np.ones(1)), [0, 1], 1)
    # level 0: 1 cube, level 1: 2 cubes, one gender each
    assert len(cubes) == 3
    levels = [c.level for c in cubes]
    assert levels == sorted(levels)


def test_classify_constant_density_threshold():
    df = DensityField(np.linspace(0, 1, 9), np.full(9, 0.3))
    params = DyadicParams(gamma=1.0, sigma=1.0, two_k=2.0)
    cubes = enumerate_cubes((np.zeros(1), np.ones(1)), [0, 1, 2, 3], 1)
    good, bad = classify(cubes, df, params)
    for c in good:
        assert c.side >= 0.3
    for c in bad:
        assert c.side < 0.3
    assert len(good) + len(bad) == len(cubes)


def test_classify_spike():
    # density spike at the origin: small cubes whose inflated support sees
    # the spike are bad
    pts = np.linspace(-1, 1, 41)
    vals = np.where(np.abs(pts) < 1e-12, 1.0, 2.0**-10)
    df = DensityField(pts, vals)
    params = DyadicParams(gamma=1.0, sigma=1.0, two_k=2.0)
    cubes = enumerate_cubes((np.array([-1.0]), np.array([1.0])), [1, 4], 1)
    good, bad = classify(cubes, df, params)
    for c in cubes:
        sees_spike = abs(float(c.corner[0])) <= params.gamma * c.side
        if sees_spike and c.side < 1.0:
            assert c in bad


def test_classify_monotone_in_density():
    rng = np.random.default_rng(40)
    pts = rng.uniform(0, 1, size=20)
    vals = np.exp(rng.normal(size=20) * 0.5) * 0.1
    params = DyadicParams(gamma=1.5, sigma=1.0, two_k=2.0)
    cubes = enumerate_cubes((np.zeros(1), np.ones(1)), [0, 1, 2, 3, 4], 1)
    good_lo, _ = classify(cubes, DensityField(pts, vals), params)
    good_hi, _ = classify(cubes, DensityField(pts, vals * 3.0), params)
    # increasing the density never moves a cube from bad to good
    assert set(good_hi) <= set(good_lo)


def test_classify_undersampled():
    df = DensityField(np.array([[50.0]]), np.array([0.1]))
    params = DyadicParams(gamma=1.0, sigma=1.0, two_k=2.0)
    cubes = enumerate_cubes((np.zeros(1), np.ones(1)), [3], 1)
    with pytest.raises(UndersampledDensity):
        classify(cubes, df, params)


def test_conditional_parent_goodness():
    # assertable form: if ell(nu) >= rho over the PARENT's support, the
    # parent (with double sidelength) is good
    rng = np.random.default_rng(41)
    pts = rng.uniform(0, 1, size=(60, 1))
    vals = np.exp(rng.normal(size=60) * 0.7) * 0.05
    df = DensityField(pts, vals)
    params = DyadicParams(gamma=1.0, sigma=1.0, two_k=2.0)
    from surfspline.dyadic import _support_extrema

    cubes = enumerate_cubes((np.zeros(1), np.ones(1)), [2, 3], 1)
    children = [c for c in cubes if c.level == 3]
    parents = [c.parent() for c in children]
    rho_parent, _ = _support_extrema(parents, df, params.gamma)
    good_parents, _ = classify(parents, df, params)
    good_set = set(good_parents)
    for child, rp in zip(children, rho_parent):
        if child.side >= rp:
            assert child.parent() in good_set


def test_self_majorization_hand_value_and_cap():
    # two-sample field: C_sm = 0.11 at r = 1; Gamma = 1 gives C = 3/0.11
    df = DensityField(np.array([[0.0], [1.0]]), np.array([1.0, 10.0]))
    c_sm = certify_self_majorization(df, 1.0)
    assert c_sm == pytest.approx(0.11)
    gamma = 1.0
    cap = 1.0 / (c_sm * (1 + 2 * gamma) ** (-1.0))
    assert cap == pytest.approx(3.0 / 0.11)


def test_bad_cube_bound_with_certified_constants():
    # densely sampled growing field: certified (c_sm, r) make the bad-cube
    # sidelength bound hold with ratio <= 1 across levels 0..6
    pts = np.linspace(0.0, 1.0, 65)
    df = DensityField(pts, 1.0 + 9.0 * pts)
    r = 1.0
    c_sm = certify_self_majorization(df, r)
    params = DyadicParams(gamma=1.0, sigma=1.0, two_k=2.0)
    cubes = enumerate_cubes((np.zeros(1), np.ones(1)), range(0, 7), 1)
    good, bad = classify(cubes, df, params)
    assert bad  # the field exceeds every sidelength somewhere
    assert bad_cube_bound_check(bad, df, params, c_sm, r) <= 1.0


def test_bad_cube_bound_no_bad_cubes():
    df = DensityField(np.linspace(0, 1, 5), np.full(5, 1e-6))
    params = DyadicParams(gamma=1.0, sigma=1.0, two_k=2.0)
    assert bad_cube_bound_check([], df, params, 1.0, 1.0) == 0.0


def test_overlap_count_d1():
    params = DyadicParams(gamma=1.0, sigma=1.0, two_k=2.0)
    level = 4
    cubes = [DyadicCube(level, (i,), (1,)) for i in range(-20, 20)]
    rng = np.random.default_rng(42)
    for _ in range(25):
        x = rng.uniform(-1, 1, size=1)
        assert overlap_count(cubes, x, params) <= max_overlap(1, 1.0)
    assert max_overlap(1, 1.0) == 3


def test_overlap_count_far_point():
    params = DyadicParams(gamma=1.0, sigma=1.0, two_k=2.0)
    cubes = [DyadicCube(2, (i,), (1,)) for i in range(4)]
    assert overlap_count(cubes, np.array([100.0]), params) == 0


def test_overlap_count_d2_corner():
    params = DyadicParams(gamma=1.0, sigma=1.0, two_k=2.0)
    level = 3
    side = 2.0**-level
    cubes = [DyadicCube(level, (i, jj), g)
             for i in range(-4, 5) for jj in range(-4, 5) for g in genders(2)]
    x = np.zeros(2)
    count = overlap_count(cubes, x, params)
    # brute force: corners within distance gamma * side of the origin
    corners = sum(1 for i in range(-4, 5) for jj in range(-4, 5)
                  if np.hypot(i * side, jj * side) <= side)
    assert count == 3 * corners
    assert count <= max_overlap(2, 1.0)


def test_geometric_tail_closed_forms():
    good, _ = geometric_tail_bound(1.0, 4.0, 0)
    assert good == pytest.approx(8.0 / 7.0)
    with pytest.raises(ValueError):
        geometric_tail_bound(4.0, 4.0, 0)
    with pytest.raises(ValueError):
        geometric_tail_bound(0.0, 4.0, 0)


def test_geometric_tail_partial_sums():
    sigma, two_k, j = 1.5, 4.0, 2
    good, bad = geometric_tail_bound(sigma, two_k, j)
    gsum = sum((2.0 ** (j + i)) ** (sigma - two_k) for i in range(41))
    bsum = sum((2.0 ** (j - i)) ** sigma for i in range(200))
    assert abs(gsum - good) <= 1e-10
    assert abs(bsum - bad) <= 1e-10

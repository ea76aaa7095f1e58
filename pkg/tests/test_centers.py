"""Geometry-core: neighbor queries and candidate radii."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surfspline import CenterSet, neighbors_within, sorted_candidate_radii


def test_duplicate_rejection():
    with pytest.raises(ValueError, match="duplicate"):
        CenterSet([[0.0], [1e-13]])


def test_nonfinite_rejection():
    with pytest.raises(ValueError):
        CenterSet([[0.0], [np.nan]])


def test_dimension_mismatch():
    cs = CenterSet([[0.0, 0.0], [1.0, 1.0]])
    with pytest.raises(ValueError):
        neighbors_within(cs, [0.0], 1.0)


def test_neighbors_line_example():
    # {0, 1, 2} in R^1, center 0.9, radius 1.0 -> (1, 0.1) then (0, 0.9)
    cs = CenterSet([0.0, 1.0, 2.0])
    out = neighbors_within(cs, [0.9], 1.0)
    assert [(i, d) for i, _, d in out] == [(1, pytest.approx(0.1)), (0, pytest.approx(0.9))]


def test_neighbors_all_enclosing():
    rng = np.random.default_rng(0)
    cs = CenterSet(rng.uniform(-1, 1, size=(30, 2)))
    out = neighbors_within(cs, [0.0, 0.0], 10.0)
    assert len(out) == 30
    dists = [d for _, _, d in out]
    assert dists == sorted(dists)


def test_neighbors_grid_cross():
    # unit grid 8x8, center at a grid node, radius 1.0 -> node + 4 axis neighbors
    xs = np.arange(8.0)
    gx, gy = np.meshgrid(xs, xs, indexing="ij")
    cs = CenterSet(np.stack([gx.ravel(), gy.ravel()], axis=1))
    out = neighbors_within(cs, [3.0, 3.0], 1.0)
    assert len(out) == 5
    # brute force agreement
    dist = np.linalg.norm(cs.points - np.array([3.0, 3.0]), axis=1)
    assert len(out) == int(np.sum(dist <= 1.0))


def test_neighbors_monotone_in_radius():
    rng = np.random.default_rng(1)
    cs = CenterSet(rng.normal(size=(60, 3)))
    c = rng.normal(size=3)
    small = {i for i, _, _ in neighbors_within(cs, c, 0.8)}
    large = {i for i, _, _ in neighbors_within(cs, c, 1.6)}
    assert small <= large


def test_neighbors_exact_cut():
    rng = np.random.default_rng(2)
    cs = CenterSet(rng.uniform(size=(100, 2)))
    c = np.array([0.5, 0.5])
    r = 0.3
    idx = {i for i, _, _ in neighbors_within(cs, c, r)}
    dist = np.linalg.norm(cs.points - c, axis=1)
    for i in range(len(cs)):
        assert (i in idx) == (dist[i] <= r)


def test_candidate_radii_line():
    cs = CenterSet([0.0, 1.0, 2.0])
    assert sorted_candidate_radii(cs, [0.0]).tolist() == [0.0, 1.0, 2.0]


def test_candidate_radii_symmetric_dedup():
    cs = CenterSet([-1.0, 1.0])
    assert sorted_candidate_radii(cs, [0.0]).tolist() == [1.0]


def test_candidate_radii_brute_force():
    rng = np.random.default_rng(3)
    cs = CenterSet(rng.normal(size=(50, 2)))
    c = np.zeros(2)
    radii = sorted_candidate_radii(cs, c)
    brute = np.sort(np.linalg.norm(cs.points - c, axis=1))
    # every brute distance is within tolerance of a kept radius
    assert np.all(np.diff(radii) > 1e-12)
    for r in brute:
        assert np.min(np.abs(radii - r)) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.1, 3.0))
def test_neighbors_within_property(seed, radius):
    rng = np.random.default_rng(seed)
    cs = CenterSet(rng.normal(size=(25, 2)))
    c = rng.normal(size=2)
    out = neighbors_within(cs, c, radius)
    dist = np.linalg.norm(cs.points - c, axis=1)
    assert {i for i, _, _ in out} == set(np.flatnonzero(dist <= radius).tolist())
    for i, p, d in out:
        assert d == pytest.approx(float(dist[i]), abs=1e-12)
        assert np.array_equal(p, cs.points[i])

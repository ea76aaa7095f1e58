"""Multiresolution ring placement and transition planning."""

import numpy as np
import pytest

from surfspline import (
    MultiresSpec,
    build_ring_plan,
    cardinality_report,
    certify_slow_growth,
    generate_centers,
    minimal_density,
    plan_transition,
)
from surfspline.density import DensityField


def spec_2d(j=3, k=2, box_half=6.0):
    return MultiresSpec(j=j, k=k, d=2, defect=np.zeros((1, 2)),
                        box=(np.full(2, -box_half), np.full(2, box_half)))


def spec_1d(j=2, k=1, box_half=10.0, epsilon=0.5, degree=7):
    return MultiresSpec(j=j, k=k, d=1, defect=np.zeros((1, 1)),
                        box=(np.array([-box_half]), np.array([box_half])),
                        epsilon=epsilon, degree=degree)


def test_ring_plan_reference_values():
    plan = build_ring_plan(spec_2d())
    outs = [r.outer for r in plan.rings]
    assert outs == pytest.approx([14 * 2**-4.5, 14 * 2**-3, 14 * 2**-1.5])
    assert plan.core_spacing == 2**-6
    assert [r.spacing for r in plan.rings] == [2**-6, 2**-5, 2**-4]
    assert plan.core_radius == pytest.approx(14 * 2**-6)
    assert plan.global_spacing == 2**-3


def test_ring_plan_single_ring():
    spec = MultiresSpec(j=1, k=1, d=1, defect=np.zeros((1, 1)),
                        box=(np.array([-8.0]), np.array([8.0])),
                        epsilon=0.5, degree=7)
    plan = build_ring_plan(spec)
    assert len(plan.rings) == 1
    assert plan.rings[0].outer == pytest.approx(7 * 2**-0.5)
    assert plan.rings[0].spacing == 2**-2


def test_outermost_spacing_is_half_h():
    for j in (2, 3, 4):
        plan = build_ring_plan(spec_2d(j=j))
        assert plan.rings[-1].spacing == pytest.approx(plan.global_spacing / 2)


def test_rings_partition_annulus():
    plan = build_ring_plan(spec_2d())
    inner = plan.core_radius
    for r in plan.rings:
        assert r.inner == pytest.approx(inner)  # contiguous
        assert r.outer > r.inner
        inner = r.outer
    spacings = [plan.core_spacing] + [r.spacing for r in plan.rings]
    assert all(b == 2 * a or b == a for a, b in zip(spacings, spacings[1:]))
    # exactly a factor 2 per ring after the core
    ring_sp = [r.spacing for r in plan.rings]
    assert all(b == 2 * a for a, b in zip(ring_sp, ring_sp[1:]))


def test_generate_centers_1d_region_counts():
    spec = spec_1d()
    cs = generate_centers(spec)
    plan = build_ring_plan(spec)
    dist = np.abs(cs.points[:, 0])
    # brute-force region membership: per-level counts match a direct scan of
    # the grid of that spacing over the annulus (ties go inward)
    regions = [(0, 0.0, plan.core_radius, plan.core_spacing, True)]
    regions += [(r.index, r.inner, r.outer, r.spacing, False) for r in plan.rings]
    for lv, lo, hi, sp, is_core in regions:
        mask = cs.levels == lv
        if not is_core:
            assert np.all(dist[mask] > lo)
        assert np.all(dist[mask] <= hi + 1e-12)
        grid = np.abs(np.arange(np.ceil(-hi / sp), np.floor(hi / sp) + 1) * sp)
        expected = grid <= hi + 1e-12 if is_core else (grid > lo) & (grid <= hi + 1e-12)
        assert mask.sum() == int(expected.sum())
    # every point in the core has a neighbor at the core spacing
    core = np.sort(cs.points[cs.levels == 0][:, 0])
    assert np.max(np.diff(core)) <= plan.core_spacing + 1e-12


def test_generate_centers_sign_symmetry():
    cs = generate_centers(spec_2d(j=2, box_half=8.0))
    keys = {tuple(np.round(p, 9)) for p in cs.points}
    for p in cs.points:
        assert tuple(np.round(-p, 9)) in keys


def test_generate_centers_box_too_small():
    spec = MultiresSpec(j=3, k=2, d=2, defect=np.zeros((1, 2)),
                        box=(np.full(2, -1.0), np.full(2, 1.0)))
    with pytest.raises(ValueError, match="bounding box"):
        generate_centers(spec)


def test_density_at_defect():
    # rho(0) <= 14 * 2^-6 for j=3, k=2, d=2 with the degree-14 reproduction
    spec = spec_2d()
    cs = generate_centers(spec)
    rho, _ = minimal_density(cs, np.zeros(2), spec.degree)
    assert rho <= 14 * 2.0**-6


def test_cardinality_report_values():
    spec = spec_2d()
    cs = generate_centers(spec)
    rep = cardinality_report(spec, cs)
    assert rep.bound == pytest.approx(196 * 15)  # sum_J 196 * 2^J, J = 0..3
    assert rep.ball_radius == pytest.approx(14 * 2**-1.5)
    assert rep.uniform_count == pytest.approx(196 * 2**3)
    assert rep.actual == int(np.sum(np.linalg.norm(cs.points, axis=1) <= rep.ball_radius))


def test_cardinality_bound_j0_term():
    # single-term instance of the geometric sum
    spec = spec_1d(j=1)
    bound_terms = [7 * 2 ** (J / 2) for J in range(2)]
    cs = generate_centers(spec)
    rep = cardinality_report(spec, cs)
    assert rep.bound == pytest.approx(sum(bound_terms))


def test_cardinality_ratio_stable_in_j():
    # ratio actual/uniform bounded by a j-independent constant (d = 1)
    ratios = []
    for j in (2, 3, 4, 5):
        spec = spec_1d(j=j, box_half=8.0)
        cs = generate_centers(spec)
        rep = cardinality_report(spec, cs)
        ratios.append(rep.actual / rep.uniform_count)
    assert max(ratios) <= 3 * min(ratios)


def test_curve_defect_tubular_rings():
    # defect = sampled segment in d = 2: rings become tubular neighborhoods
    t = np.linspace(-0.5, 0.5, 21)
    defect = np.stack([t, np.zeros_like(t)], axis=1)
    spec = MultiresSpec(j=2, k=2, d=2, defect=defect,
                        box=(np.full(2, -8.0), np.full(2, 8.0)))
    cs = generate_centers(spec)
    plan = build_ring_plan(spec)
    from scipy.spatial import cKDTree

    dist, _ = cKDTree(defect).query(cs.points)
    core = cs.levels == 0
    assert core.any()
    assert np.all(dist[core] <= plan.core_radius + 1e-12)


def test_plan_transition_reference():
    tp = plan_transition(2, 1 / 3, 2)
    assert tp.radius_exponent == pytest.approx(0.5)
    assert tp.min_degree == 13
    assert tp.valid


def test_plan_transition_s_one():
    tp = plan_transition(1, 0.4, 1)
    assert tp.radius_exponent == pytest.approx(1.0)
    assert tp.valid


def test_plan_transition_invalid():
    assert not plan_transition(3, 0.5, 2).valid


def test_slow_growth_of_generated_field():
    # measured density over a small probe set satisfies slow growth with a
    # constant below 7k
    spec = spec_1d()
    cs = generate_centers(spec)
    probes = np.linspace(-2.0, 2.0, 17)[:, None]
    rho = np.array([minimal_density(cs, p, spec.degree)[0] for p in probes])
    df = DensityField(probes, rho)
    assert certify_slow_growth(df, spec.epsilon) <= 7 * spec.k

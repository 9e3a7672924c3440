"""Level enumeration tests: edge-length forms, the window polytope, the
interval search, realization, and the wall-sum prefilter."""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from smoothpoly import seeds
from smoothpoly.fans import Fan, ParamFan, instantiate, walls_of
from smoothpoly.rhs import (
    NonIntegralVertex,
    build_rhs_polytope,
    edge_length_form,
    enumerate_rhs,
    passes_wall_sum,
    realize_and_filter,
    wall_sum_mask,
    wall_sums,
)


def fp():
    return seeds.seed_fan("F_p", 12)


def fa(a):
    pf = seeds.get_seed("F_a").build(12)
    wide = ParamFan(pf.rays, pf.cones, {"a": (-20, 20)})
    return instantiate(wide, {"a": a})


def form_by_wall(fan):
    return {w.ray_indices: edge_length_form(fan, w) for w in walls_of(fan)}


def test_edge_length_form_square():
    forms = form_by_wall(fa(0))
    # top edge: length = b[(1,0)] + b[(-1,0)]
    assert forms[(1,)].coeffs == (1, 0, 1, 0)
    assert forms[(0,)].coeffs == (0, 1, 0, 1)


def test_edge_length_form_hirzebruch():
    forms = form_by_wall(fa(2))
    # edge with normal (0,1): b[(1,0)] + b[(-1,-2)] + 2 b[(0,1)]
    assert forms[(1,)].coeffs == (1, 2, 1, 0)
    assert forms[(3,)].coeffs == (1, 0, 1, -2)


def test_edge_length_form_fp():
    for form in form_by_wall(fp()).values():
        assert form.coeffs == (1, 1, 1)


def test_build_rhs_polytope_fp():
    B = build_rhs_polytope(fp(), 12)
    assert B.pinned == (0, 1)
    assert B.slack == 9
    assert B.uppers == (Fraction(11, 2),) * 3
    assert B.contains((0, 0, 3))
    assert not B.contains((0, 0, 0))    # zero-length edges
    assert not B.contains((0, 0, 5))    # edge interiors alone exceed N
    assert not B.contains((1, 0, 3))    # pinned coordinate moved


def test_enumerate_rhs_fp():
    assert enumerate_rhs(fp(), 12) == [(0, 0, 1), (0, 0, 2),
                                       (0, 0, 3), (0, 0, 4)]


def test_enumerate_rhs_matches_brute_force():
    fan = fa(2)
    B = build_rhs_polytope(fan, 12)
    assert B.pinned == (0, 1)
    brute = sorted((0, 0, b2, b3)
                   for b2 in range(-25, 26) for b3 in range(-25, 26)
                   if B.contains((0, 0, b2, b3)))
    assert enumerate_rhs(fan, 12) == brute
    assert brute  # the window is not empty for the width-2 band


def test_enumerate_rhs_simplex_3d():
    fan = seeds.seed_fan("3^4", 12)
    assert enumerate_rhs(fan, 12) == [(0, 0, 0, 1), (0, 0, 0, 2)]


def test_realize_triangle():
    fan = fp()
    poly, status = realize_and_filter(fan, (0, 0, 2), 12)
    assert status == "ok"
    assert poly.vertices == ((-2, 0), (0, -2), (0, 0))
    from smoothpoly.polytopes import HPolytope, count_lattice_points
    hull = HPolytope(list(fan.rays), [0, 0, 2], 2)
    assert count_lattice_points(hull) == 6


def test_realize_rejects_oversized():
    poly, status = realize_and_filter(fp(), (0, 0, 4), 12)
    assert poly is None and status == "too_many_points"


def test_realize_rejects_degenerate():
    # vertical edges of length zero: two cones solve to the same vertex
    poly, status = realize_and_filter(fa(0), (0, 0, 3, 0), 12)
    assert poly is None and status == "mismatch"


def test_realize_rejects_shifted_vertex():
    poly, status = realize_and_filter(fp(), (0, 0, -1), 12)
    assert poly is None and status == "mismatch"


def test_realize_square_band():
    fan = fa(0)
    levels = enumerate_rhs(fan, 12)
    assert len(levels) == 15
    kept = []
    rejected = 0
    for b in levels:
        poly, status = realize_and_filter(fan, b, 12)
        if poly is None:
            assert status == "too_many_points"
            rejected += 1
        else:
            kept.append(poly)
    # rectangles (w+1)(h+1) <= 12 with w + h <= 6, w, h >= 1
    assert len(kept) == 12 and rejected == 3


def test_non_integral_vertex_raises():
    fan = Fan([(1, 0), (1, 2)], [(0, 1)], 2)
    with pytest.raises(NonIntegralVertex):
        realize_and_filter(fan, (0, 1), 12)


def test_wall_sum_scalar():
    assert passes_wall_sum(fp(), 12)
    assert wall_sums(fp()) == [-1, -1, -1]
    assert passes_wall_sum(fa(8), 12)
    assert not passes_wall_sum(fa(9), 12)
    assert passes_wall_sum(seeds.seed_fan("3^4", 12), 12)


def test_wall_sum_mask_matches_scalar_2d():
    pf = seeds.get_seed("F_a").build(12)
    wide = ParamFan(pf.rays, pf.cones, {"a": (-20, 20)})
    values = list(range(-5, 16))
    mask = wall_sum_mask(wide, {"a": np.array(values, dtype=np.int64)}, 12)
    scalar = [passes_wall_sum(instantiate(wide, {"a": v}), 12)
              for v in values]
    assert mask.tolist() == scalar


@pytest.mark.parametrize("name,box", [
    ("4^6", [("a", (-2, 0, 2)), ("b", (-2, 0, 2)), ("c", (-2, 0, 2))]),
    ("3^2 4^3 6^2", [("a", tuple(range(-6, 6)))]),
])
def test_wall_sum_mask_matches_scalar_3d(name, box):
    pf = seeds.get_seed(name).build(12)
    names = [n for n, _ in box]
    combos = list(itertools.product(*(vals for _, vals in box)))
    grids = {n: np.array([c[i] for c in combos], dtype=np.int64)
             for i, n in enumerate(names)}
    mask = wall_sum_mask(pf, grids, 12)
    scalar = [passes_wall_sum(instantiate(pf, dict(zip(names, c))), 12)
              for c in combos]
    assert mask.tolist() == scalar


def test_enumerated_levels_lie_in_the_window():
    for fan in [fp(), fa(0), fa(2), fa(3), seeds.seed_fan("3^4", 12)]:
        B = build_rhs_polytope(fan, 12)
        levels = enumerate_rhs(fan, 12)
        assert levels == sorted(levels)
        for b in levels:
            assert B.contains(b)

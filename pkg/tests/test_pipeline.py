"""End-to-end classification at small budgets, plus the walk helpers."""

import json
import random

import pytest

from smoothpoly import seeds
from smoothpoly.fans import fan_canonical_key, instantiate
from smoothpoly.iso_dedup import canonical_form
from smoothpoly.pipeline import (
    ConfigError,
    RunConfig,
    _dihedral_key,
    _min_interior,
    _polygon_cycle,
    _splice_cycle,
    list_seeds,
    render_json,
    render_seeds,
    render_stats,
    render_text,
    run_classify,
    run_count_tree,
    run_stats,
)
from smoothpoly.polytopes import VPolytope, facets_of, is_smooth, lattice_points
from smoothpoly.search import enumerate_blowups, make_root
from smoothpoly.seeds import UnknownSeed


def _golden(name, dim, max_points):
    with open("tests/data/%s" % name) as fh:
        data = json.load(fh)
    kept = []
    for vs in data:
        V = VPolytope([tuple(v) for v in vs], dim)
        if len(lattice_points(facets_of(V), _verts=V)) <= max_points:
            kept.append(V)
    return kept


def test_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(4, 9).validate()
    with pytest.raises(ConfigError):
        RunConfig(2, 2).validate()
    with pytest.raises(ConfigError):
        RunConfig(3, 3).validate()
    with pytest.raises(ConfigError):
        RunConfig(2, 8, fmt="yaml").validate()
    with pytest.raises(ConfigError):
        RunConfig(2, 8, threads=0).validate()
    with pytest.raises(ConfigError):
        RunConfig(3, 13).validate()
    warnings = RunConfig(3, 13, allow_unvalidated=True).validate()
    assert len(warnings) == 1 and "envelope" in warnings[0]
    assert RunConfig(3, 12).validate() == []
    assert RunConfig(2, 100).validate() == []


def test_min_interior_lower_bounds():
    assert [_min_interior(n) for n in range(3, 13)] == \
        [0, 0, 1, 1, 1, 1, 1, 2, 2, 3]


def test_polygon_cycle_known_fans():
    order, cycle = _polygon_cycle(seeds.seed_fan("F_p", 12))
    assert sorted(order) == [0, 1, 2]
    assert cycle == (-1, -1, -1)
    fa = seeds.get_seed("F_a").build(12)
    _, sq = _polygon_cycle(instantiate(fa, {"a": 0}))
    assert sq == (0, 0, 0, 0)
    _, c3 = _polygon_cycle(instantiate(fa, {"a": 3}))
    assert sorted(c3) == [-3, 0, 0, 3]
    assert sum(c3) == 3 * 4 - 12


def test_cycle_order_traverses_cones():
    fan = instantiate(seeds.get_seed("F_a").build(12), {"a": 2})
    order, _ = _polygon_cycle(fan)
    cones = {tuple(sorted(c)) for c in fan.cones}
    n = len(order)
    for p in range(n):
        pair = tuple(sorted((order[p], order[(p + 1) % n])))
        assert pair in cones


def test_splice_tracks_blowups():
    # carry the coefficient cycle through random blow-up paths and compare
    # with recomputing it from the resulting fan
    rng = random.Random(1723)
    for _ in range(40):
        fan = instantiate(seeds.get_seed("F_a").build(12),
                          {"a": rng.choice([0, 2, 3])})
        order, cycle = _polygon_cycle(fan)
        node = make_root(fan)
        for _ in range(rng.randrange(1, 5)):
            kids = list(enumerate_blowups(node, 12))
            if not kids:
                break
            child = rng.choice(kids)
            pos = child.path[-1][1]
            order, cycle = _splice_cycle(order, cycle,
                                         node.fan.cones[pos],
                                         len(node.fan.rays))
            node = child
        fresh_order, fresh_cycle = _polygon_cycle(node.fan)
        assert sorted(cycle) == sorted(fresh_cycle)
        assert _dihedral_key(cycle) == _dihedral_key(fresh_cycle)
        assert sum(cycle) == 3 * len(node.fan.rays) - 12


def test_dihedral_key_symmetry():
    cycle = (0, 1, 2, -1, 5)
    key = _dihedral_key(cycle)
    n = len(cycle)
    variants = [cycle[s:] + cycle[:s] for s in range(n)]
    variants += [v[::-1] for v in variants]
    for v in variants:
        assert _dihedral_key(v) == key
    assert key in variants


def test_dihedral_key_agrees_with_canonical_key():
    # the cyclic coefficient key and the generic fan key must induce the
    # same isomorphism classes
    fans = []
    stack = [make_root(seeds.seed_fan("F_p", 12))]
    fa = seeds.get_seed("F_a").build(12)
    stack.append(make_root(instantiate(fa, {"a": 2})))
    while stack:
        node = stack.pop()
        fans.append(node.fan)
        stack.extend(enumerate_blowups(node, 6))
    assert len(fans) > 50
    by_dihedral = {}
    by_canonical = {}
    for f in fans:
        _, cycle = _polygon_cycle(f)
        by_dihedral.setdefault(_dihedral_key(cycle), set()).add(
            fan_canonical_key(f))
        by_canonical.setdefault(fan_canonical_key(f), set()).add(
            _dihedral_key(cycle))
    assert all(len(v) == 1 for v in by_dihedral.values())
    assert all(len(v) == 1 for v in by_canonical.values())


def test_classify_dim2_smallest_budget():
    res = run_classify(RunConfig(2, 4))
    assert len(res.records) == 2
    assert [r.vertices for r in res.records] == [
        ((0, 0), (0, 1), (1, 0)),
        ((0, 0), (0, 1), (1, 0), (1, 1)),
    ]
    assert res.histogram == {3: 1, 4: 1}
    assert [r.provenance.seed for r in res.records] == ["F_p", "F_a"]


def test_classify_dim2_matches_golden_subset():
    res = run_classify(RunConfig(2, 6))
    assert len(res.records) == 6
    assert res.histogram == {3: 2, 4: 4}
    golden = _golden("golden_polygons_max12.json", 2, 6)
    mine = {canonical_form(VPolytope(r.vertices, 2)).key
            for r in res.records}
    assert mine == {canonical_form(g).key for g in golden}
    for r in res.records:
        assert r.dimension == 2
        assert 3 <= r.num_lattice_points <= 6
        assert r.num_vertices == len(r.vertices) == r.facet_count


def test_classify_dim3_matches_golden_subset():
    res = run_classify(RunConfig(3, 8))
    golden = _golden("golden_polytopes3d_max12.json", 3, 8)
    mine = {canonical_form(VPolytope(r.vertices, 3)).key
            for r in res.records}
    assert len(mine) == len(res.records)
    assert mine == {canonical_form(g).key for g in golden}
    for r in res.records:
        V = VPolytope(r.vertices, 3)
        ok, why = is_smooth(V)
        assert ok, why
        H = facets_of(V)
        assert r.facet_count == len(H.A)
        assert r.num_lattice_points == len(lattice_points(H, _verts=V))


def test_records_sorted_and_deterministic():
    a = run_classify(RunConfig(2, 8))
    b = run_classify(RunConfig(2, 8))
    assert a.records == b.records
    keys = [(r.num_lattice_points, r.num_vertices,
             canonical_form(VPolytope(r.vertices, 2)).key)
            for r in a.records]
    assert keys == sorted(keys)
    hist_keys = sorted(a.histogram)
    assert hist_keys == list(range(3, hist_keys[-1] + 1))


def test_threads_do_not_change_output():
    one = run_classify(RunConfig(2, 9, threads=1))
    four = run_classify(RunConfig(2, 9, threads=4))
    assert one.records == four.records
    assert render_json(one) == render_json(four)


def test_trace_tree_lists_every_visited_node(tmp_path):
    path = tmp_path / "trace.txt"
    res = run_classify(RunConfig(2, 6, trace_tree=str(path)))
    lines = path.read_text().splitlines()
    assert len(lines) == res.diagnostics.nodes_visited
    for line in lines:
        label, depth, cones, step = line.split("\t")
        assert label == "F_p" or label.startswith("F_a(a=")
        assert int(depth) >= 0 and int(cones) >= 3
        assert step == "root" or step.startswith("cone:")


def test_count_tree_values():
    assert run_count_tree("F_p", 3) == 1
    assert run_count_tree("F_p", 6) == 41
    assert run_count_tree("F_a", 6) == 19
    assert run_count_tree("F_p", 6, unpruned=True) == 76
    assert run_count_tree("3^4", 4) == 1
    assert run_count_tree("3^4", 6) == 11
    assert run_count_tree("3^4", 8, unpruned=True) == 161
    pruned = run_count_tree("3^4", 8)
    assert 11 < pruned < 161
    with pytest.raises(UnknownSeed):
        run_count_tree("F_q", 6)


def test_stats_small_budget():
    stats = run_stats(6)
    assert stats.get(3) == (3, 0, 3)
    assert stats.get(4) == (4, 0, 4)
    assert stats.get(5) is None
    text = render_stats(stats)
    assert ">6" in text
    rows = text.splitlines()
    assert rows[0].split() == ["k", "3", "4", "5", "6", "7", "8"]
    assert rows[1].split() == ["l", "3", "4", ">6", ">6", ">6", ">6"]
    assert rows[2].split() == ["i", "0", "0", "-", "-", "-", "-"]


def test_list_seeds_registry():
    listing = list_seeds()
    assert [s["name"] for s in listing["seeds"]] == [
        "F_p", "F_a", "3^4", "(3^2 4^3)'", "(3^2 4^3)''", "4^6",
        "3^2 4^3 6^2"]
    assert len(listing["excluded"]) == 14
    for ex in listing["excluded"]:
        assert ex["reason"]
        assert ex["num_cones"] in (10, 12)
    text = render_seeds(listing)
    assert "F_p" in text and "eliminated" in text


def test_render_json_integers_only(tmp_path):
    res = run_classify(RunConfig(2, 6))
    payload = json.loads(render_json(res))
    assert payload["dimension"] == 2 and payload["max_points"] == 6

    def no_floats(x):
        assert not isinstance(x, float)
        if isinstance(x, dict):
            for k, v in x.items():
                no_floats(v)
        elif isinstance(x, list):
            for v in x:
                no_floats(v)

    no_floats(payload)
    rec = payload["records"][0]
    assert set(rec) == {"dimension", "vertices", "num_lattice_points",
                        "num_vertices", "facet_count", "provenance"}
    assert set(rec["provenance"]) == {"seed", "path", "assignment", "rhs"}


def test_render_text_layout():
    res = run_classify(RunConfig(2, 5))
    text = render_text(res)
    assert "dimension 2, max points 5: 3 polytopes" in text
    assert "vertex coordinates" in text
    assert "diagnostics:" in text

"""End-to-end classification runs, plus the tree-count and stats commands.

A run walks the blow-up trees of the seed fans, filters fans that cannot
carry a small polytope, enumerates admissible inequality levels for one
representative per fan isomorphism class, realizes the polytopes, and
deduplicates up to lattice isomorphism.

Dimension 2 walks concrete fans (one tree per Hirzebruch width) and may cut
whole subtrees: wall coefficients only ever grow under 2D blow-ups, so a
fan with a coefficient past the cap never has feasible descendants.
Dimension 3 has no such monotonicity (wall blow-ups destroy the offending
wall), so the walk is parametric, every node is filtered by the smooth
polygon criterion from the 2D results, and surviving nodes are instantiated
over their parameter boxes with a vectorized wall-sum test.
"""

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import seeds
from .exact_linalg import dot
from .fans import DegenerateRay, ParamFan, fan_canonical_key, instantiate
from .iso_dedup import canonical_form, dedup
from .polytopes import VPolytope, facets_of, lattice_points
from .rhs import (
    enumerate_rhs,
    passes_wall_sum,
    realize_and_filter,
    wall_sum_mask,
)
from .search import (
    count_polygon_tree,
    degree_profile,
    enumerate_blowups,
    instantiate_all,
    make_root,
    polygon_criterion,
    polygon_stats,
    trace_line,
    walk_tree,
)

VALIDATED_3D_MAX_POINTS = 12


class ConfigError(ValueError):
    """The run configuration is outside the supported envelope."""


@dataclass
class RunConfig:
    """What to classify and how to emit it."""
    dimension: int
    max_points: int
    fmt: str = "text"
    out: str = None
    threads: int = 1
    trace_tree: str = None
    allow_unvalidated: bool = False

    def validate(self):
        """Raise ConfigError, or return a list of warnings to show."""
        if self.dimension not in (2, 3):
            raise ConfigError("dimension must be 2 or 3, got %r"
                              % (self.dimension,))
        if self.max_points < self.dimension + 1:
            raise ConfigError("max_points must be at least %d in dimension "
                              "%d" % (self.dimension + 1, self.dimension))
        if self.fmt not in ("json", "text"):
            raise ConfigError("format must be json or text, got %r"
                              % (self.fmt,))
        if self.threads < 1:
            raise ConfigError("threads must be positive")
        warnings = []
        if self.dimension == 3 and self.max_points > VALIDATED_3D_MAX_POINTS:
            msg = ("max_points %d exceeds the validated envelope %d for "
                   "dimension 3: the seed list is only known complete for "
                   "fans with at most 8 rays" % (self.max_points,
                                                 VALIDATED_3D_MAX_POINTS))
            if not self.allow_unvalidated:
                raise ConfigError(msg)
            warnings.append("warning: " + msg + "; results may be incomplete")
        return warnings


@dataclass(frozen=True, order=True)
class Provenance:
    """Where a polytope came from: seed, blow-up path, parameters, levels.

    Field order gives the tie-breaking order used by dedup.
    """
    seed: str
    path: tuple          # (("cone", i) | ("wall", (i, j)), ...)
    assignment: tuple    # sorted (name, value) pairs
    rhs: tuple


@dataclass(frozen=True)
class ClassificationRecord:
    """One polytope of the classification, in canonical coordinates."""
    dimension: int
    vertices: tuple
    num_lattice_points: int
    num_vertices: int
    facet_count: int
    provenance: Provenance


@dataclass
class Diagnostics:
    nodes_visited: int = 0
    fans_tested: int = 0
    rhs_enumerated: int = 0
    realizations_rejected: int = 0


@dataclass(frozen=True)
class RunResult:
    dimension: int
    max_points: int
    records: tuple
    histogram: dict      # num_vertices -> count, contiguous from d+1
    diagnostics: Diagnostics
    warnings: tuple


def _make_record(dim, poly, prov, max_points):
    cf = canonical_form(poly)
    cv = VPolytope(cf.vertices, dim)
    H = facets_of(cv)
    pts = lattice_points(H, _verts=cv)
    assert len(pts) <= max_points
    return ClassificationRecord(dim, cf.vertices, len(pts),
                                len(cf.vertices), len(H.A), prov)


def _realize_jobs(dim, jobs, max_points, diag, threads):
    """Run the level enumeration and realization for each fan class rep.

    jobs are ((seed, path, assignment), fan) pairs in a deterministic
    order; results are merged in that same order, so the thread budget
    never changes the output.
    """

    def work(job):
        prefix, fan = job
        levels = enumerate_rhs(fan, max_points)
        kept = []
        rejected = 0
        for b in levels:
            poly, status = realize_and_filter(fan, b, max_points)
            if poly is None:
                rejected += 1
                continue
            prov = Provenance(prefix[0], prefix[1], prefix[2], tuple(b))
            kept.append(_make_record(dim, poly, prov, max_points))
        return len(levels), rejected, kept

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, jobs))
    else:
        results = [work(job) for job in jobs]

    records = []
    for n_levels, rejected, kept in results:
        diag.rhs_enumerated += n_levels
        diag.realizations_rejected += rejected
        records.extend(kept)
    return dedup(records)


def _note_class(classes, key, prefix, fan):
    cur = classes.get(key)
    if cur is None or prefix < cur[0]:
        classes[key] = (prefix, fan)


def _polygon_roots(max_points):
    """Concrete root fans for dimension 2: F_p plus each Hirzebruch width."""
    roots = [("F_p", {}, seeds.seed_fan("F_p", max_points))]
    fa = seeds.seed_fan("F_a", max_points)
    for assignment, fan in instantiate_all(fa):
        roots.append(("F_a", assignment, fan))
    return roots


def _polygon_cycle(fan):
    """Cyclic ray order and wall coefficients of a concrete 2D fan.

    Position i holds the coefficient a_i with r_{i-1} + r_{i+1} = a_i r_i.
    These are exactly the per-wall sums of the edge length forms, and the
    cyclic sequence up to rotation and reversal is a complete isomorphism
    invariant: picking a starting cone and orientation pins the rays to
    r_1 = e_1, r_2 = e_2, r_{k+1} = a_k r_k - r_{k-1}.
    """
    n = len(fan.rays)
    adj = {i: [] for i in range(n)}
    for a, b in fan.cones:
        adj[a].append(b)
        adj[b].append(a)
    order = [0, adj[0][0]]
    while len(order) < n:
        a, b = adj[order[-1]]
        order.append(b if a == order[-2] else a)
    cycle = []
    for p in range(n):
        prev = fan.rays[order[p - 1]]
        cur = fan.rays[order[p]]
        nxt = fan.rays[order[(p + 1) % n]]
        k = 0 if cur[0] != 0 else 1
        a, rem = divmod(prev[k] + nxt[k], cur[k])
        assert rem == 0 and all(prev[t] + nxt[t] == a * cur[t]
                                for t in range(2))
        cycle.append(a)
    return tuple(order), tuple(cycle)


def _splice_cycle(order, cycle, cone, new_index):
    """Coefficient cycle after blowing up the cone (a pair of ray indices).

    The new ray lands between the pair with coefficient 1 and each of the
    pair gains 1, so no arithmetic on ray vectors is needed per node.
    """
    n = len(order)
    ra, rb = cone
    p = order.index(ra)
    if order[(p + 1) % n] != rb:
        p = order.index(rb)
        assert order[(p + 1) % n] == ra
    if p == n - 1:
        new_order = order + (new_index,)
        new_cycle = (cycle[0] + 1,) + cycle[1:n - 1] + (cycle[n - 1] + 1, 1)
    else:
        new_order = order[:p + 1] + (new_index,) + order[p + 1:]
        new_cycle = (cycle[:p] + (cycle[p] + 1, 1, cycle[p + 1] + 1)
                     + cycle[p + 2:])
    return new_order, new_cycle


def _dihedral_key(cycle):
    """Least rotation or reversed rotation of the coefficient cycle."""
    n = len(cycle)
    best = None
    for seq in (cycle, cycle[::-1]):
        doubled = seq + seq
        for s in range(n):
            cand = doubled[s:s + n]
            if best is None or cand < best:
                best = cand
    return best


def _min_interior(n):
    """Least interior point count of any convex lattice n-gon.

    A lattice polygon without interior points is a height-one trapezoid or
    twice the unit triangle, so it has at most 4 vertices; and Scott's
    inequality b <= 2i + 7 (i >= 1) forces interior points once the
    boundary, hence the vertex count, grows.
    """
    if n <= 4:
        return 0
    return max(1, (n - 6) // 2)


def _classify_2d(max_points, trace, threads):
    diag = Diagnostics()
    cap = max_points - 4      # thickened edge: 2(l+1) + a*l <= N at l = 1
    max_rays = max_points
    while max_rays + _min_interior(max_rays) > max_points:
        max_rays -= 1
    classes = {}
    for name, assignment, fan in _polygon_roots(max_points):
        label = name if not assignment else \
            "%s(a=%d)" % (name, assignment["a"])
        prefix_assignment = tuple(sorted(assignment.items()))
        order0, cycle0 = _polygon_cycle(fan)
        stack = [(make_root(fan), order0, cycle0)]
        while stack:
            node, order, cycle = stack.pop()
            diag.nodes_visited += 1
            if trace is not None:
                trace.write("%s\t%s\n" % (label, trace_line(node)))
            if max(cycle) > cap:
                continue          # coefficients only grow: subtree is dead
            key = _dihedral_key(cycle)
            _note_class(classes, key, (name, node.path, prefix_assignment),
                        node.fan)
            children = [(child,) + _splice_cycle(
                            order, cycle,
                            node.fan.cones[child.path[-1][1]],
                            len(node.fan.rays))
                        for child in enumerate_blowups(node, max_rays)]
            stack.extend(reversed(children))
    jobs = sorted(classes.values(), key=lambda job: job[0])
    diag.fans_tested = len(jobs)
    records = _realize_jobs(2, jobs, max_points, diag, threads)
    return records, diag


def _masked_instances(fan, max_points):
    """In-box assignments passing the wall-sum cap, with their fans."""
    if not isinstance(fan, ParamFan) or not fan.bounds:
        return [({}, fan)] if passes_wall_sum(fan, max_points) else []
    names = sorted(fan.bounds)
    axes = []
    for n in names:
        lo, hi = fan.bounds[n]
        bad = fan.excluded.get(n, frozenset())
        axes.append([v for v in range(lo, hi + 1) if v not in bad])
        if not axes[-1]:
            return []
    mesh = np.meshgrid(*[np.array(ax, dtype=np.int64) for ax in axes],
                       indexing="ij")
    grids = {n: m.reshape(-1) for n, m in zip(names, mesh)}
    mask = wall_sum_mask(fan, grids, max_points)
    out = []
    for idx in np.nonzero(mask)[0]:
        assignment = {n: int(grids[n][idx]) for n in names}
        try:
            out.append((assignment, instantiate(fan, assignment)))
        except DegenerateRay:
            continue
    return out


def _classify_3d(max_points, stats, trace, threads):
    diag = Diagnostics()
    classes = {}
    for name in seeds.seed_names(3):
        seed = seeds.get_seed(name)
        for node in walk_tree(seed.build(max_points), max_points):
            diag.nodes_visited += 1
            if trace is not None:
                trace.write("%s\t%s\n" % (name, trace_line(node)))
            crit = polygon_criterion(degree_profile(node.fan), stats)
            if not crit.passes:
                continue          # not a candidate, but children may be
            for assignment, fan in _masked_instances(node.fan, max_points):
                prefix = (name, node.path, tuple(sorted(assignment.items())))
                _note_class(classes, fan_canonical_key(fan), prefix, fan)
    jobs = sorted(classes.values(), key=lambda job: job[0])
    diag.fans_tested = len(jobs)
    records = _realize_jobs(3, jobs, max_points, diag, threads)
    return records, diag


def polygon_stats_from_records(records, max_points):
    """Fold classified polygons into the per-vertex-count minima table."""
    counts = []
    for r in records:
        cv = VPolytope(r.vertices, 2)
        H = facets_of(cv)
        pts = lattice_points(H, _verts=cv)
        interior = sum(1 for p in pts
                       if all(dot(row, p) < c
                              for row, c in zip(H.A, H.b)))
        counts.append((r.num_vertices, r.num_lattice_points, interior,
                       r.num_lattice_points - interior))
    return polygon_stats(counts, max_points)


def _histogram(records, dim):
    if not records:
        return {}
    top = max(r.num_vertices for r in records)
    return {k: sum(1 for r in records if r.num_vertices == k)
            for k in range(dim + 1, top + 1)}


def run_classify(cfg):
    warnings = cfg.validate()
    trace = open(cfg.trace_tree, "w") if cfg.trace_tree else None
    try:
        if cfg.dimension == 2:
            records, diag = _classify_2d(cfg.max_points, trace, cfg.threads)
        else:
            polygons, _ = _classify_2d(cfg.max_points, None, cfg.threads)
            stats = polygon_stats_from_records(polygons, cfg.max_points)
            records, diag = _classify_3d(cfg.max_points, stats, trace,
                                         cfg.threads)
    finally:
        if trace is not None:
            trace.close()
    return RunResult(cfg.dimension, cfg.max_points, tuple(records),
                     _histogram(records, cfg.dimension), diag,
                     tuple(warnings))


def run_count_tree(seed_name, max_cones, unpruned=False):
    """Node count of a seed's blow-up tree up to max_cones maximal cones."""
    seed = seeds.get_seed(seed_name)
    fan = seed.build(max(max_cones, 12))
    if seed.dim == 2:
        return count_polygon_tree(len(fan.cones), max_cones,
                                  pruned=not unpruned)
    return sum(1 for _ in walk_tree(fan, max_cones, pruned=not unpruned))


def run_stats(max_points):
    """Smooth polygon minima for the given budget, from a fresh 2D run."""
    cfg = RunConfig(2, max_points)
    cfg.validate()
    result = run_classify(cfg)
    return polygon_stats_from_records(result.records, max_points)


def list_seeds():
    """Registry dump: live seeds and the eliminated minimal fans."""
    live = []
    for name in seeds.seed_names():
        seed = seeds.get_seed(name)
        fan = seed.build(12)
        live.append({
            "name": seed.name,
            "dim": seed.dim,
            "rays": tuple(tuple(repr(a) if not isinstance(a, int) else a
                                for a in r) for r in fan.rays),
            "num_rays": len(fan.rays),
            "num_cones": len(fan.cones),
            "parameters": seed.params_desc,
        })
    excluded = [{
        "name": ex.name,
        "profile": dict(ex.profile),
        "num_cones": ex.num_cones,
        "bound": ex.bound,
        "reason": ex.reason,
    } for ex in seeds.EXCLUDED_FANS]
    return {"seeds": live, "excluded": excluded}


# ---------------------------------------------------------------------------
# serialization (all integers; nothing here may ever emit a float)

def _provenance_jsonable(prov):
    return {
        "seed": prov.seed,
        "path": [[kind, list(t) if isinstance(t, tuple) else t]
                 for kind, t in prov.path],
        "assignment": {n: v for n, v in prov.assignment},
        "rhs": list(prov.rhs),
    }


def render_json(result):
    payload = {
        "dimension": result.dimension,
        "max_points": result.max_points,
        "records": [{
            "dimension": r.dimension,
            "vertices": [list(v) for v in r.vertices],
            "num_lattice_points": r.num_lattice_points,
            "num_vertices": r.num_vertices,
            "facet_count": r.facet_count,
            "provenance": _provenance_jsonable(r.provenance),
        } for r in result.records],
        "histogram": {str(k): v for k, v in result.histogram.items()},
        "diagnostics": {
            "nodes_visited": result.diagnostics.nodes_visited,
            "fans_tested": result.diagnostics.fans_tested,
            "rhs_enumerated": result.diagnostics.rhs_enumerated,
            "realizations_rejected":
                result.diagnostics.realizations_rejected,
        },
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _fmt_vertices(vertices):
    return " ".join("(%s)" % ",".join(str(a) for a in v) for v in vertices)


def render_text(result):
    lines = ["dimension %d, max points %d: %d polytopes"
             % (result.dimension, result.max_points, len(result.records)),
             ""]
    rows = [(str(i + 1), str(r.num_lattice_points), str(r.num_vertices),
             str(r.facet_count), _fmt_vertices(r.vertices))
            for i, r in enumerate(result.records)]
    head = ("#", "points", "vertices", "facets", "vertex coordinates")
    widths = [max(len(h), *(len(row[c]) for row in rows)) if rows else len(h)
              for c, h in enumerate(head)]
    def line(cells):
        left = "  ".join(c.rjust(w) for c, w in zip(cells[:4], widths[:4]))
        return left + "  " + cells[4]
    lines.append(line(head))
    lines.extend(line(row) for row in rows)
    lines.append("")
    lines.append("vertices  count")
    for k in sorted(result.histogram):
        lines.append("%8d  %5d" % (k, result.histogram[k]))
    d = result.diagnostics
    lines.append("")
    lines.append("diagnostics: nodes_visited=%d fans_tested=%d "
                 "rhs_enumerated=%d realizations_rejected=%d"
                 % (d.nodes_visited, d.fans_tested, d.rhs_enumerated,
                    d.realizations_rejected))
    return "\n".join(lines) + "\n"


def render_stats(stats):
    """The polygon minima table; absences shown as >N in the totals row."""
    ks = list(range(3, 9))
    rows = [("k", [str(k) for k in ks])]
    absent_l = ">%d" % stats.max_points
    for label, pick, absent in (("l", 0, absent_l), ("i", 1, "-"),
                                ("b", 2, "-")):
        cells = []
        for k in ks:
            entry = stats.get(k)
            cells.append(str(entry[pick]) if entry is not None else absent)
        rows.append((label, cells))
    width = max(len(c) for _, cells in rows for c in cells)
    lines = []
    for label, cells in rows:
        lines.append(label + "  " + "  ".join(c.rjust(width) for c in cells))
    return "\n".join(lines) + "\n"


def render_seeds(listing):
    lines = ["seed fans"]
    for s in listing["seeds"]:
        lines.append("  %-14s dim %d, %d rays, %d cones, parameters: %s"
                     % (s["name"], s["dim"], s["num_rays"], s["num_cones"],
                        s["parameters"]))
        lines.append("      rays: " + " ".join(
            "(%s)" % ",".join(str(a) for a in r) for r in s["rays"]))
    lines.append("")
    lines.append("eliminated minimal fans (dimension 3, 12 point budget)")
    for ex in listing["excluded"]:
        bound = "bound %d > 12" % ex["bound"] if ex["bound"] is not None \
            else "no bound (impossible facet)"
        lines.append("  %-18s %d cones, %s" % (ex["name"], ex["num_cones"],
                                               bound))
        lines.append("      " + ex["reason"])
    return "\n".join(lines) + "\n"


__all__ = [
    "ConfigError", "RunConfig", "Provenance", "ClassificationRecord",
    "Diagnostics", "RunResult", "run_classify", "run_count_tree",
    "run_stats", "list_seeds", "polygon_stats_from_records",
    "render_json", "render_text", "render_stats", "render_seeds",
    "VALIDATED_3D_MAX_POINTS",
]

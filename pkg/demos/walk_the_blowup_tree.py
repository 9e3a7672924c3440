#!/usr/bin/env python3
# Walk the blow-up tree of the triangle fan by hand and watch the
# bookkeeping that the classifier automates.

from smoothpoly import seeds
from smoothpoly.search import (
    make_root, enumerate_blowups, walk_tree, count_polygon_tree, trace_line,
)

fp = seeds.seed_fan("F_p", 12)
print("triangle fan F_p: rays", fp.rays)
print("maximal cones:", fp.cones)

# every smooth complete 2D fan comes from F_p or a Hirzebruch fan by
# repeatedly inserting the sum of two adjacent rays
root = make_root(fp)
kids = list(enumerate_blowups(root, 12))
print("\none blow-up gives %d children; the first one:" % len(kids))
child = kids[0]
print("  new ray", child.fan.rays[-1], "= sum of cone", fp.cones[0])
print("  cones now", child.fan.cones)

# naive recursion would revisit a fan once per ordering of independent
# blow-ups; the ordering rule kills the repeats without losing any fan
print("\ntree sizes from the triangle (3 cones):")
for cones in (6, 8, 10, 12):
    pruned = count_polygon_tree(3, cones)
    full = count_polygon_tree(3, cones, pruned=False)
    print("  up to %2d cones: %6d pruned vs %9d unpruned" %
          (cones, pruned, full))

print("\nsame thing for the Hirzebruch tree (4 cones), up to 12:")
print(" ", count_polygon_tree(4, 12))

# the walk itself yields nodes depth-first; trace_line is what the
# classify --trace-tree option writes per node
print("\nfirst six nodes of the pruned walk (depth, cones, step):")
for i, node in enumerate(walk_tree(fp, 12)):
    print("  " + trace_line(node))
    if i == 5:
        break

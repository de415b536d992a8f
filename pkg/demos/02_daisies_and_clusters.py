"""
Daisies, clusters and mining
============================

A daisy collects the strings close to a core. Clusters are sets of small
diameter and large size; mining finds the maximal ones in a matrix.
"""
from infocluster.clusters import cluster_stats, distance_matrix, mine_clusters, validate_cluster
from infocluster.daisy import daisy_cluster_check, daisy_members, merge_check
from infocluster.models import SetModel, SetString

model = SetModel(5)
core = SetString.of([0, 1], 5)

# With d = 0 a daisy member contains the core and adds at most m positions.
members = daisy_members(core, 2, 0, model)
print(f"daisy around {core} with m=2, d=0 has {len(members)} members")
print("(diameter, logsize, gap) =", cluster_stats(members, model))

# With d = 1 members may also drop one core position; the diameter stays under m + 2d.
check = daisy_cluster_check(core, 2, 1, model)
print(f"m=2, d=1: {len(check.members)} members, diameter {check.diameter} <= {check.bound}")

# A cluster needs every distinct pair within m and at least 2**l members.
print("valid (2, 2)-cluster?", bool(validate_cluster(members, 2, 2, model)))
print("valid (2, 3)-cluster?", validate_cluster(members, 2, 3, model))

# Two daisies that share enough members merge into a slightly wider cluster.
a = daisy_members(SetString.of([0, 1, 2, 3], 5), 2, 1, model)
b = daisy_members(SetString.of([0, 1, 2, 4], 5), 2, 1, model)
print("merge:", merge_check(a, b, 2, 1, model))

# Mining: maximal clusters of the full set-model matrix on 3 positions.
small = SetModel(3)
matrix = distance_matrix(list(small.strings), small)
for c in mine_clusters(matrix, 1, 2):
    print("cluster", c.sorted_members(), "diameter", c.diameter)

"""
Extracting the common part of three strings
===========================================

In the set model the information shared by x, y and z is the triple
intersection, and it can be materialized as a string w.
"""
from infocluster.models import SetString
from infocluster.triple import clone_cluster_check, extract_triple_core, nonshannon_sweep

# A clean Venn picture: a shared part g plus one private part each.
x = SetString.of([0, 1, 2, 3], 8)
y = SetString.of([0, 1, 2, 4, 5], 8)
z = SetString.of([0, 1, 2, 6], 8)
report = extract_triple_core(x, y, z)
print("w =", report.w, " C(w) =", report.w_complexity, " I(x:y:z) =", report.triple_info)
print("C(w|x), C(w|y), C(w|z) =", report.residuals, " eps =", report.eps)

# Strings with nearly the same profile as z relative to (x, y) form a cluster.
small = [SetString.of(p, 5) for p in ([0, 1, 2], [0, 1, 3], [0, 1, 4])]
check = clone_cluster_check(*small, delta=1)
print(f"{len(check.members)} clones, diameter {check.diameter} <= bound {check.bound}")

# The five-variable inequality behind the clone argument holds on every tuple.
best, count, arg = nonshannon_sweep(3)
print(f"min slack over {count} five-tuples on universe 3: {best}")

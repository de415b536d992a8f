"""
Complexity in the set model
===========================

Strings are subsets of a small universe; complexity is counting.
"""
from infocluster.models import SetModel, SetString, chain_rule_sweep, set_complexity, set_information

# Two strings on a universe of 6 positions.
x = SetString.of([0, 1], 6)
y = SetString.of([1, 2], 6)
print("x =", x, " y =", y)

# C(x), C(x,y) and C(x|y) are the sizes of x, x|y and x-y.
print("C(x)   =", set_complexity(x))
print("C(x,y) =", set_complexity([x, y]))
print("C(x|y) =", set_complexity(x, y))

# Mutual information is the overlap, conditional information removes the condition.
z = SetString.of([1], 6)
print("I(x:y)   =", set_information(x, y))
print("I(x:y|z) =", set_information(x, y, z))

# The information distance is the larger of the two conditional complexities.
model = SetModel(6)
print("dist(x,y) =", model.distance(x, y))

# The chain rule C(x,y) = C(x) + C(y|x) holds with no error term, for every pair.
defects = chain_rule_sweep(5)
print("pairs checked on universe 5:", defects.size, " nonzero defects:", int((defects != 0).sum()))

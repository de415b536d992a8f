"""
Referential clusters and core certificates
==========================================

A stream of clusters is filtered so that kept clusters overlap little.
Any cluster of the stream can then be named by the ordinal of a kept one,
and short codes recover its members from that ordinal and back.
"""
import random

from infocluster.daisy import certify_core, decode_members, multiplicity_check, referential_filter
from infocluster.generators import crowded_hub, hub_instance

# A random description system with clusters crowded around one hub string.
inst = hub_instance(random.Random(38), d=1)
print(f"m={inst.m}, d={inst.d}, d'={inst.dprime}, {len(inst.system.strings)} strings, "
      f"{len(inst.stream)} clusters in the stream")

registry = referential_filter(inst.stream, inst.m, inst.d, inst.dprime, inst.system)
print("kept ordinals:", [i for i, _ in registry.kept], " dropped (position, blocker):", registry.dropped)

# No string should sit in too many kept clusters.
print(multiplicity_check(registry, inst.system))

# Certify every cluster of the stream and decode it back.
for pos, S in enumerate(inst.stream):
    cert = certify_core(S, registry, inst.system)
    back = decode_members(cert, registry, inst.system)
    print(f"stream[{pos}] -> core {cert.ordinal} ({'direct' if cert.direct else 'via hops'}), "
          f"decoded exactly: {back == set(S)}, within budgets: {cert.passed}")

# The per-string bound is not unconditional: five clusters can meet at one string.
crowd = crowded_hub()
reg = referential_filter(crowd.stream, crowd.m, crowd.d, crowd.dprime, crowd.system)
print("crowded hub:", multiplicity_check(reg, crowd.system))

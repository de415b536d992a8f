"""Seeded random instances for the verification sweeps."""
from __future__ import annotations

import random
from itertools import combinations
from dataclasses import dataclass

from .models import DescriptionSystem, Program, binary_words


def random_description_system(rng: random.Random, max_strings: int = 64, max_code_len: int = 8,
                              density: float = 0.5) -> DescriptionSystem:
    """A random table: each condition gets distinct random codes with random outputs."""
    n = rng.randint(2, max_strings)
    strings = [f"s{i}" for i in range(n)]
    words = list(binary_words(max_code_len))
    programs = []
    for cond in [None] + strings:
        k = rng.randint(0, max(1, int(density * n)))
        for code in rng.sample(words, min(k, len(words))):
            programs.append(Program(code, cond, rng.choice(strings)))
    return DescriptionSystem(strings, programs)


def system_from_clusters(strings: list, clusters: list[frozenset], m: int) -> DescriptionSystem:
    """A description system in which every listed cluster has diameter ``<= m``.

    Each string gets the empty program for itself and shortlex codes of
    length ``1..m`` for every other member of a cluster it belongs to.
    """
    neighbours: dict = {s: set() for s in strings}
    for c in clusters:
        for a in c:
            neighbours[a] |= c
    words = list(binary_words(m))
    programs = []
    for s in strings:
        others = sorted(neighbours[s] - {s})
        if len(others) + 1 > len(words):
            raise ValueError(f"string {s} has {len(others)} neighbours; codes of length <= {m} cannot cover them")
        programs.append(Program("", s, s))
        programs.extend(Program(code, s, t) for code, t in zip(words[1:], others))
    return DescriptionSystem(strings, programs)


@dataclass
class HubInstance:
    system: DescriptionSystem
    stream: list[frozenset]
    m: int
    d: int
    dprime: int
    hub: str


def hub_instance(rng: random.Random, d: int, extra_m: int | None = None, mode: str | None = None) -> HubInstance:
    """Random ``(m, m-d)``-clusters crowded around one hub string.

    The pool is the hub plus ``2**(m+1) - 2`` other strings, the largest
    radius-``m`` ball program counting allows, so every cluster that contains
    the hub sits inside the hub's ball. In ``"uniform"`` mode members are
    drawn uniformly from the pool; in ``"petals"`` mode each cluster takes
    unused pool strings first and only then reuses old ones, which packs
    many low-overlap clusters around the hub. A few clusters avoid the hub.
    Stream order is random.
    """
    dprime = 2 * d + 2
    m = dprime + (rng.randint(0, 2) if extra_m is None else extra_m)
    mode = mode or rng.choice(("uniform", "petals"))
    size = 2 ** (m - d)
    pool = [f"p{i}" for i in range(2 ** (m + 1) - 2)]
    hub = "hub"
    fresh = pool[:]
    rng.shuffle(fresh)
    used: list = []
    clusters = []
    for _ in range(rng.randint(2, 3 * 2 ** (d + 1))):
        k = rng.randint(size, min(size + size // 2, len(pool)))
        with_hub = rng.random() < 0.8
        want = k - 1 if with_hub else k
        if mode == "petals":
            new = fresh[:want]
            del fresh[:want]
            take = new + rng.sample(used, want - len(new))
            used += new
        else:
            take = rng.sample(pool, want)
        clusters.append(frozenset(([hub] if with_hub else []) + take))
    rng.shuffle(clusters)
    system = system_from_clusters([hub] + pool, clusters, m)
    return HubInstance(system, clusters, m, d, dprime, hub)


def crowded_hub(m: int = 6, d: int = 1, count: int = 5) -> HubInstance:
    """``count`` referential clusters through one hub, each pair sharing ``2**(m-d')`` strings.

    Every pair of clusters shares the hub plus ``2**(m-d') - 1`` strings of
    its own; the remaining members are private. With the defaults the union
    is 126 strings, inside the hub's ball of ``2**7 - 1``, and the hub lies
    in 5 referential ``(6, 5)``-clusters although ``2**(d+1) = 4``.
    """
    dprime = 2 * d + 2
    size = 2 ** (m - d)
    per_pair = 2 ** (m - dprime) - 1
    hub = "hub"
    members: list[list] = [[hub] for _ in range(count)]
    strings = [hub]
    for i, j in combinations(range(count), 2):
        for k in range(per_pair):
            s = f"s{i}{j}_{k}"
            strings.append(s)
            members[i].append(s)
            members[j].append(s)
    for i in range(count):
        while len(members[i]) < size:
            s = f"p{i}_{len(members[i])}"
            strings.append(s)
            members[i].append(s)
    clusters = [frozenset(c) for c in members]
    return HubInstance(system_from_clusters(strings, clusters, m), clusters, m, d, dprime, hub)

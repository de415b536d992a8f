"""Deterministic verification suites.

Each suite returns a :class:`SuiteResult`; :func:`run_verify_suite` bundles
them into a :class:`VerifyReport` whose overall verdict is the conjunction
of the suites.
"""
from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable

import numpy as np

from . import claim, daisy, generators, models, triple
from .clusters import DistanceMatrix, mine_clusters, pow2

DEFAULT_SEED = 20240611


@dataclass
class SuiteResult:
    name: str
    passed: bool
    instances: int
    seconds: float = 0.0
    counterexample: object = None
    details: dict = field(default_factory=dict)


@dataclass
class VerifyReport:
    seed: int
    suites: list[SuiteResult]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "passed": self.passed,
            "suites": [_jsonable(asdict(s)) for s in self.suites],
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj, key=str) if isinstance(obj, (set, frozenset)) else obj
        return [_jsonable(v) for v in items]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, models.SetString):
        return obj.positions
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj) if np.isfinite(obj) else str(obj)
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    return str(obj)


def _timed(fn: Callable[..., SuiteResult]) -> Callable[..., SuiteResult]:
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        result = fn(*args, **kwargs)
        result.seconds = time.perf_counter() - start
        return result
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def chain_suite(universe: int = 5) -> SuiteResult:
    defects = models.chain_rule_sweep(universe)
    bad = np.argwhere(defects != 0)
    ce = None if not len(bad) else {"x": int(bad[0][0]), "y": int(bad[0][1]), "defect": int(defects[tuple(bad[0])])}
    return SuiteResult("chain", not len(bad), defects.size, counterexample=ce)


@_timed
def path_suite(seed: int = DEFAULT_SEED, systems: int = 1000, max_strings: int = 64, max_code_len: int = 8,
               max_leg: int = 4) -> SuiteResult:
    """Target-counting bound on random description systems, every ``(v, w, u)`` with legs ``<= max_leg``."""
    rng = random.Random(seed)
    checks = 0
    for k in range(systems):
        system = generators.random_description_system(rng, max_strings, max_code_len)
        x = rng.choice(system.strings)
        for v in range(max_leg + 1):
            for w in range(max_leg + 1):
                for u in range(v + w + 1):
                    res = daisy.path_lemma_check(x, v, w, u, system)
                    checks += 1
                    if not res.passed:
                        ce = {"system": k, "x": x, "v": v, "w": w, "u": u, "targets": res.targets, "bound": res.bound}
                        return SuiteResult("path", False, checks, counterexample=ce)
    return SuiteResult("path", True, checks, details={"systems": systems})


@_timed
def claim_suite(max_points: int = 10, max_events: int = 6,
                epsilons=(Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(1, 4))) -> SuiteResult:
    instances = 0
    details = {}
    for eps in epsilons:
        search = claim.claim_search(eps, max_points, max_events)
        instances += search.instances
        tight = claim.disjoint_events(eps)
        tight_ok = (
            len(tight.events) == 1 / eps
            and all(tight.probability(e) == eps for e in tight.events)
            and all(not (a & b) for a, b in combinations(tight.events, 2))
        )
        details[str(eps)] = {"instances": search.instances, "largest_family": search.largest, "tightness": tight_ok}
        if search.counterexample is not None or not tight_ok:
            ce = None
            if search.counterexample is not None:
                ce = {"eps": str(eps), "points": search.counterexample.points,
                      "events": [sorted(e) for e in search.counterexample.events]}
            return SuiteResult("claim", False, instances, counterexample=ce, details=details)
    return SuiteResult("claim", True, instances, details=details)


@_timed
def multiplicity_suite(seed: int = DEFAULT_SEED, runs: int = 500, ds=(0, 1, 2)) -> SuiteResult:
    rng = random.Random(seed + 1)
    worst = {d: 0 for d in ds}
    for k in range(runs):
        d = ds[k % len(ds)]
        inst = generators.hub_instance(rng, d)
        reg = daisy.referential_filter(inst.stream, inst.m, d, inst.dprime, inst.system)
        if reg.violations():
            return SuiteResult("multiplicity", False, k + 1, counterexample={"run": k, "registry": reg.to_json()})
        res = daisy.multiplicity_check(reg, inst.system)
        worst[d] = max(worst[d], res.max_multiplicity)
        if not res.passed:
            ce = {"run": k, "d": d, "m": inst.m, "witness": res.witness, "multiplicity": res.max_multiplicity,
                  "bound": res.bound, "registry": reg.to_json()}
            return SuiteResult("multiplicity", False, k + 1, counterexample=ce, details={"max_by_d": worst})
    return SuiteResult("multiplicity", True, runs, details={"max_by_d": worst})


def certify_instance(rng: random.Random, d: int) -> tuple[bool, dict]:
    """Build one stream, certify a random member cluster and decode it back."""
    inst = generators.hub_instance(rng, d)
    target = rng.choice(inst.stream)
    reg = daisy.referential_filter(inst.stream, inst.m, d, inst.dprime, inst.system)
    cert = daisy.certify_core(target, reg, inst.system)
    decoded = daisy.decode_members(cert, reg, inst.system)
    cores_ok = all(daisy.decode_core(cert, reg, inst.system, x) == cert.ordinal for x in target)
    ranks_ok = all(
        daisy.decode_cluster_member(reg, cert.ordinal, r.rank_in_cluster) == r.member
        and reg.covering(r.member)[r.covering_rank] == cert.ordinal
        for r in cert.members
    )
    info = {"m": inst.m, "d": d, "ordinal": cert.ordinal, "direct": cert.direct,
            "failures": cert.budget_failures(), "decoded_ok": decoded == set(target),
            "cores_ok": cores_ok, "ranks_ok": ranks_ok}
    ok = decoded == set(target) and cores_ok and ranks_ok and cert.passed
    return ok, info


@_timed
def certify_suite(seed: int = DEFAULT_SEED, runs: int = 200, ds=(0, 1, 2)) -> SuiteResult:
    rng = random.Random(seed + 2)
    direct = 0
    for k in range(runs):
        ok, info = certify_instance(rng, ds[k % len(ds)])
        direct += info["direct"]
        if not ok:
            return SuiteResult("certify", False, k + 1, counterexample={"run": k, **info})
    return SuiteResult("certify", True, runs, details={"direct": direct, "merged": runs - direct})


@_timed
def nonshannon_suite(universe: int = 4) -> SuiteResult:
    best, count, arg = triple.nonshannon_sweep(universe)
    ce = None if best >= 0 else {"tuple": list(arg), "slack": best}
    return SuiteResult("nonshannon", best >= 0, count, counterexample=ce, details={"min_slack": best})


@_timed
def triple_suite(universe: int = 5) -> SuiteResult:
    strings = list(models.Universe(universe).all_strings())
    count = 0
    for x in strings:
        for y in strings:
            for z in strings:
                rep = triple.extract_triple_core(x, y, z)
                count += 1
                if rep.w_complexity != rep.triple_info or rep.residuals != (0, 0, 0):
                    ce = {"x": x.positions, "y": y.positions, "z": z.positions, "report": rep.to_json()}
                    return SuiteResult("triple", False, count, counterexample=ce)
    return SuiteResult("triple", True, count)


@_timed
def daisy_suite(max_universe: int = 6, max_d: int = 2) -> SuiteResult:
    count = 0
    for n in range(1, max_universe + 1):
        model = models.SetModel(n)
        for core in model.strings:
            for d in range(max_d + 1):
                for m in range(n + 1):
                    res = daisy.daisy_cluster_check(core, m, d, model)
                    count += 1
                    if not res.passed:
                        ce = {"universe": n, "core": core.positions, "m": m, "d": d,
                              "diameter": res.diameter, "bound": res.bound}
                        return SuiteResult("daisy", False, count, counterexample=ce)
    return SuiteResult("daisy", True, count)


def exhaustive_maximal_clusters(matrix: DistanceMatrix, m: float, l: int) -> set[frozenset]:
    """Brute force: every inclusion-maximal feasible subset."""
    n = len(matrix.ids)
    vals = matrix.values
    feasible = []
    for mask in range(1, 1 << n):
        members = [i for i in range(n) if mask >> i & 1]
        if Fraction(len(members)) < pow2(l):
            continue
        if all(vals[i, j] <= m for i, j in combinations(members, 2)):
            feasible.append(mask)
    fs = set(feasible)
    maximal = set()
    for mask in feasible:
        if not any((mask | 1 << i) in fs for i in range(n) if not mask >> i & 1):
            maximal.add(frozenset(matrix.ids[i] for i in range(n) if mask >> i & 1))
    return maximal


def random_matrix(rng: random.Random, n: int) -> DistanceMatrix:
    vals = np.zeros((n, n))
    for i, j in combinations(range(n), 2):
        vals[i, j] = vals[j, i] = rng.randint(0, 6)
    return DistanceMatrix([f"i{k:02d}" for k in range(n)], vals)


@_timed
def mining_suite(seed: int = DEFAULT_SEED, instances: int = 50, max_items: int = 10) -> SuiteResult:
    rng = random.Random(seed + 3)
    for k in range(instances):
        n = rng.randint(1, max_items)
        matrix = random_matrix(rng, n)
        m, l = rng.randint(0, 6), rng.randint(0, 2)
        got = {c.members for c in mine_clusters(matrix, m, l)}
        want = exhaustive_maximal_clusters(matrix, m, l)
        if got != want:
            ce = {"instance": k, "m": m, "l": l, "ids": matrix.ids, "values": matrix.values.tolist(),
                  "mined": sorted(map(sorted, got)), "oracle": sorted(map(sorted, want))}
            return SuiteResult("mining", False, k + 1, counterexample=ce)
    return SuiteResult("mining", True, instances)


def registry_suite(registry: daisy.ReferentialRegistry) -> SuiteResult:
    """Post-hoc check of a stored registry's pairwise-intersection invariant."""
    start = time.perf_counter()
    bad = registry.violations()
    ce = None if not bad else {"ordinals": list(bad[0][:2]), "intersection": bad[0][2],
                               "threshold": str(pow2(registry.m - registry.dprime))}
    return SuiteResult("registry", not bad, len(registry.kept), time.perf_counter() - start, ce)


SUITES = {
    "chain": chain_suite,
    "path": path_suite,
    "claim": claim_suite,
    "multiplicity": multiplicity_suite,
    "certify": certify_suite,
    "nonshannon": nonshannon_suite,
    "triple": triple_suite,
    "daisy": daisy_suite,
    "mining": mining_suite,
}
SEEDED = {"path", "multiplicity", "certify", "mining"}


def run_verify_suite(names=None, seed: int = DEFAULT_SEED, exhaustive_points: int = 10,
                     universe: int | None = None, registry: daisy.ReferentialRegistry | None = None) -> VerifyReport:
    """Run the selected suites (all by default) for a fixed seed."""
    names = list(SUITES) if not names else list(names)
    results = []
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
        kwargs = {}
        if name in SEEDED:
            kwargs["seed"] = seed
        if name == "claim":
            kwargs["max_points"] = exhaustive_points
        if universe is not None and name in ("chain", "nonshannon", "triple"):
            kwargs["universe"] = universe
        if universe is not None and name == "daisy":
            kwargs["max_universe"] = universe
        results.append(SUITES[name](**kwargs))
    if registry is not None:
        results.append(registry_suite(registry))
    return VerifyReport(seed, results)

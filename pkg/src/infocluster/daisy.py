"""Daisies, referential clusters and core certificates.

An ``(m, d)``-daisy with core ``z`` is the set of all ``x`` with
``C(z|x) <= d`` and ``C(x|z) <= m + d``. Every dense cluster sits inside a
daisy; this module makes the construction behind that fact executable on
finite models, with the core realized as an ordinal in a registry of
referential clusters and every complexity bound realized as an explicit
code length.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable

import numpy as np

from .clusters import pow2, validate_cluster
from .models import DescriptionSystem


class StreamCoverageError(LookupError):
    """No referential cluster has a large intersection with the target."""


def ceil_log2(n: int) -> int:
    """Bits needed to index ``n`` alternatives (0 for a single one)."""
    if n < 1:
        raise ValueError("nothing to index")
    return (n - 1).bit_length()


def _key(x):
    return str(x)


# --- daisies -----------------------------------------------------------------

def daisy_members(core, m: int, d: int, model) -> frozenset:
    """All strings of ``model`` with ``C(core|x) <= d`` and ``C(x|core) <= m + d``."""
    if m < 0 or d < 0:
        raise ValueError("daisy parameters must be nonnegative")
    if core not in model:
        raise KeyError(f"core {core!r} is unknown to the model")
    return frozenset(
        x for x in model.strings
        if model.complexity(core, x) <= d and model.complexity(x, core) <= m + d
    )


@dataclass(frozen=True)
class DaisyCheck:
    members: frozenset
    diameter: float
    bound: float
    passed: bool


def daisy_cluster_check(core, m: int, d: int, model, slack: int = 0) -> DaisyCheck:
    """Measure the daisy's diameter against ``m + 2d + slack``.

    The triangle route ``C(x1|x2) <= C(z|x2) + C(x1|z)`` gives the bound
    with ``slack = 0`` in the set model; for table models the triangle slack
    has to be supplied.
    """
    members = daisy_members(core, m, d, model)
    diam = max((model.distance(a, b) for a, b in combinations(members, 2)), default=0)
    bound = m + 2 * d + slack
    return DaisyCheck(members, diam, bound, diam <= bound)


# --- paths ---------------------------------------------------------------------

def count_paths(x, z, v: int, w: int, model) -> int:
    """Number of ``y`` with ``C(y|x) < v`` and ``C(z|y) < w``."""
    if isinstance(model, DescriptionSystem):
        k = model.conditional_matrix
        first = k[model.index[x], :] < v
        second = k[:, model.index[z]] < w
        return int(np.count_nonzero(first & second))
    return sum(1 for y in model.strings if model.complexity(y, x) < v and model.complexity(z, y) < w)


@dataclass(frozen=True)
class PathLemmaCheck:
    targets: int
    bound: Fraction
    passed: bool


def path_lemma_check(x, v: int, w: int, u: int, model) -> PathLemmaCheck:
    """Count targets ``z`` reached from ``x`` by at least ``2**u`` two-step paths.

    Program counting caps the paths at ``2**(v+w)``, so at most
    ``2**(v+w-u)`` targets qualify in any description system. Models whose
    conditional complexity is not backed by programs (the set model) may
    exceed the bound; the check reports rather than assumes it.
    """
    if u > v + w:
        raise ValueError(f"u={u} exceeds v+w={v + w}")
    need = pow2(u)
    if isinstance(model, DescriptionSystem):
        k = model.conditional_matrix
        first = (k[model.index[x], :] < v).astype(np.int64)
        counts = first @ (k < w).astype(np.int64)
        targets = int(np.count_nonzero(counts >= float(need)))
    else:
        targets = sum(1 for z in model.strings if count_paths(x, z, v, w, model) >= need)
    bound = pow2(v + w - u)
    return PathLemmaCheck(targets, bound, targets <= bound)


# --- merging -------------------------------------------------------------------

@dataclass(frozen=True)
class MergeReport:
    shared: int
    diameter: float
    bound: float
    passed: bool
    path_counts: dict | None = None   # (x, x') -> number of paths x - x'' - x'


def merge_check(S: Iterable, S2: Iterable, m: int, d: int, source, slack: int = 0) -> MergeReport:
    """Merge two diameter-``m`` clusters sharing at least ``2**(m-d)`` members.

    With a distance matrix or the set model the union's diameter is measured
    against ``m + d + slack``. With a description system the report carries
    the counting certificate instead: for every cross pair the number of
    two-step paths through the shared part, each leg of length at most ``m``.
    """
    S, S2 = frozenset(S), frozenset(S2)
    for part in (S, S2):
        check = validate_cluster(part, m, 0, source)
        if not check:
            raise ValueError(f"merge_check needs clusters of diameter {m}: {check}")
    shared = S & S2
    if Fraction(len(shared)) < pow2(m - d):
        raise ValueError(f"clusters share {len(shared)} members, need at least 2**{m - d}")
    union = S | S2
    diam = max((source.distance(a, b) for a, b in combinations(union, 2)), default=0)
    bound = m + d + slack
    if isinstance(source, DescriptionSystem):
        counts = {}
        for a, b in product(sorted(S - S2, key=_key), sorted(S2 - S, key=_key)):
            counts[(a, b)] = sum(
                1 for c in shared
                if source.complexity(c, a) <= m and source.complexity(b, c) <= m
            )
        ok = all(Fraction(n) >= pow2(m - d) for n in counts.values())
        return MergeReport(len(shared), diam, bound, ok, counts)
    return MergeReport(len(shared), diam, bound, diam <= bound)


# --- referential clusters ------------------------------------------------------

def large_intersection(n: int, m: int, dprime: int) -> bool:
    return Fraction(n) > pow2(m - dprime)


@dataclass
class ReferentialRegistry:
    m: int
    d: int
    dprime: int
    kept: list[tuple[int, frozenset]] = field(default_factory=list)
    dropped: list[tuple[int, int]] = field(default_factory=list)  # (stream position, blocking ordinal)

    def cluster(self, ordinal: int) -> frozenset:
        return self.kept[ordinal][1]

    def covering(self, x) -> list[int]:
        return [i for i, members in self.kept if x in members]

    def multiplicity(self, x) -> int:
        return len(self.covering(x))

    def violations(self) -> list[tuple[int, int, int]]:
        """Kept pairs with a large intersection (should be empty)."""
        return [
            (i, j, len(a & b))
            for (i, a), (j, b) in combinations(self.kept, 2)
            if large_intersection(len(a & b), self.m, self.dprime)
        ]

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "d": self.d,
            "dprime": self.dprime,
            "kept": [{"ordinal": i, "members": sorted(members, key=_key)} for i, members in self.kept],
            "dropped": [{"position": p, "blocked_by": b} for p, b in self.dropped],
        }

    @classmethod
    def from_json(cls, payload: dict, parse=None) -> "ReferentialRegistry":
        """Inverse of :meth:`to_json`; ``parse`` turns a JSON member back into a string id."""
        parse = parse or (lambda x: tuple(x) if isinstance(x, list) else x)
        reg = cls(payload["m"], payload["d"], payload["dprime"])
        reg.kept = [(k["ordinal"], frozenset(parse(x) for x in k["members"])) for k in payload["kept"]]
        reg.dropped = [(p["position"], p["blocked_by"]) for p in payload.get("dropped", [])]
        return reg


def referential_filter(stream: Iterable[Iterable], m: int, d: int, dprime: int, source=None) -> ReferentialRegistry:
    """Keep each cluster that has no large intersection with an earlier kept one.

    Every stream element must be an ``(m, m-d)``-cluster under ``source``
    (a model or a distance matrix); validation is skipped when ``source`` is
    ``None``. Order matters: ordinals follow arrival.
    """
    reg = ReferentialRegistry(m, d, dprime)
    for pos, members in enumerate(stream):
        members = frozenset(members)
        if source is not None:
            check = validate_cluster(members, m, m - d, source)
            if not check:
                raise ValueError(f"stream element {pos} is not an ({m},{m - d})-cluster: {check}")
        blocker = next((i for i, kept in reg.kept if large_intersection(len(members & kept), m, dprime)), None)
        if blocker is None:
            reg.kept.append((len(reg.kept), members))
        else:
            reg.dropped.append((pos, blocker))
    return reg


@dataclass(frozen=True)
class MultiplicityCheck:
    max_multiplicity: int
    bound: int
    passed: bool
    witness: object = None   # a string reaching the maximum


def ball_violations(registry: ReferentialRegistry, model) -> list:
    """Covered strings whose radius-``m`` ball exceeds ``2**(m+1) - 1`` strings."""
    limit = 2 ** (registry.m + 1) - 1
    covered = set().union(*(members for _, members in registry.kept)) if registry.kept else set()
    bad = []
    for x in sorted(covered, key=_key):
        if isinstance(model, DescriptionSystem):
            size = int(np.count_nonzero(model.conditional_matrix[model.index[x], :] <= registry.m))
        else:
            size = sum(1 for y in model.strings if model.complexity(y, x) <= registry.m)
        if size > limit:
            bad.append(x)
    return bad


def multiplicity_check(registry: ReferentialRegistry, model=None) -> MultiplicityCheck:
    """Every string should lie in at most ``2**(d+1)`` referential clusters.

    Refuses registries built with ``d' <= 2d + 1``. When a model is given its
    ball condition is checked first.
    """
    d, dprime = registry.d, registry.dprime
    if dprime <= 2 * d + 1:
        raise ValueError(f"multiplicity bound needs d' > 2d+1, got d'={dprime}, d={d}")
    if model is not None:
        bad = ball_violations(registry, model)
        if bad:
            raise ValueError(f"model violates the ball condition at {bad[:3]}")
    counts: dict = {}
    for _, members in registry.kept:
        for x in members:
            counts[x] = counts.get(x, 0) + 1
    bound = 2 ** (d + 1)
    if not counts:
        return MultiplicityCheck(0, bound, True)
    witness = min((x for x in counts if counts[x] == max(counts.values())), key=_key)
    top = counts[witness]
    return MultiplicityCheck(top, bound, top <= bound, witness)


# --- core certificates ---------------------------------------------------------

@dataclass(frozen=True)
class MemberCode:
    """Two-part codes for a member of the referential cluster ``S_i``."""
    member: object
    rank_in_cluster: int
    rank_width: int
    covering_rank: int
    covering_width: int


@dataclass(frozen=True)
class TargetCode:
    """Codes for a member of the certified cluster ``S``.

    ``forward_index`` recovers the member from the core, ``backward_index``
    recovers the core from the member.
    """
    member: object
    forward_index: int
    forward_width: int
    backward_index: int
    backward_width: int


@dataclass
class CoreCertificate:
    ordinal: int
    m: int
    d: int
    dprime: int
    direct: bool                      # S itself is the referential cluster
    members: list[MemberCode]
    targets: list[TargetCode]
    overhead_bits: int

    @property
    def rank_budget(self) -> int:
        return self.m + 1

    @property
    def covering_budget(self) -> int:
        return self.d + 1

    @property
    def forward_budget(self) -> int:
        # core leg (m+1) + hop leg (m+1) - shared paths (m - d')
        return self.m + self.dprime + 2

    @property
    def backward_budget(self) -> int:
        # hop leg (m+1) + covering leg (d+1) - shared paths (m - d')
        return self.d + self.dprime + 2

    def budget_failures(self) -> list[str]:
        out = []
        for r in self.members:
            if r.rank_width > self.rank_budget:
                out.append(f"rank width {r.rank_width} > {self.rank_budget} for {r.member!r}")
            if r.covering_width > self.covering_budget:
                out.append(f"covering width {r.covering_width} > {self.covering_budget} for {r.member!r}")
        fwd, bwd = (self.rank_budget, self.covering_budget) if self.direct else (self.forward_budget, self.backward_budget)
        for t in self.targets:
            if t.forward_width > fwd:
                out.append(f"forward width {t.forward_width} > {fwd} for {t.member!r}")
            if t.backward_width > bwd:
                out.append(f"backward width {t.backward_width} > {bwd} for {t.member!r}")
        return out

    @property
    def passed(self) -> bool:
        return not self.budget_failures()

    def code_lengths(self) -> dict:
        widths = [t.forward_width for t in self.targets] or [0]
        back = [t.backward_width for t in self.targets] or [0]
        return {
            "overhead_bits": self.overhead_bits,
            "max_forward_bits": self.overhead_bits + max(widths),
            "max_backward_bits": self.overhead_bits + max(back),
            "rank_budget": self.rank_budget,
            "covering_budget": self.covering_budget,
            "forward_budget": self.rank_budget if self.direct else self.forward_budget,
            "backward_budget": self.covering_budget if self.direct else self.backward_budget,
        }

    def to_json(self) -> dict:
        return {
            "ordinal": self.ordinal,
            "m": self.m,
            "d": self.d,
            "dprime": self.dprime,
            "direct": self.direct,
            "members": [
                {"member": r.member, "rank_in_cluster": r.rank_in_cluster, "rank_width": r.rank_width,
                 "covering_rank": r.covering_rank, "covering_width": r.covering_width}
                for r in self.members
            ],
            "targets": [
                {"member": t.member, "forward_index": t.forward_index, "forward_width": t.forward_width,
                 "backward_index": t.backward_index, "backward_width": t.backward_width}
                for t in self.targets
            ],
            "budgets": self.code_lengths(),
            "passed": self.passed,
        }


def self_delimiting_bits(n: int) -> int:
    """Length of the doubled-bit code of ``n`` (each bit twice, then ``01``)."""
    return 2 * max(n.bit_length(), 1) + 2


def forward_candidates(registry: ReferentialRegistry, ordinal: int, model) -> list:
    """Strings reached from ``S_i`` by more than ``2**(m-d')`` hops of length ``<= m``."""
    Si = registry.cluster(ordinal)
    m = registry.m
    if isinstance(model, DescriptionSystem):
        k = model.conditional_matrix
        rows = [model.index[x] for x in Si]
        hits = (k[rows, :] <= m).sum(axis=0)
        out = [y for y, c in zip(model.strings, hits) if large_intersection(int(c), m, registry.dprime)]
    else:
        out = [
            y for y in model.strings
            if large_intersection(sum(1 for x in Si if model.complexity(y, x) <= m), m, registry.dprime)
        ]
    return sorted(out, key=_key)


def backward_candidates(registry: ReferentialRegistry, x, model) -> list[int]:
    """Ordinals ``j`` whose cluster has more than ``2**(m-d')`` members within ``m`` of ``x``."""
    m = registry.m
    if isinstance(model, DescriptionSystem):
        row = model.conditional_matrix[model.index[x], :] <= m
        return [
            j for j, Sj in registry.kept
            if large_intersection(int(row[[model.index[y] for y in Sj]].sum()), m, registry.dprime)
        ]
    near = {y for _, Sj in registry.kept for y in Sj if model.complexity(y, x) <= m}
    return [j for j, Sj in registry.kept if large_intersection(len(Sj & near), m, registry.dprime)]


def certify_core(S: Iterable, registry: ReferentialRegistry, model) -> CoreCertificate:
    """Name a core for the cluster ``S`` and emit the codes that witness it.

    The core is the ordinal ``i`` of the first referential cluster with a
    large intersection with ``S``. Members of ``S_i`` get ``(i, rank)`` and
    ``covering_rank`` codes. Members of ``S`` get enumeration indices: given
    ``i``, enumerate the strings reached from ``S_i`` by many short hops;
    given ``x``, enumerate the ordinals reached from ``x`` the same way.
    When ``S`` itself is kept the two coincide.
    """
    S = frozenset(S)
    m, d, dprime = registry.m, registry.d, registry.dprime
    ordinal = next((i for i, Si in registry.kept if large_intersection(len(S & Si), m, dprime)), None)
    if ordinal is None:
        raise StreamCoverageError("no referential cluster has a large intersection with S; was S in the stream?")
    Si = registry.cluster(ordinal)
    ranked = sorted(Si, key=_key)
    rank_width = ceil_log2(len(ranked))
    members = []
    for rank, x in enumerate(ranked):
        cov = registry.covering(x)
        members.append(MemberCode(x, rank, rank_width, cov.index(ordinal), ceil_log2(len(cov))))

    direct = S == Si
    targets = []
    if direct:
        for r in members:
            targets.append(TargetCode(r.member, r.rank_in_cluster, r.rank_width, r.covering_rank, r.covering_width))
    else:
        forward = forward_candidates(registry, ordinal, model)
        position = {y: k for k, y in enumerate(forward)}
        for x in sorted(S, key=_key):
            back = backward_candidates(registry, x, model)
            targets.append(TargetCode(x, position[x], ceil_log2(len(forward)), back.index(ordinal), ceil_log2(len(back))))
    overhead = self_delimiting_bits(m) + self_delimiting_bits(d)
    return CoreCertificate(ordinal, m, d, dprime, direct, members, targets, overhead)


def decode_members(cert: CoreCertificate, registry: ReferentialRegistry, model) -> set:
    """Recover ``S`` from the core ordinal and the forward indices."""
    if cert.direct:
        ranked = sorted(registry.cluster(cert.ordinal), key=_key)
        return {ranked[t.forward_index] for t in cert.targets}
    forward = forward_candidates(registry, cert.ordinal, model)
    return {forward[t.forward_index] for t in cert.targets}


def decode_core(cert: CoreCertificate, registry: ReferentialRegistry, model, x) -> int:
    """Recover the core ordinal from the member ``x`` and its backward index."""
    t = next(t for t in cert.targets if t.member == x)
    if cert.direct:
        return registry.covering(x)[t.backward_index]
    return backward_candidates(registry, x, model)[t.backward_index]


def decode_cluster_member(registry: ReferentialRegistry, ordinal: int, rank: int):
    return sorted(registry.cluster(ordinal), key=_key)[rank]

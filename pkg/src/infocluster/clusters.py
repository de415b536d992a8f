"""Distance matrices and (m, l)-clusters.

A set ``S`` is an ``(m, l)``-cluster when every pair of members is within
distance ``m`` and ``#S >= 2**l``.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .models import DescriptionSystem, SetModel
from .ncd import CompressorHandle, ncd

EXACT_MINING_LIMIT = 24


def pow2(e: int) -> Fraction:
    return Fraction(2) ** e


def floor_log2(n: int) -> int:
    if n < 1:
        raise ValueError("logsize needs a nonempty set")
    return n.bit_length() - 1


@dataclass
class DistanceMatrix:
    ids: list
    values: np.ndarray
    units: str = "bits"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        n = len(self.ids)
        if self.values.shape != (n, n):
            raise ValueError(f"matrix shape {self.values.shape} does not match {n} ids")
        if not np.array_equal(self.values, self.values.T):
            raise ValueError("distance matrix must be exactly symmetric")
        if (self.values < 0).any():
            raise ValueError("distances must be nonnegative")
        self._index = {x: i for i, x in enumerate(self.ids)}
        if len(self._index) != n:
            raise ValueError("duplicate ids in distance matrix")

    def __contains__(self, x) -> bool:
        return x in self._index

    def position(self, x) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise KeyError(f"unknown item id {x!r}") from None

    def distance(self, a, b) -> float:
        return self.values[self.position(a), self.position(b)]

    @property
    def infinite_pairs(self) -> list[tuple]:
        rows, cols = np.nonzero(np.isinf(self.values))
        return [(self.ids[i], self.ids[j]) for i, j in zip(rows, cols) if i < j]

    def scaled(self, factor: float, units: str = "bits") -> "DistanceMatrix":
        return DistanceMatrix(list(self.ids), self.values * factor, units)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([""] + [str(x) for x in self.ids])
        for x, row in zip(self.ids, self.values):
            w.writerow([str(x)] + [_fmt(v) for v in row])
        return buf.getvalue()

    def write_csv(self, path: str | Path) -> None:
        Path(path).write_text(self.to_csv())

    @classmethod
    def read_csv(cls, path: str | Path, units: str = "bits") -> "DistanceMatrix":
        rows = list(csv.reader(Path(path).read_text().splitlines()))
        ids = rows[0][1:]
        if [r[0] for r in rows[1:]] != ids:
            raise ValueError("row labels of matrix.csv must repeat the header ids")
        values = [[float(v) for v in r[1:]] for r in rows[1:]]
        return cls(ids, np.array(values, dtype=float).reshape(len(ids), len(ids)), units)


def _fmt(v: float) -> str:
    if math.isinf(v):
        return "inf"
    if float(v).is_integer():
        return str(int(v))
    return repr(float(v))


def distance_matrix(items, backend, ids: Sequence | None = None, workers: int = 1) -> DistanceMatrix:
    """Pairwise distances ``max(C(i|j), C(j|i))`` under ``backend``.

    ``backend`` is a :class:`SetModel`, a :class:`DescriptionSystem` or a
    :class:`CompressorHandle`. For the compressor, ``items`` maps ids to
    bytes and entries are NCD values (``units="ncd"``); table-model entries
    may be infinite.
    """
    if isinstance(backend, CompressorHandle):
        if not isinstance(items, Mapping):
            raise TypeError("the ncd backend needs a mapping of id -> bytes")
        ids = list(items) if ids is None else list(ids)
        payloads = [items[x] for x in ids]
        n = len(ids)
        values = np.zeros((n, n))
        pairs = list(combinations(range(n), 2))
        handles = [backend.fresh() for _ in range(max(workers, 1))]

        def job(chunk):
            h = handles[chunk[0]]
            return [(i, j, float(ncd(payloads[i], payloads[j], h).value)) for i, j in chunk[1]]

        chunks = [(k, pairs[k :: max(workers, 1)]) for k in range(max(workers, 1))]
        if workers > 1:
            with ThreadPoolExecutor(workers) as pool:
                results = list(pool.map(job, chunks))
        else:
            results = [job(c) for c in chunks]
        for chunk in results:
            for i, j, v in chunk:
                values[i, j] = values[j, i] = v
        for i in range(n):
            values[i, i] = float(ncd(payloads[i], payloads[i], handles[0]).value)
        return DistanceMatrix(ids, values, "ncd")

    if not isinstance(backend, (SetModel, DescriptionSystem)):
        raise TypeError(f"unsupported backend {type(backend).__name__}")
    items = list(items)
    if ids is None:
        ids = [str(x) for x in items] if isinstance(backend, SetModel) else list(items)
    n = len(items)
    values = np.zeros((n, n))
    for i, j in combinations(range(n), 2):
        values[i, j] = values[j, i] = backend.distance(items[i], items[j])
    for i in range(n):
        values[i, i] = backend.distance(items[i], items[i])
    return DistanceMatrix(list(ids), values, "bits")


def bit_scale(matrix: DistanceMatrix, corpus: Mapping[Hashable, bytes], c: CompressorHandle | None = None) -> float:
    """Default NCD-to-bits factor: the mean compressed length in bits."""
    c = c or CompressorHandle()
    return 8 * float(np.mean([c.length(corpus[x]) for x in matrix.ids]))


@dataclass(frozen=True)
class ClusterCheck:
    ok: bool
    pair: tuple | None = None          # (a, b, distance) breaking the diameter bound
    shortfall: tuple | None = None     # (size, 2**l) when too small

    def __bool__(self) -> bool:
        return self.ok


def _distance_block(members: list, source) -> np.ndarray | None:
    if isinstance(source, DistanceMatrix):
        idx = [source.position(x) for x in members]
        return source.values[np.ix_(idx, idx)]
    if isinstance(source, DescriptionSystem):
        idx = [source.index[x] for x in members]
        k = source.conditional_matrix[np.ix_(idx, idx)]
        return np.maximum(k, k.T)
    return None


def validate_cluster(S: Iterable, m: float, l: int, matrix) -> ClusterCheck:
    """Check that ``S`` is an ``(m, l)``-cluster.

    ``matrix`` is a :class:`DistanceMatrix` or any model with
    ``distance(a, b)``. Only pairs of distinct members are compared. On
    failure the result names the first offending pair (in id order) or the
    cardinality shortfall.
    """
    members = sorted(set(S), key=str)
    block = _distance_block(members, matrix)
    if Fraction(len(members)) < pow2(l):
        return ClusterCheck(False, shortfall=(len(members), pow2(l)))
    if block is not None:
        bad = np.argwhere(np.triu(block > m, 1))
        if len(bad):
            i, j = bad[0]
            return ClusterCheck(False, pair=(members[i], members[j], block[i, j]))
        return ClusterCheck(True)
    for a, b in combinations(members, 2):
        dist = matrix.distance(a, b)
        if dist > m:
            return ClusterCheck(False, pair=(a, b, dist))
    return ClusterCheck(True)


@dataclass(frozen=True)
class Cluster:
    members: frozenset
    diameter: float
    logsize: int

    @property
    def density_gap(self) -> float:
        return self.diameter - self.logsize

    def __len__(self) -> int:
        return len(self.members)

    def sorted_members(self) -> list:
        return sorted(self.members, key=str)

    def to_json(self, m=None, l=None) -> dict:
        return {
            "members": [x if isinstance(x, (int, str)) else str(x) for x in self.sorted_members()],
            "m": m,
            "l": l,
            "diameter": _json_number(self.diameter),
            "logsize": self.logsize,
        }


def _json_number(v):
    if math.isinf(v):
        return "inf"
    return int(v) if float(v).is_integer() else float(v)


def diameter(S: Iterable, matrix) -> float:
    members = list(set(S))
    block = _distance_block(members, matrix)
    if block is not None:
        if len(members) < 2:
            return 0
        return float(block[np.triu_indices(len(members), 1)].max())
    return max((matrix.distance(a, b) for a, b in combinations(members, 2)), default=0)


def cluster_stats(S: Iterable, matrix) -> tuple[float, int, float]:
    """``(diameter, logsize, diameter - logsize)`` of a nonempty set."""
    members = list(set(S))
    diam = diameter(members, matrix)
    logsize = floor_log2(len(members))
    return diam, logsize, diam - logsize


def make_cluster(S: Iterable, matrix) -> Cluster:
    diam, logsize, _ = cluster_stats(S, matrix)
    return Cluster(frozenset(S), diam, logsize)


def _adjacency(matrix: DistanceMatrix, m: float, order: list[int]) -> list[int]:
    close = matrix.values <= m
    adj = []
    for a, i in enumerate(order):
        mask = 0
        for b, j in enumerate(order):
            if a != b and close[i, j]:
                mask |= 1 << b
        adj.append(mask)
    return adj


def _maximal_cliques(adj: list[int]) -> list[int]:
    """Bron-Kerbosch with pivoting over bit masks."""
    out = []

    def expand(r, p, x):
        if not p and not x:
            out.append(r)
            return
        ux = p | x
        pivot = max(_bits(ux), key=lambda u: (adj[u] & p).bit_count())
        for v in _bits(p & ~adj[pivot]):
            expand(r | 1 << v, p & adj[v], x & adj[v])
            p &= ~(1 << v)
            x |= 1 << v

    expand(0, (1 << len(adj)) - 1, 0)
    return out


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _greedy_cliques(adj: list[int]) -> list[int]:
    found = set()
    for seed in range(len(adj)):
        clique = 1 << seed
        cand = adj[seed]
        while cand:
            best = max(_bits(cand), key=lambda v: ((adj[v] & cand).bit_count(), -v))
            clique |= 1 << best
            cand &= adj[best]
        found.add(clique)
    return [c for c in found if not any(c != o and c & o == c for o in found)]


def mine_clusters(matrix: DistanceMatrix, m: float, l: int) -> list[Cluster]:
    """Maximal ``(m, l)``-clusters of the matrix.

    Exact (maximal cliques of the ``dist <= m`` graph) up to
    ``EXACT_MINING_LIMIT`` items; greedy seeded expansion beyond. Ties are
    broken by item id order, so the result is deterministic.
    """
    if m < 0 or l < 0:
        raise ValueError("m and l must be nonnegative")
    n = len(matrix.ids)
    if n == 0 or pow2(l) > n:
        return []
    order = sorted(range(n), key=lambda i: str(matrix.ids[i]))
    adj = _adjacency(matrix, m, order)
    masks = _maximal_cliques(adj) if n <= EXACT_MINING_LIMIT else _greedy_cliques(adj)
    clusters = []
    for mask in masks:
        if Fraction(mask.bit_count()) >= pow2(l):
            members = [matrix.ids[order[b]] for b in _bits(mask)]
            clusters.append(make_cluster(members, matrix))
    clusters.sort(key=lambda c: (-len(c), [str(x) for x in c.sorted_members()]))
    return clusters


def labels_from_clusters(ids: Sequence, clusters: Sequence[Cluster]) -> list[int]:
    """Flat labels: each item goes to the first cluster that holds it."""
    labels = {}
    for k, c in enumerate(clusters):
        for x in c.members:
            labels.setdefault(x, k)
    next_label = len(clusters)
    out = []
    for x in ids:
        if x not in labels:
            labels[x] = next_label
            next_label += 1
        out.append(labels[x])
    return out

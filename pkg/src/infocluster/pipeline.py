"""Corpus to clusters: NCD matrix, cluster mining and a dendrogram.

``run_pipeline`` writes three files into the output directory:

* ``matrix.csv``: the distance matrix in bits (NCD times the bit scale);
* ``clusters.json``: mined maximal ``(m, l)``-clusters;
* ``tree.dot``: a complete-linkage dendrogram in Graphviz DOT.

When ``m`` is not given it is picked from the complete-linkage merge
heights: sorted heights are scanned for the widest gap, and ``m`` is the
height just below it.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.cluster.hierarchy import linkage
from scipy.spatial.distance import squareform

from .clusters import Cluster, DistanceMatrix, bit_scale, distance_matrix, mine_clusters
from .ncd import CompressorHandle, read_corpus

LETTERS = "abcdefghijklmnopqrstuvwxyz"


def synthetic_corpus(root: str | Path, families: int = 3, per_family: int = 10, size: int = 4096,
                     vocabulary: int = 150, seed: int = 7) -> dict[str, int]:
    """Write ``families * per_family`` text files; each family draws from its own word list.

    Returns the ground-truth family of every file id.
    """
    rng = random.Random(seed)
    root = Path(root)
    truth = {}
    for f in range(families):
        words = ["".join(rng.choice(LETTERS) for _ in range(rng.randint(3, 9))) for _ in range(vocabulary)]
        folder = root / f"family{f}"
        folder.mkdir(parents=True, exist_ok=True)
        for k in range(per_family):
            text = []
            length = 0
            while length <= size:  # the join drops one separator
                w = rng.choice(words)
                text.append(w)
                length += len(w) + 1
            (folder / f"doc{k:02d}.txt").write_bytes(" ".join(text).encode()[:size])
            truth[f"family{f}/doc{k:02d}.txt"] = f
    return truth


def _linkage(matrix: DistanceMatrix) -> np.ndarray:
    """Complete linkage; infinite distances are replaced by one more than the largest finite one."""
    values = matrix.values.copy()
    np.fill_diagonal(values, 0.0)
    finite = values[np.isfinite(values)]
    values[~np.isfinite(values)] = (finite.max() if finite.size else 0.0) + 1.0
    return linkage(squareform(values, checks=False), method="complete")


def widest_gap_threshold(matrix: DistanceMatrix) -> float:
    n = len(matrix.ids)
    if n < 2:
        return 0.0
    heights = np.sort(_linkage(matrix)[:, 2])
    if n == 2:
        return float(heights[0])
    gaps = np.diff(heights)
    return float(heights[int(np.argmax(gaps))])


def dendrogram_dot(matrix: DistanceMatrix) -> str:
    """Complete-linkage tree as DOT; internal nodes carry their merge height."""
    ids = [str(x) for x in matrix.ids]
    lines = ["graph dendrogram {", "  node [shape=box];"]
    for k, name in enumerate(ids):
        lines.append(f'  n{k} [label="{name}"];')
    n = len(ids)
    if n > 1:
        tree = _linkage(matrix)
        for step, (a, b, height, _) in enumerate(tree):
            node = n + step
            lines.append(f'  n{node} [shape=point, xlabel="{height:.1f}"];')
            lines.append(f"  n{node} -- n{int(a)};")
            lines.append(f"  n{node} -- n{int(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass
class PipelineResult:
    matrix: DistanceMatrix
    clusters: list[Cluster]
    m: float
    l: int
    scale: float


def run_pipeline(corpus_dir: str | Path, out_dir: str | Path, m: float | None = None, l: int = 0,
                 compressor: CompressorHandle | None = None, scale: float | None = None,
                 workers: int = 1) -> PipelineResult:
    corpus = read_corpus(corpus_dir)
    if not corpus:
        raise FileNotFoundError(f"no regular files under {corpus_dir}")
    compressor = compressor or CompressorHandle()
    if all(not data for data in corpus.values()):
        raise ValueError("every file in the corpus is empty")
    ncd_matrix = distance_matrix(corpus, compressor, workers=workers)
    if scale is None:
        scale = bit_scale(ncd_matrix, corpus, compressor)
    matrix = ncd_matrix.scaled(scale, "bits")
    return cluster_matrix(matrix, out_dir, m, l, scale)


def cluster_matrix(matrix: DistanceMatrix, out_dir: str | Path, m: float | None = None, l: int = 0,
                   scale: float = 1.0) -> PipelineResult:
    """Mine clusters from a ready matrix and write the three artifacts."""
    if m is None:
        m = widest_gap_threshold(matrix)
    clusters = mine_clusters(matrix, m, l)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    matrix.write_csv(out / "matrix.csv")
    (out / "clusters.json").write_text(json.dumps([c.to_json(m, l) for c in clusters], indent=1) + "\n")
    (out / "tree.dot").write_text(dendrogram_dot(matrix))
    return PipelineResult(matrix, clusters, m, l, scale)

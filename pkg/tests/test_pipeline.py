from __future__ import annotations

import json

import numpy as np
import pytest
from sklearn.metrics import adjusted_rand_score

from infocluster.clusters import DistanceMatrix, labels_from_clusters
from infocluster.pipeline import (
    cluster_matrix,
    dendrogram_dot,
    run_pipeline,
    synthetic_corpus,
    widest_gap_threshold,
)


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    truth = synthetic_corpus(root)
    return root, truth


def test_synthetic_corpus_shape(corpus_dir):
    root, truth = corpus_dir
    assert len(truth) == 30 and sorted(set(truth.values())) == [0, 1, 2]
    sizes = {len((root / name).read_bytes()) for name in truth}
    assert sizes == {4096}


def test_three_families_recovered(corpus_dir, tmp_path):
    root, truth = corpus_dir
    result = run_pipeline(root, tmp_path)
    ids = list(truth)
    labels = labels_from_clusters(ids, result.clusters)
    assert adjusted_rand_score([truth[i] for i in ids], labels) >= 0.9
    assert sorted(len(c) for c in result.clusters) == [10, 10, 10]
    assert result.matrix.units == "bits"
    for name in ("matrix.csv", "clusters.json", "tree.dot"):
        assert (tmp_path / name).stat().st_size > 0
    clusters = json.loads((tmp_path / "clusters.json").read_text())
    assert all(c["diameter"] <= result.m for c in clusters)


def test_pipeline_outputs_are_byte_identical(corpus_dir, tmp_path):
    root, _ = corpus_dir
    run_pipeline(root, tmp_path / "a")
    run_pipeline(root, tmp_path / "b", workers=3)
    for name in ("matrix.csv", "clusters.json", "tree.dot"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_single_file_corpus(tmp_path):
    (tmp_path / "in").mkdir()
    (tmp_path / "in" / "only.txt").write_bytes(b"just one file here")
    result = run_pipeline(tmp_path / "in", tmp_path / "out")
    assert result.matrix.values.shape == (1, 1)
    assert [sorted(c.members) for c in result.clusters] == [["only.txt"]]


def test_empty_corpus_errors(tmp_path):
    (tmp_path / "in").mkdir()
    with pytest.raises(FileNotFoundError):
        run_pipeline(tmp_path / "in", tmp_path / "out")
    (tmp_path / "in" / "empty.bin").write_bytes(b"")
    with pytest.raises(ValueError):
        run_pipeline(tmp_path / "in", tmp_path / "out")


def test_widest_gap_threshold():
    vals = np.array([[0, 1, 9, 9], [1, 0, 9, 9], [9, 9, 0, 2], [9, 9, 2, 0]], dtype=float)
    m = DistanceMatrix(list("abcd"), vals)
    assert widest_gap_threshold(m) == 2
    assert widest_gap_threshold(DistanceMatrix(["a"], [[0]])) == 0


def test_cluster_matrix_with_infinite_entries(tmp_path):
    vals = np.array([[0, 1, np.inf], [1, 0, np.inf], [np.inf, np.inf, 0]])
    result = cluster_matrix(DistanceMatrix(list("abc"), vals), tmp_path, l=0)
    assert {c.members for c in result.clusters} == {frozenset("ab"), frozenset("c")}
    assert "inf" in (tmp_path / "matrix.csv").read_text()


def test_dendrogram_dot_structure():
    vals = np.array([[0, 1, 4], [1, 0, 4], [4, 4, 0]], dtype=float)
    dot = dendrogram_dot(DistanceMatrix(["x", "y", "z"], vals))
    assert dot.startswith("graph dendrogram {") and dot.rstrip().endswith("}")
    assert dot.count(" -- ") == 4
    assert 'xlabel="1.0"' in dot and 'xlabel="4.0"' in dot

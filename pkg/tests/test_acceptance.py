"""Acceptance criteria, one test each, with a PASS/FAIL line printed per criterion."""
from __future__ import annotations

import time

import pytest
from sklearn.metrics import adjusted_rand_score

from infocluster import verify
from infocluster.clusters import labels_from_clusters
from infocluster.pipeline import run_pipeline, synthetic_corpus


@pytest.fixture
def emit(capsys):
    def _emit(number: int, title: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[acceptance {number:2d}] {'PASS' if ok else 'FAIL'} {title}: {detail}")
    return _emit


def test_01_chain_rule_exhaustive(emit):
    res = verify.chain_suite(5)
    ok = res.passed and res.instances == 32 * 32 and res.seconds < 1
    emit(1, "chain-rule defect zero on universe 5", ok, f"{res.instances} pairs, {res.seconds:.3f}s")
    assert ok, res.counterexample


def test_02_path_lemma_random_systems(emit):
    res = verify.path_suite()
    ok = res.passed and res.details["systems"] == 1000 and res.seconds < 10
    emit(2, "target-counting bound on 1000 description systems", ok,
         f"{res.instances} checks, {res.seconds:.2f}s")
    assert ok, res.counterexample


def test_03_claim_exhaustive(emit):
    res = verify.claim_suite(max_points=10, max_events=6)
    tight = all(v["tightness"] for v in res.details.values())
    ok = res.passed and tight and res.seconds < 60
    emit(3, "event-count claim, <=10 points, <=6 events, eps in {1,1/2,1/3,1/4}", ok,
         f"{res.instances} families, disjoint tightness {tight}, {res.seconds:.1f}s")
    assert ok, res.counterexample


def test_04_multiplicity_bound(emit):
    res = verify.multiplicity_suite(runs=500, ds=(0, 1, 2))
    worst = res.details.get("max_by_d", {})
    ok = res.passed and res.instances == 500 and all(worst[d] <= 2 ** (d + 1) for d in worst)
    emit(4, "multiplicity <= 2^(d+1) over 500 referential-filter runs", ok,
         f"max by d {worst}, {res.seconds:.1f}s")
    assert ok, res.counterexample


def test_05_core_certification_round_trip(emit):
    res = verify.certify_suite(runs=200)
    ok = res.passed and res.instances == 200
    emit(5, "core certificates decode exactly within rank/covering budgets", ok,
         f"{res.instances} instances ({res.details.get('direct')} direct), {res.seconds:.1f}s")
    assert ok, res.counterexample


def test_06_nonshannon_exhaustive(emit):
    res = verify.nonshannon_suite(4)
    ok = res.passed and res.instances == 16**5 and res.details["min_slack"] >= 0 and res.seconds < 120
    emit(6, "five-variable inequality slack >= 0 on universe 4", ok,
         f"{res.instances} tuples, min slack {res.details['min_slack']}, {res.seconds:.1f}s")
    assert ok, res.counterexample


def test_07_triple_core_realization(emit):
    res = verify.triple_suite(5)
    ok = res.passed and res.instances == 32**3
    emit(7, "w = x&y&z has C(w) = I(x:y:z) and zero residuals on universe 5", ok,
         f"{res.instances} triples, {res.seconds:.1f}s")
    assert ok, res.counterexample


def test_08_daisy_diameter(emit):
    res = verify.daisy_suite(max_universe=6, max_d=2)
    emit(8, "set-model daisy diameter <= m + 2d, universe <= 6, d <= 2", res.passed,
         f"{res.instances} (core, m, d) cases, {res.seconds:.1f}s")
    assert res.passed, res.counterexample


def test_09_mining_matches_oracle(emit):
    res = verify.mining_suite(instances=50, max_items=10)
    ok = res.passed and res.instances == 50
    emit(9, "mined clusters equal the exhaustive maximal-subset oracle", ok, f"{res.instances} matrices")
    assert ok, res.counterexample


def test_10_ncd_pipeline(emit, tmp_path):
    truth = synthetic_corpus(tmp_path / "corpus", families=3, per_family=10, size=4096)
    start = time.perf_counter()
    first = run_pipeline(tmp_path / "corpus", tmp_path / "run1")
    seconds = time.perf_counter() - start
    run_pipeline(tmp_path / "corpus", tmp_path / "run2")
    identical = all(
        (tmp_path / "run1" / f).read_bytes() == (tmp_path / "run2" / f).read_bytes()
        for f in ("matrix.csv", "clusters.json", "tree.dot")
    )
    ids = list(truth)
    ari = adjusted_rand_score([truth[i] for i in ids], labels_from_clusters(ids, first.clusters))
    ok = ari >= 0.9 and seconds < 60 and identical
    emit(10, "NCD pipeline recovers 3 families", ok,
         f"ARI {ari:.3f}, {len(first.clusters)} clusters, {seconds:.2f}s, byte-identical {identical}")
    assert ok

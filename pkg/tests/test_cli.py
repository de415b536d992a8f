from __future__ import annotations

import json
import random
import subprocess
import sys

import pytest

from infocluster.cli import main
from infocluster.formats import read_stream, set_member_parser, write_stream
from infocluster.generators import crowded_hub, hub_instance
from infocluster.pipeline import synthetic_corpus


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def hub_files(tmp_path):
    inst = hub_instance(random.Random(3), 1)
    inst.system.dump(tmp_path / "model.json")
    write_stream(tmp_path / "stream.jsonl", inst.stream)
    return inst, tmp_path


def test_verify_selected_suites(tmp_path, capsys):
    assert run("verify", "--suite", "chain", "--suite", "daisy", "--out", tmp_path) == 0
    report = json.loads((tmp_path / "verify.json").read_text())
    assert report["passed"] and [s["name"] for s in report["suites"]] == ["chain", "daisy"]
    assert report["seed"] == 20240611


def test_verify_claim_suite_reports_instances(tmp_path):
    assert run("verify", "--suite", "claim", "--exhaustive-points", "10", "--out", tmp_path) == 0
    (suite,) = json.loads((tmp_path / "verify.json").read_text())["suites"]
    assert suite["counterexample"] is None and suite["instances"] > 10000


def test_verify_injected_registry_violation(tmp_path):
    bad = {"m": 4, "d": 1, "dprime": 4, "kept": [
        {"ordinal": 0, "members": ["a", "b", "c"]},
        {"ordinal": 1, "members": ["a", "b", "d"]},
    ]}
    (tmp_path / "bad.json").write_text(json.dumps(bad))
    code = run("verify", "--suite", "chain", "--registry", tmp_path / "bad.json", "--out", tmp_path)
    assert code == 1
    report = json.loads((tmp_path / "verify.json").read_text())
    assert not report["passed"]
    registry = report["suites"][-1]
    assert registry["name"] == "registry" and registry["counterexample"]["ordinals"] == [0, 1]


def test_verify_usage_errors(tmp_path):
    assert run("verify", "--suite", "nonshannon", "--universe", "6") == 2
    assert run("verify", "--registry", tmp_path / "missing.json") == 2
    with pytest.raises(SystemExit) as exc:
        run("verify", "--suite", "nope")
    assert exc.value.code == 2


def test_matrix_set_backend(tmp_path):
    assert run("matrix", "--backend", "set", "--universe", 2, "--out", tmp_path) == 0
    lines = (tmp_path / "matrix.csv").read_text().splitlines()
    assert lines[0] == ',{},{0},{1},"{0,1}"'
    assert lines[1] == "{},0,1,1,2"
    assert run("matrix", "--backend", "set", "--universe", 40, "--out", tmp_path) == 2


def test_matrix_table_and_ncd_backends(hub_files, tmp_path):
    inst, folder = hub_files
    assert run("matrix", "--backend", "table", "--model", folder / "model.json", "--out", tmp_path / "t") == 0
    assert (tmp_path / "t" / "matrix.csv").read_text().count("\n") == len(inst.system.strings) + 1
    assert run("matrix", "--backend", "table", "--out", tmp_path / "t") == 2

    synthetic_corpus(tmp_path / "corpus", families=2, per_family=2, size=512)
    assert run("matrix", "--backend", "ncd", "--input", tmp_path / "corpus", "--out", tmp_path / "n") == 0
    assert run("matrix", "--backend", "ncd", "--out", tmp_path / "n") == 2
    assert run("matrix", "--backend", "ncd", "--input", tmp_path / "corpus", "--compressor", "zip",
               "--out", tmp_path / "n") == 2


def test_clusters_ncd_and_empty_corpus(tmp_path):
    synthetic_corpus(tmp_path / "corpus", families=2, per_family=4, size=1024)
    assert run("clusters", "--input", tmp_path / "corpus", "--out", tmp_path / "out") == 0
    clusters = json.loads((tmp_path / "out" / "clusters.json").read_text())
    assert sorted(len(c["members"]) for c in clusters) == [4, 4]
    assert (tmp_path / "out" / "tree.dot").read_text().startswith("graph")

    (tmp_path / "empty").mkdir()
    assert run("clusters", "--input", tmp_path / "empty", "--out", tmp_path / "o2") == 2


def test_clusters_set_backend(tmp_path):
    assert run("clusters", "--backend", "set", "--universe", 3, "--m", 1, "--l", 2, "--out", tmp_path) == 0
    clusters = json.loads((tmp_path / "clusters.json").read_text())
    assert [sorted(c["members"]) for c in clusters] == [["{0,1,2}", "{0,1}", "{0,2}", "{1,2}"], ["{0}", "{1}", "{2}", "{}"]]
    assert clusters[0]["m"] == 1


def test_daisy_command(tmp_path, capsys):
    assert run("daisy", "--universe", 3, "--core", "0,1", "--m", 1, "--d", 1, "--out", tmp_path) == 0
    payload = json.loads((tmp_path / "daisy.json").read_text())
    assert payload["bound"] == 3 and payload["diameter"] <= 3 and [0, 1] in payload["members"]
    assert run("daisy", "--universe", 3, "--core", "0,7", "--m", 1, "--d", 1) == 2


def test_referential_and_certify(hub_files, tmp_path):
    inst, folder = hub_files
    common = ["--backend", "table", "--model", folder / "model.json", "--stream", folder / "stream.jsonl",
              "--m", inst.m, "--d", inst.d]
    assert run("referential", *common, "--out", tmp_path) == 0
    payload = json.loads((tmp_path / "registry.json").read_text())
    assert payload["passed"] and payload["multiplicity"]["bound"] == 4
    assert payload["registry"]["dprime"] == 2 * inst.d + 2

    assert run("certify", *common, "--target", 1, "--out", tmp_path) == 0
    cert = json.loads((tmp_path / "certificate.json").read_text())
    assert cert["round_trip"] and cert["core_recovered"] and cert["passed"]
    assert run("certify", *common, "--target", 99) == 2


def test_referential_reports_crowded_hub(tmp_path):
    inst = crowded_hub()
    inst.system.dump(tmp_path / "model.json")
    write_stream(tmp_path / "stream.jsonl", inst.stream)
    code = run("referential", "--backend", "table", "--model", tmp_path / "model.json",
               "--stream", tmp_path / "stream.jsonl", "--m", 6, "--d", 1, "--out", tmp_path)
    assert code == 1
    payload = json.loads((tmp_path / "registry.json").read_text())
    assert payload["multiplicity"] == {"max": 5, "bound": 4, "passed": False, "witness": "hub"}


def test_set_model_stream_round_trip(tmp_path):
    (tmp_path / "s.jsonl").write_text('{"members": [[0], [0, 1], []]}\n\n{"members": [[2]]}\n')
    stream = read_stream(tmp_path / "s.jsonl", set_member_parser(3))
    assert [sorted(map(str, c)) for c in stream] == [["{0,1}", "{0}", "{}"], ["{2}"]]
    (tmp_path / "bad.jsonl").write_text('{"nope": 1}\n')
    with pytest.raises(ValueError):
        read_stream(tmp_path / "bad.jsonl")
    assert run("referential", "--stream", tmp_path / "bad.jsonl", "--m", 1, "--d", 0) == 2


def test_triple_command(tmp_path):
    assert run("triple", "--universe", 5, "--x", "0,1,2,4", "--y", "1,2", "--z", "1,2", "--delta", 1,
               "--out", tmp_path) == 0
    payload = json.loads((tmp_path / "triple.json").read_text())
    assert payload["w"] == [1, 2] and payload["residuals"] == [0, 0, 0]
    assert payload["clones"]["diameter"] == 3 and payload["passed"]
    assert run("triple", "--universe", 5, "--x", "9", "--y", "", "--z", "") == 2


def test_negative_thresholds_are_usage_errors():
    with pytest.raises(SystemExit) as exc:
        run("daisy", "--core", "0", "--m", "-1", "--d", 0)
    assert exc.value.code == 2


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "infocluster.cli", "verify", "--suite", "chain"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "PASS chain" in proc.stderr


def test_verify_default_config_passes(tmp_path):
    assert run("verify", "--out", tmp_path) == 0
    report = json.loads((tmp_path / "verify.json").read_text())
    assert report["passed"] and len(report["suites"]) == 9
    assert all(s["counterexample"] is None for s in report["suites"])

import json
import os
import subprocess
import sys

import pytest

from stratkit.cli import main

from conftest import DATA


def run(capsys, *args):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


def d(name):
    return DATA / name


def test_check_ss_a2(capsys):
    code, out, _ = run(capsys, "check-ss", "--algebra", d("a2.json"), "--partition", d("p12.json"))
    assert code == 0
    assert "standardly stratified: true" in out


def test_check_ss_two_cycle(capsys):
    code, out, _ = run(capsys, "check-ss", "--algebra", d("two_cycle.json"), "--partition", d("p12.json"))
    assert code == 1
    assert "(1, 0)" in out


def test_verify_a_trivial(capsys):
    code, out, _ = run(capsys, "verify-a", "--t", d("k.json"), "--u", d("k.json"), "--m", d("k1.json"),
                       "--pa", d("pa.json"), "--pb", d("pb.json"))
    assert code == 0
    assert "theorem A: pass" in out


def test_missing_file(capsys):
    code, _, err = run(capsys, "basis", "--algebra", d("missing.json"))
    assert code == 2
    assert "missing.json" in err and len(err.strip().splitlines()) == 1


def test_bad_matrix_shape(capsys, tmp_path):
    bad = tmp_path / "m.json"
    bad.write_text(json.dumps({"dims": {"1": 1, "2": 1}, "action": {"a": [["1", "0"]]}}))
    code, _, err = run(capsys, "resolve", "--algebra", d("a2.json"), "--module", bad)
    assert code == 2
    assert "action.a" in err


def test_resolve_reports_cap(capsys):
    code, out, _ = run(capsys, "resolve", "--format", "json", "--cap", "4", "--algebra", d("two_cycle.json"),
                       "--module", d("s1.json"))
    doc = json.loads(out)
    assert doc["pd"] == {"at_least": 4, "infinite": True}
    assert code == 0


def test_resolve_cap_without_period_is_inconclusive(capsys, tmp_path):
    # pd(S1) = 1 cannot be reached with cap 0 and no syzygy repeats
    code, out, _ = run(capsys, "resolve", "--format", "json", "--cap", "0", "--algebra", d("a2.json"),
                       "--module", d("s1.json"))
    assert json.loads(out)["pd"] == {"at_least": 0, "infinite": False}
    assert code == 3


def test_field_override(capsys):
    code, out, _ = run(capsys, "ext1", "--format", "json", "--field", "Q", "--algebra", d("a2.json"),
                       "--source", d("s1.json"), "--target", d("s2.json"))
    assert code == 0 and json.loads(out) == {"dim": 1}


def test_certificate_replay(capsys, tmp_path):
    cert = tmp_path / "cert.json"
    code, _, _ = run(capsys, "filtration", "--format", "json", "--output", cert, "--algebra", d("a2.json"),
                     "--partition", d("p21.json"), "--module", d("p1.json"))
    assert code == 0
    code, out, _ = run(capsys, "recheck", "--format", "json", "--algebra", d("a2.json"), "--partition",
                       d("p21.json"), "--module", d("p1.json"), "--certificate", cert)
    assert code == 0 and json.loads(out)["valid"] is True
    doc = json.loads(cert.read_text())
    doc["layers"][0]["iso"]["2"] = [["0"]]
    cert.write_text(json.dumps(doc))
    code, _, _ = run(capsys, "recheck", "--algebra", d("a2.json"), "--partition", d("p21.json"),
                     "--module", d("p1.json"), "--certificate", cert)
    assert code == 1


@pytest.mark.parametrize("verb,args", [
    ("basis", ["--algebra", "a2.json"]),
    ("validate", ["--algebra", "a2.json"]),
    ("projectives", ["--algebra", "two_cycle.json"]),
    ("hom", ["--algebra", "a2.json", "--source", "p1.json", "--target", "s1.json"]),
    ("trace", ["--algebra", "a2.json", "--family", "s2.json", "--module", "p1.json"]),
    ("standards", ["--algebra", "a2.json", "--partition", "p21.json"]),
    ("build-tri", ["--t", "k.json", "--u", "k.json", "--m", "k1.json"]),
    ("split-tri", ["--algebra", "a2.json", "--bipartition", "bip.json"]),
    ("triple", ["--algebra", "a2.json", "--bipartition", "bip.json", "--module", "p1.json"]),
    ("functor", ["--algebra", "a2.json", "--bipartition", "bip.json", "--module", "p1.json",
                 "--which", "restrict-U"]),
    ("verify-b", ["--t", "k.json", "--u", "k.json", "--m", "k1.json"]),
    ("verify-c", ["--t", "k.json", "--u", "k.json", "--m", "k1.json", "--pa", "pa.json", "--pb", "pb.json"]),
    ("verify-pd", ["--t", "k.json", "--u", "k.json", "--m", "k1.json"]),
])
def test_verbs_succeed_and_are_deterministic(capsys, verb, args):
    full = [verb, "--format", "json"] + [str(d(a)) if a.endswith(".json") else a for a in args]
    code, first, _ = run(capsys, *full)
    assert code == 0
    json.loads(first)
    _, second, _ = run(capsys, *full)
    assert first == second


def test_corpus_jobs_preserve_order(capsys):
    args = ["corpus", "--format", "json", "--count", "4", "--primes", "2,3", "--seed", "7"]
    code, serial, _ = run(capsys, *args)
    assert code == 0
    _, pooled, _ = run(capsys, *args, "--jobs", "2")
    assert serial == pooled
    assert [r["instance"]["index"] for r in json.loads(serial)["reports"][::4]] == [0, 1, 2, 3]


def test_seed_from_environment():
    env = dict(os.environ, STRATKIT_SEED="5")
    cmd = [sys.executable, "-m", "stratkit", "corpus", "--format", "json", "--count", "1", "--theorems", "A"]
    out = subprocess.run(cmd, capture_output=True, text=True, env=env, check=True).stdout
    assert json.loads(out)["spec"]["seed"] == 5


def test_unknown_verb(capsys):
    code, _, _ = run(capsys, "bogus")
    assert code == 2

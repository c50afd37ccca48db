import json
import os
import subprocess
import sys

import pytest

from coxminimal import cli, coxring


def run(*args, env=None, cwd=None):
    e = dict(os.environ)
    e.pop("COXMINIMAL_CACHE", None)
    e.update(env or {})
    return subprocess.run([sys.executable, "-m", "coxminimal.cli", *map(str, args)],
                          capture_output=True, text=True, env=e, cwd=cwd, timeout=600)


def test_analyze_ok(tmp_path):
    r = run("analyze", "D4", "--json", tmp_path / "d4.json")
    assert r.returncode == 0, r.stderr
    assert "junior classes: 4" in r.stdout
    doc = json.loads((tmp_path / "d4.json").read_text())
    assert doc["group"]["order"] == 8 and doc["group"]["class_group_torsion_free"]


def test_bad_group_file(tmp_path):
    bad = tmp_path / "bad.grp"
    bad.write_text("conductor: 4\ndimension: 2\ngenerators:\n  g: [[1, 0], [0, 2]]\n")
    r = run("analyze", bad)
    assert r.returncode == 2
    assert r.stderr.startswith("error:")
    r = run("analyze", tmp_path / "missing.grp")
    assert r.returncode == 2


def test_resume_needs_cache():
    r = run("coxring", "A2", "--resume")
    assert r.returncode == 2 and "--resume" in r.stderr


def test_degree_cap_exit_code(tmp_path):
    r = run("invariants", "E6", "--degree-cap", "5")
    assert r.returncode == 3
    assert "degree-cap" in r.stderr


def test_internal_error_exit_code(monkeypatch, capsys):
    def boom(*a, **k):
        raise coxring.CoxInternalError("containment failed")

    monkeypatch.setattr(coxring, "run", boom)
    assert cli.main(["coxring", "A1"]) == 4
    assert "internal error" in capsys.readouterr().err


def test_invariants_output_roundtrip(tmp_path):
    out = tmp_path / "d5.inv"
    r = run("invariants", "D5", "-o", out)
    assert r.returncode == 0, r.stderr
    r = run("relations", "D5", "--invariants", out)
    assert r.returncode == 0, r.stderr
    assert "X1^3*Y1^2*Y2" in r.stdout  # computed order puts x*y first


def test_cache_determinism_and_report(tmp_path):
    cache = tmp_path / "cache"
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    r1 = run("coxring", "D4", "--cache-dir", cache, "--json", a)
    assert r1.returncode == 0, r1.stderr
    assert "0 from disk" in r1.stderr
    r2 = run("coxring", "D4", "--json", b, env={"COXMINIMAL_CACHE": str(cache)})
    assert r2.returncode == 0, r2.stderr
    assert "0 from disk" not in r2.stderr and " 0 computed" in r2.stderr
    assert a.read_bytes() == b.read_bytes()
    assert r1.stdout == r2.stdout
    r3 = run("report", a)
    assert r3.returncode == 0 and r3.stdout == r1.stdout


def test_threads_do_not_change_results(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run("coxring", "D5", "--json", a).returncode == 0
    assert run("coxring", "D5", "--threads", "3", "--json", b).returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_cache_namespaces(tmp_path):
    cache = tmp_path / "cache"
    assert run("relations", "D4", "--cache-dir", cache).returncode == 0
    assert run("relations", "D5", "--cache-dir", cache).returncode == 0
    assert len([p for p in cache.iterdir() if p.is_dir()]) == 2


def test_corrupted_entry_recomputed(tmp_path):
    cache = tmp_path / "cache"
    first = run("relations", "D5", "--cache-dir", cache)
    entries = sorted(cache.rglob("*.json"))
    assert entries
    for p in entries[:3]:
        p.write_text(p.read_text()[:-20] + "garbage")
    second = run("relations", "D5", "--cache-dir", cache)
    assert second.returncode == 0
    assert "corrupted cache entry" in second.stderr
    assert second.stdout == first.stdout


def test_resume_from_saved_state(tmp_path):
    cache = tmp_path / "cache"
    assert run("relations", "D4", "--cache-dir", cache).returncode == 0
    r = run("-v", "relations", "D4", "--cache-dir", cache, "--resume")
    assert r.returncode == 0
    assert "resuming after 10 completed steps" in r.stderr


def test_gitfan_svg(tmp_path):
    pic = tmp_path / "fan.svg"
    r = run("gitfan", "A2", "--svg", pic)
    assert r.returncode == 0, r.stderr
    assert pic.read_text().startswith("<svg")
    assert "refinement fan: " in r.stdout
    r = run("gitfan", "A3", "--svg", tmp_path / "no.svg")
    assert r.returncode == 0 and "only drawn in rank 2" in r.stderr
    assert not (tmp_path / "no.svg").exists()


def test_report_rejects_other_json(tmp_path):
    p = tmp_path / "x.json"
    p.write_text(json.dumps({"schema": "other"}))
    assert run("report", p).returncode == 2


@pytest.mark.parametrize("n, names", [(2, ["x", "y"]), (4, ["x", "y", "z", "w"]), (3, ["x1", "x2", "x3"])])
def test_variable_names(n, names):
    assert cli.variable_names(n) == names

import csv
import json
import time

import pytest

from coevprio import io
from coevprio.cli import RunManifest, main
from coevprio.model import validate_taskset

from conftest import fig2_arrivals, fig2_taskset


@pytest.fixture
def outroot(tmp_path, monkeypatch):
    monkeypatch.setenv("COEVPRIO_OUTPUT_ROOT", str(tmp_path / "root"))
    return tmp_path


def test_synth_writes_valid_taskset(outroot, capsys):
    assert main(["synth", "--n", "20", "--gamma", "0.4", "--mu", "2", "--seed", "7", "--out", str(outroot / "s")]) == 0
    ts = io.read_taskset(outroot / "s" / "taskset_n20_s7.json")
    assert validate_taskset(ts) == []
    assert "seed 7" in capsys.readouterr().out


def test_synth_count_and_default_root(outroot):
    assert main(["synth", "--n", "5", "--count", "10", "--seed", "100"]) == 0
    files = sorted((outroot / "root" / "subjects").glob("taskset_n5_s*[0-9].json"))
    assert len(files) == 10
    assert len({f.read_bytes() for f in files}) == 10


def test_synth_rejects_bad_gamma(outroot):
    with pytest.raises(SystemExit) as exc:
        main(["synth", "--gamma", "1.5"])
    assert exc.value.code != 0


def _tiny(tmp_path):
    path = tmp_path / "tiny.json"
    path.write_text(json.dumps({
        "tasks": [
            {"id": 0, "kind": "periodic", "wcet": 2, "deadline": 10, "period": 10},
            {"id": 1, "kind": "aperiodic", "wcet": 3, "deadline": 8, "pmin": 8, "pmax": 16},
            {"id": 2, "kind": "periodic", "wcet": 1, "deadline": 5, "period": 5},
        ]
    }))
    return path


def test_optimize_tiny_set(outroot):
    start = time.perf_counter()
    out = outroot / "run"
    assert main(["optimize", str(_tiny(outroot)), "--n-c", "10", "--out", str(out)]) == 0
    assert time.perf_counter() - start < 10
    front = io.read_front(out / "front.json")
    assert front.members
    rows = list(csv.reader(open(out / "cycles.csv")))
    assert len(rows) == 12
    manifest = RunManifest.read(out / "manifest.json")
    assert manifest.method == "opam" and manifest.config["n_c"] == 10


def test_optimize_seq_phase_log(outroot, capsys):
    out = outroot / "seq"
    assert main(["optimize", str(_tiny(outroot)), "--method", "seq", "--budget", "10000", "--out", str(out)]) == 0
    meta = io.read_front(out / "front.json").meta
    batch = 10 * 10 * 2
    assert meta["phase1_invocations"] <= 5000 + batch
    assert meta["phase2_invocations"] <= 5000 + batch
    assert "phase 1" in capsys.readouterr().out


def test_optimize_missing_taskset(outroot, capsys):
    assert main(["optimize", str(outroot / "missing.json")]) == 1
    assert "missing.json" in capsys.readouterr().err


def test_config_precedence(outroot):
    cfg = outroot / "cfg.json"
    cfg.write_text(json.dumps({"n_c": 3, "ps_p": 4, "seed": 5}))
    out = outroot / "prec"
    assert main(["optimize", str(_tiny(outroot)), "--config", str(cfg), "--n-c", "2", "--out", str(out)]) == 0
    m = RunManifest.read(out / "manifest.json")
    assert (m.config["n_c"], m.config["ps_p"], m.config["seed"], m.config["ps_a"]) == (2, 4, 5, 10)


def test_manifest_replay_is_byte_identical(outroot):
    first = outroot / "first"
    assert main(["optimize", str(_tiny(outroot)), "--n-c", "5", "--out", str(first)]) == 0
    again = outroot / "again"
    assert main(["optimize", "--manifest", str(first / "manifest.json"), "--out", str(again)]) == 0
    assert (first / "front.json").read_bytes() == (again / "front.json").read_bytes()


def test_simulate_reconstructed_example(outroot):
    io.write_taskset(outroot / "t.json", fig2_taskset())
    io.write_arrivals(outroot / "a.json", fig2_arrivals())
    (outroot / "p.json").write_text('{"priorities": [3, 2, 1]}')
    out = outroot / "s.csv"
    assert main(["simulate", str(outroot / "t.json"), "--arrivals", str(outroot / "a.json"),
                 "--priorities", str(outroot / "p.json"), "--out", str(out)]) == 0
    rows = list(csv.DictReader(open(out)))
    assert {"task_id": "2", "arrival": "8", "end": "14", "deadline_abs": "15", "dist": "-1", "complete": "1"} in rows


def test_simulate_empty_and_invalid(outroot, capsys):
    # offset past the horizon: no arrivals at all
    (outroot / "t.json").write_text(json.dumps(
        {"tasks": [{"id": 0, "kind": "periodic", "wcet": 1, "deadline": 5, "period": 5, "offset": 50}]}))
    (outroot / "p.json").write_text('{"priorities": [1]}')
    out = outroot / "s.csv"
    assert main(["simulate", str(outroot / "t.json"), "--worst-random", "1", "--horizon", "10",
                 "--priorities", str(outroot / "p.json"), "--out", str(out)]) == 0
    assert list(csv.reader(open(out))) == [list(io.SCENARIO_COLUMNS)]
    (outroot / "bad.json").write_text('{"priorities": [2]}')
    assert main(["simulate", str(outroot / "t.json"), "--worst-random", "1",
                 "--priorities", str(outroot / "bad.json")]) == 1
    assert "permutation" in capsys.readouterr().err


def test_simulate_worst_random_to_stdout(outroot, capsys):
    (outroot / "p.json").write_text('{"priorities": [3, 2, 1]}')
    assert main(["simulate", str(_tiny(outroot)), "--worst-random", "4", "--horizon", "40",
                 "--priorities", str(outroot / "p.json")]) == 0
    assert capsys.readouterr().out.startswith("task_id,arrival,end")


def _runs(outroot, method, seeds):
    paths = []
    for s in seeds:
        out = outroot / f"{method}{s}"
        args = ["optimize", str(_tiny(outroot)), "--method", method, "--n-c", "4", "--seed", str(s), "--out", str(out)]
        if method == "seq":
            args += ["--budget", "400"]
        assert main(args) == 0
        paths.append(str(out / "front.json"))
    return paths


def test_compare_against_itself(outroot):
    fronts = _runs(outroot, "opam", [1, 2, 3])
    out = outroot / "cmp"
    assert main(["compare", "--a", *fronts, "--b", *fronts, "--out", str(out)]) == 0
    stats = {r["indicator"]: r for r in csv.DictReader(open(out / "statistics.csv"))}
    assert stats["HV"]["mean_a"] == stats["HV"]["mean_b"]
    assert float(stats["HV"]["p"]) >= 0.95
    assert float(stats["HV"]["A12"]) == 0.5


def test_compare_groups_and_singletons(outroot):
    a = _runs(outroot, "opam", [1, 2])
    b = _runs(outroot, "rs", [1, 2])
    out = outroot / "cmp"
    assert main(["compare", "--a", *a, "--b", *b, "--label-a", "opam", "--label-b", "rs", "--out", str(out)]) == 0
    rows = list(csv.DictReader(open(out / "indicators.csv")))
    assert [r["method"] for r in rows] == ["opam", "opam", "rs", "rs"]
    assert set(rows[0]) == {"method", "subject", "seed", "HV", "GD+", "Delta"}
    assert main(["compare", "--a", a[0], "--b", b[0], "--out", str(out)]) == 0
    stats = list(csv.DictReader(open(out / "statistics.csv")))
    assert len(stats) == 3 and all(r["p"] == "n/a" and r["A12"] == "n/a" for r in stats)

"""Command-line subcommands, exit codes, manifests and caching."""

import json

import pytest

from poissonblocks.cli import main
from poissonblocks.matrices import GroupSpec


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


def test_catalog_build_emits_group_spec(capsys):
    code, out = run(["catalog", "build", "lamplighter(3,2)"], capsys)
    assert code == 0
    spec = GroupSpec.from_json(json.loads(out))
    assert set(spec.names) == {"delta", "M_X", "M_Y", "M_Z"}


def test_blocks_on_diagonal_spec(tmp_path, capsys):
    path = tmp_path / "diag.json"
    path.write_text(json.dumps({"char": 0, "vars": 1, "size": 2,
                                "generators": {"a": [["X", "0"], ["0", "1"]]}}))
    code, out = run(["blocks", str(path), "--depth", "4"], capsys)
    assert code == 0
    report = json.loads(out)
    assert [p["status"] for p in report["pairs"]] == ["NoWitnessUpToDepth(4)"]


def test_pipeline_lamplighter(tmp_path, capsys):
    code, out = run(["pipeline", "catalog:lamplighter(3,2)", "--no-simulate", "--out",
                     str(tmp_path)], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["verdict"]["outcome"] == "Nontrivial"
    assert report["dimensions"]["1,2"]["dimension"] == 3
    assert report["citations"]
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["failed_stage"] is None and manifest["subcommand"] == "pipeline"
    assert set(manifest["outputs"]) >= {"blocks.json", "verdict.json", "report.json"}


def test_pipeline_xyz(capsys):
    code, out = run(["pipeline", "catalog:xyz", "--no-simulate"], capsys)
    report = json.loads(out)
    assert code == 0
    assert (report["verdict"]["outcome"], report["verdict"]["moment_class"]) == \
        ("Trivial", "CenteredSecondMoment")
    assert len(report["wreath"]) == 3 and all(w["ok"] for w in report["wreath"].values())
    assert all(d["dimension"] == 2 for d in report["dimensions"].values())


def test_dim_accepts_block_report(tmp_path, capsys):
    _, out = run(["blocks", "catalog:lamplighter(2,3)"], capsys)
    path = tmp_path / "blocks.json"
    path.write_text(out)
    code, out = run(["dim", str(path)], capsys)
    assert code == 0 and json.loads(out)["1,2"]["dimension"] == 2


def test_dim_accepts_module_spec(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"char": 2, "vars": 1, "action": ["X"], "module": ["1"],
                                "relations": ["1+X+X^2"]}))
    code, out = run(["dim", str(path), "--radii", "2,4,6"], capsys)
    assert code == 0 and json.loads(out)["module"]["dimension"] == 0


def test_usage_errors(capsys):
    assert main(["nosuch"]) == 2
    assert main(["classify", "/does/not/exist.json"]) == 2
    assert main(["classify", "catalog:nosuch"]) == 2
    capsys.readouterr()


def test_computation_error_recorded(tmp_path, capsys):
    code = main(["dim", "catalog:g23x", "--radii", "2,4", "--out", str(tmp_path)])
    capsys.readouterr()
    assert code == 3
    assert json.loads((tmp_path / "manifest.json").read_text())["failed_stage"] == "dim"


def test_unknown_verdict_exit_code(tmp_path, capsys):
    # a non-diagonal group whose only witness is longer than the depth
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"char": 0, "vars": 1, "size": 2,
                                "generators": {"a": [["X", "1"], ["0", "1"]]}}))
    code, out = run(["classify", str(path), "--depth", "1"], capsys)
    assert code == 4 and json.loads(out)["verdict"]["outcome"] == "Unknown"


def test_simulate_cache_and_csv(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("POISSONBLOCKS_CACHE", str(tmp_path / "cache"))
    argv = ["simulate", "catalog:lattice(2)", "--n", "100", "--walkers", "20",
            "--checkpoints", "10,100", "--stat", "range", "--stat", "drift", "--out",
            str(tmp_path / "a")]
    code, first = run(argv, capsys)
    assert code == 0
    assert len(list((tmp_path / "cache").iterdir())) == 1
    code, second = run(argv[:-1] + [str(tmp_path / "b")], capsys)
    assert first == second
    csv_text = (tmp_path / "a" / "walkstats.csv").read_text().splitlines()
    assert csv_text[0] == "stat,cell,value,stderr" and len(csv_text) == 5


def test_same_seed_same_digests(tmp_path, capsys):
    digests = []
    for sub in ("x", "y"):
        main(["pipeline", "catalog:lamplighter(2,2)", "--n", "200", "--walkers", "10",
              "--seed", "7", "--out", str(tmp_path / sub)])
        digests.append(json.loads((tmp_path / sub / "manifest.json").read_text())["outputs"])
    capsys.readouterr()
    assert digests[0] == digests[1]

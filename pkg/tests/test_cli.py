import json

import pytest

from ivdesign import PDAG, write_graph
from ivdesign.cli import EXIT_CAP, EXIT_INVALID, EXIT_OK, EXIT_USAGE, main


@pytest.fixture()
def p3_file(tmp_path):
    p = tmp_path / "p3.graph"
    write_graph(PDAG.from_edges(3, directed=[(0, 1), (1, 2)]), p)
    return str(p)


def test_gen_writes_files(tmp_path):
    out = tmp_path / "corpus"
    rc = main(["gen", "--n", "6", "--count", "3", "--seed", "1", "--out", str(out)])
    assert rc == EXIT_OK
    assert sorted(p.name for p in out.iterdir()) == [
        "instance_0000.graph", "instance_0001.graph", "instance_0002.graph"
    ]


def test_design_report(tmp_path, p3_file):
    out = tmp_path / "report.json"
    rc = main([
        "design", "--graph", p3_file, "--k", "1",
        "--algorithm", "greedy", "--estimator", "exact", "--out", str(out),
    ])
    assert rc == EXIT_OK
    report = json.loads(out.read_text())
    assert report["targets"] == [1]
    assert report["objective"]["value"] == pytest.approx(2.0)
    assert report["ratio"] == pytest.approx(1.0)
    assert report["config"]["estimator"] == "exact"
    assert report["round_gains"] == [[1, 2.0]]
    assert report["evaluations_performed"] > 0


def test_design_deterministic(tmp_path, p3_file):
    outs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        main(["design", "--graph", p3_file, "--k", "1", "--estimator", "unbiased",
              "--samples", "200", "--seed", "5", "--out", str(out)])
        outs.append(out.read_text())
    assert outs[0] == outs[1]


def test_eval_report(tmp_path, p3_file):
    out = tmp_path / "eval.json"
    rc = main(["eval", "--graph", p3_file, "--targets", "0", "--out", str(out)])
    assert rc == EXIT_OK
    body = json.loads(out.read_text())
    # revealing 0 -> 1 lets rule 1 orient 1 - 2 as well
    assert body == {"targets": [0], "discovered": 2, "undirected_total": 2, "ratio": 1.0}


def test_eval_bad_targets(p3_file):
    assert main(["eval", "--graph", p3_file, "--targets", "x"]) == EXIT_INVALID
    assert main(["eval", "--graph", p3_file, "--targets", "7"]) == EXIT_INVALID


def test_mec_count(p3_file, capsys):
    rc = main(["mec", "count", "--graph", p3_file])
    assert rc == EXIT_OK
    assert capsys.readouterr().out.strip() == "3"


def test_mec_sample(p3_file, capsys):
    rc = main(["mec", "sample", "--graph", p3_file, "--draws", "2", "--seed", "8"])
    assert rc == EXIT_OK
    body = json.loads(capsys.readouterr().out)
    assert body["n"] == 3
    assert len(body["members"]) == 2


def test_bench(tmp_path):
    spec = tmp_path / "spec.toml"
    spec.write_text(
        'seed = 2\ntiming = false\n\n[generator]\nn = 7\ncount = 3\n\n'
        '[design]\nalgorithms = ["greedy"]\nbudgets = [1]\nestimator = "exact"\n'
    )
    out = tmp_path / "out.csv"
    rc = main(["bench", "--spec", str(spec), "--out", str(out)])
    assert rc == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0].startswith("instance_id,seed,n,k,")
    assert len(lines) == 4


def test_ingest_dream3(tmp_path):
    tsv = tmp_path / "gold.tsv"
    tsv.write_text("G1\tG2\t1\nG2\tG3\t1\n")
    out = tmp_path / "net.graph"
    rc = main(["ingest-dream3", "--in", str(tsv), "--out", str(out)])
    assert rc == EXIT_OK
    assert "# names G1,G2,G3" in out.read_text()

    cyc = tmp_path / "cyc.tsv"
    cyc.write_text("G1\tG2\t1\nG2\tG1\t1\n")
    assert main(["ingest-dream3", "--in", str(cyc), "--out", str(out)]) == EXIT_INVALID


def test_usage_errors(p3_file):
    assert main(["design", "--graph", p3_file]) == EXIT_USAGE  # missing --k
    assert main(["no-such-command"]) == EXIT_USAGE


def test_input_validation_exit_code(p3_file):
    assert main(["design", "--graph", p3_file, "--k", "9"]) == EXIT_INVALID


def test_cap_exit_code(tmp_path):
    path = tmp_path / "path40.graph"
    write_graph(PDAG.from_edges(40, undirected=[(i, i + 1) for i in range(39)]), path)
    rc = main(["design", "--graph", str(path), "--k", "20", "--algorithm", "brute"])
    assert rc == EXIT_CAP

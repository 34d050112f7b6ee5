import json

import pytest

from stncg.cli import main
from stncg.experiments import read_csv
from stncg.scenario import save_scenario, reference_scenario


def run(capsys, *argv):
    rc = main(list(argv))
    return rc, capsys.readouterr().out


def test_topology(capsys):
    rc, out = run(capsys, "topology", "--planes", "4", "--sats-per-plane", "3")
    doc = json.loads(out)
    assert rc == 0 and doc["n_satellites"] == 12


def test_enumerate_csv(capsys):
    rc, out = run(capsys, "enumerate", "--h", "1-3")
    assert out.startswith("# stncg/enumerate v1\n")
    rows = read_csv(out)
    assert [int(r["total"]) for r in rows] == [126, 510, 1662]


def test_enumerate_single_pair_json(capsys):
    rc, out = run(capsys, "enumerate", "--hs", "2", "--hg", "1", "--format", "json")
    assert json.loads(out) == [{"hs": 2, "hg": 1, "n_intersat": 480, "n_ground": 6, "total": 486}]


def test_solve_json_and_mps(capsys, tmp_path):
    mps = tmp_path / "rmp.mps"
    rc, out = run(capsys, "solve", "--hs", "2", "--seed", "3", "--mps", str(mps))
    doc = json.loads(out)
    assert rc == 0 and doc["status"] == "optimal" and doc["hops"] == [2, 2]
    assert mps.read_text().startswith("NAME")


def test_solve_trace_csv(capsys, tmp_path):
    out_path = tmp_path / "trace.csv"
    run(capsys, "solve", "--hs", "1", "--format", "csv", "--out", str(out_path))
    rows = read_csv(out_path.read_text())
    assert rows[0]["iter"] == "1" and rows[-1]["n_violations_found"] == "0"


@pytest.mark.parametrize("method", ["full", "dfs", "local"])
def test_baseline(capsys, method):
    rc, out = run(capsys, "baseline", "--method", method, "--hs", "1")
    doc = json.loads(out)
    assert doc["method"] == method and doc["objective"] > 0


def test_baseline_ordering(capsys):
    vals = {}
    for m in ("local", "dfs", "full"):
        vals[m] = json.loads(run(capsys, "baseline", "--method", m, "--hs", "2")[1])["objective"]
    assert vals["local"] <= vals["dfs"] + 1e-9 <= vals["full"] + 2e-9


def test_table2(capsys):
    rc, out = run(capsys, "table2", "--h", "1,2")
    rows = read_csv(out)
    assert [int(r["enumerated"]) for r in rows] == [126, 510]
    assert all(0 < int(r["activated"]) < int(r["enumerated"]) for r in rows)


def test_hop_sweep(capsys):
    rc, out = run(capsys, "hop-sweep", "--h", "0,1", "--n-seeds", "2")
    rows = read_csv(out)
    assert [r["h"] for r in rows] == ["0", "1"]
    assert float(rows[0]["gain"]) == pytest.approx(1.0)


def test_demand_sweep(capsys):
    rc, out = run(capsys, "demand-sweep", "--means", "10,40", "--n-seeds", "2", "--hs", "1")
    rows = read_csv(out)
    assert [float(r["mean"]) for r in rows] == [10.0, 40.0]
    for r in rows:
        assert float(r["local_only"]) <= float(r["dfs"]) + 1e-9 <= float(r["colgen"]) + 2e-9


def test_audit(capsys):
    rc, out = run(capsys, "audit", "--hs", "2")
    doc = json.loads(out)
    assert rc == 0 and doc["violations"] == []
    assert doc["checked"] == {"intersat": 480, "ground": 30, "local": 30}


def test_scenario_file(capsys, tmp_path):
    path = tmp_path / "sc.json"
    save_scenario(reference_scenario(seed=4, hops=(1, 1)), path)
    rc, out = run(capsys, "solve", "--scenario", str(path))
    assert json.loads(out)["hops"] == [1, 1]


def test_bad_subcommand():
    with pytest.raises(SystemExit):
        main(["frobnicate"])

import csv
import json

import pytest

from irisplan.cli import CSV_HEADER, main
from irisplan.io import DEFAULT_SCENARIO


@pytest.fixture
def scenario_file(tmp_path):
    def write(**overrides):
        path = tmp_path / "scenario.json"
        path.write_text(json.dumps({**DEFAULT_SCENARIO, **overrides}))
        return str(path)

    return write


def _csv(out):
    with open(out / "anytime.csv") as fh:
        return list(csv.reader(fh))


def test_five_vertex_oracle(tmp_path, fixtures_dir):
    out = tmp_path / "o"
    assert main(["--scenario", str(fixtures_dir / "five_vertex.json"), "--mode", "oracle", "--out", str(out)]) == 0
    plan = json.loads((out / "plan.json").read_text())
    assert plan == {"vertices": ["a", "c", "d", "e"], "length": 4.0, "coverage": [0, 1, 2]}
    rows = _csv(out)
    assert rows[0] == CSV_HEADER and rows[1][2:5] == ["3", "1.0", "4.0"]


def test_five_vertex_search_once_with_trace(tmp_path, fixtures_dir):
    out = tmp_path / "s"
    argv = ["--scenario", str(fixtures_dir / "five_vertex.json"), "--mode", "search-once", "--eps0", str(2 / 3),
            "--p0", "0.5", "--trace", "--out", str(out)]
    assert main(argv) == 0
    plan = json.loads((out / "plan.json").read_text())
    assert plan["vertices"] == ["a", "b", "d", "e"] and plan["length"] == 3.0 and plan["coverage"] == [0, 2]
    summary = json.loads((out / "summary.json").read_text())
    assert summary["pap_length"] == 3.0 and summary["pap_coverage"] == [0, 1, 2]
    lines = (out / "trace.log").read_text().splitlines()
    assert lines[0] == "(a, 0, 0, 3, push)" and lines[-1].startswith("(e, 2, 3,")


def test_iris_run_outputs(tmp_path, scenario_file):
    out = tmp_path / "r"
    argv = ["--scenario", scenario_file(), "--budget", "1", "--seed", "3", "--snapshot", "--out", str(out)]
    assert main(argv) == 0
    rows = _csv(out)
    assert rows[0] == CSV_HEADER and len(rows) > 1
    summary = json.loads((out / "summary.json").read_text())
    assert summary["coverage_count"] == int(rows[-1][2]) and summary["coverage_total"] == 100
    assert summary["config"]["clock"] == "work"
    plan = json.loads((out / "plan.json").read_text())
    assert len(plan["configurations"]) == len(plan["vertices"])
    snap = json.loads((out / "roadmap.json").read_text())
    assert len(snap["vertices"]) == summary["final_roadmap_vertices"]
    # rerun is byte identical
    out2 = tmp_path / "r2"
    assert main(argv[:-1] + [str(out2)]) == 0
    assert (out / "anytime.csv").read_bytes() == (out2 / "anytime.csv").read_bytes()


def test_scenario_oracle_and_search_once(tmp_path, scenario_file):
    for mode in ("oracle", "search-once"):
        out = tmp_path / mode
        assert main(["--scenario", scenario_file(poi_count=8), "--mode", mode, "--batch", "15", "--out", str(out)]) == 0
        assert len(_csv(out)) == 2
    # 100 POI is far beyond the exact search's state guard
    assert main(["--scenario", scenario_file(), "--mode", "oracle", "--out", str(tmp_path / "g")]) == 2


def test_exit_codes(tmp_path, scenario_file, fixtures_dir, capsys):
    out = str(tmp_path / "x")
    assert main(["--scenario", scenario_file(), "--bogus"]) == 2
    assert main(["--scenario", str(tmp_path / "nope.json"), "--out", out]) == 2
    assert main(["--scenario", scenario_file(), "--eps0", "-1", "--out", out]) == 2
    assert main(["--scenario", scenario_file(), "--p0", "0", "--out", out]) == 2
    assert main(["--scenario", str(fixtures_dir / "five_vertex.json"), "--mode", "iris", "--out", out]) == 2
    assert main(["--scenario", scenario_file(start=[1.5708, -1.5708, 0.5, 0, 0]), "--out", out]) == 3
    err = capsys.readouterr().err
    assert "usage" in err and "collision" in err


def test_bundled_planar_fixture_is_the_default(fixtures_dir):
    assert json.loads((fixtures_dir / "planar.json").read_text()) == json.loads(json.dumps(DEFAULT_SCENARIO))

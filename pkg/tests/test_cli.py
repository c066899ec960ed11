"""CLI exit codes and file outputs through the in-process transport."""

import json

from click.testing import CliRunner

from eatonflow.cli import main

runner = CliRunner()

QUOTS_CSV = "9,1,1,10,16,9,1,1,10,16"


def test_direction_ok():
    res = runner.invoke(main, ["direction", "0", "1", "2", "--blocks", "0"])
    assert res.exit_code == 0, res.output
    data = json.loads(res.output)
    assert (data["a"], data["d"]) == (10, 10)


def test_direction_invalid_exits_2():
    res = runner.invoke(main, ["direction", "1", "2", "4"])
    assert res.exit_code == 2
    assert "coprime" in res.output


def test_verify_word_ok():
    res = runner.invoke(main, ["verify-word", "0", "1", "2", "--m", "2"])
    assert res.exit_code == 0, res.output
    data = json.loads(res.output)
    assert data["passed"] is True and data["n"] == 32


def test_cover_csv(tmp_path):
    out = tmp_path / "cover.csv"
    res = runner.invoke(main, [
        "simulate", "cover", "--z", "0,1/4", "--vector", "1,0",
        "--start", "-1/4,0", "--time", "1", "--out", str(out)])
    assert res.exit_code == 0, res.output
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "t,square,x,y,n1,n2,event"
    assert lines[1] == "0.25,2,0,0,0,0,slit"
    assert lines[2] == "0.75,2,-0.5,0,-1,0,edge_x"
    assert len(lines) == 3                      # end rows are omitted
    data = json.loads(res.output)
    assert data["csv"] == str(out)
    assert "events" not in data


def test_cover_zero_time_header_only(tmp_path):
    out = tmp_path / "empty.csv"
    res = runner.invoke(main, [
        "simulate", "cover", "--z", "0,1/4", "--vector", "1,0",
        "--time", "0", "--out", str(out)])
    assert res.exit_code == 0, res.output
    assert out.read_text().strip() == "t,square,x,y,n1,n2,event"


def test_cover_needs_direction():
    res = runner.invoke(main, ["simulate", "cover", "--z", "0,1/4",
                               "--time", "1"])
    assert res.exit_code == 2
    assert "--quotients or --vector" in res.output


def test_plane_csv(tmp_path):
    out = tmp_path / "plane.csv"
    res = runner.invoke(main, [
        "simulate", "plane", "--lattice", "square", "--radius", "1/4",
        "--start", "0,-1", "--time", "3/2", "--out", str(out)])
    assert res.exit_code == 0, res.output
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "t,x,y,orientation,event"
    assert lines[1] == "1,0,0,down,obstacle"
    data = json.loads(res.output)
    assert data["final"] == {"x": "0", "y": "-1/2", "orientation": "down"}


def test_plane_inadmissible_exits_1():
    res = runner.invoke(main, [
        "simulate", "plane", "--lattice", "basis:1/2,0;0,2",
        "--radius", "3/10", "--time", "1"])
    assert res.exit_code == 1
    assert json.loads(res.output)["status"] == "failed"


def test_lattice_json(tmp_path):
    out = tmp_path / "lat.json"
    res = runner.invoke(main, [
        "lattice", "--radius", "6/25", "--quotients", QUOTS_CSV,
        "--out", str(out)])
    assert res.exit_code == 0, res.output
    payload = json.loads(out.read_text())
    assert payload["R"] == "6/25"
    assert payload["basis_exact"][0][1] == ["-24/25", "-24/25"]
    assert -0.04 < payload["t_star"][0] <= payload["t_star"][1] < -0.03


def test_lattice_steep_enclosure_exits_1():
    res = runner.invoke(main, [
        "lattice", "--radius", "6/25", "--theta", "1/7,1/7"])
    assert res.exit_code == 1
    assert json.loads(res.output)["status"] == "failed"


def test_hausdorff_out_of_reach_exits_1():
    res = runner.invoke(main, [
        "hausdorff", "--a-block", "9,1,1,10", "--b-block", "9,1,1,10",
        "--d", "16", "--u-max", "50"])
    assert res.exit_code == 1
    data = json.loads(res.output)
    assert data["status"] == "failed"
    assert data["certificate"]["hi"] < 1


def test_hausdorff_witness_exits_0():
    res = runner.invoke(main, [
        "hausdorff", "--a-block", "1,1,1,1", "--b-block", "1,1,1,1",
        "--target", "0"])
    assert res.exit_code == 0, res.output
    assert json.loads(res.output)["u"] == 2


def test_multi_start_runs(tmp_path):
    out = tmp_path / "multi.csv"
    res = runner.invoke(main, [
        "simulate", "cover", "--z", "0,1/4", "--vector", "1,0",
        "--start", "-1/4,0", "--start", "1/3,1/3", "--time", "1",
        "--jobs", "2", "--out", str(out)])
    assert res.exit_code == 0, res.output
    assert (tmp_path / "multi.csv.0").exists()
    assert (tmp_path / "multi.csv.1").exists()

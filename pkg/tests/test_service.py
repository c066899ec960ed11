"""HTTP service contract tests against the in-process app."""

from fractions import Fraction as F

import pytest
from fastapi.testclient import TestClient

from eatonflow import __version__
from eatonflow.cf import ergodic_quotients
from eatonflow.service import app

client = TestClient(app, raise_server_exceptions=True)

QUOTS_2 = list(ergodic_quotients(0, 1, 2, [16, 16], 2))


def test_health():
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok", "version": __version__}


class TestDirection:
    def test_two_blocks(self):
        resp = client.post("/direction", json={"r": 0, "s": 1, "q": 2,
                                               "n_seq": [16, 16], "blocks": 2})
        assert resp.status_code == 200
        data = resp.json()
        assert data["status"] == "ok"
        assert (data["a"], data["d"]) == (10, 10)
        assert data["cf"] == QUOTS_2
        theta = data["theta"]
        assert theta["exact"][0].count("/") == 1
        assert 0.10 < theta["lo"] <= theta["hi"] < 0.11

    def test_pair_only(self):
        resp = client.post("/direction", json={"r": 0, "s": 1, "q": 2,
                                               "blocks": 0})
        assert resp.status_code == 200
        data = resp.json()
        assert (data["a"], data["d"], data["cf"]) == (10, 10, [])
        assert data["theta"] is None

    def test_invalid_pair(self):
        resp = client.post("/direction", json={"r": 1, "s": 2, "q": 4})
        assert resp.status_code == 422
        assert resp.json()["status"] == "invalid"
        assert "coprime" in resp.json()["detail"]

    def test_bad_twist_multiple(self):
        resp = client.post("/direction", json={"r": 0, "s": 1, "q": 2,
                                               "n_seq": [12], "blocks": 1})
        assert resp.status_code == 422


class TestVerifyWord:
    def test_reference_pair(self):
        resp = client.post("/verify-word", json={"r": 0, "s": 1, "q": 2})
        assert resp.status_code == 200
        data = resp.json()
        assert data["status"] == "ok"
        assert data["passed"] and data["fixed_point"] and data["action_trivial"]
        assert (data["n"], data["a"], data["d"]) == (16, 10, 10)
        assert data["point"] == ["0", "1/4"]
        assert data["action"] in ([[1, 0], [0, 1]], [[-1, 0], [0, -1]])
        assert data["word_length"] > 0

    def test_invalid(self):
        resp = client.post("/verify-word", json={"r": 2, "s": 1, "q": 2})
        assert resp.status_code == 422


class TestSimulateCover:
    def test_slit_crossing_run(self):
        resp = client.post("/simulate/cover", json={
            "z": ["0", "1/4"],
            "direction": {"vector": ["1", "0"]},
            "start": {"x": "-1/4", "y": "0"},
            "duration": "1",
            "include_events": True,
        })
        assert resp.status_code == 200
        data = resp.json()
        assert data["status"] == "ok" and data["halted"] is None
        assert data["final"] == {"square": 2, "x": "-1/4", "y": "0",
                                 "n1": -1, "n2": 0}
        assert data["header"] == ["t", "square", "x", "y", "n1", "n2", "event"]
        assert data["events"][0] == ["0.25", "2", "0", "0", "0", "0", "slit"]
        assert data["stats"]["events"] == {"slit": 1, "edge_x": 1, "end": 1}
        assert data["stats"]["distinct_n1"] == 2

    def test_slit_params_and_quotient_direction(self):
        resp = client.post("/simulate/cover", json={
            "slit": {"r": 0, "s": 1, "q": 2},
            "direction": {"quotients": [9, 1, 1, 10]},
            "start": {"x": "1/3", "y": "1/11"},
            "duration": "1/199",
        })
        assert resp.status_code == 200
        data = resp.json()
        assert data["status"] == "ok"
        assert data["events"] is None
        assert data["stats"]["cells_visited"] >= 1

    def test_both_slit_forms_rejected(self):
        resp = client.post("/simulate/cover", json={
            "z": ["0", "1/4"], "slit": {"r": 0, "s": 1, "q": 2},
            "direction": {"vector": ["1", "0"]}, "duration": "1"})
        assert resp.status_code == 422

    def test_singular_hit_halts(self):
        resp = client.post("/simulate/cover", json={
            "z": ["0", "1/4"],
            "direction": {"vector": ["1", "0"]},
            "start": {"x": "-1/4", "y": "1/4"},
            "duration": "1",
        })
        assert resp.status_code == 200
        data = resp.json()
        assert data["status"] == "ok"
        assert data["halted"] == "singularity"
        assert data["stats"]["events"]["singularity"] == 1


class TestSimulatePlane:
    def test_square_lattice_reflection(self):
        resp = client.post("/simulate/plane", json={
            "lattice": {"square": True},
            "radius": "1/4",
            "start": {"x": "0", "y": "-1", "orientation": "up"},
            "duration": "3/2",
            "include_events": True,
        })
        assert resp.status_code == 200
        data = resp.json()
        assert data["status"] == "ok"
        assert data["final"] == {"x": "0", "y": "-1/2", "orientation": "down"}
        assert data["stats"]["reflections"] == 1
        assert data["events"][0] == ["1", "0", "0", "down", "obstacle"]
        assert data["stats"]["band"]["resolution"] == 3600
        assert data["lattice"] is None

    def test_built_lattice_included(self):
        resp = client.post("/simulate/plane", json={
            "lattice": {"build": {"radius": "6/25", "s": 1, "q": 2,
                                  "quotients": QUOTS_2}},
            "start": {"x": "1/10", "y": "1/20"},
            "duration": "1",
        })
        assert resp.status_code == 200
        data = resp.json()
        assert data["status"] == "ok"
        assert data["lattice"]["R"] == "6/25"
        assert data["lattice"]["basis"][0][1] == -0.96

    def test_inadmissible_config_fails(self):
        resp = client.post("/simulate/plane", json={
            "lattice": {"basis": [["1/2", "0"], ["0", "2"]]},
            "radius": "3/10",
            "duration": "1",
        })
        assert resp.status_code == 200
        assert resp.json()["status"] == "failed"

    def test_radius_required(self):
        resp = client.post("/simulate/plane", json={
            "lattice": {"square": True}, "duration": "1"})
        assert resp.status_code == 422


class TestHausdorff:
    def test_witness_found(self):
        resp = client.post("/hausdorff", json={
            "a_block": [1, 1, 1, 1], "b_block": [1, 1, 1, 1], "target": "0"})
        assert resp.status_code == 200
        data = resp.json()
        assert data["status"] == "ok"
        assert data["u"] == 2
        assert data["target"] == "0"
        assert data["s"]["lo"] > 0

    def test_out_of_reach_carries_certificate(self):
        resp = client.post("/hausdorff", json={
            "a_block": [9, 1, 1, 10], "b_block": [9, 1, 1, 10], "d": 16,
            "target": "1/2", "u_max": 100})
        assert resp.status_code == 200
        data = resp.json()
        assert data["status"] == "failed"
        assert data["u"] is None
        assert data["certificate"]["hi"] < 0.01
        assert "/" in data["certificate"]["exact"][1]

    def test_invalid_target(self):
        resp = client.post("/hausdorff", json={
            "a_block": [1], "b_block": [1], "target": "3/2"})
        assert resp.status_code == 422


class TestLattice:
    def test_reference_build(self):
        resp = client.post("/lattice", json={
            "build": {"radius": "6/25", "s": 1, "q": 2, "quotients": QUOTS_2}})
        assert resp.status_code == 200
        data = resp.json()
        assert data["status"] == "ok"
        lat = data["lattice"]
        assert lat["R"] == "6/25"
        assert lat["basis_exact"][0][1] == ["-24/25", "-24/25"]
        lo, hi = lat["t_star"]
        assert -0.036 < lo <= hi < -0.035

    def test_steep_enclosure_fails(self):
        resp = client.post("/lattice", json={
            "build": {"radius": "6/25", "s": 1, "q": 2,
                      "theta": ["1/7", "1/7"]}})
        assert resp.status_code == 200
        assert resp.json()["status"] == "failed"

    def test_nonpositive_slope_invalid(self):
        resp = client.post("/lattice", json={
            "build": {"radius": "6/25", "s": 1, "q": 2,
                      "theta": ["-1/10", "1/100"]}})
        assert resp.status_code == 422

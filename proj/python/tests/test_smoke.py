import math
import pathlib

import pytest

import conesq

SCENARIOS = pathlib.Path(__file__).resolve().parents[2] / "scenarios"


def test_segment_scenario_properties():
    sc = conesq.Scenario.segment(64, 3)
    assert len(sc.atoms) == 64
    assert math.isclose(sum(sc.weights), 1.0)
    assert math.isclose(sc.spacing(), 1 / 64)


def test_ball_mass_matches_direct_sum():
    pts = [[i / 10, 0.0] for i in range(10)]
    w = [1.0] * 10
    assert conesq.ball_mass(pts, w, [0.0, 0.0], 0.3, True) == 4.0
    assert conesq.ball_mass(pts, w, [0.0, 0.0], 0.3, False) == 3.0


def test_point_cone_volume_close_to_closed_form():
    value, err = conesq.point_cone_volume(2, 0.01, 1.0, samples=8000, seed=2)
    assert abs(value - 2 * math.pi * math.log(100)) <= 3 * err


def test_suite_records_are_json_and_pass():
    sc = conesq.load_scenario(SCENARIOS / "segment.json")
    records = conesq.run_suite("lattice", sc)
    assert records and all(r["pass"] for r in records)
    assert "runtime_ms" not in records[0]
    again = conesq.run_suite("lattice", sc)
    assert records == again


def test_malformed_scenario_raises():
    with pytest.raises(conesq.ConesqError, match="params.alpha"):
        conesq.load_scenario(SCENARIOS / "malformed.json")
    with pytest.raises(conesq.ConesqError):
        conesq.run_suite("no-such-suite", conesq.Scenario.segment(16, 1))


def test_criterion_lookup():
    assert "measure" in conesq.criterion_keys()
    assert "good-lambda" in conesq.suite_names()
    res = conesq.run_criterion("lattice", 5)
    assert res["pass"] and res["key"] == "lattice"

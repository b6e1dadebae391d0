import json
from fractions import Fraction

import pytest

from helpers import pipeline_keys
from holefree import io
from holefree.embed import build_schedule, embed
from holefree.netgen import sobol_points


def test_fraction_text():
    assert io.fraction_str(Fraction(6, 4)) == "3/2"
    assert io.fraction_str(5) == "5"
    assert io.parse_fraction("-3/9", "x") == Fraction(-1, 3)
    assert io.parse_fraction(7, "x") == 7


@pytest.mark.parametrize("bad", ["0.5", "1e3", "x", "1/0", 1.5, True, None])
def test_parse_fraction_rejects_inexact(bad):
    with pytest.raises(io.FormatError) as err:
        io.parse_fraction(bad, "coords[0][1]")
    assert err.value.field == "coords[0][1]"


def test_net_round_trip():
    X = sobol_points(2, 4, digits=6)
    obj = json.loads(io.dumps(io.net_to_json(X, 4)))
    pts, s, m = io.net_from_json(obj)
    assert (s, m) == (2, 4) and pts == X


def test_net_errors_name_the_field():
    obj = io.net_to_json(sobol_points(2, 3), 3)
    obj["points"][2][1] = "012"
    with pytest.raises(io.FormatError) as err:
        io.net_from_json(obj)
    assert err.value.field == "points[2][1]"
    del obj["m"]
    with pytest.raises(io.FormatError, match="m: missing"):
        io.net_from_json(obj)


def test_good_round_trip():
    Y = pipeline_keys(2, 3)
    back = io.good_from_json(json.loads(io.dumps(io.good_to_json(Y))))
    assert back == Y


def test_good_rejects_wrong_digit_count():
    obj = io.good_to_json(pipeline_keys(2, 3))
    obj["keys"][0][0] = "0"
    with pytest.raises(io.FormatError) as err:
        io.good_from_json(obj)
    assert err.value.field == "keys[0][0]"


def test_points_round_trip_with_huge_integers():
    Y = pipeline_keys(2, 4)
    sched = build_schedule(2, Y.m, 2, "squaring")
    coords = [p.coords for p in embed(Y, sched)]
    assert max(len(str(c)) for p in coords for c in p) > 100
    obj = json.loads(io.dumps(io.points_to_json(coords, sched, Y.keys)))
    pts, sched2, keys = io.points_from_json(obj)
    assert pts == coords and sched2 == sched and keys == list(Y.keys)


def test_points_fractions_and_csv():
    pts = [(Fraction(1, 3), 2), (0, Fraction(-5, 2))]
    back, sched, keys = io.points_from_json(io.points_to_json(pts))
    assert back == pts and sched is None and keys is None
    assert io.points_csv(pts) == "x1,x2\n1/3,2\n0,-5/2\n"


def test_points_errors():
    with pytest.raises(io.FormatError, match="coords\\[1\\]"):
        io.points_from_json({"d": 2, "coords": [["1", "2"], ["3"]]})
    with pytest.raises(io.FormatError) as err:
        io.points_from_json({"d": 1, "coords": [["1"]], "schedule": {"B": "2.5", "m": 1}})
    assert err.value.field == "schedule.B"
    with pytest.raises(io.FormatError, match="source_keys"):
        io.points_from_json({"d": 1, "coords": [["1"], ["2"]], "source_keys": [["0"]]})


def test_read_json_errors(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(io.FormatError, match="invalid JSON"):
        io.read_json(p)
    with pytest.raises(io.FormatError, match="cannot read"):
        io.read_json(tmp_path / "missing.json")


def test_hole_report_shape():
    rep = io.hole_report("free", 9, "pass", None, False, 12, vacuous=False)
    assert rep == {"mode": "free", "ell": 9, "result": "pass", "witness": [], "caps_hit": False,
                   "predicate_calls": 12, "vacuous": False}

import json
import random
import subprocess
import sys

import pytest

from helpers import random_gp_points
from holefree import io as hio
from holefree.cli import main
from holefree.holes import max_hole
from holefree.pipeline import BUNDLE_FILES, PipelineConfig, run_pipeline


@pytest.fixture
def points_file(tmp_path):
    def write(pts, name="points.json"):
        path = tmp_path / name
        hio.write_json(path, hio.points_to_json(pts))
        return str(path)
    return write


def test_net_gen_verify_minimal_t(tmp_path, capsys):
    net = str(tmp_path / "net.json")
    assert main(["net", "gen", "--kind", "sobol", "--s", "2", "--m", "8", "--out", net]) == 0
    assert main(["net", "verify", "--in", net, "--t", "0", "--out", str(tmp_path / "r.json")]) == 0
    assert json.loads((tmp_path / "r.json").read_text())["result"] == "pass"
    capsys.readouterr()
    assert main(["net", "minimal-t", "--in", net]) == 0
    assert capsys.readouterr().out.strip() == "0"


def test_net_verify_on_duplicated_point(tmp_path):
    net = tmp_path / "net.json"
    main(["net", "gen", "--kind", "sobol", "--s", "2", "--m", "4", "--out", str(net)])
    obj = json.loads(net.read_text())
    obj["points"][1] = obj["points"][0]
    net.write_text(json.dumps(obj))
    out = tmp_path / "r.json"
    assert main(["net", "verify", "--in", str(net), "--t", "0", "--out", str(out)]) == 1
    rep = json.loads(out.read_text())
    assert rep["result"] == "violation" and "box" in rep


def test_net_gen_other_kinds(tmp_path):
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    assert main(["net", "gen", "--kind", "vdc", "--s", "1", "--m", "4", "--out", a]) == 0
    assert main(["net", "verify", "--in", a, "--t", "0"]) == 0
    assert main(["net", "gen", "--kind", "lifted", "--s", "3", "--m", "5", "--out", b]) == 0
    assert main(["net", "verify", "--in", b, "--T", "1", "--eps", "0", "--n", "5"]) == 0
    assert main(["net", "gen", "--kind", "vdc", "--s", "2", "--m", "4", "--out", a]) == 2


def test_malformed_file_names_field(tmp_path, capsys):
    net = tmp_path / "net.json"
    net.write_text(json.dumps({"s": 2, "m": 1, "digits_per_coord": 1, "points": [["0", "2"], ["1", "1"]]}))
    assert main(["net", "verify", "--in", str(net), "--t", "0"]) == 2
    assert "points[0][1]" in capsys.readouterr().err
    assert main(["holes", "free", "--in", str(tmp_path / "missing.json"), "--ell", "3"]) == 2


def test_usage_errors_exit_2():
    with pytest.raises(SystemExit) as err:
        main(["holes", "free", "--ell", "3"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["bounds", "table", "--d", "6..3"])
    assert err.value.code == 2


def test_good_build_verify_minimal_q(tmp_path, capsys):
    net, good = str(tmp_path / "net.json"), str(tmp_path / "good.json")
    main(["net", "gen", "--kind", "lifted", "--s", "2", "--m", "3", "--digits", "4", "--out", net])
    assert main(["good", "build", "--net", net, "--n", "3", "--out", good]) == 0
    assert main(["good", "verify", "--in", good, "--q", "4"]) == 0
    assert main(["good", "verify", "--in", good, "--q", "1", "--method", "subsets"]) == 1
    assert main(["good", "verify", "--in", good, "--q", "4", "--max-dm", "4"]) == 3
    capsys.readouterr()
    assert main(["good", "minimal-q", "--in", good]) == 0
    assert capsys.readouterr().out.strip() == "3"


def test_embed_perturb_and_holes(tmp_path, capsys):
    net, good = str(tmp_path / "net.json"), str(tmp_path / "good.json")
    pts, per = str(tmp_path / "pts.json"), str(tmp_path / "per.json")
    main(["net", "gen", "--kind", "lifted", "--s", "2", "--m", "4", "--digits", "5", "--out", net])
    main(["good", "build", "--net", net, "--n", "4", "--out", good])
    assert main(["embed", "--in", good, "--certify", "4", "--out", pts, "--csv", str(tmp_path / "p.csv")]) == 0
    assert (tmp_path / "p.csv").read_text().startswith("x1,x2\n")
    assert main(["perturb", "--in", pts, "--seed", "3", "--check-ell", "9", "--out", per]) == 0
    assert main(["holes", "free", "--in", per, "--ell", "9"]) == 0
    assert main(["holes", "free", "--in", per, "--ell", "6"]) == 1
    out = tmp_path / "max.json"
    assert main(["holes", "max", "--in", per, "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["result"] == "6" and rep["verified_empty"] and len(rep["witness"]) == 6


def test_embed_escalation_exit_code(tmp_path):
    good = tmp_path / "good.json"
    keys = [["011", "101"], ["010", "011"], ["101", "100"], ["100", "000"],
            ["000", "110"], ["111", "001"], ["110", "010"], ["001", "111"]]
    good.write_text(json.dumps({"d": 2, "m": 3, "T": 1, "eps": "0", "n": 3, "keys": keys}))
    args = ["embed", "--in", str(good), "--base", "2", "--growth", "geometric", "--certify", "3",
            "--out", str(tmp_path / "p.json")]
    assert main(args + ["--max-escalations", "0"]) == 1
    assert main(args) == 0


def test_holes_count_and_max(points_file, capsys):
    path = points_file([(0, 0), (5, 1), (2, 7)])
    assert main(["holes", "count", "--in", path, "--ell", "3"]) == 0
    assert capsys.readouterr().out.strip() == "1"
    A = random_gp_points(random.Random(5), 12, 2)
    path = points_file(A, "twelve.json")
    assert main(["holes", "max", "--in", path, "--algo", "auto"]) == 0
    first = capsys.readouterr().out
    assert f"largest hole: {max_hole(A, algo='brute').hole_size} " in first


def test_holes_caps_exit_3(points_file, monkeypatch):
    A = random_gp_points(random.Random(6), 12, 2)
    path = points_file(A)
    monkeypatch.setenv("HOLEFREE_MAX_SUBSETS", "5")
    assert main(["holes", "free", "--in", path, "--ell", "6"]) == 3
    monkeypatch.setenv("HOLEFREE_MAX_PREDICATE_CALLS", "10")
    assert main(["holes", "max", "--in", path, "--algo", "brute"]) == 3
    assert main(["holes", "max", "--in", path, "--algo", "brute", "--cap-size", "3"]) == 0


def test_bounds_table_and_theorem1(capsys):
    assert main(["bounds", "table", "--d", "3..6"]) == 0
    out = capsys.readouterr().out
    for value in ("32", "240", "992", "8000"):
        assert value in out
    assert "988" in out and "22" in out
    assert main(["bounds", "table", "--d", "3..4", "--csv"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "d,t,net_bound,valtr_bound,2^(7d),pass,note"
    assert main(["bounds", "theorem1", "--d-max", "64"]) == 0
    assert "62/62" in capsys.readouterr().out


def test_pipeline_d2(tmp_path, capsys):
    out = tmp_path / "b"
    assert main(["pipeline", "--d", "2", "--n", "4", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "9-hole-free" in text
    report = json.loads((out / "report.json").read_text())
    s = report["summary"]
    assert (s["q"], s["ell"], s["points"], s["vacuous"]) == (4, 9, 16, False)
    assert s["minimal_q"] <= 4
    assert "no holes of size greater than 8" in s["guarantee"]
    embed_stage = [st for st in report["stages"] if st["stage"] == "embed"][0]
    assert embed_stage["status"] == "pass"
    assert set(report["files"]) == set(BUNDLE_FILES)
    assert main(["verify-bundle", str(out)]) == 0


def test_pipeline_d3_is_vacuous(tmp_path):
    code, report = run_pipeline(PipelineConfig(d=3, n=3), tmp_path)
    assert code == 0
    s = report["summary"]
    assert (s["q"], s["ell"], s["points"], s["vacuous"]) == (8, 33, 8, True)
    assert "33-hole-free" in s["guarantee"] and "vacuous" in s["guarantee"]


def test_pipeline_is_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run_pipeline(PipelineConfig(d=2, n=3, seed=5), a)
    run_pipeline(PipelineConfig(d=2, n=3, seed=5), b)
    for name in BUNDLE_FILES + ("report.json",):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_pipeline_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"d = 2\nn = 3\nseed = 9\nout = {tmp_path / 'bundle'}\n")
    assert main(["pipeline", "--config", str(cfg)]) == 0
    report = json.loads((tmp_path / "bundle" / "report.json").read_text())
    assert report["config"]["seed"] == 9
    assert main(["pipeline", "--config", str(cfg), "--n", "2", "--out", str(tmp_path / "c")]) == 0
    assert json.loads((tmp_path / "c" / "report.json").read_text())["summary"]["points"] == 4


def test_pipeline_config_errors(tmp_path, capsys):
    assert main(["pipeline", "--d", "2", "--n", "3", "--T", "3", "--out", str(tmp_path)]) == 2
    assert "T" in capsys.readouterr().err
    assert main(["pipeline", "--d", "2", "--n", "3"]) == 2
    assert main(["pipeline", "--config", str(tmp_path / "none.cfg")]) == 2
    with pytest.raises(ValueError):
        PipelineConfig(d=2, n=3, max_subsets=0)


def test_pipeline_cap_exit_code(tmp_path):
    code, report = run_pipeline(PipelineConfig(d=2, n=4, max_subsets=10), tmp_path)
    assert code == 3 and report["failed_stage"] == "embed"


def test_verify_bundle_detects_tampering(tmp_path, capsys):
    run_pipeline(PipelineConfig(d=2, n=3), tmp_path)
    p = tmp_path / "perturbed.json"
    obj = json.loads(p.read_text())
    obj["coords"][0], obj["coords"][1] = obj["coords"][1], obj["coords"][0]
    p.write_text(json.dumps(obj))
    assert main(["verify-bundle", str(tmp_path)]) == 1
    out = capsys.readouterr().out
    assert "violation  sha256 perturbed.json" in out
    assert "violation  offsets below bound" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "holefree", "bounds", "table", "--d", "3"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "32" in res.stdout

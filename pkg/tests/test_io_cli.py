import csv
import json
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from masure import __version__, cli
from masure.errors import ConfigInvalid, NotTrueWall
from masure.io import (
    RunConfig,
    config_from_dict,
    decimal_str,
    frac_str,
    load_config,
    load_masure,
    parse_point,
    parse_word,
    point_literal,
    save_masure,
)

from conftest import PRESETS, fractions, points, small_masure

A1_FROM = '{"w":[[0,0,1]],"b":["-1"]}'
A1_TO = '{"w":[],"b":["-1"]}'


def run_json(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out else None), out


@given(fractions)
def test_frac_round_trip(x):
    assert F(frac_str(x)) == x


def test_decimal_rendering():
    assert decimal_str(F(2, 3), 3) == "0.667"
    assert decimal_str(F(-1, 8), 2) == "-0.12"
    assert decimal_str(F(5), 0) == "5"


@given(st.sampled_from(PRESETS).flatmap(lambda n: points(small_masure(n))))
def test_point_literal_round_trip(x):
    lit = json.loads(json.dumps(point_literal(x)))
    word = parse_word(lit["w"])
    assert word == x.word
    assert tuple(F(b) for b in lit["b"]) == x.b


def test_word_errors():
    with pytest.raises(NotTrueWall):
        parse_word([[0, "1/2", 1]])
    with pytest.raises(ConfigInvalid):
        parse_word([[0, "x", 1]])


def test_config_validation(tmp_path):
    assert RunConfig().validate().preset == "a1"
    with pytest.raises(ConfigInvalid):
        config_from_dict({"preset": "b7"})
    with pytest.raises(ConfigInvalid):
        config_from_dict({"thickness": 1})
    with pytest.raises(ConfigInvalid):
        config_from_dict({"bogus": 1})
    with pytest.raises(ConfigInvalid):
        config_from_dict({"matrix": [[2, 1], [0, 2]]})
    assert config_from_dict({"matrix": [[2, -2], [-2, 2]]}).preset is None
    path = tmp_path / "run.toml"
    path.write_text('preset = "hyp23"\nheight_bound = 30\nnorm = "linf"\n')
    cfg = load_config(path)
    assert (cfg.preset, cfg.height_bound, cfg.norm) == ("hyp23", 30, "linf")
    jpath = tmp_path / "run.json"
    jpath.write_text(json.dumps({"preset": "affine-a1", "seed": 4}))
    assert load_config(jpath).seed == 4


def test_masure_save_load(tmp_path):
    m = small_masure("hyp23")
    path = tmp_path / "m.json"
    cfg = RunConfig(preset="hyp23")
    save_masure(path, m, cfg)
    m2, cfg2 = load_masure(path)
    assert m2.apartments == m.apartments and cfg2 == cfg and m2.frozen
    x = m.apartments[-1]
    p = parse_point(m2, {"w": [[l.root, l.k, l.sheet] for l in x], "b": ["0", "0"]})
    assert p == m._canon(x, (0, 0))


def test_cli_distance_example(capsys):
    code, rep, _ = run_json(
        capsys, "distance", "--preset", "a1", "--from", A1_FROM, "--to", A1_TO, "--theta", '{"norm":"l1","germ":"+e"}'
    )
    assert code == 0
    assert rep["result"]["value"] == "2"
    assert rep["version"] == __version__ and rep["config"]["preset"] == "a1"
    code, rep, _ = run_json(capsys, "distance", "--from", A1_FROM, "--to", A1_TO, "--xi", '[{"norm":"l1","germ":"+e"},{"norm":"l1","germ":"-e"}]')
    assert rep["result"]["value"] == "4"


def test_cli_reports_are_reproducible(capsys):
    argv = ["geodesic", "--preset", "hyp23", "--from", '{"w":[],"b":["0","0"]}', "--to", '{"w":[],"b":["1","0"]}', "--t", "1/3", "--decimal", "3"]
    assert cli.run(argv) == 0
    first = capsys.readouterr().out
    assert cli.run(argv) == 0
    assert capsys.readouterr().out == first
    rep = json.loads(first)
    assert rep["result"]["value"] == "5" and rep["result"]["value_decimal"] == "5.000"


def test_cli_probes(capsys, tmp_path):
    code, rep, _ = run_json(capsys, "probe-discreteness", "--preset", "a1")
    assert code == 0 and rep["result"] == {"discrete": True, "min_spacing": "1"}
    out = tmp_path / "sep.csv"
    code, rep, _ = run_json(capsys, "probe-separation", "--preset", "hyp23", "--height-bound", "200", "--levels", "3", "--csv", str(out), "--decimal", "4")
    assert code == 0 and len(rep["result"]["levels"]) == 3
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["m", "d_plus", "d_mixed", "d_plus_decimal", "d_mixed_decimal"] and len(rows) == 4
    code, rep, _ = run_json(capsys, "probe-upath", "--from", A1_FROM, "--u", '["2"]')
    assert rep["result"]["u_path"] and rep["result"]["increment_ok"]
    code, rep, _ = run_json(capsys, "contract", "--from", A1_FROM, "--u", "[\"1\"]", "--t", "0", "--t", "1")
    assert rep["result"]["exit_time"] == "1"
    code, rep, _ = run_json(capsys, "split", "--apartment", "[[0,0,1],[0,-2,1]]", "--germ=-e")
    assert rep["result"]["n"] == 1 and len(rep["result"]["pieces"]) == 2
    code, rep, _ = run_json(capsys, "retract", "--from", A1_FROM, "--theta", '{"norm":"l1","germ":"-e"}')
    assert rep["result"]["retraction"] == ["1"]
    code, rep, _ = run_json(capsys, "translate", "--from", A1_FROM, "--u", '["2"]')
    assert rep["result"]["result"] == {"w": [], "b": ["1"]}
    code, rep, _ = run_json(capsys, "probe-equivalence", "--preset", "hyp23", "--theta2", '{"norm":"l1","germ":"+s1"}', "--pairs", "10")
    assert code == 0 and rep["result"]["within_bounds"]


def test_cli_masure_files(capsys, tmp_path):
    path = tmp_path / "m.json"
    assert cli.run(["distance", "--from", A1_FROM, "--to", A1_TO, "--save-masure", str(path)]) == 0
    first = json.loads(capsys.readouterr().out)
    assert cli.run(["distance", "--from", A1_FROM, "--to", A1_TO, "--masure", str(path), "--out", str(tmp_path / "r.json")]) == 0
    assert json.loads((tmp_path / "r.json").read_text())["result"] == first["result"]


def test_cli_errors(capsys):
    code, _, out = run_json(capsys, "distance", "--preset", "nope", "--from", A1_FROM, "--to", A1_TO)
    assert code == 2 and json.loads(out.err)["error"] == "ConfigInvalid"
    code, _, out = run_json(capsys, "probe-discreteness", "--preset", "hyp23")
    assert code == 2 and json.loads(out.err)["error"] == "HeightBoundExhausted"
    code, _, out = run_json(capsys, "distance", "--from", '{"w":[[0,"1/2",1]],"b":["0"]}', "--to", A1_TO)
    assert code == 2 and json.loads(out.err)["error"] == "NotTrueWall"

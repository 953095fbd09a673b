import json
import math

import numpy as np
import pytest

from fraclip.config import ConfigError, config_hash, load_config_file, parse_config
from fraclip.geometry import (STANDARD_OFFSETS, Ball, BallFamily, centered_family, log_radii, standard_family,
                              unit_ball_volume)
from fraclip.params import INF
from fraclip.reports import csv_text, format_float, read_csv_body, to_jsonable, write_csv, write_json


BASE = {
    "command": "check-weights",
    "point": {"n": 1, "m": 2, "beta": 0.9, "delta": 0.3, "delta_tilde": -0.2},
    "p": [2, "inf"],
    "weights": {"w": {"form": "power", "exponent": 0.2}, "v": [{"form": "constant", "value": 1.0}] * 2},
}


# -- geometry --------------------------------------------------------------------

def test_unit_ball_volumes():
    assert unit_ball_volume(1) == pytest.approx(2.0)
    assert unit_ball_volume(2) == pytest.approx(math.pi)
    assert unit_ball_volume(3) == pytest.approx(4 * math.pi / 3)


def test_ball_basics():
    B = Ball((3.0,), 2.0)
    assert B.volume == pytest.approx(4.0)
    assert B.side == pytest.approx(4.0)
    assert B.radial_range() == (1.0, 5.0)
    assert not B.contains_origin()
    assert B.dilate(2).radius == 4.0
    with pytest.raises(ValueError):
        Ball((0.0,), 0.0)


def test_families():
    radii = log_radii(1e-3, 1e3, 2)
    assert len(radii) == 13 and radii[0] == pytest.approx(1e-3) and radii[-1] == pytest.approx(1e3)
    fam = standard_family()
    assert len(fam) == 13 * len(STANDARD_OFFSETS)
    assert fam.n == 1
    assert fam[1].center[0] == pytest.approx(0.5 * fam[1].radius)
    cen = centered_family([1.0, 2.0])
    assert list(cen.radii()) == [1.0, 2.0]
    with pytest.raises(ValueError):
        BallFamily([])


# -- config ----------------------------------------------------------------------

def test_parse_config_defaults():
    cfg = parse_config(dict(BASE))
    assert cfg.seed == 0 and cfg.jobs == 1
    assert cfg.p.entries == (2.0, INF)
    assert cfg.quantities == ("hm_full",)
    assert cfg.q == INF and cfg.rh_s == 2.0
    assert len(cfg.family) == len(standard_family())
    assert cfg.quadrature is None


def test_parse_config_rejects_unknown_keys():
    for bad in ({**BASE, "extra": 1}, {**BASE, "point": {**BASE["point"], "k": 2}},
                {**BASE, "family": {"kind": "standard", "huh": 1}}, {**BASE, "quadrature": {"order": 3, "x": 1}},
                {**BASE, "output": {"folder": "x"}}, {**BASE, "experiment": {"kind": "boundedness", "z": 0}}):
        with pytest.raises(ConfigError):
            parse_config(bad)


def test_parse_config_value_errors():
    for bad in ({**BASE, "command": "fly"}, {**BASE, "jobs": 0}, {**BASE, "p": [2]},
                {**BASE, "quantities": ["hm_full", "nope"]}, {**BASE, "sigma": [0, 2]},
                {**BASE, "family": {"kind": "spiral"}}, {**BASE, "quadrature": {"order": 0}},
                {**BASE, "experiment": {"kind": "unknown"}}, {**BASE, "point": {"m": 2, "beta": 5, "delta": 0.3}},
                {**BASE, "weights": {"w": {"form": "x"}, "v": []}}):
        with pytest.raises(ConfigError):
            parse_config(bad)


def test_parse_config_family_and_quadrature():
    cfg = parse_config({**BASE, "family": {"kind": "centered", "radii": [0.5, 1.0]},
                        "quadrature": {"base_cells": 4, "order": 6}, "sigma": [1, 0],
                        "output": {"dir": "out", "prefix": "run_"}})
    assert list(cfg.family.radii()) == [0.5, 1.0]
    assert cfg.quadrature.order == 6
    assert cfg.sigma == (1, 0)
    assert str(cfg.output_dir) == "out" and cfg.prefix == "run_"


def test_config_hash_is_order_independent():
    a = {"seed": 1, "point": {"m": 2, "beta": 1.0}}
    b = {"point": {"beta": 1.0, "m": 2}, "seed": 1}
    assert config_hash(a) == config_hash(b)
    assert config_hash(a) != config_hash({**a, "seed": 2})
    assert len(config_hash(a)) == 16


def test_load_json_and_toml(tmp_path):
    j = tmp_path / "c.json"
    j.write_text(json.dumps(BASE))
    assert load_config_file(j) == BASE
    t = tmp_path / "c.toml"
    t.write_text('command = "verify"\nseed = 3\n[point]\nm = 2\nbeta = 0.9\ndelta = 0.3\n')
    data = load_config_file(t)
    assert data["seed"] == 3 and data["point"]["beta"] == 0.9
    (tmp_path / "bad.json").write_text("{")
    with pytest.raises(ConfigError):
        load_config_file(tmp_path / "bad.json")
    with pytest.raises(ConfigError):
        load_config_file(tmp_path / "missing.json")


# -- reports ---------------------------------------------------------------------

def test_format_float_round_trip():
    for x in (0.1, 1 / 3, 2.0 ** -1074, 1e308, -123.456):
        assert float(format_float(x)) == x
    assert format_float(INF) == "inf" and format_float(-INF) == "-inf" and format_float(math.nan) == "nan"


def test_csv_text_and_read_back(tmp_path):
    text = csv_text(["a", "b", "c"], [(1, 0.1, True), (np.int64(2), np.float64(INF), None)],
                    {"config_hash": "abc", "seed": 0})
    assert text.splitlines()[:2] == ["# config_hash: abc", "# seed: 0"]
    assert "1,0.10000000000000001,true" in text
    path = write_csv(tmp_path / "x" / "t.csv", ["a"], [[[1.0, 2.0]]], {"seed": 1})
    assert read_csv_body(path) == [["a"], ["1;2"]]


def test_json_writer_handles_special_values(tmp_path):
    data = {"x": INF, "y": np.float64(1.5), "z": np.arange(2), "b": Ball((0.0,), 1.0), "n": math.nan}
    out = to_jsonable(data)
    assert out["x"] == "inf" and out["n"] == "nan" and out["z"] == [0, 1]
    assert out["b"] == {"center": [0.0], "radius": 1.0}
    path = write_json(tmp_path / "a.json", data)
    assert json.loads(path.read_text())["y"] == 1.5

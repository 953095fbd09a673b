import json

import pytest

from fraclip.cli import (EXIT_CONFIG, EXIT_DEGENERATE, EXIT_INFINITE, EXIT_OK, EXIT_TRIVIAL, build_parser,
                         construction_point, main)
from fraclip.params import classify_region
from fraclip.reports import read_csv_body


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


SUM_EXPERIMENT = {
    "command": "experiment",
    "point": {"n": 1, "m": 2, "beta": 1.1, "delta": 0.3, "delta_tilde": 0.1},
    "p": [2, 2],
    "weights": {"w": {"form": "power", "exponent": 0.4},
                "v": [{"form": "power", "exponent": 0.2}, {"form": "power", "exponent": 0.2}]},
    "family": {"kind": "centered", "radii": [0.5, 1.0]},
    "experiment": {"kind": "boundedness", "variant": "sum", "kernel": {"name": "standard", "alpha": 0.8},
                   "symbols": [{"name": "constant", "value": 1.0, "delta": 0.3}] * 2,
                   "functions": [{"name": "bump"}, {"name": "bump"}]},
}


def test_parser_lists_commands():
    sub = build_parser()._subparsers._group_actions[0]
    assert set(sub.choices) == {"region", "check-weights", "construct", "verify", "experiment"}


def test_region_outputs(tmp_path):
    assert main(["region", "--panel", "beta_gt", "--resolution", "8", "--out", str(tmp_path)]) == EXIT_OK
    rows = read_csv_body(tmp_path / "region_beta_gt.csv")
    assert rows[0] == ["panel", "inv_p", "delta_tilde", "tag"]
    assert len(rows) == 65
    meta = (tmp_path / "region_beta_gt.csv").read_text().splitlines()[:2]
    assert meta[0].startswith("# config_hash: ") and meta[1] == "# seed: 0"
    data = json.loads((tmp_path / "region_beta_gt.json").read_text())
    assert len(data["edges"]) == 8 and len(data["cells"]) == 64
    assert data["config_hash"] == meta[0].split(": ")[1]


def test_region_bad_panel_beta(tmp_path):
    assert main(["region", "--panel", "beta_eq", "--beta", "0.9", "--out", str(tmp_path)]) == EXIT_CONFIG


def test_construct_then_check_weights(tmp_path):
    out = str(tmp_path)
    code = main(["construct", "--m", "2", "--beta", "0.9", "--delta", "0.3", "--delta-tilde", "-0.2",
                 "--p", "2", "2", "--out", out])
    assert code == EXIT_OK
    spec = json.loads((tmp_path / "weights_e.json").read_text())
    assert spec["notes"]["recipe"]["case"] == "e"
    spec["family"] = {"kind": "standard", "r_min": 0.1, "r_max": 10.0, "per_decade": 1}
    cfg = write(tmp_path, "check.json", spec)
    assert main(["check-weights", "--config", cfg, "--out", out]) == EXIT_OK
    summary = json.loads((tmp_path / "check_weights.json").read_text())
    assert summary["summary"]["hm_full"]["finite"] is True
    assert (tmp_path / "hm_full_profile.csv").exists()


def test_check_weights_with_weights_file(tmp_path):
    weights = write(tmp_path, "w.json", {"weights": {"w": {"form": "power", "exponent": 0.2},
                                                     "v": [{"form": "power", "exponent": 0.6}] * 2}})
    cfg = write(tmp_path, "c.json", {"point": {"m": 2, "beta": 0.9, "delta": 0.3, "delta_tilde": -0.2},
                                     "p": [2, 2], "family": {"kind": "centered", "radii": [1.0]}})
    # v^{-2} = |x|^{-1.2} is not locally integrable: the class quantity is infinite
    assert main(["check-weights", "--config", cfg, "--weights", weights, "--out", str(tmp_path)]) == EXIT_INFINITE


def test_construct_trivial_point(tmp_path, capsys):
    code = main(["construct", "--m", "2", "--beta", "0.9", "--delta", "0.3", "--delta-tilde", "0.35",
                 "--p", "2", "2", "--out", str(tmp_path)])
    assert code == EXIT_TRIVIAL
    assert "item (a)" in capsys.readouterr().err


def test_construct_missing_point(tmp_path):
    assert main(["construct", "--out", str(tmp_path)]) == EXIT_CONFIG


def test_experiment_zero_profile_and_flags(tmp_path):
    cfg = write(tmp_path, "e.json", SUM_EXPERIMENT)
    assert main(["experiment", "--config", cfg, "--out", str(tmp_path / "o"), "--seed", "7"]) == EXIT_OK
    js = json.loads((tmp_path / "o" / "00_boundedness_sum.json").read_text())
    assert js["status"] == "PASS" and js["summary"]["zero_profile"] is True
    csv_head = (tmp_path / "o" / "00_boundedness_sum.csv").read_text().splitlines()[1]
    assert csv_head == "# seed: 7"


def test_experiment_degenerate(tmp_path):
    data = json.loads(json.dumps(SUM_EXPERIMENT))
    data["experiment"]["functions"][1] = {"name": "zero"}
    cfg = write(tmp_path, "z.json", data)
    assert main(["experiment", "--config", cfg, "--out", str(tmp_path)]) == EXIT_DEGENERATE


@pytest.mark.parametrize("patch", [
    {"point": {"n": 1, "m": 2, "beta": 1.2, "delta": 0.3, "delta_tilde": 0.1}},  # beta != alpha~
    {"bogus": 1},
    {"experiment": {"kind": "boundedness"}},
    {"experiment": {**SUM_EXPERIMENT["experiment"], "functions": [{"name": "bump", "size": 2}] * 2}},
])
def test_experiment_config_errors(tmp_path, patch):
    cfg = write(tmp_path, "bad.json", {**SUM_EXPERIMENT, **patch})
    assert main(["experiment", "--config", cfg, "--out", str(tmp_path)]) == EXIT_CONFIG


def test_experiment_probe_and_asymptotic(tmp_path):
    probe = {"point": {"m": 2, "beta": 1.3, "delta": 0.3, "delta_tilde": 0.4}, "p": [2, 2],
             "weights": {"w": {"form": "constant", "value": 1.0}, "v": [{"form": "constant", "value": 1.0}] * 2},
             "experiment": {"kind": "triviality"}}
    assert main(["experiment", "--config", write(tmp_path, "p.json", probe), "--out", str(tmp_path)]) == EXIT_OK
    asym = {"experiment": {"kind": "asymptotic", "alphas": [0.0]}}
    assert main(["experiment", "--config", write(tmp_path, "a.json", asym), "--out", str(tmp_path)]) == EXIT_OK


def test_verify_asymptotic_suite(tmp_path):
    assert main(["verify", "--suite", "asymptotic", "--out", str(tmp_path)]) == EXIT_OK
    assert len(list(tmp_path.glob("*_power_asymptotic.json"))) == 3


def test_toml_config(tmp_path):
    path = tmp_path / "c.toml"
    path.write_text('[experiment]\nkind = "asymptotic"\nalphas = [1.0]\n')
    assert main(["experiment", "--config", str(path), "--out", str(tmp_path)]) == EXIT_OK


def test_construction_points_hit_their_cases():
    for case in "abcdef":
        point, p = construction_point(case)
        assert classify_region(point, p).case == case

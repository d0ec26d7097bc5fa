import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from fpsphere import cli
from fpsphere.config import ConfigError, RunConfig, load_config, parse_config_text
from fpsphere.io import curve_csv, curve_svg, fmt, to_json


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_sphere_table(capsys):
    code, out, _ = run(capsys, "sphere", "-p", "3", "-n", "5", "-r", "1")
    assert code == 0
    assert out.split("\n")[1].split() == ["1", "90", "90", "true"]


def test_sphere_json_all_radii(capsys):
    code, out, _ = run(capsys, "sphere", "-p", "3", "-n", "2", "--json")
    data = json.loads(out)
    assert code == 0 and data["agree"]
    assert [row["formula"] for row in data["spheres"]] == [0, 4, 4]


def test_sphere_enumerate(capsys):
    code, out, _ = run(capsys, "sphere", "-p", "3", "-n", "2", "-r", "1", "--enumerate", "--json")
    assert json.loads(out)["spheres"][0]["points"] == [[0, 1], [0, 2], [1, 0], [2, 0]]


def test_sphere_not_prime(capsys):
    code, _, err = run(capsys, "sphere", "-p", "4", "-n", "3")
    assert code == 2 and "not prime" in err


def test_sphere_guard(capsys):
    code, _, err = run(capsys, "sphere", "-p", "3", "-n", "6", "--enumerate", "--enum-guard", "100")
    assert code == 2 and "guard" in err


def test_missing_argument_is_usage_error(capsys):
    code, _, _ = run(capsys, "matrix", "-p", "3")
    assert code == 2


def test_matrix(capsys):
    code, out, _ = run(capsys, "matrix", "-p", "3", "-n", "5", "-r", "1")
    data = json.loads(out)
    assert code == 0 and data["dim"] == 4 and data["deflated"] is False
    assert data["entries"][1][1] == pytest.approx(27)


def test_matrix_deflate(capsys):
    code, out, _ = run(capsys, "matrix", "-p", "3", "-n", "5", "-r", "1", "--deflate")
    data = json.loads(out)
    assert data["deflated"] is True and data["annihilation_residual"] < 1e-8


def test_matrix_check_full(capsys):
    code, out, _ = run(capsys, "matrix", "-p", "3", "-n", "3", "-r", "1", "--check-full")
    assert code == 0 and json.loads(out)["full_space_check"]["residual"] == 0


def test_matrix_bad_radius(capsys):
    code, _, _ = run(capsys, "matrix", "-p", "3", "-n", "5", "-r", "7")
    assert code == 2


def test_curve_csv_and_svg(capsys, tmp_path):
    svg = tmp_path / "c.svg"
    code, out, _ = run(capsys, "curve", "-p", "3", "-n", "5", "-r", "1", "--tmax", "3", "--svg", str(svg))
    lines = out.strip().split("\n")
    assert code == 0 and lines[0] == "T1,probability" and lines[1] == "0,0"
    assert len(lines) == 302
    root = ET.parse(svg).getroot()
    polylines = [e for e in root.iter() if e.tag.endswith("polyline")]
    assert len(polylines) == 1
    assert len(polylines[0].get("points").split()) == 301


def test_curve_json_argmax(capsys):
    code, out, _ = run(capsys, "curve", "-p", "3", "-n", "5", "-r", "1", "--tmax", "3", "--json")
    data = json.loads(out)
    assert 1.3 <= data["argmax"]["T1"] <= 1.7


def test_curve_out_file(capsys, tmp_path):
    dest = tmp_path / "curve.csv"
    code, out, _ = run(capsys, "curve", "-p", "3", "-n", "4", "-r", "2", "--tmax", "1", "--out", str(dest))
    assert code == 0 and out == ""
    assert dest.read_text().startswith("T1,probability\n0,0\n")


def test_separation(capsys):
    code, out, _ = run(capsys, "separation", "-p", "3", "-n", "12", "-r", "1", "--pt", "0.4", "--reps", "3", "--json")
    data = json.loads(out)
    assert code == 0 and data["ratio"] >= 509 and data["mc"] is None


def test_separation_reps_two(capsys):
    code, _, _ = run(capsys, "separation", "-p", "3", "-n", "12", "-r", "1", "--pt", "0.4", "--reps", "2")
    assert code == 2


def test_separation_mc_deterministic(capsys):
    args = ("separation", "-p", "3", "-n", "6", "-r", "1", "--pt", "0.4", "--reps", "3",
            "--mc", "10000", "--seed", "7", "--json")
    first = run(capsys, *args)
    second = run(capsys, *args)
    assert first == second and first[0] == 0
    assert json.loads(first[1])["mc"]["seed"] == 7


def test_verify_all(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "all")
    assert code == 0 and "all checks passed" in out


def test_verify_fault_injection(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "walk", "--inject-fault", "walk")
    assert code == 1 and "failed suites: walk" in out


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "ffield", "--json", "--threads", "2")
    data = json.loads(out)
    assert code == 0 and data["passed"] and {c["suite"] for c in data["checks"]} == {"ffield"}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fpsphere", "sphere", "-p", "5", "-n", "2", "-r", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "true" in proc.stdout


def test_config_parsing():
    assert parse_config_text("seed = 4  # comment\n\nwalk_log_base = 2\n") == {"seed": 4, "walk_log_base": "2"}
    with pytest.raises(ConfigError):
        parse_config_text("colour = red")
    with pytest.raises(ConfigError):
        parse_config_text("seed = many")
    with pytest.raises(ConfigError):
        RunConfig(walk_log_base="1")


def test_config_precedence(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("seed = 1\nenum_guard = 500\nthreads = 3\n")
    env = {"FPSPHERE_SEED": "2", "FPSPHERE_ENUM_GUARD": "600"}
    cfg = load_config(str(path), {"seed": 3, "threads": None}, env)
    assert cfg.seed == 3 and cfg.enum_guard == 600 and cfg.threads == 3
    assert load_config(None, {}, {}).walk_log_base == "e"
    assert load_config(None, {}, {}).log_base("bound") == 2.0


def test_env_reaches_cli(capsys, monkeypatch):
    monkeypatch.setenv("FPSPHERE_ENUM_GUARD", "100")
    code, _, err = run(capsys, "sphere", "-p", "3", "-n", "6", "--enumerate")
    assert code == 2 and "guard" in err


def test_walk_log_base_flag(capsys):
    _, out_e, _ = run(capsys, "curve", "-p", "3", "-n", "5", "-r", "1", "--tmax", "3", "--json")
    _, out_2, _ = run(capsys, "curve", "-p", "3", "-n", "5", "-r", "1", "--tmax", "3", "--json",
                      "--walk-log-base", "2")
    assert json.loads(out_2)["argmax"]["T1"] > json.loads(out_e)["argmax"]["T1"]


def test_io_helpers():
    assert fmt(0.0) == "0" and fmt(0.5) == "0.5" and fmt(3) == "3"
    assert curve_csv([(0.0, 0.0), (0.01, 0.25)]) == "T1,probability\n0,0\n0.01,0.25\n"
    assert json.loads(to_json({"b": 1, "a": [1.5]})) == {"a": [1.5], "b": 1}
    svg = curve_svg([0, 1, 2], [0, 0.5, 0.2], "t")
    assert ET.fromstring(svg).tag.endswith("svg")

import json
import subprocess
import sys
from pathlib import Path

import pytest

from heunkit.cli import parse_args
from heunkit.errors import MalformedComplex, MissingOption, UnknownVerb


def run_cli(*args, **kw):
    return subprocess.run([sys.executable, "-m", "heunkit", *args],
                          capture_output=True, text=True, **kw)


def test_parse_args_classify():
    cmd = parse_args(["classify", "--ode", "file.ode"])
    assert cmd.verb == "classify"
    assert cmd.input == "file.ode"


def test_parse_args_heun_eval():
    cmd = parse_args(["heun-eval", "--a", "1", "--b", "1", "--c", "1",
                      "--d", "1", "--e", "1", "--f", "2", "--q", "0",
                      "--z", "0.3+0i"])
    assert cmd.verb == "heun-eval"
    assert cmd.options["z"] == 0.3 + 0j


def test_parse_args_unknown_verb():
    with pytest.raises(UnknownVerb):
        parse_args(["frobnicate"])


def test_parse_args_missing_option():
    with pytest.raises(MissingOption):
        parse_args(["connect", "--a", "1"])


def test_parse_args_malformed_complex():
    with pytest.raises(MalformedComplex):
        parse_args(["heun-eval", "--a", "1x", "--b", "1", "--c", "1",
                    "--d", "1", "--e", "1", "--f", "2", "--q", "0",
                    "--z", "0"])


def test_cli_exit_codes():
    assert run_cli("frobnicate").returncode == 2
    assert run_cli("classify").returncode == 2  # no source given? -> usage
    # outside-radius evaluation is a domain error
    p = run_cli("heun-eval", "--a", "1", "--b", "1", "--c", "1", "--d", "1",
                "--e", "1", "--f", "2", "--q", "0", "--z", "5")
    assert p.returncode == 1
    assert "OutsideRadius" in p.stderr


def test_cli_classify_file(tmp_path: Path):
    ode_file = tmp_path / "gauss.ode"
    ode_file.write_text(
        "ode p_num=[1.23,-2] p_den=[0,1,-1] q_num=[-0.2387] q_den=[0,1,-1]\n")
    p = run_cli("classify", "--ode", str(ode_file))
    assert p.returncode == 0
    data = json.loads(p.stdout)
    assert data["schema"] == 1
    kinds = {(pt["location"] if isinstance(pt["location"], str)
              else pt["location"]["re"]): pt["kind"] for pt in data["points"]}
    assert kinds == {0.0: "regular", 1.0: "regular", "inf": "regular"}


def test_cli_classify_corpus_csv():
    p = run_cli("classify", "--corpus", "confluent-hypergeometric",
                "--format", "csv")
    assert p.returncode == 0
    lines = p.stdout.strip().splitlines()
    assert lines[0] == "location,kind,rank,exponent1,exponent2"
    assert any(line.startswith("inf,irregular") for line in lines)


def test_cli_heun_eval_matches_library():
    from heunkit.heun import GeneralHeunParams, heun_value

    p = run_cli("heun-eval", "--a", "1", "--b", "1", "--c", "1", "--d", "1",
                "--e", "1", "--f", "2", "--q", "0", "--z", "0.3+0.1i")
    assert p.returncode == 0
    data = json.loads(p.stdout)
    val, _ = heun_value(GeneralHeunParams(1, 1, 1, 1, 1, 2, 0), 0, "first",
                        0.3 + 0.1j)
    assert abs(complex(data["w"]["re"], data["w"]["im"]) - val.w) <= 1e-13


def test_cli_mathieu_table_q_zero_squares():
    p = run_cli("mathieu-table", "--q-values", "0", "--n-max", "4",
                "--parity", "even")
    assert p.returncode == 0
    lines = p.stdout.strip().splitlines()
    assert lines[0] == "n,parity,q,value,truncation"
    values = [row.split(",")[3] for row in lines[1:]]
    assert values == ["0", "1", "4", "9", "16"]


def test_cli_scenario_with_config(tmp_path: Path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("scenario = eguchi-hanson-radial\n"
                   "k = 1\na = 1\nm = 1\nlam = 2\n")
    p = run_cli("scenario", "--config", str(cfg))
    assert p.returncode == 0
    data = json.loads(p.stdout)
    assert data["scenario"] == "eguchi-hanson-radial"
    assert data["all_claims_passed"] is True
    kinds = {}
    for pt in data["classifications"]["radial"]:
        loc = pt["location"]
        key = loc if isinstance(loc, str) else round(loc["re"], 9)
        kinds[key] = pt["kind"]
    assert kinds == {0.0: "regular", 1.0: "regular", "inf": "irregular"}


def test_cli_scenario_set_overrides(tmp_path: Path):
    out = tmp_path / "report.json"
    p = run_cli("scenario", "--id", "nutku-radial", "--set", "Lambda=0",
                "--output", str(out))
    assert p.returncode == 0
    data = json.loads(out.read_text())
    assert data["inputs"]["Lambda"] == 0.0


def test_cli_scenario_grid_out(tmp_path: Path):
    grid = tmp_path / "grid.csv"
    p = run_cli("scenario", "--id", "helmholtz-elliptic",
                "--grid-out", str(grid))
    assert p.returncode == 0
    lines = grid.read_text().strip().splitlines()
    assert lines[0] == "mu,theta,psi,residual"
    assert len(lines) == 401


def test_cli_scenario_text_format():
    p = run_cli("scenario", "--id", "stark", "--format", "text")
    assert p.returncode == 0
    assert "[PASS]" in p.stdout
    assert "all claims passed: True" in p.stdout


def test_cli_connect_identity():
    p = run_cli("connect", "--a", "0.31", "--b", "0.77", "--c", "1.23",
                "--d", "0.62", "--e", "0.23", "--f", "2.5", "--q", "0.1",
                "--from", "0", "--to", "0")
    assert p.returncode == 0
    data = json.loads(p.stdout)
    C = data["entries"]
    assert abs(C[0][0]["re"] - 1) < 1e-9 and abs(C[1][1]["re"] - 1) < 1e-9
    assert abs(C[0][1]["re"]) < 1e-9 and abs(C[1][0]["re"]) < 1e-9


def test_cli_determinism_repeated_runs():
    a = run_cli("scenario", "--id", "stark")
    b = run_cli("scenario", "--id", "stark")
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout


def test_cli_tolerance_env(tmp_path: Path):
    env = {"HEUNKIT_TOL": "1e-9"}
    import os
    full = dict(os.environ, **env)
    p = run_cli("connect", "--a", "0.31", "--b", "0.77", "--c", "1.23",
                "--d", "0.62", "--e", "0.23", "--f", "2.5", "--q", "0.1",
                "--from", "0", "--to", "1", env=full)
    assert p.returncode == 0
    assert json.loads(p.stdout)["tol"] == 1e-9


def test_cli_classify_heun_and_cform_lines(tmp_path: Path):
    p = run_cli("classify", "--text",
                "heun a=1 b=1 c=1 d=1 e=1 f=2 q=0", "--format", "csv")
    assert p.returncode == 0
    assert sum("regular" in line for line in p.stdout.splitlines()) == 4
    p = run_cli("classify", "--text",
                "cform kind=biconfluent A0=0.3 A1=0.5 A2=0.7 A3=0.9",
                "--format", "csv")
    assert p.returncode == 0
    lines = p.stdout.strip().splitlines()[1:]
    assert len(lines) == 2


def test_every_scenario_runs_from_single_config(tmp_path: Path):
    from heunkit.scenarios import SCENARIOS

    for sid, (_, defaults) in SCENARIOS.items():
        lines = [f"scenario = {sid}"]
        for key, val in defaults.items():
            if val is None:
                continue
            lines.append(f"{key} = {val}")
        cfg = tmp_path / f"{sid}.cfg"
        cfg.write_text("\n".join(lines) + "\n")
        p = run_cli("scenario", "--config", str(cfg))
        assert p.returncode == 0, (sid, p.stderr)
        data = json.loads(p.stdout)
        assert data["all_claims_passed"] is True, sid

import csv
import io
import json
from contextlib import redirect_stderr, redirect_stdout

import pytest
import yaml

from vlcsee import cli
from vlcsee.config import ConfigError, build_config, default_yaml, load_config


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = cli.main(argv)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, doc):
    p = tmp_path / "cfg.yaml"
    p.write_text(doc if isinstance(doc, str) else yaml.safe_dump(doc))
    return str(p)


def test_default_yaml_round_trips():
    assert build_config(yaml.safe_load(default_yaml())).raw == load_config().raw


@pytest.mark.parametrize("doc", [
    "room: {length: -1}",
    "sweep_power: {schemes: [laser]}",
    "design: {rho: 2}",
    "seed: abc",
    "realizations: 0",
    "design: {unknown: 1}",
    "eves_sweep: {k_eves: [0]}",
    "design_point: {bob: [9, 9]}",
    "[unterminated",
    "optical: {responsivity_gamma: 0}",
])
def test_bad_configs_exit_with_code_2(tmp_path, doc):
    code, out, err = run(["sweep-power", "--config", write(tmp_path, doc)])
    assert code == cli.EXIT_CONFIG and out == "" and "config error" in err


def test_missing_config_file():
    with pytest.raises(ConfigError):
        load_config("/nonexistent/cfg.yaml")


def test_sweep_power_csv(tmp_path):
    cfg = write(tmp_path, {"sweep_power": {"p_t_dbm": [26, 30], "schemes": ["miso", "fixed_siso:zf"]}})
    out = tmp_path / "o.csv"
    code, stdout, _ = run(["sweep-power", "--config", cfg, "--realizations", "2", "--seed", "5",
                           "--out", str(out)])
    assert code == 0 and stdout == ""
    lines = out.read_text().splitlines()
    assert lines[0] == "# seed=5"
    rows = list(csv.DictReader(lines[1:]))
    assert [r["scheme"] for r in rows] == ["miso", "fixed_siso:zf"] * 2
    for r in rows:
        assert 0 <= float(r["feas_prob"]) <= 1 and int(r["n_feasible"]) <= 2
        assert r["csi_mode"] == "unknown"


def test_eves_sweep_csv(tmp_path):
    cfg = write(tmp_path, {"eves_sweep": {"k_eves": [1, 2], "schemes": ["selective_siso"]}})
    code, out, _ = run(["eves-sweep", "--config", cfg, "--realizations", "1"])
    assert code == 0
    rows = list(csv.reader(out.splitlines()[1:]))
    assert rows[0] == cli.HEADERS["eves-sweep"]
    assert [r[0] for r in rows[1:]] == ["1", "2"] and all(float(r[2]) >= 0 for r in rows[1:])


@pytest.mark.parametrize("mode", ["unknown", "known"])
def test_design_json(tmp_path, mode):
    cfg = write(tmp_path, {"design_point": {"csi_mode": mode, "scheme": "miso"}})
    code, out, _ = run(["design", "--config", cfg])
    assert code == 0
    rep = json.loads(out)
    assert rep["status"] == "Solved" and len(rep["info_precoder"]) == 4


def test_default_config_command():
    code, out, _ = run(["default-config"])
    assert code == 0 and yaml.safe_load(out)["seed"] == 0


def test_runtime_failure_exits_3(monkeypatch):
    def boom(cfg):
        raise RuntimeError("solver blew up")
        yield
    monkeypatch.setitem(cli.ROWS, "convergence", boom)
    code, _, err = run(["convergence", "--realizations", "1"])
    assert code == cli.EXIT_RUNTIME and "solver blew up" in err


def test_convergence_rows_are_well_formed():
    code, out, _ = run(["convergence", "--realizations", "2"])
    rows = list(csv.DictReader(out.splitlines()[1:]))
    assert code == 0 and rows
    assert {r["algo"] for r in rows} == {"dinkelbach", "ccp"}
    assert {r["scheme"] for r in rows} <= {"selective_siso", "miso"}
    assert all(int(r["iter"]) >= 1 for r in rows)

import json

import numpy as np
import pytest
import yaml

from wgss.cli import (EXIT_CONFIG, EXIT_IO, EXIT_OK, EXIT_SOLVER, ConfigError,
                      main, parse_config, run)
from wgss.dynamics import COLLECTIVE, ModelSpec, SqueezedReservoir, evolve
from wgss.spinspace import dicke_state
from wgss.tableio import (ResultTable, TableFormatError, read_csv, write_csv,
                          write_table)


def write_cfg(tmp_path, doc, name="cfg.yaml"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(doc))
    return path


# ---------------------------------------------------------------- parsing

def test_parse_fills_defaults():
    cfg = parse_config({}, command="steady")
    assert cfg["model"]["N"] == 10
    assert cfg["model"]["r"] == 0.5
    assert cfg["model"]["mode"] == "collective"
    assert cfg["output"]["prefix"] == "run"
    assert cfg.seed == 0


def test_parse_rejects_unknown_key():
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config({"model": {"NN": 4}}, command="steady")
    with pytest.raises(ConfigError, match="unknown section"):
        parse_config({"modle": {}}, command="steady")


def test_parse_rejects_bad_ranges():
    with pytest.raises(ConfigError, match="model.N"):
        parse_config({"model": {"N": 0}}, command="steady")
    with pytest.raises(ConfigError, match="model.r"):
        parse_config({"model": {"r": -1.0}}, command="steady")
    with pytest.raises(ConfigError, match="n_samples"):
        parse_config({"run": {"n_samples": 1}}, command="evolve")
    with pytest.raises(ConfigError, match="seed"):
        parse_config({"seed": -3}, command="steady")


def test_parse_rejects_wrong_type():
    with pytest.raises(ConfigError, match="type"):
        parse_config({"model": {"N": "ten"}}, command="steady")


def test_parse_command_mismatch():
    with pytest.raises(ConfigError, match="invoked as"):
        parse_config({"command": "evolve"}, command="steady")
    with pytest.raises(ConfigError, match="no command"):
        parse_config({})


# ---------------------------------------------------------------- table io

def test_csv_roundtrip(tmp_path):
    rows = np.array([[0.0, 1.0 / 3.0], [1.5, np.pi]])
    t = ResultTable(name="demo", columns=["a", "b"], units=["1/A", "rad"],
                    rows=rows, metadata={"seed": 5})
    path = tmp_path / "demo.csv"
    write_csv(t, path)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# {")
    assert lines[1] == "a,b"
    assert lines[2] == "1/A,rad"
    back = read_csv(path)
    assert back.columns == ["a", "b"]
    assert back.units == ["1/A", "rad"]
    assert np.array_equal(back.rows, rows)  # 17 significant digits roundtrip
    assert back.metadata["seed"] == 5


def test_table_shape_validation():
    with pytest.raises(TableFormatError):
        ResultTable(name="x", columns=["a"], units=["u"],
                    rows=np.zeros((2, 2)))
    with pytest.raises(TableFormatError):
        ResultTable(name="x", columns=["a", "b"], units=["u"],
                    rows=np.zeros((2, 2)))
    with pytest.raises(TableFormatError):
        write_table(ResultTable(name="x", columns=["a"], units=["u"],
                                rows=np.zeros((1, 1))), "/dev/null", "xml")


# ---------------------------------------------------------------- exit codes

def test_exit_ok_and_output_file(tmp_path):
    rc = main(["steady", "--N", "6", "--r", "0.5", "--out", str(tmp_path)])
    assert rc == EXIT_OK
    out = read_csv(tmp_path / "run_steady.csv")
    assert out.columns[:3] == ["N", "r", "inv_xi"]
    assert out.rows[0, 0] == 6
    assert out.rows[0, 2] > 1.0


def test_exit_config_error(tmp_path):
    cfg = write_cfg(tmp_path, {"model": {"bogus": 1}})
    rc = main(["steady", "--config", str(cfg), "--out", str(tmp_path)])
    assert rc == EXIT_CONFIG


def test_exit_config_error_late(tmp_path):
    # valid schema, but qfunc cannot run in full mode
    cfg = write_cfg(tmp_path, {"model": {"mode": "full", "N": 3}})
    rc = main(["qfunc", "--config", str(cfg), "--out", str(tmp_path)])
    assert rc == EXIT_CONFIG


def test_exit_solver_error(tmp_path):
    # full product space is capped at 8 sites
    cfg = write_cfg(tmp_path, {"model": {"mode": "full", "N": 9}})
    rc = main(["steady", "--config", str(cfg), "--out", str(tmp_path)])
    assert rc == EXIT_SOLVER


def test_exit_io_error(tmp_path):
    blocker = tmp_path / "not_a_dir"
    blocker.write_text("")
    rc = main(["steady", "--N", "4", "--out", str(blocker)])
    assert rc == EXIT_IO


# ---------------------------------------------------------------- runners

def test_evolve_matches_direct_integration(tmp_path):
    doc = {"model": {"N": 6, "r": 0.5}, "run": {"t_end": 5.0, "n_samples": 11}}
    cfg = write_cfg(tmp_path, doc)
    rc = main(["evolve", "--config", str(cfg), "--out", str(tmp_path)])
    assert rc == EXIT_OK
    table = read_csv(tmp_path / "run_trajectory.csv")
    assert table.columns == ["t", "inv_xi"]
    spec = ModelSpec(mode=COLLECTIVE, N=6, reservoir=SqueezedReservoir(0.5, 0.5),
                     delta=1.0)
    t = np.linspace(0.0, 5.0, 11)
    expect = evolve(spec, dicke_state(6, -3), 5.0, t_eval=t).inv_xi()
    assert np.allclose(table.rows[:, 0], t)
    assert np.allclose(table.rows[:, 1], expect, atol=1e-12)


def test_evolve_series_labels(tmp_path):
    doc = {"model": {"N": 4},
           "run": {"t_end": 1.0, "n_samples": 3,
                   "series": [{"label": "a", "r": 0.2},
                              {"label": "b", "r": 0.8}]}}
    cfg = write_cfg(tmp_path, doc)
    assert main(["evolve", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_OK
    table = read_csv(tmp_path / "run_trajectory.csv")
    assert table.columns == ["t", "inv_xi[a]", "inv_xi[b]"]


def test_qfunc_tables_normalized(tmp_path):
    doc = {"model": {"N": 8, "r": 0.5},
           "qfunc": {"times": [0.0, 0.5], "n_theta": 121, "n_phi": 241,
                     "planar_grid": 41}}
    cfg = write_cfg(tmp_path, doc)
    assert main(["qfunc", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_OK
    for k, t in enumerate([0.0, 0.5]):
        table = read_csv(tmp_path / f"run_qsphere_t{k}.csv")
        assert table.metadata["t"] == t
        theta = np.unique(table.rows[:, 0])
        phi = np.unique(table.rows[:, 1])
        q = table.rows[:, 2].reshape(theta.size, phi.size)
        from scipy.integrate import simpson
        total = simpson(simpson(q * np.sin(theta)[:, None], x=phi, axis=1),
                        x=theta)
        assert total == pytest.approx(1.0, abs=1e-5)
        assert (tmp_path / f"run_qperp_t{k}.csv").exists()


def test_sweep_window_metadata(tmp_path):
    doc = {"model": {"N": 10},
           "sweep": {"r_min": 0.0, "r_max": 1.5, "r_step": 0.1}}
    cfg = write_cfg(tmp_path, doc)
    assert main(["sweep-r", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_OK
    table = read_csv(tmp_path / "run_sweep_r.csv")
    lo, hi = table.metadata["squeezing_window"]
    assert 0.0 < lo < hi < 1.5


def test_scaling_outputs_fits(tmp_path):
    doc = {"model": {}, "scaling": {"N_min": 4, "N_max": 12, "N_step": 4}}
    cfg = write_cfg(tmp_path, doc)
    assert main(["scaling", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_OK
    fits = read_csv(tmp_path / "run_fits.csv")
    assert fits.columns[0] == "xi_prefactor"
    scaling = read_csv(tmp_path / "run_scaling.csv")
    assert scaling.rows.shape == (3, 4)
    assert np.all(np.diff(scaling.rows[:, 2]) > 0)  # more spins squeeze harder


def test_disorder_rerun_is_byte_identical(tmp_path):
    doc = {"model": {"N": 4, "mode": "collective"},
           "disorder": {"w": 0.2, "n_configs": 3, "steady": True},
           "seed": 1}
    cfg = write_cfg(tmp_path, doc)
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    assert main(["disorder", "--config", str(cfg), "--out", str(out1)]) == EXIT_OK
    assert main(["disorder", "--config", str(cfg), "--out", str(out2)]) == EXIT_OK
    b1 = (out1 / "run_disorder_steady.csv").read_bytes()
    b2 = (out2 / "run_disorder_steady.csv").read_bytes()
    assert b1 == b2


def test_disorder_seed_changes_results(tmp_path):
    doc = {"model": {"N": 4},
           "disorder": {"w": 0.2, "n_configs": 3, "steady": True}}
    cfg = write_cfg(tmp_path, doc)
    assert main(["disorder", "--config", str(cfg), "--out", str(tmp_path / "a"),
                 "--seed", "1"]) == EXIT_OK
    assert main(["disorder", "--config", str(cfg), "--out", str(tmp_path / "b"),
                 "--seed", "2"]) == EXIT_OK
    ta = read_csv(tmp_path / "a" / "run_disorder_steady.csv")
    tb = read_csv(tmp_path / "b" / "run_disorder_steady.csv")
    assert ta.rows[0, 1] != tb.rows[0, 1]


def test_json_output_format(tmp_path):
    rc = main(["steady", "--N", "4", "--out", str(tmp_path),
               "--format", "json"])
    assert rc == EXIT_OK
    doc = json.loads((tmp_path / "run_steady.json").read_text())
    assert doc["columns"][2] == "inv_xi"
    assert doc["metadata"]["table"] == "steady"
    assert len(doc["rows"]) == 1

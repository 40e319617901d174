import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from anharmonic.cli import ConfigError, main, parse_config
from anharmonic.tables import read_csv, write_csv


def _cfg(tmp_path, doc, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def _simulate(tmp_path, doc, *extra):
    out = tmp_path / "out.csv"
    assert main(["simulate", "--config", _cfg(tmp_path, doc), "--out", str(out), *extra]) == 0
    return read_csv(out)


def test_simulate_lossless_kerr(tmp_path):
    comments, cols = _simulate(tmp_path, {"model": {"l": 1}, "tau_max": 1})
    assert cols["tau"][-1] == 1.0
    assert cols["S"][-1] == pytest.approx(3 - 2 * math.sqrt(2), abs=1e-6)
    assert cols["F"][-1] == 1.0
    assert comments[0].startswith("engine=closed")
    assert any("l=1" in c for c in comments)


def test_simulate_zero_length(tmp_path):
    _, cols = _simulate(tmp_path, {"model": {"l": 2}, "tau_max": 0})
    assert len(cols["tau"]) == 1
    assert (cols["S"][0], cols["F"][0], cols["R"][0]) == (1.0, 1.0, 0.0)


def test_simulate_damped_closed_fano(tmp_path):
    _, cols = _simulate(tmp_path, {"model": {"l": 1, "Gamma": 0.5, "n_d": 1}, "tau_max": 2})
    assert cols["F"][-1] == pytest.approx(3.367879, abs=1e-6)


def test_simulate_ode_with_q_and_columns(tmp_path):
    comments, cols = _simulate(tmp_path, {"physical": {"l": 1, "lam": 0.01, "N": 100},
                                          "tau_max": 0.5, "z0": [0.8, 0.2]},
                               "--engine", "ode", "--with-q")
    assert list(cols) == ["tau", "re_z", "im_z", "re_C", "im_C", "B", "S", "F", "re_zcl",
                          "im_zcl", "abs_Q", "abs_z1", "R"]
    assert "include_Q=True" in comments[0]
    # the corrected mean departs from the classical one at order 1/N
    dz = np.hypot(cols["re_z"] - cols["re_zcl"], cols["im_z"] - cols["im_zcl"])
    assert 0 < dz[-1] < 1e-2


def test_simulate_json(tmp_path):
    out = tmp_path / "o.json"
    rc = main(["simulate", "--config", _cfg(tmp_path, {"model": {"l": 1}, "tau_max": 0.01}),
               "--out", str(out), "--format", "json"])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert len(doc["columns"]["tau"]) == 11 and doc["meta"]["comments"]


@pytest.mark.parametrize("which, count", [("fig1", 6), ("fig2", 4), ("fig3", 6)])
def test_figure_file_counts(tmp_path, capsys, which, count):
    assert main(["figure", which, "--out", str(tmp_path)]) == 0
    files = sorted(tmp_path.glob(f"{which}*.csv"))
    assert len(files) == count
    assert len(capsys.readouterr().out.splitlines()) == count
    for f in files:
        comments, cols = read_csv(f)
        assert comments[0].startswith(f"figure={which}")
        assert cols["tau"][0] == 0.0


def test_compare_lossless_error_ratio(tmp_path):
    out = tmp_path / "cmp.csv"
    cfg = {"physical": {"l": 1, "lam": 0.01, "N": 100}, "tau_max": 1, "oracle_dt": 0.01}
    assert main(["compare", "--config", _cfg(tmp_path, cfg), "--out", str(out),
                 "--second-n", "200"]) == 0
    comments, cols = read_csv(out)
    np.testing.assert_allclose(cols["F_or"], 1.0, atol=1e-10)
    assert cols["ratio_S"][-1] == pytest.approx(2.0, rel=0.1)
    assert any("first-order in 1/N" in c for c in comments if c.startswith("error_scaling S"))


def test_compare_linear_damped(tmp_path):
    out = tmp_path / "cmp.csv"
    cfg = {"physical": {"l": 1, "lam": 0, "N": 16, "Delta": 0.3, "gamma": 0.5},
           "tau_max": 2, "n_out": 5}
    assert main(["compare", "--config", _cfg(tmp_path, cfg), "--out", str(out)]) == 0
    _, cols = read_csv(out)
    assert np.max(cols["dabsz"]) <= 1e-6


def test_report_prints_json(tmp_path, capsys):
    cfg = {"model": {"l": 1, "Gamma": 0.5, "N": 1e4}}
    assert main(["report", "--config", _cfg(tmp_path, cfg)]) == 0
    r = json.loads(capsys.readouterr().out)
    assert r["tau1"] == 2 and r["tau_star_hamiltonian"] == pytest.approx(100)
    assert main(["report", "--config", _cfg(tmp_path, {"model": {"l": 1}})]) == 0
    assert json.loads(capsys.readouterr().out)["tau1"] is None


@pytest.mark.parametrize("doc, field", [
    ({"model": {"l": 1}, "tau_max": 1, "extra": 1}, "extra"),
    ({"model": {"Gamma": 0.1}, "tau_max": 1}, "model.l"),
    ({"model": {"l": 1, "Gamma": -1}, "tau_max": 1}, "Gamma"),
    ({"model": {"l": 1}, "physical": {"l": 1, "lam": 1, "N": 1}, "tau_max": 1}, "model/physical"),
    ({"model": {"l": 1}, "tau_max": 1, "z0": [1, 2, 3]}, "z0"),
    ({"model": {"l": 1}, "tau_max": 1, "dt": 0}, "dt"),
    ({"model": {"l": 1}, "tau_max": 1, "kernel": "simpson"}, "kernel"),
    ({"model": {"l": "one"}, "tau_max": 1}, "model.l"),
])
def test_config_errors_name_the_field(doc, field):
    with pytest.raises(ConfigError, match=field):
        parse_config(doc)


def test_config_defaults():
    cfg = parse_config({"model": {"l": 2}})
    assert cfg.dt == 1e-3 and cfg.z0 == 1 + 0j and cfg.kernel == "exact"


def test_exit_codes(tmp_path, capsys):
    assert main(["simulate", "--config", _cfg(tmp_path, {"model": {"l": 1}}),
                 "--out", str(tmp_path / "x.csv")]) == 2  # tau_max missing
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["simulate", "--config", str(bad), "--out", str(tmp_path / "x.csv")]) == 2
    assert main(["simulate", "--config", _cfg(tmp_path, {"model": {"l": 1}, "tau_max": 1,
                                                          "dt": 0.3}),
                 "--out", str(tmp_path / "x.csv")]) == 2
    assert main(["simulate", "--config", str(tmp_path / "missing.json"),
                 "--out", str(tmp_path / "x.csv")]) == 4
    assert main(["simulate", "--config", _cfg(tmp_path, {"model": {"l": 1}, "tau_max": 1}),
                 "--out", str(tmp_path / "no" / "dir" / "x.csv")]) == 4
    # truncation too small for the initial coherent state
    cfg = {"physical": {"l": 1, "lam": 0.01, "N": 100}, "tau_max": 1, "oracle_dt": 0.1,
           "n_max": 110}
    assert main(["compare", "--config", _cfg(tmp_path, cfg), "--out",
                 str(tmp_path / "c.csv")]) == 3
    assert "numerical failure" in capsys.readouterr().err


def test_compare_needs_physical(tmp_path):
    assert main(["compare", "--config", _cfg(tmp_path, {"model": {"l": 1}, "tau_max": 1}),
                 "--out", str(tmp_path / "c.csv")]) == 2


_finite = st.floats(allow_nan=False, allow_infinity=False)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(_finite, _finite), min_size=1, max_size=20))
def test_csv_round_trip(tmp_path_factory, rows):
    path = tmp_path_factory.mktemp("rt") / "t.csv"
    a = np.array(rows)
    write_csv(path, {"x": a[:, 0], "y": a[:, 1]}, ["k=v"])
    comments, cols = read_csv(path)
    assert comments == ["k=v"]
    # 13 significant digits survive exactly
    for k, j in (("x", 0), ("y", 1)):
        np.testing.assert_array_equal(cols[k], [float("%.12e" % v) for v in a[:, j]])


def test_write_csv_rejects_ragged(tmp_path):
    with pytest.raises(ValueError):
        write_csv(tmp_path / "r.csv", {"a": [1, 2], "b": [1]})

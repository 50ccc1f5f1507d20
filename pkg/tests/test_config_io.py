import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from complexaction import Morse, RealClassical
from complexaction.config import (
    ConfigError,
    build_config,
    format_value,
    load_config,
    parse_config_text,
    parse_value,
    shipped_configs,
)
from complexaction.runs import (
    UncoveredRegionError,
    compare_wavefunctions,
    run_compare,
    run_propagate,
)
from complexaction.tables import read_table, write_table

SHIPPED = ["dpm-groundstate", "fig1", "fig2", "fig3", "harmonic-exact"]


def test_shipped_configs_load():
    assert shipped_configs() == SHIPPED
    for name in SHIPPED:
        cfg = load_config(name)
        assert cfg.name == name
        assert cfg.truncation >= 2


def test_fig3_parameters():
    cfg = load_config("fig3")
    assert cfg.wavepacket.alpha0 == 0.5 and cfg.wavepacket.xc == 9.342 and cfg.wavepacket.pc == 0
    assert cfg.potential == Morse(10.25, 0.2209)
    assert cfg.t_final == 5.93
    assert cfg.consts.hbar == 1 and cfg.consts.mass == 1
    assert cfg.strategy == RealClassical()


@pytest.mark.parametrize("text,value", [
    ("0.5", 0.5), ("3", 3), ("2i", 2j), ("1-0.5i", 1 - 0.5j), ("-1e-3+2e-2i", -1e-3 + 2e-2j),
    ("true", True), ("dpm", "dpm"), ('"a b"', "a b"),
])
def test_parse_value(text, value):
    assert parse_value(text) == value


@given(st.complex_numbers(allow_nan=False, allow_infinity=False))
def test_complex_format_round_trip(z):
    assert parse_value(format_value(complex(z))) == complex(z)


def test_comments_and_errors():
    flat = parse_config_text("# header\nstrategy = dpm  # trailing\n\npotential.kind = free\n")
    assert flat == {"strategy": "dpm", "potential.kind": "free"}
    with pytest.raises(ConfigError):
        parse_config_text("strategy dpm\n")


def flat_base():
    return dict(load_config("fig2").flat)


@pytest.mark.parametrize("override,key", [
    ({"fan.x_min": 5.0, "fan.x_max": 1.0}, "fan.x_max"),
    ({"fan.count": 0}, "fan.count"),
    ({"wavepacket.alpha0": -0.5}, "wavepacket"),
    ({"integration.dt": 0.0}, "integration"),
    ({"strategy": "hydro"}, "strategy"),
    ({"wavepacket.alpha": 0.5}, "wavepacket.alpha"),
    ({"bogus": 1}, "bogus"),
    ({"truncation": 2.5}, "truncation"),
    ({"integration.dt": "fast"}, "integration.dt"),
])
def test_validation_errors_carry_key_path(override, key):
    flat = flat_base()
    flat.update(override)
    with pytest.raises(ConfigError) as e:
        build_config(flat)
    assert e.value.key == key


@given(st.lists(st.floats(allow_nan=False, allow_infinity=True, width=64), min_size=1, max_size=20))
@settings(max_examples=50, deadline=None)
def test_table_round_trip_exact(tmp_path_factory, values):
    path = tmp_path_factory.mktemp("t") / "x.csv"
    a = np.array(values)
    write_table(path, {"a": a, "b": -a}, {"k": "v"})
    cols, meta = read_table(path)
    assert meta == {"k": "v"}
    np.testing.assert_array_equal(cols["a"], a)
    np.testing.assert_array_equal(cols["b"], -a)


def test_trajectory_table_round_trip_and_reproducible(tmp_path):
    cfg = build_config({**flat_base(), "fan.count": 21, "integration.t_final": 1.0, "integration.store_every": 100})
    run_propagate(cfg, tmp_path / "a")
    run_propagate(cfg, tmp_path / "b")
    a = (tmp_path / "a" / "trajectories.csv").read_bytes()
    assert a == (tmp_path / "b" / "trajectories.csv").read_bytes()
    assert (tmp_path / "a" / "final.csv").read_bytes() == (tmp_path / "b" / "final.csv").read_bytes()
    cols, meta = read_table(tmp_path / "a" / "trajectories.csv")
    assert meta["config_sha256"] == cfg.digest()
    expected = ["traj_id", "t", "re_x", "im_x", "re_v", "im_v", "re_S0", "im_S0", "re_S1", "im_S1",
                "re_S2", "im_S2", "diverged"]
    assert list(cols) == expected

    from complexaction.runs import fan_for

    fan = fan_for(cfg)
    np.testing.assert_array_equal(cols["re_S0"], fan.jets[:, 0, :].real.T.ravel())
    np.testing.assert_array_equal(cols["re_v"], fan.v_aux.real.T.ravel())


def test_zevca_positions_constant_in_table(tmp_path):
    flat = dict(load_config("harmonic-exact").flat)
    flat.update({"strategy": "zevca", "integration.t_final": 1.0})
    run_propagate(build_config(flat), tmp_path)
    cols, _ = read_table(tmp_path / "trajectories.csv")
    for tid in np.unique(cols["traj_id"]):
        x = cols["re_x"][cols["traj_id"] == tid]
        assert np.all(x == x[0])


def test_compare_with_itself_is_zero():
    x = np.linspace(-2, 2, 101)
    psi = np.exp(-x**2) * np.cos(3 * x)
    rep = compare_wavefunctions(x, psi, psi)
    assert rep["rel_l2"] == 0 and rep["sup_error"] == 0 and rep["max_node_displacement"] == 0
    assert rep["nodes_method"] == rep["nodes_reference"] and len(rep["nodes_reference"]) == 4


@pytest.mark.parametrize("strategy", ["bomca", "dpm", "zevca"])
def test_harmonic_compare_exact(strategy):
    name = "dpm-groundstate" if strategy == "dpm" else "harmonic-exact"
    flat = dict(load_config(name).flat)
    flat["strategy"] = strategy
    rep = run_compare(build_config(flat, name))
    assert rep["sup_error"] < 1e-6 and rep["rel_l2"] < 1e-6


def test_window_outside_coverage():
    flat = dict(load_config("harmonic-exact").flat)
    flat.update({"window.x_min": -10.0})
    with pytest.raises(UncoveredRegionError):
        run_compare(build_config(flat))


def test_with_dt_changes_hash():
    cfg = load_config("fig2")
    assert cfg.with_dt(2e-3).digest() != cfg.digest()
    assert cfg.with_dt(2e-3).integration.dt == 2e-3

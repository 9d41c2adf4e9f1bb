import math

import pytest

from msiopto.config import SCHEMA, ConfigError, default_config_text, load_config


def test_defaults_are_the_parameter_table():
    cfg = load_config()
    o, m = cfg.optics, cfg.mech
    assert o.r_m ** 2 == pytest.approx(0.17)
    assert o.r_bs ** 2 == pytest.approx(0.53)
    assert o.r_sr ** 2 == pytest.approx(0.9997)
    assert o.t_loss2 == 5e-3
    assert o.wavelength == 1064e-9
    assert o.cavity_length == pytest.approx(0.087)
    assert m.omega_m == pytest.approx(2 * math.pi * 136e3)
    assert m.q_m == 5.8e5 and m.mass == 80e-12 and m.t_bath == 293.0
    assert cfg.power == 20e-3


def test_override_is_reflected_in_metadata():
    cfg = load_config(overrides=["point.power=0.2"])
    assert cfg.power == 0.2
    assert cfg.resolved()["point.power"] == 0.2
    assert load_config(overrides={"point.power": "0.2"}).power == 0.2


def test_file_then_overrides(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# comment\noptics.r_m2 = 0.2  # trailing comment\n\nmech.q_m = 1e5\n")
    cfg = load_config(path, ["mech.q_m=2e5"])
    assert cfg.optics.r_m ** 2 == pytest.approx(0.2)
    assert cfg.mech.q_m == 2e5


@pytest.mark.parametrize("overrides, key", [
    (["sweep.count=1"], "sweep.count"),
    (["sweep.start=1", "sweep.stop=1"], "sweep.start"),
    (["sweep.scale=log", "sweep.start=-1"], "sweep.scale"),
    (["optics.colour=blue"], "optics.colour"),
    (["mech.mass=heavy"], "mech.mass"),
    (["mech.mass=-1"], "mech"),
    (["optics.r_sr2=0.5", "optics.t_loss2=0.6"], "optics"),
    (["point.position=7"], "point.position"),
])
def test_invalid_configs_name_the_key(overrides, key):
    with pytest.raises(ConfigError, match=key.replace(".", r"\.")):
        load_config(overrides=overrides)


def test_missing_file_and_parse_errors(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "nope.cfg")
    bad = tmp_path / "bad.cfg"
    bad.write_text("optics.r_m2 0.2\n")
    with pytest.raises(ConfigError, match=":1:"):
        load_config(bad)


def test_kind_defaults_fill_the_grid():
    cfg = load_config(kind="power")
    assert cfg.grid.scale == "log"
    assert cfg.grid.start == pytest.approx(0.3e-3) and cfg.grid.stop == pytest.approx(0.2)
    cfg = load_config(kind="couplings")
    assert cfg.grid.stop == pytest.approx(1064e-9 / 2) and not cfg.grid.endpoint
    with pytest.raises(ConfigError):
        load_config(kind="fourier")


def test_default_text_round_trips(tmp_path):
    path = tmp_path / "defaults.cfg"
    path.write_text(default_config_text())
    assert load_config(path).resolved() == load_config().resolved()
    assert set(load_config().resolved()) == set(SCHEMA)

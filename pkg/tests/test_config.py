import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from translab.config import (ExperimentConfig, ReportRow, bound_row, calibration_key, parse_config,
                             parse_exponent, read_calibration, residual_row, write_calibration)
from translab.errors import ConfigError

KNOWN = {"sharpness", "partition", "pv"}


def test_sections_in_order():
    cfgs = parse_config("[a]\nexperiment = pv\nseed = 3\n\n[partition]\nq = inf\n", known=KNOWN)
    assert [c.experiment for c in cfgs] == ["pv", "partition"]
    assert cfgs[0].seed == 3 and cfgs[0].label == "a"
    assert math.isinf(cfgs[1].q)


def test_unknown_key_reports_line():
    with pytest.raises(ConfigError, match=r"cfg.ini:3: unknown key 'colour'"):
        parse_config("[pv]\nseed = 1\ncolour = red\n", "cfg.ini", KNOWN)


def test_bad_value_reports_line():
    with pytest.raises(ConfigError, match=r"x:2: bad value for 'theta'"):
        parse_config("[pv]\ntheta = half\n", "x", KNOWN)


def test_unknown_experiment():
    with pytest.raises(ConfigError, match="unknown experiment"):
        parse_config("[foo]\n", known=KNOWN)


def test_out_of_range_values():
    with pytest.raises(ConfigError):
        parse_config("[pv]\ntheta = 1.5\n", known=KNOWN)
    with pytest.raises(ConfigError):
        parse_config("[pv]\nq = 0.5\n", known=KNOWN)
    with pytest.raises(ConfigError):
        ExperimentConfig("pv", seed=-1)


def test_malformed_ini():
    with pytest.raises(ConfigError):
        parse_config("seed = 1\n")


def test_exponent_parsing():
    assert parse_exponent("inf") == math.inf and parse_exponent("2") == 2.0
    with pytest.raises(ValueError):
        parse_exponent("0.3")


def test_row_semantics():
    assert bound_row("e", "c", 1.0, 1.0).passed
    assert not bound_row("e", "c", 1.1, 1.0, 0.05).passed
    assert residual_row("e", "c", 1e-9, 1e-8).passed
    assert not residual_row("e", "c", float("nan"), 1.0).passed
    assert ReportRow("e", "c", 0.0, 0.0, 0.0).ratio == 0.0


@given(st.dictionaries(st.from_regex(r"[a-z\-]{1,12}/theta=0\.5/q=2/p=2", fullmatch=True),
                       st.floats(1e-6, 1e6), max_size=5))
def test_calibration_round_trip(tmp_path_factory, table):
    path = tmp_path_factory.mktemp("cal") / "c.cal"
    write_calibration(path, table)
    assert read_calibration(path) == table


def test_calibration_merges(tmp_path):
    path = tmp_path / "c.cal"
    write_calibration(path, {"a": 1.0})
    write_calibration(path, {"b": 2.0})
    assert read_calibration(path) == {"a": 1.0, "b": 2.0}


@pytest.mark.parametrize("body", ["key = abc\n", "just words\n", "k = -1\n", "k = nan\n"])
def test_corrupted_calibration(tmp_path, body):
    path = tmp_path / "bad.cal"
    path.write_text(body)
    with pytest.raises(ConfigError):
        read_calibration(path)


def test_missing_calibration_is_empty(tmp_path):
    assert read_calibration(tmp_path / "none.cal") == {}


def test_key_format():
    assert calibration_key("main-theorem", 0.5, 2.0, math.inf) == "main-theorem/theta=0.5/q=2/p=inf"

import pytest

from translab.config import ExperimentConfig
from translab.errors import ConfigError
from translab.experiments import EXPERIMENTS
from translab.harness import (DEFAULT_CALIBRATION, Summary, read_csv, rows_to_csv, run_experiment, stability_rows,
                              suite_all, suite_configs)
from translab.config import Outcome


def test_partition_single_row():
    rows = run_experiment(ExperimentConfig("partition"))
    assert len(rows) == 1 and rows[0].ratio <= 1e-10 and rows[0].passed


def test_identity_multiplier_ratio():
    rows = run_experiment(ExperimentConfig("mikhlin-bound", measure="dirac", cases=2, probes=2))
    assert all(r.ratio <= 1.0 for r in rows)


def test_sharpness_on_shift_group():
    rows = run_experiment(ExperimentConfig("sharpness", group="shift", cases=2))
    uppers = [r for r in rows if r.case.endswith("/upper")]
    assert uppers and all(abs(r.lhs - 1.0) < 0.05 for r in uppers)


def test_byte_identical_csv(tmp_path):
    cfg = ExperimentConfig("interp-inequality", seed=5, cases=2)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run_experiment(cfg, a)
    run_experiment(cfg, b)
    assert a.read_bytes() == b.read_bytes()
    back = read_csv(a)
    assert rows_to_csv(back) == a.read_text()


def test_every_row_names_its_experiment():
    for name in ("partition", "pv", "sector", "kfunctional"):
        assert {r.experiment for r in run_experiment(ExperimentConfig(name))} == {name}


def test_suite_covers_each_experiment_once():
    names = [c.experiment for c in suite_configs()]
    assert sorted(names) == sorted(EXPERIMENTS) and len(set(names)) == 14


def test_unknown_experiment():
    with pytest.raises(ConfigError):
        run_experiment(ExperimentConfig("nope"))


def test_corrupted_calibration_file(tmp_path):
    bad = tmp_path / "bad.cal"
    bad.write_text("mikhlin-bound/theta=0.5/q=2/p=2 = banana\n")
    with pytest.raises(ConfigError):
        suite_all(configs=[ExperimentConfig("partition", calibration=str(bad))], echo=False)


def test_frozen_calibration_is_shipped():
    from translab.config import read_calibration
    table = read_calibration(DEFAULT_CALIBRATION)
    assert "main-theorem/theta=0.5/q=2/p=2" in table and "mikhlin-bound/theta=0.5/q=2/p=2" in table


def test_calibration_written_once(tmp_path):
    cal = tmp_path / "c.cal"
    cfg = ExperimentConfig("mikhlin-bound", cases=2, probes=1, calibration=str(cal))
    first = run_experiment(cfg)
    frozen = cal.read_text()
    second = run_experiment(cfg)
    assert cal.read_text() == frozen
    assert rows_to_csv(first).replace("calibrated", "frozen") == rows_to_csv(second)


def test_stability_rows_limit():
    rows = stability_rows("besov-interp", Outcome([], {"ratio_min": 1.0, "ratio_max": 2.0}),
                          Outcome([], {"ratio_min": 1.1, "ratio_max": 2.5}))
    assert [r.passed for r in rows] == [True, False]


def test_suite_summary_and_workers(capsys):
    cfgs = [ExperimentConfig(n) for n in ("partition", "pv", "sector")]
    one = suite_all(configs=cfgs, workers=1)
    two = suite_all(configs=cfgs, workers=2, echo=False)
    assert one.passed and rows_to_csv(one.rows) == rows_to_csv(two.rows)
    out = capsys.readouterr().out
    assert "partition" in out and "pass" in out
    assert set(Summary(one.rows).by_experiment()) == {"partition", "pv", "sector"}


def test_seed_changes_probes_not_verdict():
    a = run_experiment(ExperimentConfig("phillips", seed=1))
    b = run_experiment(ExperimentConfig("phillips", seed=2))
    assert all(r.passed for r in a + b)
    assert rows_to_csv(a) != rows_to_csv(b)

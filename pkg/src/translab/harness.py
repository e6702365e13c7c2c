"""Running experiments, refinement stability rows, CSV output and the suite."""

from __future__ import annotations

import csv
import io
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .config import ConfigError, ExperimentConfig, Outcome, ReportRow, bound_row, read_calibration
from .experiments import EXPERIMENTS, STABILITY

DEFAULT_CALIBRATION = Path(__file__).with_name("calibration.cal")
STABILITY_LIMIT = 0.2

CSV_FIELDS = ("experiment", "case", "lhs", "rhs", "ratio", "tolerance", "passed", "refine", "kind", "note")


def outcome(cfg: ExperimentConfig) -> Outcome:
    try:
        fn = EXPERIMENTS[cfg.experiment]
    except KeyError:
        raise ConfigError(f"unknown experiment {cfg.experiment!r}; known: {', '.join(EXPERIMENTS)}") from None
    if cfg.calibration:
        read_calibration(cfg.calibration)  # fail early on a corrupted file
    return fn(cfg)


def run_experiment(cfg: ExperimentConfig, out: str | Path | None = None) -> list[ReportRow]:
    rows = outcome(cfg).rows
    if out is not None:
        write_csv(rows, out)
    return rows


def stability_rows(name: str, coarse: Outcome, fine: Outcome) -> list[ReportRow]:
    rows = []
    for key in STABILITY.get(name, ()):
        a, b = coarse.metrics[key], fine.metrics[key]
        move = abs(b - a) / abs(a)
        rows.append(bound_row(name, f"stability/{key}", move, STABILITY_LIMIT, 0.0, 1,
                              f"default {a:.6g} refined {b:.6g}"))
    return rows


def run_with_refinement(cfg: ExperimentConfig) -> tuple[Outcome, Outcome, list[ReportRow]]:
    """Default and once-refined runs plus the rows comparing their metrics."""
    coarse = outcome(cfg.with_(refine=0))
    fine = outcome(cfg.with_(refine=1))
    return coarse, fine, stability_rows(cfg.experiment, coarse, fine)


def _job(cfg: ExperimentConfig) -> list[ReportRow]:
    coarse, fine, extra = run_with_refinement(cfg)
    return coarse.rows + fine.rows + extra


@dataclass
class Summary:
    rows: list[ReportRow]

    def by_experiment(self) -> dict[str, list[ReportRow]]:
        out: dict[str, list[ReportRow]] = {}
        for r in self.rows:
            out.setdefault(r.experiment, []).append(r)
        return out

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def table(self) -> str:
        lines = [f"{'experiment':<22} {'rows':>5} {'failed':>6} {'worst ratio':>12}  status"]
        for name, rows in self.by_experiment().items():
            bad = sum(not r.passed for r in rows)
            worst = max(rows, key=_severity)
            lines.append(f"{name:<22} {len(rows):>5} {bad:>6} {worst.ratio:>12.4g}  {'pass' if not bad else 'FAIL'}")
        return "\n".join(lines)


def _severity(r: ReportRow) -> float:
    if r.kind == "residual":
        return r.ratio / r.tolerance if r.tolerance > 0 else (0.0 if r.ratio == 0 else float("inf"))
    return r.ratio / (1.0 + r.tolerance)


def suite_configs(seed: int = 0, calibration: str | None = None) -> list[ExperimentConfig]:
    cal = str(DEFAULT_CALIBRATION) if calibration is None else calibration
    return [ExperimentConfig(name, seed=seed, calibration=cal or None) for name in EXPERIMENTS]


def suite_all(seed: int = 0, out: str | Path | None = None, workers: int = 1,
              configs: Iterable[ExperimentConfig] | None = None, echo: bool = True) -> Summary:
    """Every acceptance experiment at the default and the refined grid."""
    cfgs = list(configs) if configs is not None else suite_configs(seed)
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_job, cfgs))  # map keeps submission order
    else:
        parts = [_job(c) for c in cfgs]
    summary = Summary([r for part in parts for r in part])
    if out is not None:
        write_csv(summary.rows, out)
    if echo:
        print(summary.table(), file=sys.stdout)
    return summary


# -- CSV ---------------------------------------------------------------------------


def rows_to_csv(rows: Iterable[ReportRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        w.writerow([r.experiment, r.case, repr(r.lhs), repr(r.rhs), repr(r.ratio), repr(r.tolerance),
                    int(r.passed), r.refine, r.kind, r.note])
    return buf.getvalue()


def write_csv(rows: Iterable[ReportRow], path: str | Path) -> None:
    Path(path).write_text(rows_to_csv(rows))


def read_csv(path: str | Path) -> list[ReportRow]:
    with open(path, newline="") as fh:
        return [ReportRow(d["experiment"], d["case"], float(d["lhs"]), float(d["rhs"]), float(d["tolerance"]),
                          int(d["refine"]), d["kind"], d["note"]) for d in csv.DictReader(fh)]

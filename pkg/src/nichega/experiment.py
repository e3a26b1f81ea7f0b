"""Experiment orchestration: (algorithm, seed) cells, parallel execution, report files.

Output layout::

    <out>/<label>/<seed>/{summary,history,classification,population}.csv
    <out>/comparison.csv, <out>/variable_map.csv       (run, compare)
    <out>/dispersion.csv, <out>/runtimes.csv            (compare)
    <out>/crowding.csv, <out>/rung<k>/...               (crowding-study)
    <out>/config.effective.yaml, <out>/manifest.json
"""
from __future__ import annotations

import dataclasses
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import reports
from .analysis import (
    ComparisonRow,
    RunSummary,
    classify_variables,
    comparison_row,
    summarize_run,
    variable_map,
)
from .config import ExperimentConfig, Rung
from .dataset import Dataset
from .fitness import PenaltyTable
from .genome import derive_seed
from .niching import AlgorithmConfig, ConfigError, RunResult, run

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Cell:
    label: str
    seed: int
    config: AlgorithmConfig


@dataclass
class CellResult:
    cell: Cell
    result: RunResult
    summary: RunSummary


def make_cells(cfg: ExperimentConfig, rung: Rung | None = None) -> list[Cell]:
    """One cell per (algorithm, seed).

    The evolution stream is derived from the seed and the algorithm label, so
    algorithms never share random state; the initial population is derived
    from the seed alone, so algorithms with equal population sizes start from
    the same individuals.
    """
    cells = []
    for entry in cfg.algorithms:
        base = rung.apply(entry.config) if rung else entry.config
        for seed in cfg.seeds:
            acfg = dataclasses.replace(base, seed=derive_seed(seed, entry.label),
                                       init_seed=derive_seed(seed, "init"))
            cells.append(Cell(entry.label, seed, acfg))
    return cells


def _run_cell(dataset: Dataset, penalty_weight: float, cell: Cell) -> CellResult:
    table = PenaltyTable.from_distances(dataset.distances, penalty_weight)
    result = run(dataset, table, cell.config)
    summary = summarize_run(cell.label, cell.seed, result, dataset)
    log.info("%s seed=%s best_F=%.6g %.2fs", cell.label, cell.seed, summary.best_F,
             summary.seconds)
    return CellResult(cell, result, summary)


def execute(cells: Sequence[Cell], dataset: Dataset, penalty_weight: float,
            workers: int = 1) -> list[CellResult]:
    """Run cells, concurrently when ``workers > 1``; results keep the cell order."""
    if workers <= 1 or len(cells) <= 1:
        return [_run_cell(dataset, penalty_weight, c) for c in cells]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run_cell, dataset, penalty_weight, c) for c in cells]
        return [f.result() for f in futures]


def write_cell(outdir: Path, cr: CellResult, dataset: Dataset, checksum: str) -> Path:
    d = outdir / cr.cell.label / str(cr.cell.seed)
    reports.write_summary(d / "summary.csv", cr.summary, cr.result, checksum)
    reports.write_history(d / "history.csv", cr.result.history)
    reports.write_classification(d / "classification.csv",
                                 classify_variables(cr.result.final_population), dataset.names)
    reports.write_population(d / "population.csv", cr.result.final_population)
    return d


def _group(results: Sequence[CellResult]) -> dict[str, list[CellResult]]:
    groups: dict[str, list[CellResult]] = {}
    for cr in results:
        groups.setdefault(cr.cell.label, []).append(cr)
    return groups


def write_reports(outdir: Path, results: Sequence[CellResult], dataset: Dataset,
                  extended: bool = False) -> list[ComparisonRow]:
    checksum = dataset.checksum()
    for cr in results:
        write_cell(outdir, cr, dataset, checksum)
    groups = _group(results)
    rows = [comparison_row(label, [cr.summary for cr in crs]) for label, crs in groups.items()]
    reports.write_comparison(outdir / "comparison.csv", rows)
    pooled = {label: classify_variables(np.vstack([cr.result.genomes for cr in crs]),
                                        dataset.names)
              for label, crs in groups.items()}
    labels, codes = variable_map(pooled)
    reports.write_variable_map(outdir / "variable_map.csv", labels, codes, dataset.names)
    if extended:
        reports.write_dispersion(outdir / "dispersion.csv", rows)
        reports.write_runtimes(outdir / "runtimes.csv", [cr.summary for cr in results])
    return rows


def _write_meta(outdir: Path, cfg: ExperimentConfig, dataset: Dataset, command: str) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "config.effective.yaml").write_text(cfg.dump())
    manifest = {
        "command": command,
        "dataset_sha256": dataset.checksum(),
        "n_samples": int(dataset.X.shape[0]),
        "n_variables": dataset.n_variables,
        "n_train": int(dataset.train.size),
        "n_test": int(dataset.test.size),
        "variables": dataset.names,
    }
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2))


def run_experiment(cfg: ExperimentConfig, outdir: Path, workers: int | None = None,
                   extended: bool = False, dataset: Dataset | None = None):
    dataset = dataset if dataset is not None else cfg.data.load(cfg.base_dir)
    cells = make_cells(cfg)
    results = execute(cells, dataset, cfg.penalty_weight, workers or cfg.workers)
    _write_meta(outdir, cfg, dataset, "compare" if extended else "run")
    rows = write_reports(outdir, results, dataset, extended=extended)
    return results, rows


def crowding_study(cfg: ExperimentConfig, outdir: Path, workers: int | None = None,
                   dataset: Dataset | None = None):
    """Run every rung of the ladder; one crowding.csv row per (rung, algorithm, seed)."""
    if not cfg.ladder:
        raise ConfigError("ladder: crowding-study needs at least one rung")
    dataset = dataset if dataset is not None else cfg.data.load(cfg.base_dir)
    _write_meta(outdir, cfg, dataset, "crowding-study")
    rows = []
    all_results = []
    for k, rung in enumerate(cfg.ladder):
        results = execute(make_cells(cfg, rung), dataset, cfg.penalty_weight,
                          workers or cfg.workers)
        write_reports(outdir / f"rung{k}", results, dataset, extended=True)
        for cr in results:
            s = cr.summary
            rows.append((k, cr.result.config.population_size, cr.result.config.generations,
                         s.label, s.seed, s.critical, s.non_critical, s.irrelevant,
                         s.avg_selected, s.distinct, s.mean_rmse, s.std_rmse, s.seconds))
        all_results.append(results)
    reports.write_csv(outdir / "crowding.csv", reports.CROWDING_HEADER, rows)
    return all_results

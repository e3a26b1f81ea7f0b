"""CSV report writers. Every file starts with the header listed here."""
from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Sequence

from .analysis import ComparisonRow, RunSummary, VariableClassification
from .genome import genome_str

COMPARISON_HEADER = ("algorithm", "mean_rmse", "std_rmse", "critical", "non_critical",
                     "avg_selected", "distinct", "seconds")
DISPERSION_HEADER = ("algorithm", "runs", "mean_rmse", "std_rmse_within", "std_rmse_across")
RUNTIMES_HEADER = ("algorithm", "seed", "seconds", "evaluations")
SUMMARY_HEADER = ("algorithm", "seed", "population_size", "generations", "evaluations",
                  "seconds", "best_F", "mean_rmse", "std_rmse", "critical", "non_critical",
                  "irrelevant", "avg_selected", "distinct", "dataset_sha256")
HISTORY_HEADER = ("step", "best_F", "mean_F", "distinct")
CLASSIFICATION_HEADER = ("index", "name", "count", "frequency", "class")
POPULATION_HEADER = ("slot", "F", "rmse", "R", "pen", "n_selected", "genome")
CROWDING_HEADER = ("rung", "population_size", "generations", "algorithm", "seed", "critical",
                   "non_critical", "irrelevant", "avg_selected", "distinct", "mean_rmse",
                   "std_rmse", "seconds")


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            if len(row) != len(header):
                raise ValueError(f"{path.name}: row has {len(row)} fields, header {len(header)}")
            w.writerow(row)
    return path


def read_csv(path, header: Sequence[str] | None = None) -> list[dict[str, str]]:
    """Parse a report; with ``header`` given, the file's header must match it exactly."""
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        if header is not None and tuple(reader.fieldnames or ()) != tuple(header):
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        return list(reader)


def write_comparison(path, rows: Sequence[ComparisonRow]) -> Path:
    return write_csv(path, COMPARISON_HEADER, [
        (r.algorithm, r.mean_rmse, r.std_rmse, r.critical, r.non_critical,
         r.avg_selected, r.distinct, r.seconds) for r in rows])


def write_dispersion(path, rows: Sequence[ComparisonRow]) -> Path:
    return write_csv(path, DISPERSION_HEADER, [
        (r.algorithm, r.runs, r.mean_rmse, r.std_rmse, r.std_rmse_across) for r in rows])


def write_runtimes(path, summaries: Sequence[RunSummary]) -> Path:
    return write_csv(path, RUNTIMES_HEADER, [
        (s.label, s.seed, s.seconds, s.evaluations) for s in summaries])


def write_variable_map(path, labels: Sequence[str], codes, names: Sequence[str]) -> Path:
    return write_csv(path, ("algorithm", *names),
                     [(label, *row) for label, row in zip(labels, codes)])


def write_summary(path, s: RunSummary, result, checksum: str) -> Path:
    cfg = result.config
    return write_csv(path, SUMMARY_HEADER, [(
        s.label, s.seed, cfg.population_size, cfg.generations, s.evaluations, s.seconds,
        s.best_F, s.mean_rmse, s.std_rmse, s.critical, s.non_critical, s.irrelevant,
        s.avg_selected, s.distinct, checksum)])


def write_history(path, history) -> Path:
    return write_csv(path, HISTORY_HEADER,
                     [(h.step, h.best_F, h.mean_F, h.distinct) for h in history])


def write_classification(path, cls: VariableClassification, names: Sequence[str]) -> Path:
    return write_csv(path, CLASSIFICATION_HEADER, [
        (i, names[i], int(cls.counts[i]), float(cls.frequency[i]), cls.classes[i])
        for i in range(len(cls.classes))])


def write_population(path, population) -> Path:
    return write_csv(path, POPULATION_HEADER, [
        (k, ind.F, ind.fitness.rmse, ind.fitness.R, ind.fitness.pen,
         ind.fitness.n_selected, genome_str(ind.genome))
        for k, ind in enumerate(population)])

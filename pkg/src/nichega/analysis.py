"""Final-population analytics: variable classes, test error, niche structure."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .genome import Individual, pairwise_hamming
from .regression import fit_pseudoinverse, predict, rmse

CRITICAL = "critical"
NON_CRITICAL = "non_critical"
IRRELEVANT = "irrelevant"
UNSELECTED = "unselected"

# thresholds in percent of the final population
CRITICAL_PCT = 95
IRRELEVANT_PCT = 5


def as_genomes(pop) -> np.ndarray:
    """Boolean genome matrix from a population, a list of individuals or an array."""
    if isinstance(pop, np.ndarray):
        return pop.astype(bool, copy=False)
    if hasattr(pop, "genomes"):
        return np.asarray(pop.genomes, dtype=bool)
    members = list(pop)
    if not members:
        return np.empty((0, 0), dtype=bool)
    return np.stack([m.genome if isinstance(m, Individual) else np.asarray(m, bool)
                     for m in members])


@dataclass(frozen=True)
class VariableClassification:
    counts: np.ndarray
    population_size: int
    classes: tuple[str, ...]
    names: tuple[str, ...] | None = None

    @property
    def frequency(self) -> np.ndarray:
        return self.counts / self.population_size

    def indices(self, cls: str) -> list[int]:
        return [i for i, c in enumerate(self.classes) if c == cls]

    @property
    def critical(self) -> list[int]:
        return self.indices(CRITICAL)

    @property
    def non_critical(self) -> list[int]:
        return self.indices(NON_CRITICAL)

    @property
    def irrelevant(self) -> list[int]:
        return self.indices(IRRELEVANT)


def classify_variables(final_pop, names: Sequence[str] | None = None) -> VariableClassification:
    """Critical when selected by at least 95% of the population, irrelevant below 5%."""
    G = as_genomes(final_pop)
    if G.shape[0] == 0:
        raise ValueError("cannot classify an empty population")
    n = G.shape[0]
    counts = G.sum(axis=0).astype(np.int64)
    # integer comparisons keep the boundaries exact
    classes = tuple(
        CRITICAL if 100 * c >= CRITICAL_PCT * n
        else IRRELEVANT if 100 * c < IRRELEVANT_PCT * n
        else NON_CRITICAL
        for c in counts
    )
    return VariableClassification(counts, n, classes, tuple(names) if names else None)


@dataclass(frozen=True)
class ErrorStats:
    mean: float
    std: float
    per_individual: np.ndarray


def error_stats(final_pop, dataset) -> ErrorStats:
    """Test-set RMSE of each member refitted on training rows; population mean and std."""
    if dataset.test.size == 0:
        raise ValueError("dataset has an empty test split")
    G = as_genomes(final_pop)
    if G.shape[0] == 0:
        raise ValueError("empty population")
    uniq, inverse = np.unique(G, axis=0, return_inverse=True)
    Xtr, ytr, Xte, yte = dataset.X_train, dataset.y_train, dataset.X_test, dataset.y_test
    errs = np.empty(uniq.shape[0])
    for k, g in enumerate(uniq):
        cols = np.flatnonzero(g)
        model = fit_pseudoinverse(Xtr[:, cols], ytr)
        errs[k] = rmse(predict(model, Xte[:, cols]), yte)
    per = errs[np.ravel(inverse)]
    return ErrorStats(float(per.mean()), float(per.std()), per)


@dataclass(frozen=True)
class NicheCensus:
    count: int
    sizes: tuple[int, ...]


def niche_census(final_pop, radius: int = 0) -> NicheCensus:
    """Single-linkage groups at Hamming distance <= ``radius`` (exact duplicates at 0)."""
    G = as_genomes(final_pop)
    if G.shape[0] == 0:
        return NicheCensus(0, ())
    if radius <= 0:
        _, sizes = np.unique(G, axis=0, return_counts=True)
    else:
        adj = csr_matrix(pairwise_hamming(G) <= radius)
        _, labels = connected_components(adj, directed=False)
        sizes = np.bincount(labels)
    sizes = tuple(sorted((int(s) for s in sizes), reverse=True))
    return NicheCensus(len(sizes), sizes)


def variable_map(classifications: Mapping[str, VariableClassification]):
    """Algorithms x variables matrix of critical / non_critical / unselected codes."""
    if not classifications:
        raise ValueError("no classifications given")
    items = list(classifications.items())
    width = len(items[0][1].classes)
    ref_names = items[0][1].names
    for label, c in items:
        if len(c.classes) != width or (c.names and ref_names and c.names != ref_names):
            raise ValueError(f"classification for {label!r} covers a different variable list")
    labels = [label for label, _ in items]
    codes = [[UNSELECTED if k == IRRELEVANT else k for k in c.classes] for _, c in items]
    return labels, codes


@dataclass(frozen=True)
class RunSummary:
    label: str
    seed: int
    mean_rmse: float
    std_rmse: float
    critical: int
    non_critical: int
    irrelevant: int
    avg_selected: float
    distinct: int
    seconds: float
    evaluations: int
    best_F: float


def summarize_run(label: str, seed: int, result, dataset) -> RunSummary:
    errs = error_stats(result.final_population, dataset)
    cls = classify_variables(result.final_population)
    G = as_genomes(result.final_population)
    return RunSummary(
        label=label, seed=seed, mean_rmse=errs.mean, std_rmse=errs.std,
        critical=len(cls.critical), non_critical=len(cls.non_critical),
        irrelevant=len(cls.irrelevant), avg_selected=float(G.sum(axis=1).mean()),
        distinct=niche_census(G).count, seconds=result.wall_clock_seconds,
        evaluations=result.evaluations, best_F=result.best.F,
    )


@dataclass(frozen=True)
class ComparisonRow:
    algorithm: str
    mean_rmse: float
    std_rmse: float
    critical: float
    non_critical: float
    avg_selected: float
    distinct: float
    seconds: float
    runs: int
    std_rmse_across: float


def comparison_row(label: str, summaries: Sequence[RunSummary]) -> ComparisonRow:
    """Average the per-seed summaries of one algorithm.

    ``std_rmse`` is the mean within-population dispersion; ``std_rmse_across``
    is the dispersion of the per-seed mean errors.
    """
    if not summaries:
        raise ValueError(f"no runs for {label!r}")

    def avg(attr):
        return float(np.mean([getattr(s, attr) for s in summaries]))

    return ComparisonRow(
        algorithm=label, mean_rmse=avg("mean_rmse"), std_rmse=avg("std_rmse"),
        critical=avg("critical"), non_critical=avg("non_critical"),
        avg_selected=avg("avg_selected"), distinct=avg("distinct"), seconds=avg("seconds"),
        runs=len(summaries),
        std_rmse_across=float(np.std([s.mean_rmse for s in summaries])),
    )

"""Genome evaluation: penalized pseudo-inverse regression error.

The objective to minimize is ``F = RMSE / R * (1 + weight * Pen)`` computed on
the training rows, where ``Pen`` sums the normalized station distance of each
selected variable. Replacement rules work with ``f_max = 1 / F``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .regression import CompressedDesign, UndefinedCorrelation, corrcoef, rmse

PENALTY_WEIGHT = 1.5
F_CEIL = 1e9
RMSE_FLOOR = 1e-9
R_MIN = 0.01


@dataclass(frozen=True)
class FitnessRecord:
    F: float
    f_max: float
    rmse: float
    R: float
    pen: float
    n_selected: int

    @classmethod
    def of(cls, F: float, rmse: float = math.nan, R: float = math.nan,
           pen: float = 0.0, n_selected: int = 0) -> "FitnessRecord":
        """Record with a given objective value, mainly for hand-built test individuals."""
        return cls(F=F, f_max=1.0 / F, rmse=rmse, R=R, pen=pen, n_selected=n_selected)


@dataclass(frozen=True)
class PenaltyTable:
    factors: np.ndarray
    weight: float = PENALTY_WEIGHT

    def __post_init__(self):
        f = np.asarray(self.factors, dtype=np.float64)
        if f.ndim != 1 or ((f < 0) | (f > 1)).any():
            raise ValueError("penalty factors must be a vector with entries in [0, 1]")
        f.setflags(write=False)
        object.__setattr__(self, "factors", f)

    @classmethod
    def from_distances(cls, distances, weight: float = PENALTY_WEIGHT) -> "PenaltyTable":
        d = np.asarray(distances, dtype=np.float64)
        if (d < 0).any():
            raise ValueError("distances must be non-negative")
        d_max = d.max() if d.size else 0.0
        factors = d / d_max if d_max > 0 else np.zeros_like(d)
        return cls(factors, weight)

    def __len__(self) -> int:
        return self.factors.shape[0]


def penalization(genome, table: PenaltyTable) -> float:
    genome = np.asarray(genome, dtype=bool)
    if genome.shape[0] != len(table):
        raise ValueError(f"genome length {genome.shape[0]} != table length {len(table)}")
    return float(table.factors[genome].sum())


def objective(rmse_value: float, R: float, pen: float, weight: float = PENALTY_WEIGHT) -> float:
    """Penalized objective with the degenerate-case guards applied."""
    if not math.isfinite(rmse_value) or not math.isfinite(R) or R <= R_MIN:
        return F_CEIL
    return max(rmse_value, RMSE_FLOOR) / R * (1.0 + weight * pen)


class FitnessEvaluator:
    """Caching evaluator bound to one dataset and penalty table.

    Cached and uncached evaluation return identical records; the cache only
    saves refits of genomes that reappear.
    """

    def __init__(self, dataset, table: PenaltyTable, cache: bool = True):
        if len(table) != dataset.n_variables:
            raise ValueError("penalty table does not match the dataset's variables")
        self.table = table
        self.design = CompressedDesign(dataset.X_train, dataset.y_train)
        self.y = dataset.y_train
        self.n_variables = dataset.n_variables
        self._cache: dict[bytes, FitnessRecord] | None = {} if cache else None
        self.evaluations = 0
        self.fits = 0

    def __call__(self, genome) -> FitnessRecord:
        genome = np.asarray(genome, dtype=bool)
        self.evaluations += 1
        if self._cache is None:
            return self._evaluate(genome)
        key = np.packbits(genome).tobytes()
        rec = self._cache.get(key)
        if rec is None:
            rec = self._cache[key] = self._evaluate(genome)
        return rec

    def evaluate_many(self, genomes: np.ndarray) -> list[FitnessRecord]:
        """Records for each row of a boolean genome matrix."""
        genomes = np.asarray(genomes, dtype=bool)
        if self._cache is None:
            return [self(g) for g in genomes]
        self.evaluations += genomes.shape[0]
        packed = np.packbits(genomes, axis=1)
        out = []
        for g, row in zip(genomes, packed):
            key = row.tobytes()
            rec = self._cache.get(key)
            if rec is None:
                rec = self._cache[key] = self._evaluate(g)
            out.append(rec)
        return out

    def _evaluate(self, genome: np.ndarray) -> FitnessRecord:
        if genome.shape[0] != self.n_variables:
            raise ValueError(f"genome length {genome.shape[0]} != {self.n_variables} variables")
        self.fits += 1
        pen = penalization(genome, self.table)
        _, yhat = self.design.fit(np.flatnonzero(genome))
        err = rmse(yhat, self.y)
        try:
            R = corrcoef(yhat, self.y)
        except UndefinedCorrelation:
            R = math.nan
        F = objective(err, R, pen, self.table.weight)
        return FitnessRecord(F=F, f_max=1.0 / F, rmse=err, R=R, pen=pen,
                             n_selected=int(genome.sum()))


def evaluate(genome, dataset, table: PenaltyTable) -> FitnessRecord:
    """One-off evaluation of a genome on the dataset's training rows."""
    return FitnessEvaluator(dataset, table, cache=False)(genome)

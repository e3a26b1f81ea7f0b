"""Niching genetic algorithms for wrapper variable selection.

Genomes select columns of a lagged design matrix; fitness is the penalized
error of a pseudo-inverse linear regression. Eight niching strategies are
available through :func:`nichega.niching.run`.
"""
from .analysis import classify_variables, error_stats, niche_census, variable_map
from .dataset import (
    Dataset,
    StationSeries,
    SyntheticSpec,
    build_lagged_dataset,
    generate_synthetic,
    load_station_csv,
)
from .fitness import FitnessEvaluator, FitnessRecord, PenaltyTable, evaluate, penalization
from .genome import Individual
from .niching import Algorithm, AlgorithmConfig, RunResult, run
from .regression import LinearModel, corrcoef, fit_pseudoinverse, predict, rmse

__version__ = "0.1.0"

__all__ = [
    "Algorithm", "AlgorithmConfig", "Dataset", "FitnessEvaluator", "FitnessRecord",
    "Individual", "LinearModel", "PenaltyTable", "RunResult", "StationSeries",
    "SyntheticSpec", "build_lagged_dataset", "classify_variables", "corrcoef",
    "error_stats", "evaluate", "fit_pseudoinverse", "generate_synthetic",
    "load_station_csv", "niche_census", "penalization", "predict", "rmse", "run",
    "variable_map",
]

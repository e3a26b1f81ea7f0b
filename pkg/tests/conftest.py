import numpy as np
import pytest

from nichega.dataset import SyntheticSpec, generate_synthetic
from nichega.fitness import FitnessRecord, PenaltyTable
from nichega.genome import Individual


def ind(bits, F=1.0):
    """Hand-built individual with objective ``F``."""
    g = np.array([c == "1" for c in bits], dtype=bool) if isinstance(bits, str) else np.asarray(bits, bool)
    return Individual(g, FitnessRecord.of(F))


def with_fmax(bits, f_max):
    return ind(bits, 1.0 / f_max)


class TableFitness:
    """Evaluator returning f_max = 1 / (1 + distance to a target genome)."""

    def __init__(self, target):
        self.target = np.array([c == "1" for c in target], dtype=bool)
        self.calls = 0

    def __call__(self, g):
        self.calls += 1
        return FitnessRecord.of(1.0 + float(np.count_nonzero(g != self.target)))


@pytest.fixture
def small_problem():
    rng = np.random.default_rng(42)
    spec = SyntheticSpec(n_samples=200, n_variables=10, true_support=(0, 3, 6),
                         noise_std=0.1, station_distances=tuple(rng.uniform(5, 50, 10)), seed=5)
    ds = generate_synthetic(spec)
    return ds, PenaltyTable.from_distances(ds.distances)

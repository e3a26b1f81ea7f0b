"""Niche-count fitness sharing on Hamming distance."""
from __future__ import annotations

import numpy as np

from ..genome import pairwise_hamming


def niche_counts(genomes: np.ndarray, radius: int) -> np.ndarray:
    """Members (self included) within Hamming distance ``radius`` of each genome.

    ``radius == 0`` switches sharing off: every count is 1, so shared and raw
    fitness coincide even when the population holds duplicates.
    """
    n = genomes.shape[0]
    if radius <= 0:
        return np.ones(n, dtype=np.int64)
    return (pairwise_hamming(genomes) <= radius).sum(axis=1)


def shared_fitness(genomes: np.ndarray, f_max: np.ndarray, radius: int) -> np.ndarray:
    """``f_max / m_i`` with ``m_i`` from :func:`niche_counts`."""
    return np.asarray(f_max, dtype=np.float64) / niche_counts(genomes, radius)

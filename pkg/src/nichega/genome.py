"""Binary genomes, seeded random streams and variation operators.

A genome is a 1-D boolean numpy array; ``True`` marks a selected variable.
Every operator takes an explicit ``numpy.random.Generator`` (PCG64) so a
run is reproducible from its seed alone.
"""
from __future__ import annotations

import zlib
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .fitness import FitnessRecord


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def derive_seed(seed: int, tag: str) -> int:
    """Stable 64-bit seed for an independent stream named ``tag``."""
    ss = np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, zlib.crc32(tag.encode())])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True, eq=False)
class Individual:
    genome: np.ndarray
    fitness: FitnessRecord

    def __post_init__(self):
        self.genome.setflags(write=False)

    @property
    def F(self) -> float:
        return self.fitness.F

    @property
    def f_max(self) -> float:
        return self.fitness.f_max

    def key(self) -> bytes:
        return genome_key(self.genome)


def genome_key(genome: np.ndarray) -> bytes:
    return np.packbits(genome).tobytes() + len(genome).to_bytes(4, "little")


def genome_str(genome: np.ndarray) -> str:
    return "".join("1" if b else "0" for b in genome)


def parse_genome(text: str) -> np.ndarray:
    return np.array([c == "1" for c in text.strip()], dtype=bool)


def _check_lengths(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"genome length mismatch: {a.shape[0]} vs {b.shape[0]}")


def random_genomes(n: int, genome_len: int, init_density: float,
                   rng: np.random.Generator) -> np.ndarray:
    return rng.random((n, genome_len)) < init_density


def init_population(n: int, genome_len: int, init_density: float,
                    rng: np.random.Generator,
                    evaluate: Callable[[np.ndarray], FitnessRecord]) -> list[Individual]:
    """``n`` evaluated individuals, each bit set independently with ``init_density``."""
    if n < 2:
        raise ValueError("population needs at least two individuals")
    genomes = random_genomes(n, genome_len, init_density, rng)
    return [Individual(g, evaluate(g)) for g in genomes]


def crossover_uniform(a: np.ndarray, b: np.ndarray,
                      rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    _check_lengths(a, b)
    swap = rng.random(a.shape[0]) < 0.5
    return np.where(swap, b, a), np.where(swap, a, b)


def crossover_single_point(a: np.ndarray, b: np.ndarray,
                           rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    _check_lengths(a, b)
    n = a.shape[0]
    if n < 2:
        return a.copy(), b.copy()
    cut = int(rng.integers(1, n))
    return (np.concatenate([a[:cut], b[cut:]]),
            np.concatenate([b[:cut], a[cut:]]))


CROSSOVERS = {
    "uniform": crossover_uniform,
    "single_point": crossover_single_point,
}


def mutate(g: np.ndarray, rate: float, rng: np.random.Generator) -> np.ndarray:
    """Flip each bit independently with probability ``rate``."""
    return g ^ (rng.random(g.shape[0]) < rate)


def hamming(a: np.ndarray, b: np.ndarray) -> int:
    _check_lengths(a, b)
    return int(np.count_nonzero(a != b))


def hamming_to_many(a: np.ndarray, genomes: np.ndarray) -> np.ndarray:
    return np.count_nonzero(genomes != a, axis=1)


def pairwise_hamming(genomes: np.ndarray) -> np.ndarray:
    """Full Hamming matrix, computed through an integer-valued matrix product."""
    G = genomes.astype(np.float64)
    ones = G.sum(axis=1)
    common = G @ G.T
    return (ones[:, None] + ones[None, :] - 2.0 * common).astype(np.int64)

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np

from ..genome import Individual


class Population:
    """Fixed-size list of individuals with a cached genome matrix and fitness arrays."""

    def __init__(self, individuals: Iterable[Individual]):
        self.individuals = list(individuals)
        if not self.individuals:
            raise ValueError("population cannot be empty")
        self.genomes = np.stack([ind.genome for ind in self.individuals])
        self.f_max = np.array([ind.f_max for ind in self.individuals])
        self.F = np.array([ind.F for ind in self.individuals])

    def __len__(self) -> int:
        return len(self.individuals)

    def __getitem__(self, i: int) -> Individual:
        return self.individuals[i]

    def __iter__(self) -> Iterator[Individual]:
        return iter(self.individuals)

    def replace(self, i: int, ind: Individual) -> None:
        self.individuals[i] = ind
        self.genomes[i] = ind.genome
        self.f_max[i] = ind.f_max
        self.F[i] = ind.F

    def copy(self) -> "Population":
        return Population(self.individuals)

    def distinct(self) -> int:
        packed = np.packbits(self.genomes, axis=1)
        return len({row.tobytes() for row in packed})

    def same_as(self, other: "Population") -> bool:
        """Bit-identical genomes and fitness values, slot by slot."""
        return (len(self) == len(other)
                and np.array_equal(self.genomes, other.genomes)
                and np.array_equal(self.F, other.F))

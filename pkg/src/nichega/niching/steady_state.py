"""Steady-state niching: restricted tournament selection, worst among most
similar and enhanced crowding, each optionally coupled with fitness sharing.

Each step builds one candidate ``A`` from two random parents and tries to
reinsert it. With ``sharing_radius > 0`` every fitness comparison inside
the step uses shared fitness against the current population.
"""
from __future__ import annotations

import numpy as np

from ..genome import CROSSOVERS, Individual, hamming_to_many, mutate
from .population import Population
from .sharing import shared_fitness


def _scores(pop: Population, extra: list[Individual], radius: int) -> np.ndarray:
    """Comparison values for the population followed by ``extra``."""
    f = np.concatenate([pop.f_max, [e.f_max for e in extra]])
    if radius <= 0:
        return f
    genomes = np.vstack([pop.genomes] + [e.genome[None, :] for e in extra])
    return shared_fitness(genomes, f, radius)


def candidate_pool(pop: Population, rng: np.random.Generator, evaluate,
                   mutation_rate: float, crossover: str = "uniform"):
    """Two random parents, their two crossover children and a mutant of the fitter child.

    Returns the parents' slots and the five candidates in that order.
    """
    i, j = (int(v) for v in rng.choice(len(pop), size=2, replace=False))
    p1, p2 = pop[i], pop[j]
    g1, g2 = CROSSOVERS[crossover](p1.genome, p2.genome, rng)
    c1 = Individual(g1, evaluate(g1))
    c2 = Individual(g2, evaluate(g2))
    fitter = c1 if c1.f_max >= c2.f_max else c2
    gm = mutate(fitter.genome, mutation_rate, rng)
    m = Individual(gm, evaluate(gm))
    return (i, j), [p1, p2, c1, c2, m]


def make_candidate_rts(pop: Population, rng: np.random.Generator, evaluate,
                       mutation_rate: float, crossover: str = "uniform",
                       sharing_radius: int = 0) -> Individual:
    """Best of the five-member candidate pool (first listed wins ties)."""
    (i, j), cands = candidate_pool(pop, rng, evaluate, mutation_rate, crossover)
    n = len(pop)
    if sharing_radius > 0:
        s = _scores(pop, cands[2:], sharing_radius)[[i, j, n, n + 1, n + 2]]
    else:
        s = np.array([c.f_max for c in cands])
    return cands[int(np.argmax(s))]


def _partition(n: int, size: int, rng: np.random.Generator) -> list[np.ndarray]:
    perm = rng.permutation(n)
    return [perm[k:k + size] for k in range(0, n, size)]


def reinsert_rts(pop: Population, A: Individual, window_n: int,
                 rng: np.random.Generator, sharing_radius: int = 0) -> int | None:
    """Compete ``A`` against the closest of ``window_n`` random members.

    Modifies ``pop`` in place; returns the slot taken by ``A`` or ``None``.
    """
    n = len(pop)
    sample = rng.choice(n, size=window_n, replace=False)
    d = hamming_to_many(A.genome, pop.genomes[sample])
    target = int(sample[int(np.argmin(d))])
    s = _scores(pop, [A], sharing_radius)
    if s[n] > s[target]:
        pop.replace(target, A)
        return target
    return None


def reinsert_wams(pop: Population, A: Individual, window_n: int,
                  rng: np.random.Generator, sharing_radius: int = 0,
                  force_replace: bool = False) -> int | None:
    """Worst among most similar: the weakest of the per-subgroup nearest members.

    ``force_replace`` restores the classic rule where ``A`` always takes that slot.
    """
    n = len(pop)
    groups = _partition(n, window_n, rng)
    d = hamming_to_many(A.genome, pop.genomes)
    similar = np.array([g[int(np.argmin(d[g]))] for g in groups])
    s = _scores(pop, [A], sharing_radius)
    target = int(similar[int(np.argmin(s[similar]))])
    if force_replace or s[n] > s[target]:
        pop.replace(target, A)
        return target
    return None


def reinsert_ec(pop: Population, A: Individual, window_n: int,
                rng: np.random.Generator, sharing_radius: int = 0) -> int | None:
    """Enhanced crowding: the nearest among the per-subgroup weakest members."""
    n = len(pop)
    groups = _partition(n, window_n, rng)
    s = _scores(pop, [A], sharing_radius)
    worst = np.array([g[int(np.argmin(s[g]))] for g in groups])
    d = hamming_to_many(A.genome, pop.genomes[worst])
    target = int(worst[int(np.argmin(d))])
    if s[n] > s[target]:
        pop.replace(target, A)
        return target
    return None

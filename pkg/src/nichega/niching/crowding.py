"""Deterministic and probabilistic crowding."""
from __future__ import annotations

from typing import Callable

import numpy as np

from ..genome import Individual, hamming
from .population import Population

SubstitutionRule = Callable[[Individual, Individual, np.random.Generator], Individual]


def pair_offspring(p1: Individual, p2: Individual, c1: Individual, c2: Individual):
    """Match each child with the closer parent, minimizing the summed Hamming distance.

    Returns ``((parent, child), (parent, child))``; ties keep ``c1`` with ``p1``.
    """
    straight = hamming(p1.genome, c1.genome) + hamming(p2.genome, c2.genome)
    crossed = hamming(p1.genome, c2.genome) + hamming(p2.genome, c1.genome)
    if straight <= crossed:
        return (p1, c1), (p2, c2)
    return (p1, c2), (p2, c1)


def substitute_dc(parent: Individual, child: Individual,
                  rng: np.random.Generator) -> Individual:
    """The fitter of the two survives; an exact tie is a fair coin flip."""
    if child.f_max > parent.f_max:
        return child
    if child.f_max < parent.f_max:
        return parent
    return child if rng.random() < 0.5 else parent


def substitute_pc(parent: Individual, child: Individual,
                  rng: np.random.Generator) -> Individual:
    """The child survives with probability ``f(c) / (f(c) + f(p))``."""
    fc, fp = child.f_max, parent.f_max
    if fc <= 0 or fp <= 0:
        raise ValueError("probabilistic crowding needs positive fitness values")
    return child if rng.random() < fc / (fc + fp) else parent


def evaluate_rows(evaluate, genomes: np.ndarray) -> list:
    many = getattr(evaluate, "evaluate_many", None)
    return many(genomes) if many else [evaluate(g) for g in genomes]


def crossed_pairing(P1: np.ndarray, P2: np.ndarray, C1: np.ndarray, C2: np.ndarray) -> np.ndarray:
    """Row-wise version of :func:`pair_offspring`: True where ``c1`` goes with ``p2``."""
    straight = np.count_nonzero(P1 != C1, axis=1) + np.count_nonzero(P2 != C2, axis=1)
    crossed = np.count_nonzero(P1 != C2, axis=1) + np.count_nonzero(P2 != C1, axis=1)
    return crossed < straight


def _recombine(P1: np.ndarray, P2: np.ndarray, crossover: str, rng: np.random.Generator):
    m, L = P1.shape
    if crossover == "uniform":
        take_other = rng.random((m, L)) < 0.5
    elif crossover == "single_point":
        cuts = rng.integers(1, L, size=m) if L > 1 else np.full(m, L)
        take_other = np.arange(L)[None, :] >= cuts[:, None]
    else:
        raise ValueError(f"unknown crossover {crossover!r}")
    return np.where(take_other, P2, P1), np.where(take_other, P1, P2)


def step_crowding(pop: Population, rule: SubstitutionRule, rng: np.random.Generator,
                  evaluate, mutation_rate: float, crossover: str = "uniform") -> Population:
    """One generation: random pairing, two children per pair, closest-parent competitions.

    Variation is drawn for all pairs at once; substitutions then run pair by
    pair in the order of the random pairing.
    """
    n = len(pop)
    if n % 2:
        raise ValueError("crowding needs an even population size")
    order = rng.permutation(n)
    first, second = order[0::2], order[1::2]
    P1, P2 = pop.genomes[first], pop.genomes[second]
    C1, C2 = _recombine(P1, P2, crossover, rng)
    C1 ^= rng.random(C1.shape) < mutation_rate
    C2 ^= rng.random(C2.shape) < mutation_rate
    crossed = crossed_pairing(P1, P2, C1, C2)
    F1, F2 = evaluate_rows(evaluate, C1), evaluate_rows(evaluate, C2)
    survivors = list(pop.individuals)
    for k in range(first.shape[0]):
        i, j = int(first[k]), int(second[k])
        c1 = Individual(C1[k], F1[k])
        c2 = Individual(C2[k], F2[k])
        ca, cb = (c2, c1) if crossed[k] else (c1, c2)
        survivors[i] = rule(pop[i], ca, rng)
        survivors[j] = rule(pop[j], cb, rng)
    return Population(survivors)

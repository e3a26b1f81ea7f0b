"""Algorithm configuration and the run loop shared by all eight methods."""
from __future__ import annotations

import dataclasses
import math
import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..fitness import FitnessEvaluator, PenaltyTable
from ..genome import CROSSOVERS, Individual, init_population, make_rng
from .crowding import step_crowding, substitute_dc, substitute_pc
from .population import Population
from .steady_state import make_candidate_rts, reinsert_ec, reinsert_rts, reinsert_wams


class ConfigError(ValueError):
    """Invalid algorithm or experiment configuration."""


class Algorithm(str, Enum):
    DC = "DC"
    PC = "PC"
    RTS = "RTS"
    WAMS = "WAMS"
    EC = "EC"
    RTSFS = "RTSFS"
    WAMSFS = "WAMSFS"
    ECFS = "ECFS"

    @property
    def is_crowding(self) -> bool:
        return self in (Algorithm.DC, Algorithm.PC)

    @property
    def uses_sharing(self) -> bool:
        return self.value.endswith("FS")

    @property
    def base(self) -> "Algorithm":
        return Algorithm(self.value[:-2]) if self.uses_sharing else self


@dataclass(frozen=True)
class AlgorithmConfig:
    """Per-algorithm run parameters.

    ``generations`` counts generations for DC/PC and single-candidate steps
    for the steady-state methods. ``None`` fields are resolved against the
    genome length by :meth:`resolved`.
    """

    algorithm: Algorithm
    population_size: int = 100
    generations: int = 200
    mutation_rate: float | None = None
    crossover_kind: str = "uniform"
    window_n: int | None = None
    sharing_radius: int | None = None
    init_density: float = 0.5
    seed: int = 0
    init_seed: int | None = None
    wams_force_replace: bool = False

    def __post_init__(self):
        try:
            object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        except ValueError:
            raise ConfigError(f"algorithm: unknown algorithm {self.algorithm!r}") from None

    def resolved(self, genome_len: int) -> "AlgorithmConfig":
        cfg = dataclasses.replace(
            self,
            mutation_rate=1.0 / genome_len if self.mutation_rate is None else self.mutation_rate,
            window_n=min(10, self.population_size) if self.window_n is None else self.window_n,
            sharing_radius=(math.ceil(genome_len / 10) if self.sharing_radius is None
                            else self.sharing_radius),
        )
        cfg.validate(genome_len)
        return cfg

    def validate(self, genome_len: int | None = None) -> None:
        if self.population_size < 2:
            raise ConfigError("population_size: must be at least 2")
        if self.generations < 0:
            raise ConfigError("generations: must be non-negative")
        if self.algorithm.is_crowding and self.population_size % 2:
            raise ConfigError("population_size: crowding needs an even population size")
        if self.mutation_rate is not None and not 0.0 <= self.mutation_rate <= 1.0:
            raise ConfigError("mutation_rate: must lie in [0, 1]")
        if self.crossover_kind not in CROSSOVERS:
            raise ConfigError(f"crossover_kind: expected one of {sorted(CROSSOVERS)}")
        if self.window_n is not None and not 1 <= self.window_n <= self.population_size:
            raise ConfigError("window_n: must be between 1 and population_size")
        if self.sharing_radius is not None:
            if self.sharing_radius < 0:
                raise ConfigError("sharing_radius: must be non-negative")
            if genome_len is not None and self.sharing_radius > genome_len:
                raise ConfigError("sharing_radius: must not exceed the genome length")
        if not 0.0 < self.init_density < 1.0:
            raise ConfigError("init_density: must lie in (0, 1)")


@dataclass(frozen=True)
class GenerationStats:
    step: int
    best_F: float
    mean_F: float
    distinct: int


@dataclass
class RunResult:
    config: AlgorithmConfig
    final_population: list[Individual]
    history: list[GenerationStats] = field(default_factory=list)
    wall_clock_seconds: float = 0.0
    evaluations: int = 0

    @property
    def genomes(self) -> np.ndarray:
        return np.stack([ind.genome for ind in self.final_population])

    @property
    def best(self) -> Individual:
        return min(self.final_population, key=lambda ind: ind.F)


def _stats(step: int, pop: Population) -> GenerationStats:
    return GenerationStats(step, float(pop.F.min()), float(pop.F.mean()), pop.distinct())


def evolve(pop: Population, cfg: AlgorithmConfig, rng: np.random.Generator, evaluate,
           history: list[GenerationStats] | None = None) -> Population:
    """Advance ``pop`` for ``cfg.generations`` generations or steps (``cfg`` resolved)."""
    alg = cfg.algorithm
    if alg.is_crowding:
        rule = substitute_dc if alg is Algorithm.DC else substitute_pc
        for gen in range(1, cfg.generations + 1):
            pop = step_crowding(pop, rule, rng, evaluate, cfg.mutation_rate, cfg.crossover_kind)
            if history is not None:
                history.append(_stats(gen, pop))
        return pop

    radius = cfg.sharing_radius if alg.uses_sharing else 0
    base = alg.base
    n = len(pop)
    for step in range(1, cfg.generations + 1):
        A = make_candidate_rts(pop, rng, evaluate, cfg.mutation_rate, cfg.crossover_kind, radius)
        if base is Algorithm.RTS:
            reinsert_rts(pop, A, cfg.window_n, rng, radius)
        elif base is Algorithm.WAMS:
            reinsert_wams(pop, A, cfg.window_n, rng, radius, cfg.wams_force_replace)
        else:
            reinsert_ec(pop, A, cfg.window_n, rng, radius)
        if history is not None and (step % n == 0 or step == cfg.generations):
            history.append(_stats(step, pop))
    return pop


def run(dataset, table: PenaltyTable, cfg: AlgorithmConfig,
        evaluator: FitnessEvaluator | None = None) -> RunResult:
    """Run one algorithm from a seeded initial population.

    The initial population is drawn from ``init_seed`` when given (so several
    algorithms can start from the same population), otherwise from the main
    stream. Identical config and data give bit-identical final populations.
    """
    cfg = cfg.resolved(dataset.n_variables)
    evaluator = evaluator or FitnessEvaluator(dataset, table)
    start_evals = evaluator.evaluations
    rng = make_rng(cfg.seed)
    init_rng = rng if cfg.init_seed is None else make_rng(cfg.init_seed)
    t0 = time.perf_counter()
    pop = Population(init_population(cfg.population_size, dataset.n_variables,
                                     cfg.init_density, init_rng, evaluator))
    history: list[GenerationStats] = []
    pop = evolve(pop, cfg, rng, evaluator, history)
    elapsed = time.perf_counter() - t0
    return RunResult(config=cfg, final_population=list(pop.individuals), history=history,
                     wall_clock_seconds=elapsed,
                     evaluations=evaluator.evaluations - start_evals)

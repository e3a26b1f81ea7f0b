from .crowding import crossed_pairing, pair_offspring, step_crowding, substitute_dc, substitute_pc
from .engine import (
    Algorithm,
    AlgorithmConfig,
    ConfigError,
    GenerationStats,
    RunResult,
    evolve,
    run,
)
from .population import Population
from .sharing import niche_counts, shared_fitness
from .steady_state import (
    candidate_pool,
    make_candidate_rts,
    reinsert_ec,
    reinsert_rts,
    reinsert_wams,
)

__all__ = [
    "Algorithm", "AlgorithmConfig", "ConfigError", "GenerationStats", "Population",
    "RunResult", "candidate_pool", "crossed_pairing", "evolve", "make_candidate_rts", "niche_counts",
    "pair_offspring", "reinsert_ec", "reinsert_rts", "reinsert_wams", "run",
    "shared_fitness", "step_crowding", "substitute_dc", "substitute_pc",
]

"""Experiment configuration: a YAML document describing data, algorithms and seeds.

Example::

    data:
      synthetic: {n_samples: 500, n_variables: 12, true_support: [0, 3, 5],
                  noise_std: 0.1, stations: [10, 40, 80], seed: 7}
    fitness: {penalty_weight: 1.5}
    defaults: {population_size: 50}
    algorithms:
      - DC
      - {algorithm: RTS, generations: 5000, window_n: 10}
    seeds: [1, 2, 3]
    output: results
    workers: 1
    ladder:                      # crowding-study only
      - {population_size: 50, generations: 100}
      - {population_size: 200, generations: 2000, steps: 40000}

``defaults`` is merged into every algorithm entry; the effective config
written next to the results has it expanded.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .dataset import (
    DEFAULT_ENDOGENOUS,
    DEFAULT_EXOGENOUS,
    DataError,
    Dataset,
    SyntheticSpec,
    block_distances,
    build_lagged_dataset,
    generate_synthetic,
    load_dataset,
    load_station_csv,
)
from .fitness import PENALTY_WEIGHT
from .niching import Algorithm, AlgorithmConfig, ConfigError

ALGORITHM_KEYS = tuple(f.name for f in dataclasses.fields(AlgorithmConfig)
                       if f.name not in ("seed", "init_seed"))

SYNTHETIC_DEFAULTS: dict[str, Any] = {
    "duplicate_groups": [], "noise_std": 0.0, "station_distances": None,
    "stations": None, "seed": 0, "train_fraction": 0.8,
}
STATIONS_DEFAULTS: dict[str, Any] = {
    "lags": 4, "exogenous": list(DEFAULT_EXOGENOUS), "endogenous": DEFAULT_ENDOGENOUS,
    "day_of_year": "window", "train_fraction": 0.8,
}


def _check_keys(section: str, given: dict, allowed) -> None:
    unknown = sorted(set(given) - set(allowed))
    if unknown:
        raise ConfigError(f"{section}: unknown field(s) {', '.join(unknown)}")


@dataclass
class DataConfig:
    kind: str
    params: dict[str, Any]

    @classmethod
    def from_dict(cls, d: dict) -> "DataConfig":
        if not isinstance(d, dict) or len(d) != 1:
            raise ConfigError("data: exactly one of synthetic, stations, matrix is required")
        (kind, params), = d.items()
        if kind == "synthetic":
            required = ("n_samples", "n_variables", "true_support")
            params = {**SYNTHETIC_DEFAULTS, **dict(params)}
            _check_keys("data.synthetic", params, [*required, *SYNTHETIC_DEFAULTS])
            missing = [k for k in required if k not in params]
            if missing:
                raise ConfigError(f"data.synthetic: missing {', '.join(missing)}")
            params["true_support"] = [int(j) for j in params["true_support"]]
            params["duplicate_groups"] = [[int(j) for j in g] for g in params["duplicate_groups"]]
        elif kind == "stations":
            required = ("directory", "target", "distances")
            params = {**STATIONS_DEFAULTS, **dict(params)}
            _check_keys("data.stations", params, [*required, *STATIONS_DEFAULTS])
            missing = [k for k in required if k not in params]
            if missing:
                raise ConfigError(f"data.stations: missing {', '.join(missing)}")
            params["distances"] = {str(k): float(v) for k, v in params["distances"].items()}
            params["exogenous"] = list(params["exogenous"])
        elif kind == "matrix":
            params = {"path": params} if isinstance(params, str) else dict(params)
            _check_keys("data.matrix", params, ["path"])
        else:
            raise ConfigError(f"data: unknown source {kind!r}")
        return cls(kind, params)

    def to_dict(self) -> dict:
        return {self.kind: dict(self.params)}

    def synthetic_spec(self) -> SyntheticSpec:
        p = self.params
        distances = p["station_distances"]
        if distances is None and p["stations"]:
            distances = block_distances(p["n_variables"], p["stations"])
        return SyntheticSpec(
            n_samples=int(p["n_samples"]), n_variables=int(p["n_variables"]),
            true_support=tuple(p["true_support"]),
            duplicate_groups=tuple(tuple(g) for g in p["duplicate_groups"]),
            noise_std=float(p["noise_std"]),
            station_distances=None if distances is None else tuple(float(x) for x in distances),
            seed=int(p["seed"]), train_fraction=float(p["train_fraction"]),
        )

    def load(self, base_dir: Path = Path(".")) -> Dataset:
        p = self.params
        if self.kind == "synthetic":
            return generate_synthetic(self.synthetic_spec())
        if self.kind == "matrix":
            return load_dataset(base_dir / p["path"])
        directory = base_dir / p["directory"]
        series = [load_station_csv(directory / f"{sid}.csv", sid, km)
                  for sid, km in p["distances"].items()]
        return build_lagged_dataset(
            series, p["target"], lags=int(p["lags"]),
            train_fraction=float(p["train_fraction"]), exogenous=p["exogenous"],
            endogenous=p["endogenous"], day_of_year=p["day_of_year"])


@dataclass
class AlgorithmEntry:
    label: str
    config: AlgorithmConfig

    def to_dict(self) -> dict:
        d = {"label": self.label}
        for k in ALGORITHM_KEYS:
            v = getattr(self.config, k)
            d[k] = v.value if isinstance(v, Algorithm) else v
        return d


@dataclass
class Rung:
    population_size: int
    generations: int
    steps: int | None = None

    def apply(self, cfg: AlgorithmConfig) -> AlgorithmConfig:
        gens = self.generations
        if not cfg.algorithm.is_crowding and self.steps is not None:
            gens = self.steps
        return dataclasses.replace(cfg, population_size=self.population_size, generations=gens)


@dataclass
class ExperimentConfig:
    data: DataConfig
    algorithms: list[AlgorithmEntry]
    seeds: list[int]
    output: str = "results"
    workers: int = 1
    penalty_weight: float = PENALTY_WEIGHT
    ladder: list[Rung] = field(default_factory=list)
    base_dir: Path = field(default=Path("."), compare=False)

    def __post_init__(self):
        if not self.algorithms:
            raise ConfigError("algorithms: at least one algorithm is required")
        if not self.seeds:
            raise ConfigError("seeds: at least one seed is required")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("seeds: seeds must be distinct")
        labels = [a.label for a in self.algorithms]
        if len(set(labels)) != len(labels):
            raise ConfigError("algorithms: labels must be unique")
        if self.workers < 1:
            raise ConfigError("workers: must be at least 1")
        for a in self.algorithms:
            a.config.validate()
            for rung in self.ladder:
                rung.apply(a.config).validate()

    @classmethod
    def from_dict(cls, d: dict, base_dir: Path = Path(".")) -> "ExperimentConfig":
        if not isinstance(d, dict):
            raise ConfigError("config must be a mapping")
        _check_keys("config", d, ["data", "fitness", "defaults", "algorithms", "seeds",
                                  "output", "workers", "ladder"])
        if "data" not in d:
            raise ConfigError("data: missing data source")
        defaults = dict(d.get("defaults") or {})
        _check_keys("defaults", defaults, ALGORITHM_KEYS)
        raw_algs = d.get("algorithms") or []
        if raw_algs == "all":
            raw_algs = [a.value for a in Algorithm]
        entries = []
        for item in raw_algs:
            item = {"algorithm": item} if isinstance(item, str) else dict(item)
            label = str(item.pop("label", item.get("algorithm")))
            _check_keys(f"algorithms[{label}]", item, ALGORITHM_KEYS)
            merged = {**defaults, **item}
            if "algorithm" not in merged:
                raise ConfigError(f"algorithms[{label}]: missing algorithm")
            entries.append(AlgorithmEntry(label, AlgorithmConfig(**merged)))
        fitness = dict(d.get("fitness") or {})
        _check_keys("fitness", fitness, ["penalty_weight"])
        ladder = []
        for r in d.get("ladder") or []:
            _check_keys("ladder", r, ["population_size", "generations", "steps"])
            try:
                ladder.append(Rung(**r))
            except TypeError as exc:
                raise ConfigError(f"ladder: {exc}") from None
        seeds = d.get("seeds", [0])
        seeds = [seeds] if isinstance(seeds, int) else [int(s) for s in seeds]
        return cls(
            data=DataConfig.from_dict(d["data"]), algorithms=entries, seeds=seeds,
            output=str(d.get("output", "results")), workers=int(d.get("workers", 1)),
            penalty_weight=float(fitness.get("penalty_weight", PENALTY_WEIGHT)),
            ladder=ladder, base_dir=base_dir,
        )

    def to_dict(self) -> dict:
        d = {
            "data": self.data.to_dict(),
            "fitness": {"penalty_weight": self.penalty_weight},
            "algorithms": [a.to_dict() for a in self.algorithms],
            "seeds": list(self.seeds),
            "output": self.output,
            "workers": self.workers,
        }
        if self.ladder:
            d["ladder"] = [dataclasses.asdict(r) for r in self.ladder]
        return d

    def dump(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)

    @classmethod
    def loads(cls, text: str, base_dir: Path = Path(".")) -> "ExperimentConfig":
        try:
            doc = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigError(f"config is not valid YAML: {exc}") from None
        try:
            return cls.from_dict(doc, base_dir)
        except (TypeError, DataError) as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        return cls.loads(text, base_dir=path.parent)

"""Station time-series ingestion, lagged design matrices and synthetic datasets."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

QUANTITIES = ("temperature", "humidity", "pressure", "cloudiness", "sunshine", "radiation")
CSV_HEADER = ("date",) + QUANTITIES

# Exogenous quantities measured at every station; with 4 stations, 4 lags and
# the day of year repeated over the window this yields 4 + 80 + 5 = 89 columns.
DEFAULT_EXOGENOUS = ("temperature", "humidity", "pressure", "cloudiness")
DEFAULT_ENDOGENOUS = "radiation"


class DataError(ValueError):
    """Malformed or inconsistent input data."""


@dataclass(frozen=True)
class StationSeries:
    """Daily series for one station, indexed by a strictly increasing date index."""

    station_id: str
    distance_km: float
    data: pd.DataFrame

    def __post_init__(self):
        if self.distance_km < 0:
            raise DataError(f"station {self.station_id!r}: negative distance")
        if not self.data.index.is_monotonic_increasing or not self.data.index.is_unique:
            raise DataError(f"station {self.station_id!r}: dates must be strictly increasing")

    @property
    def dates(self) -> pd.DatetimeIndex:
        return self.data.index


@dataclass(frozen=True)
class VariableMeta:
    station_id: str
    quantity: str
    day: int
    distance_km: float

    @property
    def name(self) -> str:
        return f"{self.station_id}.{self.quantity}.d{self.day}"


@dataclass(frozen=True)
class Dataset:
    X: np.ndarray
    y: np.ndarray
    variables: tuple[VariableMeta, ...]
    train: np.ndarray
    test: np.ndarray
    dates: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.X.ndim != 2 or self.X.shape[0] != self.y.shape[0]:
            raise DataError("X must be 2-D with one row per target value")
        if self.X.shape[1] != len(self.variables):
            raise DataError(
                f"{self.X.shape[1]} columns but {len(self.variables)} variable entries"
            )
        if np.intersect1d(self.train, self.test).size:
            raise DataError("train and test rows overlap")
        if not np.isfinite(self.X).all() or not np.isfinite(self.y).all():
            raise DataError("dataset contains missing or non-finite values")
        for arr in (self.X, self.y, self.train, self.test):
            arr.setflags(write=False)

    @property
    def n_variables(self) -> int:
        return self.X.shape[1]

    @property
    def names(self) -> list[str]:
        return [v.name for v in self.variables]

    @property
    def distances(self) -> np.ndarray:
        return np.array([v.distance_km for v in self.variables], dtype=np.float64)

    @property
    def X_train(self) -> np.ndarray:
        return self.X[self.train]

    @property
    def y_train(self) -> np.ndarray:
        return self.y[self.train]

    @property
    def X_test(self) -> np.ndarray:
        return self.X[self.test]

    @property
    def y_test(self) -> np.ndarray:
        return self.y[self.test]

    def checksum(self) -> str:
        h = hashlib.sha256()
        for arr in (self.X, self.y, self.train, self.test):
            h.update(np.ascontiguousarray(arr).tobytes())
        h.update("\n".join(self.names).encode())
        return h.hexdigest()


def load_station_csv(path, station_id: str, distance_km: float,
                     required: Sequence[str] = QUANTITIES) -> StationSeries:
    """Read one station file. Non-numeric or empty cells become NaN."""
    path = Path(path)
    try:
        raw = pd.read_csv(path, dtype=str, keep_default_na=False)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    raw.columns = [c.strip() for c in raw.columns]
    missing = [c for c in ("date", *required) if c not in raw.columns]
    if missing:
        raise DataError(f"{path}: missing required column(s) {', '.join(missing)}")
    try:
        dates = pd.to_datetime(raw["date"].str.strip(), format="%Y-%m-%d")
    except ValueError as exc:
        raise DataError(f"{path}: unparseable date: {exc}") from exc
    if dates.duplicated().any():
        dup = dates[dates.duplicated()].dt.strftime("%Y-%m-%d").iloc[0]
        raise DataError(f"{path}: duplicate dates ({dup})")
    cols = [c for c in QUANTITIES if c in raw.columns]
    frame = raw[cols].apply(lambda s: pd.to_numeric(s.str.strip(), errors="coerce"))
    frame.index = pd.DatetimeIndex(dates, name="date")
    return StationSeries(station_id, float(distance_km), frame.sort_index())


def lagged_column_count(n_stations: int, n_exogenous: int, lags: int,
                        endogenous: bool = True, day_of_year: str = "window") -> int:
    """Closed-form number of design columns produced by :func:`build_lagged_dataset`."""
    days = lags + 1
    doy = days if day_of_year == "window" else (1 if day_of_year == "once" else 0)
    return (lags if endogenous else 0) + n_stations * n_exogenous * days + doy


def build_lagged_dataset(series: Sequence[StationSeries], target_station: str,
                         lags: int = 4, train_fraction: float = 0.8,
                         exogenous: Sequence[str] = DEFAULT_EXOGENOUS,
                         endogenous: str | None = DEFAULT_ENDOGENOUS,
                         day_of_year: str = "window") -> Dataset:
    """Build the lagged design matrix for estimating ``endogenous`` at the target station.

    Day index ``lags + 1`` is the day of estimation, day 1 the oldest. Columns:
    the target's endogenous quantity for days 1..lags, every exogenous quantity
    of every station for days 1..lags+1, then day of year (``"window"``: one
    column per day, ``"once"``: a single column for the estimation day,
    ``"none"``: omitted). Windows touching a missing value are dropped.
    The split is chronological.
    """
    if lags < 0:
        raise DataError("lags must be non-negative")
    if not 0.0 < train_fraction < 1.0:
        raise DataError("train_fraction must lie in (0, 1)")
    if day_of_year not in ("window", "once", "none"):
        raise DataError(f"unknown day_of_year mode {day_of_year!r}")
    by_id = {s.station_id: s for s in series}
    if target_station not in by_id:
        raise DataError(f"target station {target_station!r} not among the series")
    target = by_id[target_station]
    if target.distance_km > min(s.distance_km for s in series):
        raise DataError("target station must have the minimum distance")
    for s in series:
        needed = list(exogenous) + ([endogenous] if endogenous and s is target else [])
        absent = [q for q in needed if q not in s.data.columns]
        if absent:
            raise DataError(f"station {s.station_id!r} lacks {', '.join(absent)}")

    start = max(s.dates.min() for s in series)
    stop = min(s.dates.max() for s in series)
    if start > stop:
        raise DataError("stations share no common date range")
    calendar = pd.date_range(start, stop, freq="D")
    days = lags + 1

    columns: list[np.ndarray] = []
    meta: list[VariableMeta] = []

    def add_lagged(values: pd.Series, s: StationSeries, quantity: str, day_range):
        aligned = values.reindex(calendar)
        for day in day_range:
            columns.append(aligned.shift(days - day).to_numpy(dtype=np.float64))
            meta.append(VariableMeta(s.station_id, quantity, day, s.distance_km))

    if endogenous:
        add_lagged(target.data[endogenous], target, endogenous, range(1, days))
    for s in series:
        for q in exogenous:
            add_lagged(s.data[q], s, q, range(1, days + 1))
    doy = pd.Series(calendar.dayofyear.astype(np.float64), index=calendar)
    doy_days = {"window": range(1, days + 1), "once": range(days, days + 1), "none": ()}
    add_lagged(doy, target, "day_of_year", doy_days[day_of_year])

    if endogenous:
        y = target.data[endogenous].reindex(calendar).to_numpy(dtype=np.float64)
    else:
        y = target.data[DEFAULT_ENDOGENOUS].reindex(calendar).to_numpy(dtype=np.float64)
    X = np.column_stack(columns) if columns else np.empty((len(calendar), 0))
    complete = np.isfinite(X).all(axis=1) & np.isfinite(y)
    # the first `lags` calendar days cannot host a full window
    complete[:lags] = False
    rows = np.flatnonzero(complete)
    if rows.size < 1:
        raise DataError("no complete sample windows in the common date range")
    X, y = X[rows], y[rows]
    n_train = int(np.floor(train_fraction * rows.size))
    idx = np.arange(rows.size)
    dates = tuple(calendar[rows].strftime("%Y-%m-%d"))
    return Dataset(X=X, y=y, variables=tuple(meta), train=idx[:n_train],
                   test=idx[n_train:], dates=dates)


@dataclass(frozen=True)
class SyntheticSpec:
    """Planted-truth linear problem used to verify the search algorithms."""

    n_samples: int
    n_variables: int
    true_support: tuple[int, ...]
    duplicate_groups: tuple[tuple[int, ...], ...] = ()
    noise_std: float = 0.0
    station_distances: tuple[float, ...] | None = None
    seed: int = 0
    train_fraction: float = 0.8

    def __post_init__(self):
        if self.n_samples < 1 or self.n_variables < 1:
            raise DataError("n_samples and n_variables must be positive")
        bad = [j for j in self.true_support if not 0 <= j < self.n_variables]
        if bad:
            raise DataError(f"true_support index out of range: {bad}")
        seen: set[int] = set()
        for group in self.duplicate_groups:
            if any(not 0 <= j < self.n_variables for j in group):
                raise DataError(f"duplicate group index out of range: {list(group)}")
            if seen & set(group):
                raise DataError("duplicate_groups must be disjoint")
            seen |= set(group)
        if self.noise_std < 0:
            raise DataError("noise_std must be non-negative")
        if self.station_distances is not None and len(self.station_distances) != self.n_variables:
            raise DataError("station_distances needs one entry per variable")
        if not 0.0 < self.train_fraction < 1.0:
            raise DataError("train_fraction must lie in (0, 1)")


def block_distances(n_variables: int, stations: Sequence[float]) -> tuple[float, ...]:
    """Assign variables to stations in contiguous, near-equal blocks."""
    k = len(stations)
    return tuple(float(stations[j * k // n_variables]) for j in range(n_variables))


def generate_synthetic(spec: SyntheticSpec) -> Dataset:
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    X = rng.standard_normal((spec.n_samples, spec.n_variables))
    for group in spec.duplicate_groups:
        group = sorted(group)
        X[:, group[1:]] = X[:, [group[0]]]
    support = np.array(sorted(spec.true_support), dtype=np.intp)
    magnitude = rng.uniform(1.0, 2.0, size=support.size)
    sign = np.where(rng.random(support.size) < 0.5, -1.0, 1.0)
    beta = magnitude * sign
    noise = rng.standard_normal(spec.n_samples) * spec.noise_std
    y = X[:, support] @ beta + noise
    distances = spec.station_distances or (1.0,) * spec.n_variables
    meta = tuple(VariableMeta("synthetic", f"x{j}", 1, float(distances[j]))
                 for j in range(spec.n_variables))
    n_train = int(np.floor(spec.train_fraction * spec.n_samples))
    idx = np.arange(spec.n_samples)
    return Dataset(X=X, y=y, variables=meta, train=idx[:n_train], test=idx[n_train:])


def save_dataset(dataset: Dataset, directory) -> None:
    """Write ``matrix.csv`` (features, target, split) and ``variables.csv``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(dataset.X, columns=dataset.names)
    frame["y"] = dataset.y
    split = np.full(dataset.y.shape[0], "", dtype=object)
    split[dataset.train] = "train"
    split[dataset.test] = "test"
    frame["split"] = split
    frame.to_csv(directory / "matrix.csv", index=False, float_format="%.17g")
    pd.DataFrame(
        [(v.name, v.station_id, v.quantity, v.day, v.distance_km) for v in dataset.variables],
        columns=["name", "station_id", "quantity", "day", "distance_km"],
    ).to_csv(directory / "variables.csv", index=False, float_format="%.17g")


def load_dataset(directory) -> Dataset:
    directory = Path(directory)
    try:
        frame = pd.read_csv(directory / "matrix.csv", float_precision="round_trip")
        variables = pd.read_csv(directory / "variables.csv", float_precision="round_trip")
    except (OSError, pd.errors.ParserError) as exc:
        raise DataError(f"cannot read dataset in {directory}: {exc}") from exc
    names = list(variables["name"])
    missing = [c for c in names + ["y", "split"] if c not in frame.columns]
    if missing:
        raise DataError(f"matrix.csv lacks columns {missing[:3]}")
    meta = tuple(VariableMeta(str(r.station_id), str(r.quantity), int(r.day), float(r.distance_km))
                 for r in variables.itertuples(index=False))
    split = frame["split"].to_numpy()
    return Dataset(
        X=frame[names].to_numpy(dtype=np.float64),
        y=frame["y"].to_numpy(dtype=np.float64),
        variables=meta,
        train=np.flatnonzero(split == "train"),
        test=np.flatnonzero(split == "test"),
    )

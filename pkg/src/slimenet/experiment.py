"""Batch exploration: LHS design x replications x three generators."""
from __future__ import annotations

import csv
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable

from . import rng as rngmod
from .generators import (
    DEFAULT_GRID,
    LhsPoint,
    complete_network,
    lhs_sample,
    sample_centers,
    slime_network,
    tree_network,
)
from .graph import NetworkError, fmt
from .metrics import pareto_mask, relative_length, relative_performance
from .physarum import PhysarumParams, SingularNetworkError

log = logging.getLogger(__name__)

GENERATORS = ("complete", "slime", "tree")
CSV_HEADER = [
    "lhs_index", "rep_index", "seed", "N", "gamma", "generator",
    "length_rel", "perf_rel", "valid", "iterations", "wall_time_ms",
]


class RecordFormatError(ValueError):
    """Malformed experiment CSV."""


@dataclass
class ExperimentConfig:
    n_lhs: int = 100
    n_reps: int = 100
    N_range: tuple[int, int] = (2, 6)
    gamma_range: tuple[float, float] = (0.5, 2.5)
    grid_dims: tuple[int, int] = DEFAULT_GRID
    params: PhysarumParams = field(default_factory=PhysarumParams)
    seed: int = 0
    out: Path | None = None
    workers: int = 1
    # wall clock in the CSV makes output run-dependent
    timings: bool = False

    def __post_init__(self) -> None:
        if self.n_lhs < 1 or self.n_reps < 1 or self.workers < 1:
            raise ValueError("n_lhs, n_reps and workers must all be >= 1")
        if self.N_range[0] < 2 or self.N_range[1] < self.N_range[0]:
            raise ValueError(f"bad N range {self.N_range}")
        if not self.gamma_range[0] <= self.gamma_range[1] or self.gamma_range[0] <= 0:
            raise ValueError(f"bad gamma range {self.gamma_range}")


@dataclass
class RunRecord:
    lhs_index: int
    rep_index: int
    seed: int
    N: int
    gamma: float
    generator: str
    length_rel: float
    perf_rel: float
    valid: bool
    iterations: int = 0
    wall_time_ms: float = 0.0
    error: str = ""

    def row(self) -> list[str]:
        return [
            str(self.lhs_index), str(self.rep_index), str(self.seed), str(self.N),
            fmt(self.gamma), self.generator, fmt(self.length_rel), fmt(self.perf_rel),
            "true" if self.valid else "false", str(self.iterations), fmt(self.wall_time_ms),
        ]


def run_seed(root_seed: int, lhs_index: int, rep_index: int) -> int:
    return rngmod.derive_seed(root_seed, lhs_index, rep_index)


def replicate(
    lhs_index: int,
    rep_index: int,
    point: LhsPoint,
    config: ExperimentConfig,
) -> list[RunRecord]:
    """All three generators on one shared center draw."""
    seed = run_seed(config.seed, lhs_index, rep_index)
    scenario = sample_centers(point.N, seed, grid_dims=config.grid_dims)
    params = replace(config.params, gamma=point.gamma)
    records = []
    for name in GENERATORS:
        t0 = time.perf_counter()
        iterations, error = 0, ""
        try:
            if name == "slime":
                res = slime_network(scenario, params, config.grid_dims)
                net, iterations = res.network, res.iterations
            elif name == "complete":
                net = complete_network(scenario)
            else:
                net = tree_network(scenario)
            length = relative_length(net)
            perf = relative_performance(net)
            if math.isnan(perf):
                error = "disconnected"
        except (SingularNetworkError, NetworkError) as exc:
            length = perf = math.nan
            error = f"{type(exc).__name__}: {exc}"
        elapsed = (time.perf_counter() - t0) * 1000 if config.timings else 0.0
        if error:
            log.warning("run %d/%d %s invalid: %s", lhs_index, rep_index, name, error)
        records.append(RunRecord(
            lhs_index, rep_index, seed, point.N, point.gamma, name,
            length, perf, not error, iterations, elapsed, error,
        ))
    return records


def _replicate_task(args) -> list[RunRecord]:
    return replicate(*args)


def run_experiment(config: ExperimentConfig) -> list[RunRecord]:
    """Run the whole design; records come back sorted by (lhs, rep, generator).

    Output is independent of ``config.workers``: each replicate derives its
    own seed and results are reassembled in index order.
    """
    design = lhs_sample(config.n_lhs, config.N_range, config.gamma_range, config.seed)
    return run_design(design, config)


def run_design(design: list[LhsPoint], config: ExperimentConfig) -> list[RunRecord]:
    """Run ``config.n_reps`` replicates of every design point."""
    tasks = [
        (i, r, point, config)
        for i, point in enumerate(design)
        for r in range(config.n_reps)
    ]
    if config.workers == 1:
        batches: Iterable[list[RunRecord]] = map(_replicate_task, tasks)
        records = [rec for batch in batches for rec in batch]
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            chunk = max(1, len(tasks) // (4 * config.workers))
            records = [rec for batch in pool.map(_replicate_task, tasks, chunksize=chunk)
                       for rec in batch]
    records.sort(key=lambda r: (r.lhs_index, r.rep_index, r.generator))
    if config.out is not None:
        write_records(records, config.out)
    return records


def write_records(records: Iterable[RunRecord], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for rec in records:
            w.writerow(rec.row())


def _parse_bool(raw: str) -> bool:
    if raw in ("true", "True", "1"):
        return True
    if raw in ("false", "False", "0"):
        return False
    raise ValueError(f"bad boolean {raw!r}")


def read_records(path: str | Path) -> list[RunRecord]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise RecordFormatError(f"{path}:1: unexpected header {header}")
        out = []
        for row in reader:
            where = f"{path}:{reader.line_num}"
            if len(row) != len(CSV_HEADER):
                raise RecordFormatError(f"{where}: expected {len(CSV_HEADER)} fields, got {len(row)}")
            try:
                out.append(RunRecord(
                    int(row[0]), int(row[1]), int(row[2]), int(row[3]), float(row[4]), row[5],
                    float(row[6]), float(row[7]), _parse_bool(row[8]), int(row[9]), float(row[10]),
                ))
            except ValueError as exc:
                raise RecordFormatError(f"{where}: {exc}") from None
            if row[5] not in GENERATORS:
                raise RecordFormatError(f"{where}: unknown generator {row[5]!r}")
    return out


def front(records: list[RunRecord]) -> list[RunRecord]:
    valid = [r for r in records if r.valid]
    mask = pareto_mask([r.length_rel for r in valid], [r.perf_rel for r in valid])
    return [r for r, m in zip(valid, mask) if m]


def extract_pareto(csv_path: str | Path, out_path: str | Path | None = None) -> list[RunRecord]:
    """Non-dominated valid records of an experiment CSV, in file order."""
    result = front(read_records(csv_path))
    if not result:
        log.warning("%s holds no valid records; the front is empty", csv_path)
    if out_path is not None:
        write_records(result, out_path)
    return result


def summary(records: list[RunRecord]) -> dict:
    out: dict = {}
    for name in GENERATORS:
        sub = [r for r in records if r.generator == name]
        valid = [r for r in sub if r.valid]
        out[name] = {
            "runs": len(sub),
            "valid": len(valid),
            "mean_length_rel": math.fsum(r.length_rel for r in valid) / len(valid) if valid else math.nan,
            "mean_perf_rel": math.fsum(r.perf_rel for r in valid) / len(valid) if valid else math.nan,
        }
    return out


"""Benchmark runner: generate or load ground-truth DAGs, design
intervention sets with the named algorithms, and score discovered-edge
ratios into CSV rows plus aggregate reports.

CSV schema: ``instance_id,seed,n,k,algorithm,estimator,N,ratio,runtime_ms``.
Runtimes feed scaling smoke checks only and are zeroed under
``timing=False`` so that identical spec + seed gives byte-identical
output.
"""

from __future__ import annotations

import csv
import io
import math
import random
import statistics
import time
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

from .designer import (
    DesignResult,
    baseline_maxdeg,
    baseline_random,
    brute_force_design,
    greedy_design,
    lazy_greedy_design,
)
from .errors import InputValidationError
from .essential import essential_of
from .estimators import EstimatorConfig
from .fileio import parse_graph
from .generate import GeneratorConfig, discovered_edge_ratio, random_chordal_dag
from .graph import PDAG

ALGORITHMS = ("greedy", "lazy", "rand", "maxdeg", "brute")

CSV_HEADER = ["instance_id", "seed", "n", "k", "algorithm", "estimator", "N", "ratio", "runtime_ms"]


@dataclass(frozen=True)
class BenchSpec:
    algorithms: Sequence[str]
    budgets: Sequence[int]
    seed: int = 0
    # generator corpus
    n: Optional[int] = None
    density: float = 1.5
    count: int = 0
    # or explicit graph files
    graph_files: Sequence[str] = ()
    # estimator settings for greedy/lazy
    estimator: str = "unbiased"
    samples: Optional[int] = None
    epsilon: float = 0.2
    delta: float = 0.1
    timing: bool = True

    def __post_init__(self):
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise InputValidationError(f"unknown algorithm {a!r}")
        if not self.budgets or any(k < 0 for k in self.budgets):
            raise InputValidationError("budgets must be nonnegative")
        if not self.graph_files and (self.n is None or self.count <= 0):
            raise InputValidationError("spec needs either graph_files or generator n/count")

    @classmethod
    def from_toml(cls, path: Union[str, Path]) -> "BenchSpec":
        with open(path, "rb") as f:
            raw = tomllib.load(f)
        gen = raw.get("generator", {})
        design = raw.get("design", {})
        return cls(
            algorithms=design.get("algorithms", ["greedy"]),
            budgets=design.get("budgets", [1]),
            seed=raw.get("seed", 0),
            n=gen.get("n"),
            density=gen.get("density", 1.5),
            count=gen.get("count", 0),
            graph_files=raw.get("corpus", {}).get("files", ()),
            estimator=design.get("estimator", "unbiased"),
            samples=design.get("samples"),
            epsilon=design.get("epsilon", 0.2),
            delta=design.get("delta", 0.1),
            timing=raw.get("timing", True),
        )


@dataclass
class EvalReport:
    algorithm: str
    budget: int
    ratios: list[float] = field(default_factory=list)
    density: float = 0.0  # achieved mean edges / C(n, 2)

    @property
    def count(self) -> int:
        return len(self.ratios)

    @property
    def mean(self) -> float:
        return sum(self.ratios) / len(self.ratios)

    @property
    def std(self) -> float:
        return statistics.stdev(self.ratios) if len(self.ratios) > 1 else 0.0


def derive_seed(master: int, *parts: int) -> int:
    h = master & 0xFFFFFFFFFFFFFFFF
    for p in parts:
        h = (h * 0x100000001B3 ^ (p + 0x9E3779B9)) & 0xFFFFFFFFFFFFFFFF
    return h


def _design(
    algorithm: str, ess: PDAG, k: int, cfg: EstimatorConfig, rng: random.Random
) -> DesignResult:
    if algorithm == "greedy":
        return greedy_design(ess, k, cfg)
    if algorithm == "lazy":
        return lazy_greedy_design(ess, k, cfg)
    if algorithm == "rand":
        return baseline_random(ess, k, rng)
    if algorithm == "maxdeg":
        return baseline_maxdeg(ess, k)
    return brute_force_design(ess, k)


def run_benchmark(
    spec: BenchSpec, out_csv: Optional[Union[str, Path]] = None
) -> tuple[list[EvalReport], str]:
    """Run the benchmark; returns aggregate reports and the CSV text.

    Instances are scored independently with seeds derived from
    (master seed, instance index), so the output is independent of
    execution order.  On error the partial CSV is flushed with a marker
    row before the error propagates.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)

    instances: list[tuple[int, int, PDAG]] = []  # (instance_id, seed, dag)
    if spec.graph_files:
        for i, path in enumerate(spec.graph_files):
            instances.append((i, derive_seed(spec.seed, i), parse_graph(path)))
    else:
        for i in range(spec.count):
            s = derive_seed(spec.seed, i)
            dag = random_chordal_dag(GeneratorConfig(n=spec.n, density_factor=spec.density, seed=s))
            instances.append((i, s, dag))

    reports: dict[tuple[str, int], EvalReport] = {
        (a, k): EvalReport(algorithm=a, budget=k) for a in spec.algorithms for k in spec.budgets
    }
    total_edges = 0

    def flush(error_row: Optional[list] = None) -> str:
        if error_row:
            writer.writerow(error_row)
        text = buf.getvalue()
        if out_csv is not None:
            Path(out_csv).write_text(text)
        return text

    for inst_id, inst_seed, dag in instances:
        try:
            ess = essential_of(dag)
            total_edges += dag.num_directed()
            for ai, algorithm in enumerate(spec.algorithms):
                for k in spec.budgets:
                    run_seed = derive_seed(inst_seed, ai, k)
                    cfg = EstimatorConfig(
                        kind=spec.estimator,
                        sample_count=spec.samples,
                        epsilon=spec.epsilon,
                        delta=spec.delta,
                        master_seed=run_seed,
                    )
                    rng = random.Random(run_seed)
                    t0 = time.perf_counter()
                    result = _design(algorithm, ess, k, cfg, rng)
                    runtime_ms = int((time.perf_counter() - t0) * 1000) if spec.timing else 0
                    if k == 0 or ess.num_undirected() == 0:
                        ratio = 0.0
                    else:
                        ratio = discovered_edge_ratio(dag, ess, result.targets)
                    reports[(algorithm, k)].ratios.append(ratio)
                    n_field = result.objective_estimate.sample_count if result.objective_estimate else 0
                    writer.writerow(
                        [inst_id, inst_seed, dag.n, k, algorithm,
                         spec.estimator if algorithm in ("greedy", "lazy") else "",
                         n_field, f"{ratio:.6f}", runtime_ms]
                    )
        except Exception:
            flush([inst_id, inst_seed, dag.n, "", "error", "", "", "ERROR", ""])
            raise

    if instances:
        n_mean = statistics.mean(d.n for _, _, d in instances)
        denom = math.comb(round(n_mean), 2) or 1
        density = (total_edges / len(instances)) / denom
        for rep in reports.values():
            rep.density = density

    text = flush()
    ordered = [reports[(a, k)] for a in spec.algorithms for k in spec.budgets]
    return ordered, text

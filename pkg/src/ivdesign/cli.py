"""Command-line workbench.

Thin client over the core package; every subcommand reads and writes
files or stdout, nothing is held between invocations.  Exit codes:
0 success, 1 usage error, 2 input validation failure, 3 resource cap
exceeded.
"""

from __future__ import annotations

import json
import random
import sys
from pathlib import Path
from typing import Optional

import click

from .bench import BenchSpec, run_benchmark
from .designer import (
    baseline_maxdeg,
    baseline_random,
    brute_force_design,
    greedy_design,
    lazy_greedy_design,
)
from .errors import CapExceededError, InputValidationError
from .essential import essential_of, validate_essential
from .estimators import EstimatorConfig
from .fileio import ingest_dream3, parse_graph, write_graph
from .generate import GeneratorConfig, discovered_edge_ratio, random_chordal_dag
from .graph import PDAG
from .mec import class_size, counting_session, sample_member
from .meek import discovered_count

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_CAP = 3


@click.group()
def cli():
    """Intervention design workbench."""


def _load_instance(path: str) -> tuple[PDAG, Optional[PDAG]]:
    """Load a graph file as (essential graph, ground truth or None)."""
    g = parse_graph(path)
    if g.num_undirected() == 0 and g.is_acyclic():
        return essential_of(g), g
    validate_essential(g, raise_on_invalid=True)
    return g, None


def _emit(payload: dict, out: Optional[str]) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


@cli.command()
@click.option("--n", type=int, required=True)
@click.option("--count", type=int, default=1, show_default=True)
@click.option("--density", type=float, default=1.5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
def gen(n: int, count: int, density: float, seed: int, out_dir: str):
    """Generate connected chordal ground-truth DAGs as graph files."""
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    for i in range(count):
        dag = random_chordal_dag(GeneratorConfig(n=n, density_factor=density, seed=seed + i))
        write_graph(dag, directory / f"instance_{i:04d}.graph")
    click.echo(f"wrote {count} graphs to {directory}")


@cli.command()
@click.option("--graph", "graph_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--k", type=int, required=True)
@click.option(
    "--algorithm",
    type=click.Choice(["greedy", "lazy", "rand", "maxdeg", "brute"]),
    default="greedy",
    show_default=True,
)
@click.option(
    "--estimator",
    type=click.Choice(["exact", "unbiased", "fast"]),
    default="unbiased",
    show_default=True,
)
@click.option("--samples", type=int, default=None, help="Fixed sample count N.")
@click.option("--epsilon", type=float, default=0.2, show_default=True)
@click.option("--delta", type=float, default=0.1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--resample-per-eval", is_flag=True, default=False)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def design(
    graph_path: str,
    k: int,
    algorithm: str,
    estimator: str,
    samples: Optional[int],
    epsilon: float,
    delta: float,
    seed: int,
    resample_per_eval: bool,
    out: Optional[str],
):
    """Select an intervention set of size k for a graph file.

    The file may hold a ground-truth DAG (its essential graph is
    computed and a discovered-edge ratio reported) or an essential
    graph directly.
    """
    ess, g_star = _load_instance(graph_path)
    cfg = EstimatorConfig(
        kind=estimator, sample_count=samples, epsilon=epsilon, delta=delta, master_seed=seed
    )
    if algorithm == "greedy":
        result = greedy_design(ess, k, cfg, resample_per_eval=resample_per_eval)
    elif algorithm == "lazy":
        result = lazy_greedy_design(ess, k, cfg, resample_per_eval=resample_per_eval)
    elif algorithm == "rand":
        result = baseline_random(ess, k, random.Random(seed))
    elif algorithm == "maxdeg":
        result = baseline_maxdeg(ess, k)
    else:
        result = brute_force_design(ess, k)

    report = {
        "targets": list(result.targets),
        "round_gains": [[v, g] for v, g in result.round_gains],
        "objective": None,
        "evaluations_performed": result.evaluations_performed,
        "algorithm": result.algorithm,
        "config": {
            "estimator": estimator,
            "samples": samples,
            "epsilon": epsilon,
            "delta": delta,
            "seed": seed,
            "resample_per_eval": resample_per_eval,
            "k": k,
            "graph": graph_path,
        },
    }
    est = result.objective_estimate
    if est is not None:
        report["objective"] = {
            "value": est.value,
            "stderr": est.standard_error,
            "samples": est.sample_count,
        }
    if g_star is not None and ess.num_undirected() > 0:
        report["ratio"] = discovered_edge_ratio(g_star, ess, result.targets)
    _emit(report, out)


@cli.command("eval")
@click.option("--graph", "graph_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--targets", "targets_s", type=str, required=True, help="Comma-separated vertex ids.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def eval_cmd(graph_path: str, targets_s: str, out: Optional[str]):
    """Score an intervention set against a ground-truth DAG."""
    dag = parse_graph(graph_path)
    if not dag.is_dag():
        raise InputValidationError("eval requires a fully directed acyclic ground truth")
    try:
        targets = [int(t) for t in targets_s.split(",") if t.strip() != ""]
    except ValueError:
        raise InputValidationError(f"bad target list {targets_s!r}") from None
    ess = essential_of(dag)
    disc = discovered_count(targets, dag, ess)
    total = ess.num_undirected()
    _emit(
        {
            "targets": targets,
            "discovered": disc,
            "undirected_total": total,
            "ratio": (disc / total) if total else None,
        },
        out,
    )


@cli.group()
def mec():
    """Markov equivalence class queries."""


@mec.command("count")
@click.option("--graph", "graph_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--seed", type=int, default=0, show_default=True)
def mec_count(graph_path: str, seed: int):
    ess, _ = _load_instance(graph_path)
    click.echo(str(class_size(ess, validate=False)))


@mec.command("sample")
@click.option("--graph", "graph_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--draws", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def mec_sample(graph_path: str, draws: int, seed: int):
    """Print uniformly sampled class members as JSON edge lists."""
    if draws < 1:
        raise InputValidationError("draws must be >= 1")
    ess, _ = _load_instance(graph_path)
    session = counting_session(ess)
    rng = random.Random(seed)
    members = []
    for _ in range(draws):
        dag = sample_member(ess, rng, validate=False, session=session).dag
        members.append({"directed": [[u, v] for u, v in dag.directed_edges()]})
    click.echo(json.dumps({"n": ess.n, "members": members}, indent=2))


@cli.command()
@click.option("--spec", "spec_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def bench(spec_path: str, out: str):
    """Run a TOML benchmark spec, writing CSV rows and a summary."""
    spec = BenchSpec.from_toml(spec_path)
    reports, _ = run_benchmark(spec, out_csv=out)
    for rep in reports:
        click.echo(
            f"{rep.algorithm:8s} k={rep.budget}  mean_ratio={rep.mean:.4f}  "
            f"std={rep.std:.4f}  instances={rep.count}  density={rep.density:.3f}"
        )


@cli.command("ingest-dream3")
@click.option("--in", "in_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def ingest_dream3_cmd(in_path: str, out: str):
    """Convert a gold-standard TSV into the native graph format."""
    g = ingest_dream3(in_path)
    write_graph(g, out)
    click.echo(f"wrote {g.n} genes, {g.num_directed()} edges to {out}")


@cli.command()
@click.option("--host", type=str, default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host: str, port: int):
    """Start the HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


def main(argv: Optional[list[str]] = None) -> int:
    try:
        rc = cli.main(args=argv, standalone_mode=False)
        return rc if isinstance(rc, int) else EXIT_OK
    except click.UsageError as e:
        e.show(file=sys.stderr)
        return EXIT_USAGE
    except click.ClickException as e:
        e.show(file=sys.stderr)
        return EXIT_USAGE
    except click.exceptions.Abort:
        return EXIT_USAGE
    except CapExceededError as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_CAP
    except InputValidationError as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

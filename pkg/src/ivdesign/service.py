"""HTTP front end wrapping the core package.

Graphs travel as JSON edge lists; every endpoint is stateless, so the
service can serve many clients concurrently (the core operates on
immutable graphs).  Run with ``ivdesign serve`` or
``uvicorn ivdesign.service:app``.
"""

from __future__ import annotations

import random
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .designer import (
    baseline_maxdeg,
    baseline_random,
    brute_force_design,
    greedy_design,
    lazy_greedy_design,
)
from .errors import CapExceededError, InputValidationError, IvDesignError
from .essential import essential_of, validate_essential
from .estimators import EstimatorConfig, estimate
from .fileio import loads_graph, dumps_graph
from .generate import GeneratorConfig, discovered_edge_ratio, random_chordal_dag
from .graph import PDAG
from .mec import class_size, sample_member, counting_session
from .meek import discovered_count

app = FastAPI(title="ivdesign", version="0.1.0")


# -- wire models --------------------------------------------------------


class GraphModel(BaseModel):
    n: int
    names: Optional[list[str]] = None
    directed: list[tuple[int, int]] = Field(default_factory=list)
    undirected: list[tuple[int, int]] = Field(default_factory=list)

    def to_pdag(self) -> PDAG:
        return PDAG.from_edges(
            self.n, directed=self.directed, undirected=self.undirected, names=self.names
        )

    @classmethod
    def from_pdag(cls, g: PDAG) -> "GraphModel":
        return cls(
            n=g.n,
            names=g.names,
            directed=list(g.directed_edges()),
            undirected=list(g.undirected_edges()),
        )


class EstimatorModel(BaseModel):
    kind: str = "unbiased"
    samples: Optional[int] = None
    epsilon: float = 0.2
    delta: float = 0.1
    fast_restart_cap: int = 50

    def to_config(self, seed: int) -> EstimatorConfig:
        return EstimatorConfig(
            kind=self.kind,
            sample_count=self.samples,
            epsilon=self.epsilon,
            delta=self.delta,
            master_seed=seed,
            fast_restart_cap=self.fast_restart_cap,
        )


class EstimateModel(BaseModel):
    value: float
    sample_count: int
    standard_error: float


class DesignRequest(BaseModel):
    graph: GraphModel
    k: int
    algorithm: str = "greedy"
    estimator: EstimatorModel = Field(default_factory=EstimatorModel)
    seed: int = 0
    resample_per_eval: bool = False


class DesignResponse(BaseModel):
    targets: list[int]
    round_gains: list[tuple[int, float]]
    objective: Optional[EstimateModel]
    evaluations_performed: int
    algorithm: str
    estimator: EstimatorModel
    seed: int
    ratio: Optional[float] = None  # only when the input was a ground-truth DAG


class EvaluateRequest(BaseModel):
    graph: GraphModel  # ground-truth DAG
    targets: list[int]


class EvaluateResponse(BaseModel):
    discovered: int
    undirected_total: int
    ratio: Optional[float]


class CountResponse(BaseModel):
    class_size: str  # decimal string: counts overflow JSON numbers


class SampleRequest(BaseModel):
    graph: GraphModel
    draws: int = 1
    seed: int = 0


class SampleResponse(BaseModel):
    members: list[GraphModel]


class GenerateRequest(BaseModel):
    n: int
    count: int = 1
    density: float = 1.5
    seed: int = 0


class GenerateResponse(BaseModel):
    graphs: list[GraphModel]


class IngestRequest(BaseModel):
    text: str  # TSV gold-standard content


class ValidateResponse(BaseModel):
    valid: bool
    detail: Optional[str] = None


class EstimateRequest(BaseModel):
    graph: GraphModel  # essential graph
    targets: list[int]
    estimator: EstimatorModel = Field(default_factory=EstimatorModel)
    seed: int = 0


# -- error mapping ------------------------------------------------------


@app.exception_handler(IvDesignError)
async def _ivdesign_error(_request: Request, exc: IvDesignError):
    if isinstance(exc, CapExceededError):
        status = 413
    elif isinstance(exc, InputValidationError):
        status = 422
    else:
        status = 400
    return JSONResponse(status_code=status, content={"detail": str(exc)})


# -- helpers ------------------------------------------------------------


def _as_essential(g: PDAG) -> tuple[PDAG, Optional[PDAG]]:
    """Accept either a ground-truth DAG (returning its essential graph
    and itself) or an already-essential graph."""
    if g.num_undirected() == 0 and g.is_acyclic():
        return essential_of(g), g
    validate_essential(g, raise_on_invalid=True)
    return g, None


# -- endpoints ----------------------------------------------------------


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/essential", response_model=GraphModel)
def essential(graph: GraphModel):
    return GraphModel.from_pdag(essential_of(graph.to_pdag()))


@app.post("/validate", response_model=ValidateResponse)
def validate(graph: GraphModel):
    try:
        validate_essential(graph.to_pdag(), raise_on_invalid=True)
    except InputValidationError as e:
        return ValidateResponse(valid=False, detail=str(e))
    return ValidateResponse(valid=True)


@app.post("/mec/count", response_model=CountResponse)
def mec_count(graph: GraphModel):
    ess, _ = _as_essential(graph.to_pdag())
    return CountResponse(class_size=str(class_size(ess, validate=False)))


@app.post("/mec/sample", response_model=SampleResponse)
def mec_sample(req: SampleRequest):
    if not (1 <= req.draws <= 10_000):
        raise InputValidationError("draws must be in [1, 10000]")
    ess, _ = _as_essential(req.graph.to_pdag())
    session = counting_session(ess)
    rng = random.Random(req.seed)
    members = [
        GraphModel.from_pdag(sample_member(ess, rng, validate=False, session=session).dag)
        for _ in range(req.draws)
    ]
    return SampleResponse(members=members)


@app.post("/estimate", response_model=EstimateModel)
def estimate_objective(req: EstimateRequest):
    ess, _ = _as_essential(req.graph.to_pdag())
    est = estimate(ess, req.targets, req.estimator.to_config(req.seed))
    return EstimateModel(
        value=est.value, sample_count=est.sample_count, standard_error=est.standard_error
    )


@app.post("/design", response_model=DesignResponse)
def design(req: DesignRequest):
    ess, g_star = _as_essential(req.graph.to_pdag())
    cfg = req.estimator.to_config(req.seed)
    if req.algorithm == "greedy":
        result = greedy_design(ess, req.k, cfg, resample_per_eval=req.resample_per_eval)
    elif req.algorithm == "lazy":
        result = lazy_greedy_design(ess, req.k, cfg, resample_per_eval=req.resample_per_eval)
    elif req.algorithm == "rand":
        result = baseline_random(ess, req.k, random.Random(req.seed))
    elif req.algorithm == "maxdeg":
        result = baseline_maxdeg(ess, req.k)
    elif req.algorithm == "brute":
        result = brute_force_design(ess, req.k)
    else:
        raise InputValidationError(f"unknown algorithm {req.algorithm!r}")
    ratio = None
    if g_star is not None and ess.num_undirected() > 0:
        ratio = discovered_edge_ratio(g_star, ess, result.targets)
    obj = result.objective_estimate
    return DesignResponse(
        targets=list(result.targets),
        round_gains=result.round_gains,
        objective=EstimateModel(
            value=obj.value, sample_count=obj.sample_count, standard_error=obj.standard_error
        )
        if obj
        else None,
        evaluations_performed=result.evaluations_performed,
        algorithm=result.algorithm,
        estimator=req.estimator,
        seed=req.seed,
        ratio=ratio,
    )


@app.post("/evaluate", response_model=EvaluateResponse)
def evaluate(req: EvaluateRequest):
    dag = req.graph.to_pdag()
    if not dag.is_dag():
        raise InputValidationError("evaluation requires a ground-truth DAG")
    ess = essential_of(dag)
    disc = discovered_count(req.targets, dag, ess)
    total = ess.num_undirected()
    return EvaluateResponse(
        discovered=disc,
        undirected_total=total,
        ratio=(disc / total) if total else None,
    )


@app.post("/generate", response_model=GenerateResponse)
def generate(req: GenerateRequest):
    if not (1 <= req.count <= 10_000):
        raise InputValidationError("count must be in [1, 10000]")
    graphs = []
    for i in range(req.count):
        cfg = GeneratorConfig(n=req.n, density_factor=req.density, seed=req.seed + i)
        graphs.append(GraphModel.from_pdag(random_chordal_dag(cfg)))
    return GenerateResponse(graphs=graphs)


@app.post("/ingest/dream3", response_model=GraphModel)
def ingest(req: IngestRequest):
    import tempfile
    from pathlib import Path

    from .fileio import ingest_dream3

    with tempfile.NamedTemporaryFile("w", suffix=".tsv", delete=False) as f:
        f.write(req.text)
        path = f.name
    try:
        return GraphModel.from_pdag(ingest_dream3(path))
    finally:
        Path(path).unlink(missing_ok=True)

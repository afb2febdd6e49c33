"""The design objective: expected number of edges resolved by an
intervention set, averaged uniformly over the equivalence class.

Three evaluation routes: exact (full enumeration), an unbiased
Monte-Carlo estimate over uniform class samples, and a fast but
slightly biased estimate over triple-rejection samples.  Sample sizes
for a target accuracy come from a Chernoff bound.
"""

from __future__ import annotations

import itertools
import math
import random
import statistics
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

from .errors import CapExceededError, InputValidationError
from .essential import validate_essential
from .graph import PDAG, check_intervention_set, incident_orientations, iter_bits
from .mec import (
    ENUMERATION_CAP,
    SampledMember,
    class_size,
    counting_session,
    enumerate_members,
    sample_member,
)
from .meek import discovered_count

EXACT_CLASS_SIZE_LIMIT = 10**4
UNBIASED_MAX_DEGREE = 12


@dataclass(frozen=True)
class EstimatorConfig:
    kind: str = "unbiased"  # "exact" | "unbiased" | "fast"
    sample_count: Optional[int] = None  # derived from (epsilon, delta) when unset
    epsilon: float = 0.2
    delta: float = 0.1
    master_seed: int = 0
    fast_restart_cap: int = 50

    def __post_init__(self):
        if self.kind not in ("exact", "unbiased", "fast"):
            raise InputValidationError(f"unknown estimator kind {self.kind!r}")
        if self.sample_count is not None and self.sample_count <= 0:
            raise InputValidationError("sample_count must be positive")
        if self.fast_restart_cap <= 0:
            raise InputValidationError("fast_restart_cap must be positive")

    def resolve_sample_count(self, num_undirected_edges: int) -> int:
        if self.sample_count is not None:
            return self.sample_count
        if num_undirected_edges == 0:
            return 1
        return chernoff_sample_size(num_undirected_edges, self.epsilon, self.delta)


@dataclass(frozen=True)
class Estimate:
    value: float
    sample_count: int
    standard_error: float


def chernoff_sample_size(num_undirected_edges: int, epsilon: float, delta: float) -> int:
    """Smallest integer N strictly above m(2+eps)/eps^2 * ln(2/delta).

    With that many independent draws the estimate is within a relative
    eps of the truth with probability above 1 - delta.
    """
    if num_undirected_edges <= 0:
        raise InputValidationError("edge count must be positive")
    if not (0.0 < epsilon < 1.0) or not (0.0 < delta < 1.0):
        raise InputValidationError("epsilon and delta must lie in (0, 1)")
    bound = num_undirected_edges * (2.0 + epsilon) / (epsilon * epsilon) * math.log(2.0 / delta)
    return math.floor(bound) + 1


def greedy_accuracy_params(epsilon_prime: float, delta_prime: float, k: int) -> tuple[float, float]:
    """Per-evaluation (epsilon, delta) so that k greedy rounds keep a
    (1 - 1/e - epsilon') approximation with probability 1 - delta'."""
    if k <= 0:
        raise InputValidationError("budget k must be positive")
    if not (0.0 < epsilon_prime < 1.0) or not (0.0 < delta_prime < 1.0):
        raise InputValidationError("epsilon' and delta' must lie in (0, 1)")
    return epsilon_prime / (4 * k), delta_prime / (4 * k * k)


def default_estimator_kind(ess: PDAG) -> str:
    """Exact when the class is small, unbiased while the degree keeps
    the sampler polynomial, fast otherwise."""
    if class_size(ess, validate=False) <= EXACT_CLASS_SIZE_LIMIT:
        return "exact"
    max_deg = max((ess.degree_undirected(v) for v in range(ess.n)), default=0)
    if max_deg <= UNBIASED_MAX_DEGREE:
        return "unbiased"
    return "fast"


def per_sample_rng(master_seed: int, index: int) -> random.Random:
    """Deterministic stream for sample ``index``; identical regardless
    of worker count or draw order."""
    return random.Random(((master_seed & 0xFFFFFFFFFFFFFFFF) << 32) ^ index)


# -- exact --------------------------------------------------------------


def exact_objective(
    ess: PDAG,
    targets: Sequence[int],
    cap: int = ENUMERATION_CAP,
    members: Optional[list[PDAG]] = None,
) -> Estimate:
    """Average resolved-edge count over the full class."""
    targets = check_intervention_set(targets, ess.n)
    if members is None:
        members = enumerate_members(ess, cap=cap)
    total = sum(discovered_count(targets, m, ess) for m in members)
    return Estimate(value=total / len(members), sample_count=len(members), standard_error=0.0)


# -- Monte-Carlo --------------------------------------------------------


def _aggregate(counts: Sequence[int]) -> tuple[float, float]:
    n = len(counts)
    mean = sum(counts) / n
    if n < 2:
        return mean, 0.0
    sd = statistics.stdev(counts)
    return mean, sd / math.sqrt(n)


class _CountMemo:
    """Per-sample resolved counts keyed by the member's orientation
    pattern at the targets: the count depends on nothing else, and the
    pattern space (<= 2^(edges at targets)) is usually far smaller than
    the sample count."""

    def __init__(self, ess: PDAG, targets: Sequence[int]):
        self.ess = ess
        self.targets = tuple(targets)
        self._memo: dict[frozenset, int] = {}

    def count(self, member: PDAG) -> int:
        pattern = frozenset(incident_orientations(member, self.targets))
        got = self._memo.get(pattern)
        if got is None:
            got = discovered_count(self.targets, member, self.ess)
            self._memo[pattern] = got
        return got


def estimate_unbiased(ess: PDAG, targets: Sequence[int], cfg: EstimatorConfig) -> Estimate:
    """Mean resolved-edge count over uniform class samples; its
    expectation equals the exact objective."""
    targets = check_intervention_set(targets, ess.n)
    validate_essential(ess, raise_on_invalid=True)
    n_samples = cfg.resolve_sample_count(ess.num_undirected())
    session = counting_session(ess)
    memo = _CountMemo(ess, targets)
    counts = []
    for i in range(n_samples):
        member = sample_member(ess, per_sample_rng(cfg.master_seed, i), validate=False, session=session)
        counts.append(memo.count(member.dag))
    mean, se = _aggregate(counts)
    return Estimate(value=mean, sample_count=n_samples, standard_error=se)


def estimate_fast(ess: PDAG, targets: Sequence[int], cfg: EstimatorConfig) -> Estimate:
    """As the unbiased estimate but over triple-rejection samples.

    The sampling distribution is empirically near-uniform but not
    exactly uniform, so the estimate carries a small bias.
    """
    targets = check_intervention_set(targets, ess.n)
    validate_essential(ess, raise_on_invalid=True)
    n_samples = cfg.resolve_sample_count(ess.num_undirected())
    memo = _CountMemo(ess, targets)
    counts = []
    for i in range(n_samples):
        member = sample_fast_member(
            ess, per_sample_rng(cfg.master_seed, i), restart_cap=cfg.fast_restart_cap, validate=False
        )
        counts.append(memo.count(member.dag))
    mean, se = _aggregate(counts)
    return Estimate(value=mean, sample_count=n_samples, standard_error=se)


def estimate(ess: PDAG, targets: Sequence[int], cfg: EstimatorConfig) -> Estimate:
    if cfg.kind == "exact":
        return exact_objective(ess, targets)
    if cfg.kind == "unbiased":
        return estimate_unbiased(ess, targets, cfg)
    return estimate_fast(ess, targets, cfg)


# -- fast triple-rejection sampler --------------------------------------

_MAX_SWEEPS = 200


def sample_fast_member(
    ess: PDAG,
    rng: random.Random,
    restart_cap: int = 50,
    validate: bool = True,
) -> SampledMember:
    """Class member via randomized triple sweeps.

    All vertex triples carrying at least one undirected edge are visited
    in shuffled order; each inconsistent triple has its undirected edges
    re-flipped with fair coins until its induced subgraph is fully
    directed and is neither a directed 3-cycle nor a v-structure absent
    from the essential graph.  Sweeps repeat until a full pass changes
    nothing; chordality of the undirected components then guarantees the
    result is acyclic, so membership is exact even though the sampling
    distribution is only near-uniform.

    A livelocked run is restarted with a fresh shuffle; ``restart_cap``
    exhausted restarts raise, signalling pathological mixing.
    """
    if validate:
        validate_essential(ess, raise_on_invalid=True)
    und_edges = list(ess.undirected_edges())
    if not und_edges:
        return SampledMember(dag=ess.copy(), provenance="fast")
    ess_vs = ess.v_structures()
    n = ess.n

    triples = set()
    for u, v in und_edges:
        for w in range(n):
            if w != u and w != v:
                triples.add(tuple(sorted((u, v, w))))
    triples = sorted(triples)
    if not triples:  # n < 3: a lone undirected edge, any orientation works
        dag = ess.copy()
        for u, v in und_edges:
            if rng.getrandbits(1):
                dag.orient(u, v)
            else:
                dag.orient(v, u)
        return SampledMember(dag=dag, provenance="fast")

    # per-triple edge lists: (pair, fixed_direction_or_None)
    def triple_edges(t):
        out = []
        for x, y in itertools.combinations(t, 2):
            if ess.is_undirected(x, y):
                out.append(((x, y), None))
            elif ess.is_directed(x, y):
                out.append(((x, y), (x, y)))
            elif ess.is_directed(y, x):
                out.append(((x, y), (y, x)))
        return out

    triple_info = [triple_edges(t) for t in triples]

    def directed_within(assign, edges):
        """Current directions of a triple's edges, or None if unassigned."""
        dirs = []
        for pair, fixed in edges:
            d = fixed if fixed is not None else assign.get(pair)
            if d is None:
                return None
            dirs.append(d)
        return dirs

    def locally_ok(t, dirs):
        if dirs is None:
            return False
        if len(dirs) == 3:
            heads = [h for _, h in dirs]
            if len(set(heads)) == 3:  # each vertex has in-degree 1: a 3-cycle
                return False
        # converging pair with nonadjacent tails must be a known v-structure
        for (t1, h1), (t2, h2) in itertools.combinations(dirs, 2):
            if h1 == h2 and not ess.has_edge(t1, t2):
                a, c = (t1, t2) if t1 < t2 else (t2, t1)
                if (a, h1, c) not in ess_vs:
                    return False
        return True

    for _restart in range(restart_cap):
        order = list(range(len(triples)))
        rng.shuffle(order)
        assign: dict[tuple[int, int], tuple[int, int]] = {}
        for _sweep in range(_MAX_SWEEPS):
            changed = False
            for ti in order:
                edges = triple_info[ti]
                if locally_ok(triples[ti], directed_within(assign, edges)):
                    continue
                changed = True
                free = [pair for pair, fixed in edges if fixed is None]
                while True:
                    for pair in free:
                        assign[pair] = pair if rng.getrandbits(1) else (pair[1], pair[0])
                    if locally_ok(triples[ti], directed_within(assign, edges)):
                        break
            if not changed:
                dag = ess.copy()
                for (u, v), (tail, head) in sorted(assign.items()):
                    dag.orient(tail, head)
                return SampledMember(dag=dag, provenance="fast")
    raise CapExceededError(
        f"fast sampler failed to converge within {restart_cap} restarts; retry with a new seed"
    )

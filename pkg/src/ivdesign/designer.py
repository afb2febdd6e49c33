"""Intervention-set selection: greedy, lazy greedy, baselines, brute force.

By default one sample multiset is drawn per design run and reused for
every marginal-gain evaluation (common random numbers).  That makes the
estimated objective a deterministic monotone submodular set function, so
lazy greedy selects exactly the same targets as general greedy and the
classic (1 - 1/e) guarantee holds for the surrogate with no
probabilistic slack.  ``resample_per_eval`` restores the literal
re-invoke-the-sampler-per-evaluation procedure.

Marginal gains on the frozen multiset are computed through the
union decomposition of resolved sets: the edges resolved by a target
set are the union of the edges resolved by its members individually,
per ground-truth DAG.  Per-vertex resolved sets are cached as bitmasks
over the undirected essential edges.
"""

from __future__ import annotations

import heapq
import itertools
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import CapExceededError, InputValidationError
from .essential import validate_essential
from .estimators import Estimate, EstimatorConfig, estimate, per_sample_rng, sample_fast_member
from .graph import PDAG, incident_orientations
from .mec import enumerate_members, counting_session, sample_member
from .meek import resolved_set

BRUTE_FORCE_SUBSET_CAP = 500_000


@dataclass
class DesignResult:
    targets: tuple[int, ...]
    round_gains: list[tuple[int, float]]
    objective_estimate: Optional[Estimate]
    config: Optional[EstimatorConfig]
    evaluations_performed: int
    algorithm: str


class FrozenObjective:
    """Deterministic surrogate objective over a frozen member multiset.

    Values are kept as integer totals (sum of per-member resolved
    counts), so comparisons and tie-breaks are exact.
    """

    def __init__(self, ess: PDAG, members: Sequence[PDAG]):
        self.ess = ess
        self.members = list(members)
        self.edge_index = {e: i for i, e in enumerate(ess.undirected_edges())}
        self._vertex_masks: dict[int, list[int]] = {}
        self.evaluations = 0

    def vertex_masks(self, v: int) -> list[int]:
        got = self._vertex_masks.get(v)
        if got is None:
            idx = self.edge_index
            # the resolved set depends only on how the member orients
            # the edges at v (<= 2^deg patterns, usually far fewer than
            # the member count), so close each pattern once
            by_pattern: dict[frozenset, int] = {}
            got = []
            for m in self.members:
                pattern = frozenset(incident_orientations(m, (v,)))
                mask = by_pattern.get(pattern)
                if mask is None:
                    mask = 0
                    for pair in resolved_set(pattern, self.ess, m):
                        mask |= 1 << idx[pair]
                    by_pattern[pattern] = mask
                got.append(mask)
            self._vertex_masks[v] = got
        return got

    def set_masks(self, targets: Sequence[int]) -> list[int]:
        masks = [0] * len(self.members)
        for v in targets:
            for i, vm in enumerate(self.vertex_masks(v)):
                masks[i] |= vm
        return masks

    def total(self, masks: list[int]) -> int:
        return sum(m.bit_count() for m in masks)

    def gain_total(self, v: int, current_masks: list[int], current_total: int) -> int:
        self.evaluations += 1
        vm = self.vertex_masks(v)
        return sum((cm | m).bit_count() for cm, m in zip(current_masks, vm)) - current_total

    def estimate_for(self, masks: list[int]) -> Estimate:
        counts = [m.bit_count() for m in masks]
        n = len(counts)
        mean = sum(counts) / n
        if n < 2:
            return Estimate(mean, n, 0.0)
        import statistics

        sd = statistics.stdev(counts)
        return Estimate(mean, n, sd / (n**0.5))


def draw_frozen_members(ess: PDAG, cfg: EstimatorConfig) -> list[PDAG]:
    """The shared multiset: full enumeration for the exact kind, N
    sampler draws otherwise."""
    if cfg.kind == "exact":
        return enumerate_members(ess, validate=False)
    n_samples = cfg.resolve_sample_count(ess.num_undirected())
    if cfg.kind == "unbiased":
        session = counting_session(ess)
        return [
            sample_member(ess, per_sample_rng(cfg.master_seed, i), validate=False, session=session).dag
            for i in range(n_samples)
        ]
    return [
        sample_fast_member(
            ess, per_sample_rng(cfg.master_seed, i), restart_cap=cfg.fast_restart_cap, validate=False
        ).dag
        for i in range(n_samples)
    ]


def _check_budget(ess: PDAG, k: int) -> None:
    if k < 0:
        raise InputValidationError("budget k must be nonnegative")
    if k > ess.n:
        raise InputValidationError(f"budget k={k} exceeds graph order {ess.n}")


def greedy_design(
    ess: PDAG,
    k: int,
    cfg: EstimatorConfig,
    resample_per_eval: bool = False,
) -> DesignResult:
    """General greedy: k rounds, each adding the vertex with the largest
    marginal gain, ties broken by smallest id."""
    _check_budget(ess, k)
    validate_essential(ess, raise_on_invalid=True)
    if resample_per_eval:
        return _greedy_resampling(ess, k, cfg, lazy=False)
    obj = FrozenObjective(ess, draw_frozen_members(ess, cfg))
    chosen: list[int] = []
    round_gains: list[tuple[int, float]] = []
    masks = obj.set_masks(())
    total = 0
    nm = len(obj.members)
    for _ in range(k):
        best_v, best_gain = -1, -1
        for v in range(ess.n):
            if v in chosen:
                continue
            g = obj.gain_total(v, masks, total)
            if g > best_gain:
                best_v, best_gain = v, g
        chosen.append(best_v)
        round_gains.append((best_v, best_gain / nm))
        for i, vm in enumerate(obj.vertex_masks(best_v)):
            masks[i] |= vm
        total = obj.total(masks)
    return DesignResult(
        targets=tuple(chosen),
        round_gains=round_gains,
        objective_estimate=obj.estimate_for(masks),
        config=cfg,
        evaluations_performed=obj.evaluations,
        algorithm="greedy",
    )


def lazy_greedy_design(
    ess: PDAG,
    k: int,
    cfg: EstimatorConfig,
    resample_per_eval: bool = False,
) -> DesignResult:
    """Lazy greedy: stale gains act as upper bounds; a vertex is only
    re-evaluated while it tops the profit heap.  On the frozen multiset
    the surrogate is exactly submodular, so the selected targets match
    general greedy; only ``evaluations_performed`` differs.
    """
    _check_budget(ess, k)
    validate_essential(ess, raise_on_invalid=True)
    if resample_per_eval:
        return _greedy_resampling(ess, k, cfg, lazy=True)
    obj = FrozenObjective(ess, draw_frozen_members(ess, cfg))
    chosen: list[int] = []
    round_gains: list[tuple[int, float]] = []
    masks = obj.set_masks(())
    total = 0
    nm = len(obj.members)
    INF = 1 << 62
    heap = [(-INF, v) for v in range(ess.n)]
    heapq.heapify(heap)
    for _ in range(k):
        fresh: set[int] = set()
        while True:
            neg_p, v = heapq.heappop(heap)
            if v in chosen:
                continue
            if v in fresh:
                chosen.append(v)
                round_gains.append((v, -neg_p / nm))
                for i, vm in enumerate(obj.vertex_masks(v)):
                    masks[i] |= vm
                total = obj.total(masks)
                break
            g = obj.gain_total(v, masks, total)
            fresh.add(v)
            heapq.heappush(heap, (-g, v))
    return DesignResult(
        targets=tuple(chosen),
        round_gains=round_gains,
        objective_estimate=obj.estimate_for(masks),
        config=cfg,
        evaluations_performed=obj.evaluations,
        algorithm="lazy",
    )


def _greedy_resampling(ess: PDAG, k: int, cfg: EstimatorConfig, lazy: bool) -> DesignResult:
    """The literal procedure: every objective evaluation re-invokes the
    sampler with a fresh stream.

    With noisy gains the lazy pruning premise (gains only shrink) is
    only approximately valid; agreement with general greedy is reported,
    not guaranteed.
    """
    eval_counter = itertools.count()
    evaluations = 0

    def dhat(targets: tuple[int, ...]) -> float:
        nonlocal evaluations
        evaluations += 1
        call_cfg = EstimatorConfig(
            kind=cfg.kind,
            sample_count=cfg.sample_count,
            epsilon=cfg.epsilon,
            delta=cfg.delta,
            master_seed=(cfg.master_seed << 20) ^ next(eval_counter),
            fast_restart_cap=cfg.fast_restart_cap,
        )
        return estimate(ess, targets, call_cfg).value

    chosen: list[int] = []
    round_gains: list[tuple[int, float]] = []
    if not lazy:
        for _ in range(k):
            best_v, best_gain = -1, float("-inf")
            for v in range(ess.n):
                if v in chosen:
                    continue
                g = dhat(tuple(chosen) + (v,)) - dhat(tuple(chosen))
                if g > best_gain:
                    best_v, best_gain = v, g
            chosen.append(best_v)
            round_gains.append((best_v, best_gain))
    else:
        heap = [(float("-inf"), v) for v in range(ess.n)]
        heapq.heapify(heap)
        for _ in range(k):
            fresh: set[int] = set()
            while True:
                neg_p, v = heapq.heappop(heap)
                if v in chosen:
                    continue
                if v in fresh:
                    chosen.append(v)
                    round_gains.append((v, -neg_p))
                    break
                g = dhat(tuple(chosen) + (v,)) - dhat(tuple(chosen))
                fresh.add(v)
                heapq.heappush(heap, (-g, v))
    final = estimate(ess, tuple(chosen), cfg) if chosen else Estimate(0.0, 0, 0.0)
    return DesignResult(
        targets=tuple(chosen),
        round_gains=round_gains,
        objective_estimate=final,
        config=cfg,
        evaluations_performed=evaluations,
        algorithm="lazy-resample" if lazy else "greedy-resample",
    )


def baseline_random(ess: PDAG, k: int, rng: random.Random) -> DesignResult:
    _check_budget(ess, k)
    targets = tuple(rng.sample(range(ess.n), k))
    return DesignResult(
        targets=targets,
        round_gains=[],
        objective_estimate=None,
        config=None,
        evaluations_performed=0,
        algorithm="rand",
    )


def baseline_maxdeg(ess: PDAG, k: int) -> DesignResult:
    _check_budget(ess, k)
    order = sorted(range(ess.n), key=lambda v: (-ess.degree_undirected(v), v))
    return DesignResult(
        targets=tuple(order[:k]),
        round_gains=[],
        objective_estimate=None,
        config=None,
        evaluations_performed=0,
        algorithm="maxdeg",
    )


def brute_force_design(
    ess: PDAG, k: int, subset_cap: int = BRUTE_FORCE_SUBSET_CAP
) -> DesignResult:
    """Exact argmax of the exact objective over all k-subsets; ties go
    to the lexicographically smallest subset."""
    _check_budget(ess, k)
    validate_essential(ess, raise_on_invalid=True)
    import math

    if math.comb(ess.n, k) > subset_cap:
        raise CapExceededError(
            f"C({ess.n},{k}) exceeds brute-force subset cap {subset_cap}"
        )
    obj = FrozenObjective(ess, enumerate_members(ess, validate=False))
    best_subset: Optional[tuple[int, ...]] = None
    best_total = -1
    best_masks: list[int] = []
    for subset in itertools.combinations(range(ess.n), k):
        masks = obj.set_masks(subset)
        total = obj.total(masks)
        obj.evaluations += 1
        if total > best_total:  # lexicographic order of combinations keeps first
            best_subset, best_total, best_masks = subset, total, masks
    assert best_subset is not None or k == 0
    if best_subset is None:
        best_subset, best_masks = (), obj.set_masks(())
    return DesignResult(
        targets=best_subset,
        round_gains=[],
        objective_estimate=obj.estimate_for(best_masks),
        config=None,
        evaluations_performed=obj.evaluations,
        algorithm="brute",
    )

"""Random connected chordal DAG generation.

A uniform vertex ordering doubles as a (reversed) perfect elimination
ordering: each vertex connects to earlier vertices with probability
inversely proportional to its position, a lone parent is forced when
the coin flips all miss (connectivity), and each parent set is closed
into a clique (chordality and zero v-structures).  All edges point from
lower to higher position, so the result is a DAG by construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import InputValidationError
from .graph import PDAG
from .meek import discovered_count


@dataclass(frozen=True)
class GeneratorConfig:
    n: int
    density_factor: float = 1.5  # ~ expected parent count per vertex
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise InputValidationError("vertex count must be >= 1")
        if self.density_factor <= 0:
            raise InputValidationError("density factor must be positive")


def random_chordal_dag(cfg: GeneratorConfig) -> PDAG:
    rng = random.Random(cfg.seed)
    n = cfg.n
    order = list(range(n))
    rng.shuffle(order)  # order[i] = vertex at position i
    adj: dict[tuple[int, int], None] = {}

    def connect(pos_lo: int, pos_hi: int) -> None:
        # all edges run from lower to higher position
        adj[(order[pos_lo], order[pos_hi])] = None

    # parents_at[i] = set of positions feeding position i
    parents_at: list[set[int]] = [set() for _ in range(n)]
    for i in range(1, n):
        p = min(1.0, cfg.density_factor / i)
        chosen = [j for j in range(i) if rng.random() < p]
        if not chosen:
            chosen = [rng.randrange(i)]
        parents_at[i] = set(chosen)

    # Close every parent set into a clique, to a fixpoint: closing one
    # vertex's parents adds edges between earlier vertices, which can
    # break their cliques, so one pass is not enough.  At the fixpoint
    # all edges run lower -> higher position and each parent set is a
    # clique, making the reversed insertion order a perfect elimination
    # ordering: the skeleton is chordal and the DAG has no v-structures.
    changed = True
    while changed:
        changed = False
        for i in range(1, n):
            ps = sorted(parents_at[i])
            for a_idx in range(len(ps)):
                for b_idx in range(a_idx + 1, len(ps)):
                    lo, hi = ps[a_idx], ps[b_idx]
                    if lo not in parents_at[hi]:
                        parents_at[hi].add(lo)
                        changed = True

    for i in range(1, n):
        for j in parents_at[i]:
            connect(j, i)
    return PDAG.from_edges(n, directed=adj.keys())


def discovered_edge_ratio(g_star: PDAG, ess: PDAG, targets) -> float:
    """Resolved undirected essential edges over all undirected essential
    edges; errors when nothing was left to discover."""
    denom = ess.num_undirected()
    if denom == 0:
        raise InputValidationError(
            "essential graph has no undirected edges; nothing to discover"
        )
    return discovered_count(targets, g_star, ess) / denom

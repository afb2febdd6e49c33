import itertools
import random

import pytest

from ivdesign import GeneratorConfig, PDAG, essential_of, random_chordal_dag


def p3_ess() -> PDAG:
    """Undirected path a - b - c on ids 0, 1, 2."""
    return PDAG.from_edges(3, undirected=[(0, 1), (1, 2)])


def k3_ess() -> PDAG:
    return PDAG.from_edges(3, undirected=[(0, 1), (0, 2), (1, 2)])


def k13_ess() -> PDAG:
    """Star with center 0."""
    return PDAG.from_edges(4, undirected=[(0, 1), (0, 2), (0, 3)])


def chain_dag(n: int) -> PDAG:
    return PDAG.from_edges(n, directed=[(i, i + 1) for i in range(n - 1)])


def brute_class_members(ess: PDAG) -> list[PDAG]:
    """Independent oracle: all acyclic orientations of the undirected
    pairs whose v-structures match the essential graph's."""
    edges = list(ess.undirected_edges())
    vs = ess.v_structures()
    out = []
    for bits in itertools.product([0, 1], repeat=len(edges)):
        g = ess.copy()
        for (u, v), b in zip(edges, bits):
            g.orient(u, v) if b else g.orient(v, u)
        if g.is_acyclic() and g.v_structures() == vs:
            out.append(g)
    return out


def make_corpus(count: int, n_lo: int, n_hi: int, seed: int) -> list[PDAG]:
    """Ground-truth DAGs with varied order and density."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        cfg = GeneratorConfig(
            n=rng.randint(n_lo, n_hi),
            density_factor=rng.uniform(0.7, 2.5),
            seed=seed * 100_003 + i,
        )
        out.append(random_chordal_dag(cfg))
    return out


@pytest.fixture(scope="session")
def small_corpus() -> list[PDAG]:
    return make_corpus(60, 3, 7, seed=7)


@pytest.fixture(scope="session")
def small_essentials(small_corpus) -> list[PDAG]:
    return [essential_of(d) for d in small_corpus]

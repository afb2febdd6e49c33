"""Enumeration, counting, and sampling, cross-checked against each
other and the brute-force oracle."""

import random
from collections import Counter

import pytest

from ivdesign import (
    CapExceededError,
    InputValidationError,
    PDAG,
    class_size,
    counting_session,
    enumerate_members,
    essential_of,
    flowed,
    rand_edge,
    sample_member,
    w_count,
)
from conftest import brute_class_members, k3_ess, k13_ess, p3_ess


def test_enumerate_triangle():
    assert len(enumerate_members(k3_ess())) == 6


def test_enumerate_p3():
    members = enumerate_members(p3_ess())
    assert len(members) == 3
    # the collider 0 -> 1 <- 2 is excluded
    assert not any(m.is_directed(0, 1) and m.is_directed(2, 1) for m in members)


def test_enumerate_star():
    members = enumerate_members(k13_ess())
    assert len(members) == 4
    for m in members:
        assert m.parents_mask(0).bit_count() <= 1  # at most one in-edge at center


def test_enumerate_matches_brute_force(small_essentials):
    for ess in small_essentials[:25]:
        got = enumerate_members(ess, validate=False)
        expect = brute_class_members(ess)
        assert len(got) == len(expect)
        assert set(got) == set(expect)


def test_enumerate_deterministic_order():
    a = enumerate_members(p3_ess())
    b = enumerate_members(p3_ess())
    assert a == b


def test_enumerate_cap():
    with pytest.raises(CapExceededError):
        enumerate_members(k3_ess(), cap=2)


def test_enumerate_rejects_invalid():
    c4 = PDAG.from_edges(4, undirected=[(0, 1), (1, 2), (2, 3), (0, 3)])
    with pytest.raises(InputValidationError):
        enumerate_members(c4)


def test_flowed_path():
    g = p3_ess()
    assert flowed(0, g) == {(0, 1), (1, 2)}
    assert flowed(1, g) == {(1, 0), (1, 2)}


def test_flowed_triangle_omits_equidistant():
    assert flowed(0, k3_ess()) == {(0, 1), (0, 2)}


def test_flowed_rejects_directed_input():
    with pytest.raises(InputValidationError):
        flowed(0, PDAG.from_edges(2, directed=[(0, 1)]))


def test_flowed_rejects_disconnected():
    g = PDAG.from_edges(4, undirected=[(0, 1), (2, 3)])
    with pytest.raises(InputValidationError):
        flowed(0, g)


def test_w_count_examples():
    edge = PDAG.from_edges(2, undirected=[(0, 1)])
    assert w_count(0, edge) == 1
    assert [w_count(v, p3_ess()) for v in range(3)] == [1, 1, 1]
    assert [w_count(v, k3_ess()) for v in range(3)] == [2, 2, 2]


def test_w_count_per_root_matches_oracle(small_corpus):
    for dag in small_corpus[:20]:
        sk = dag.skeleton()
        if len(sk.undirected_components()) != 1:
            continue
        roots = Counter()
        for m in brute_class_members(sk):
            sources = [v for v in range(m.n) if m.parents_mask(v) == 0]
            assert len(sources) == 1
            roots[sources[0]] += 1
        for v in range(sk.n):
            assert w_count(v, sk) == roots[v]


def test_class_size_examples(small_essentials):
    assert class_size(k3_ess()) == 6
    assert class_size(p3_ess()) == 3
    assert class_size(k13_ess()) == 4
    assert class_size(PDAG.from_edges(2, directed=[(0, 1)])) == 1
    # triangle next to a path: product over components
    both = PDAG.from_edges(
        6, undirected=[(0, 1), (0, 2), (1, 2), (3, 4), (4, 5)]
    )
    assert class_size(both) == 18
    for ess in small_essentials:
        assert class_size(ess, validate=False) == len(
            enumerate_members(ess, validate=False)
        )


def test_rand_edge_covers_every_edge_and_is_deterministic():
    g = k3_ess()
    a = rand_edge(g, random.Random(9))
    assert len(a) == 3
    covered = {tuple(sorted(p)) for p in a}
    assert covered == {(0, 1), (0, 2), (1, 2)}
    assert rand_edge(g, random.Random(9)) == a


def test_sample_member_validity(small_essentials):
    rng = random.Random(4)
    for ess in small_essentials[:15]:
        members = set(enumerate_members(ess, validate=False))
        for _ in range(20):
            s = sample_member(ess, rng, validate=False)
            assert s.provenance == "uniform"
            assert s.dag in members


def test_sample_member_fully_directed_is_identity():
    ess = essential_of(PDAG.from_edges(3, directed=[(0, 1), (2, 1)]))
    s = sample_member(ess, random.Random(0))
    assert s.dag == ess


def test_sample_member_uniform_on_triangle():
    ess = k3_ess()
    members = enumerate_members(ess)
    idx = {m: i for i, m in enumerate(members)}
    rng = random.Random(2)
    session = counting_session(ess)
    counts = [0] * 6
    draws = 60_000
    for _ in range(draws):
        counts[idx[sample_member(ess, rng, validate=False, session=session).dag]] += 1
    # 3 sigma band around 1/6
    import math

    sigma = math.sqrt(draws * (1 / 6) * (5 / 6))
    for c in counts:
        assert abs(c - draws / 6) < 3.5 * sigma


def test_component_draws_independent():
    both = PDAG.from_edges(
        6, undirected=[(0, 1), (0, 2), (1, 2), (3, 4), (4, 5)]
    )
    rng = random.Random(7)
    session = counting_session(both)
    seen = set()
    for _ in range(500):
        m = sample_member(both, rng, validate=False, session=session).dag
        tri = tuple(sorted((u, v) for u, v in m.directed_edges() if u < 3 and v < 3))
        path = tuple(sorted((u, v) for u, v in m.directed_edges() if u >= 3 and v >= 3))
        seen.add((tri, path))
    assert len(seen) == 18  # all joint outcomes occur

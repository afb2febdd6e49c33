"""Meek rules, closure, and resolved sets, checked against small
hand-worked cases and the enumeration oracle."""

import random

import pytest

from ivdesign import (
    ContradictionError,
    CycleError,
    InputValidationError,
    PDAG,
    apply_background,
    discovered_count,
    essential_of,
    incident_orientations,
    meek_close,
    resolved_set,
)
from conftest import brute_class_members, make_corpus


def test_rule1_chain():
    # c -> a, a - b, {c,b} absent  =>  a -> b
    g = PDAG.from_edges(3, directed=[(2, 0)], undirected=[(0, 1)])
    h = meek_close(g)
    assert h.is_directed(0, 1)


def test_rule1_blocked_by_adjacency():
    # b adjacent to c blocks rule 1; no other rule fires on the triangle
    g = PDAG.from_edges(3, directed=[(2, 0)], undirected=[(0, 1), (1, 2)])
    assert meek_close(g) == g


def test_rule2_shielded_path():
    # a -> c -> b with a - b  =>  a -> b (else a cycle)
    g = PDAG.from_edges(3, directed=[(0, 2), (2, 1)], undirected=[(0, 1)])
    h = meek_close(g)
    assert h.is_directed(0, 1)


def test_rule3_kite():
    # c -> b <- d, c,d nonadjacent, a - c, a - d, a - b  =>  a -> b
    g = PDAG.from_edges(
        4, directed=[(2, 1), (3, 1)], undirected=[(0, 1), (0, 2), (0, 3)]
    )
    h = meek_close(g)
    assert h.is_directed(0, 1)


def test_rule4():
    # d -> c, c -> b, a - d, a - c, a - b, {b,d} absent  =>  a -> b
    g = PDAG.from_edges(
        4, directed=[(3, 2), (2, 1)], undirected=[(0, 1), (0, 2), (0, 3)]
    )
    h = meek_close(g)
    assert h.is_directed(0, 1)


def test_close_is_idempotent_and_preserves_input():
    g = PDAG.from_edges(3, directed=[(2, 0)], undirected=[(0, 1)])
    h = meek_close(g)
    assert g.is_undirected(0, 1)  # input untouched
    assert meek_close(h) == h


def test_close_rejects_cyclic_input():
    g = PDAG.from_edges(3, directed=[(0, 1), (1, 2), (2, 0)])
    with pytest.raises(CycleError):
        meek_close(g)


def test_closure_matches_all_member_agreement(small_corpus):
    """The closure of background knowledge orients exactly the edges on
    which every compatible class member agrees."""
    rng = random.Random(3)
    for dag in small_corpus[:25]:
        ess = essential_of(dag)
        members = brute_class_members(ess)
        targets = (rng.randrange(dag.n),)
        a = incident_orientations(dag, targets)
        closed = meek_close(apply_background(ess, a, dag))
        compatible = [
            m for m in members
            if all(m.is_directed(t, h) for t, h in a)
        ]
        assert compatible
        for u, v in ess.undirected_edges():
            agree = (
                all(m.is_directed(u, v) for m in compatible)
                or all(m.is_directed(v, u) for m in compatible)
            )
            assert agree == (not closed.is_undirected(u, v))


def test_apply_background_contradiction():
    dag = PDAG.from_edges(2, directed=[(0, 1)])
    ess = essential_of(dag)
    with pytest.raises(ContradictionError):
        apply_background(ess, [(1, 0)], dag)


def test_apply_background_not_in_skeleton():
    dag = PDAG.from_edges(3, directed=[(0, 1), (0, 2)])
    ess = essential_of(dag)
    bogus = PDAG.from_edges(3, directed=[(1, 2), (0, 1), (0, 2)])
    with pytest.raises(InputValidationError):
        apply_background(ess, [(1, 2)], bogus)


def test_resolved_set_p3():
    dag = PDAG.from_edges(3, directed=[(0, 1), (1, 2)])  # a -> b -> c
    ess = essential_of(dag)
    assert ess.num_undirected() == 2
    # intervening on b reveals both incident edges
    assert resolved_set(incident_orientations(dag, (1,)), ess, dag) == {(0, 1), (1, 2)}
    # intervening on a reveals a -> b, and rule 1 then orients b -> c
    assert resolved_set(incident_orientations(dag, (0,)), ess, dag) == {(0, 1), (1, 2)}
    # on the fork b -> a, b -> c the same intervention resolves only a-b
    fork = PDAG.from_edges(3, directed=[(1, 0), (1, 2)])
    ess_f = essential_of(fork)
    assert resolved_set(incident_orientations(fork, (0,)), ess_f, fork) == {(0, 1)}
    assert resolved_set(set(), ess, dag) == set()


def test_discovered_count_matches_resolved_set(small_corpus):
    for dag in small_corpus[:10]:
        ess = essential_of(dag)
        for v in range(dag.n):
            expect = len(resolved_set(incident_orientations(dag, (v,)), ess, dag))
            assert discovered_count((v,), dag, ess) == expect

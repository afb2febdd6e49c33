"""Orientation propagation: the four Meek rules to fixpoint.

The rules, for an undirected pair {a, b} considered as a -> b:

  1. exists c with c -> a and {c, b} absent;
  2. exists c with a -> c and c -> b;
  3. exist nonadjacent c, d with c -> b, d -> b and a - c, a - d;
  4. exist c, d with d -> c, c -> b (or c - b, which the same structure
     also orients), {a, c} and {a, d} present, {b, d} absent.

The fixpoint is independent of application order, so the sweep below is
an efficiency choice only.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import ContradictionError, CycleError, InputValidationError
from .graph import PDAG, incident_orientations, iter_bits


def _find_orientation(g: PDAG, a: int, b: int) -> bool:
    """True if some Meek rule orients a - b as a -> b."""
    par = g._par
    chi = g._chi
    und = g._und
    adj_b = und[b] | par[b] | chi[b]
    # Rule 1
    if par[a] & ~adj_b & ~(1 << b):
        return True
    # Rule 2
    if chi[a] & par[b]:
        return True
    # Rule 3
    s = und[a] & par[b]
    if s.bit_count() >= 2:
        for c in iter_bits(s):
            if s & ~(und[c] | par[c] | chi[c]) & ~(1 << c):
                return True
    # Rule 4
    adj_a = und[a] | par[a] | chi[a]
    for c in iter_bits(adj_a & (par[b] | und[b])):
        if par[c] & adj_a & ~adj_b & ~(1 << b):
            return True
    return False


def meek_close(g: PDAG) -> PDAG:
    """Apply Meek rules 1-4 until no rule fires.

    The skeleton and all previously directed pairs are unchanged; only
    undirected pairs may become directed.  Rejects cyclic directed input.
    """
    if not g.is_acyclic():
        raise CycleError(g._find_directed_cycle(), "meek closure requires an acyclic directed part")
    h = g.copy()
    edges = list(h.undirected_edges())
    changed = True
    while changed and edges:
        changed = False
        remaining = []
        for a, b in edges:
            if _find_orientation(h, a, b):
                h.orient(a, b)
                changed = True
            elif _find_orientation(h, b, a):
                h.orient(b, a)
                changed = True
            else:
                remaining.append((a, b))
        edges = remaining
    return h


def apply_background(ess: PDAG, a: Iterable[tuple[int, int]], g_star: PDAG) -> PDAG:
    """Copy of ``ess`` with the directed edges ``a`` committed.

    Each member of ``a`` must be an edge of the skeleton and agree with
    the orientation in the ground-truth DAG ``g_star``.
    """
    h = ess.copy()
    for tail, head in sorted(a):
        if not g_star.is_directed(tail, head):
            raise ContradictionError(
                f"edge ({tail},{head}) contradicts the ground-truth orientation"
            )
        if h.is_undirected(tail, head):
            h.orient(tail, head)
        elif h.is_directed(tail, head):
            pass  # already known from the essential graph
        elif h.is_directed(head, tail):
            raise ContradictionError(
                f"edge ({tail},{head}) contradicts the essential graph"
            )
        else:
            raise InputValidationError(
                f"edge ({tail},{head}) is not in the skeleton"
            )
    return h


def resolved_set(
    a: Iterable[tuple[int, int]], ess: PDAG, g_star: PDAG
) -> set[tuple[int, int]]:
    """Undirected essential-graph pairs fixed by ``a`` under Meek closure.

    Returns unordered pairs (u, v) with u < v; the directions are
    recoverable from the closed graph but only membership and unions are
    ever consumed downstream.
    """
    closed = meek_close(apply_background(ess, a, g_star))
    out = set()
    for u, v in ess.undirected_edges():
        if not closed.is_undirected(u, v):
            out.add((u, v))
    return out


def discovered_count(targets: Sequence[int], g_star: PDAG, ess: PDAG) -> int:
    """Number of undirected essential edges resolved by intervening on ``targets``."""
    return len(resolved_set(incident_orientations(g_star, targets), ess, g_star))

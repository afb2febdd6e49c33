"""Markov-equivalence-class machinery.

Exhaustive enumeration (an independent backtracking oracle), rooted
counting, exact class size, and the uniform member sampler built from
the source-vertex decomposition: in a connected undirected essential
graph every class member has a unique source vertex, the edges at
unequal distance from the source are forced, and the equidistant
residual decomposes into smaller components of the same kind.

Counts are plain Python ints (arbitrary precision): class sizes grow
roughly exponentially with the graph order and overflow fixed-width
counters long before the graphs get interesting.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass

from .errors import CapExceededError, InputValidationError
from .essential import validate_essential
from .graph import PDAG, iter_bits
from .meek import meek_close

ENUMERATION_CAP = 10**6


@dataclass(frozen=True)
class SampledMember:
    """A DAG drawn from a Markov equivalence class."""

    dag: PDAG
    provenance: str  # "uniform" or "fast"


# -- enumeration oracle -------------------------------------------------


def enumerate_members(ess: PDAG, cap: int = ENUMERATION_CAP, validate: bool = True) -> list[PDAG]:
    """All DAGs in the class of ``ess``, each exactly once, in a
    deterministic order.

    Backtracks over the undirected pairs directly, pruning directed
    cycles and out-of-class v-structures as they appear.  Deliberately
    shares no machinery with the rooted-counting recursion so the two
    can check each other.
    """
    if validate:
        validate_essential(ess, raise_on_invalid=True)
    edges = list(ess.undirected_edges())
    if len(edges) > 2 and 2 ** len(edges) > cap:
        # quick feasibility screen before the exact count is known
        total = class_size(ess, validate=False)
        if total > cap:
            raise CapExceededError(
                f"class size {total} exceeds enumeration cap {cap}; use sampling"
            )
    ess_vs = ess.v_structures()
    members: list[PDAG] = []
    g = ess.copy()

    def creates_new_vstructure(tail: int, head: int) -> bool:
        for p in iter_bits(g.parents_mask(head)):
            if p != tail and not g.has_edge(p, tail):
                a, c = (p, tail) if p < tail else (tail, p)
                if (a, head, c) not in ess_vs:
                    return True
        return False

    def reaches(src: int, dst: int) -> bool:
        frontier = 1 << src
        seen = frontier
        target = 1 << dst
        while frontier:
            nxt = 0
            for x in iter_bits(frontier):
                nxt |= g.children_mask(x)
            if nxt & target:
                return True
            frontier = nxt & ~seen
            seen |= frontier
        return False

    def recurse(i: int) -> None:
        if i == len(edges):
            if len(members) >= cap:
                raise CapExceededError(f"enumeration cap {cap} exceeded")
            members.append(g.copy())
            return
        u, v = edges[i]
        for tail, head in ((u, v), (v, u)):
            if reaches(head, tail) or _would_vstructure(tail, head):
                continue
            g.orient(tail, head)
            recurse(i + 1)
            # un-orient: restore the undirected pair
            g._chi[tail] &= ~(1 << head)
            g._par[head] &= ~(1 << tail)
            g._und[tail] |= 1 << head
            g._und[head] |= 1 << tail

    def _would_vstructure(tail: int, head: int) -> bool:
        return creates_new_vstructure(tail, head)

    recurse(0)
    return members


# -- source-vertex decomposition ---------------------------------------


def _bfs_levels(und: list[int], comp: int, v: int) -> dict[int, int]:
    dist = {v: 0}
    q = deque([v])
    while q:
        x = q.popleft()
        for w in iter_bits(und[x] & comp):
            if w not in dist:
                dist[w] = dist[x] + 1
                q.append(w)
    return dist


class _CountingSession:
    """Memoized rooted counting over one undirected graph.

    Keys are (component bitmask, source); residual components recur
    heavily across recursion branches.

    The distance orientation alone is not a complete description of the
    edges a source choice forces: Meek rule 1 can propagate into
    equidistant edges, and counting the leftover components as free
    subproblems overcounts.  ``rooted`` therefore closes the distance
    orientation under the Meek rules before splitting off residual
    components, which restores exact agreement with enumeration.
    """

    def __init__(self, und: list[int]):
        self.und = und
        self._w_memo: dict[tuple[int, int], int] = {}
        self._sum_memo: dict[int, int] = {}
        self._rooted_memo: dict[tuple[int, int], tuple[list[tuple[int, int]], list[int]]] = {}

    def rooted(self, comp: int, v: int) -> tuple[list[tuple[int, int]], list[int]]:
        """Meek closure of declaring ``v`` the source of component
        ``comp``: (directed edges committed, residual component masks)."""
        key = (comp, v)
        got = self._rooted_memo.get(key)
        if got is not None:
            return got
        n = max(comp.bit_length(), 1)
        g = PDAG(n)
        dist = _bfs_levels(self.und, comp, v)
        for u in sorted(dist):
            du = dist[u]
            for w in iter_bits(self.und[u] & comp):
                dw = dist[w]
                if dw > du:
                    g.add_directed(u, w)
                elif dw == du and u < w:
                    g.add_undirected(u, w)
        g = meek_close(g)
        oriented = list(g.directed_edges())
        comps = []
        for comp_set in g.undirected_components():
            cm = 0
            for x in comp_set:
                cm |= 1 << x
            comps.append(cm)
        got = (oriented, comps)
        self._rooted_memo[key] = got
        return got

    def w(self, comp: int, v: int) -> int:
        key = (comp, v)
        got = self._w_memo.get(key)
        if got is not None:
            return got
        _, residual = self.rooted(comp, v)
        total = 1
        for cm in residual:
            total *= self.sum_w(cm)
        self._w_memo[key] = total
        return total

    def sum_w(self, comp: int) -> int:
        got = self._sum_memo.get(comp)
        if got is not None:
            return got
        total = sum(self.w(comp, v) for v in iter_bits(comp))
        self._sum_memo[comp] = total
        return total


def _undirected_masks(g: PDAG) -> list[int]:
    if g.num_directed():
        raise InputValidationError("expected a fully undirected graph")
    return [g.und_mask(v) for v in range(g.n)]


def _connected_mask(g: PDAG) -> int:
    """Bitmask of the single undirected component; error if several."""
    comps = g.undirected_components()
    if len(comps) > 1:
        raise InputValidationError("expected a connected undirected graph")
    mask = 0
    for v in (comps[0] if comps else ()):
        mask |= 1 << v
    return mask


def flowed(v: int, g: PDAG) -> set[tuple[int, int]]:
    """Orientations forced by declaring ``v`` the source of ``g``.

    Every edge between vertices at unequal hop distance from ``v``
    points away from the smaller distance; equidistant edges are left
    out.
    """
    und = _undirected_masks(g)
    mask = _connected_mask(g)
    if mask and not mask >> v & 1:
        raise InputValidationError(f"source {v} is not in the connected component")
    g._check_vertex(v)
    dist = _bfs_levels(und, mask | (1 << v), v)
    out = set()
    for u, w in g.undirected_edges():
        du, dw = dist[u], dist[w]
        if du < dw:
            out.add((u, w))
        elif du > dw:
            out.add((w, u))
    return out


def w_count(v: int, g: PDAG) -> int:
    """Number of class members of ``g`` whose unique source vertex is ``v``."""
    und = _undirected_masks(g)
    mask = _connected_mask(g)
    g._check_vertex(v)
    if mask == 0:
        return 1  # edgeless graph: the empty orientation
    if not mask >> v & 1:
        raise InputValidationError(f"source {v} is not in the connected component")
    return _CountingSession(und).w(mask, v)


def class_size(ess: PDAG, validate: bool = True) -> int:
    """Exact number of DAGs in the class of ``ess``.

    Product over undirected components of the summed rooted counts; a
    fully directed essential graph has a class of size 1.
    """
    if validate:
        validate_essential(ess, raise_on_invalid=True)
    und = [ess.und_mask(v) for v in range(ess.n)]
    session = _CountingSession(und)
    total = 1
    for comp_set in ess.undirected_components():
        cm = 0
        for v in comp_set:
            cm |= 1 << v
        total *= session.sum_w(cm)
    return total


def _rand_edge_masks(
    session: _CountingSession, comp: int, rng: random.Random
) -> set[tuple[int, int]]:
    """Uniform complete orientation of one connected component.

    The source is drawn by exact integer sampling over the rooted
    counts (no floating point), its forced edges committed, and the
    equidistant residual handled recursively.
    """
    out: set[tuple[int, int]] = set()
    stack = [comp]
    while stack:
        cm = stack.pop()
        weights = [(v, session.w(cm, v)) for v in iter_bits(cm)]
        total = sum(w for _, w in weights)
        pick = rng.randrange(total)
        acc = 0
        source = weights[-1][0]
        for v, w in weights:
            acc += w
            if pick < acc:
                source = v
                break
        oriented, residual = session.rooted(cm, source)
        out.update(oriented)
        stack.extend(residual)
    return out


def rand_edge(g: PDAG, rng: random.Random) -> set[tuple[int, int]]:
    """A uniform draw over the class members of a connected undirected
    graph, as a set of directed pairs covering every edge."""
    und = _undirected_masks(g)
    mask = _connected_mask(g)
    if mask == 0:
        return set()
    return _rand_edge_masks(_CountingSession(und), mask, rng)


def sample_member(
    ess: PDAG, rng: random.Random, validate: bool = True, session: "_CountingSession | None" = None
) -> SampledMember:
    """Uniform draw from the class of ``ess``.

    Components are oriented independently; a fully directed essential
    graph is returned unchanged.
    """
    if validate:
        validate_essential(ess, raise_on_invalid=True)
    if session is None:
        session = _CountingSession([ess.und_mask(v) for v in range(ess.n)])
    dag = ess.copy()
    for comp_set in ess.undirected_components():
        cm = 0
        for v in comp_set:
            cm |= 1 << v
        for tail, head in sorted(_rand_edge_masks(session, cm, rng)):
            dag.orient(tail, head)
    return SampledMember(dag=dag, provenance="uniform")


def counting_session(ess: PDAG) -> _CountingSession:
    """Shared memo table for repeated sampling from one essential graph."""
    return _CountingSession([ess.und_mask(v) for v in range(ess.n)])

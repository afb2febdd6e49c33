"""Partially directed graphs over dense integer vertex ids.

One representation covers skeletons, DAGs, essential graphs and the
intermediate states of orientation propagation: every unordered vertex
pair is absent, undirected, or directed one way.  Adjacency is stored as
per-vertex bitmasks (plain Python ints), which keeps the rule checks in
the orientation code down to a handful of bit operations and makes every
iteration order ascending-by-id, hence deterministic.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator, Optional, Sequence

from .errors import CycleError, InputValidationError


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class PDAG:
    """A partially directed graph on vertices ``0..n-1``.

    ``names`` is an optional label table (gene names etc.); all
    algorithms operate on the integer ids.
    """

    __slots__ = ("n", "names", "_und", "_par", "_chi")

    def __init__(self, n: int, names: Optional[Sequence[str]] = None):
        if n < 0:
            raise InputValidationError("vertex count must be nonnegative")
        if names is not None and len(names) != n:
            raise InputValidationError("name table length must equal vertex count")
        self.n = n
        self.names = list(names) if names is not None else None
        self._und = [0] * n
        self._par = [0] * n
        self._chi = [0] * n

    # -- construction ---------------------------------------------------

    @classmethod
    def from_edges(
        cls,
        n: int,
        directed: Iterable[tuple[int, int]] = (),
        undirected: Iterable[tuple[int, int]] = (),
        names: Optional[Sequence[str]] = None,
    ) -> "PDAG":
        g = cls(n, names)
        for u, v in directed:
            g.add_directed(u, v)
        for u, v in undirected:
            g.add_undirected(u, v)
        return g

    def copy(self) -> "PDAG":
        g = PDAG.__new__(PDAG)
        g.n = self.n
        g.names = self.names
        g._und = list(self._und)
        g._par = list(self._par)
        g._chi = list(self._chi)
        return g

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise InputValidationError(f"vertex id {v} out of range [0, {self.n})")

    def _check_new_pair(self, u: int, v: int) -> None:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise InputValidationError(f"self-pair on vertex {u}")
        if self.has_edge(u, v):
            raise InputValidationError(f"pair {{{u},{v}}} already present")

    def add_undirected(self, u: int, v: int) -> None:
        self._check_new_pair(u, v)
        self._und[u] |= 1 << v
        self._und[v] |= 1 << u

    def add_directed(self, tail: int, head: int) -> None:
        self._check_new_pair(tail, head)
        self._chi[tail] |= 1 << head
        self._par[head] |= 1 << tail

    def orient(self, tail: int, head: int) -> None:
        """Turn the undirected pair {tail, head} into tail -> head."""
        if not self.is_undirected(tail, head):
            raise InputValidationError(f"pair {{{tail},{head}}} is not undirected")
        self._und[tail] &= ~(1 << head)
        self._und[head] &= ~(1 << tail)
        self._chi[tail] |= 1 << head
        self._par[head] |= 1 << tail

    # -- pair queries ---------------------------------------------------

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self._und[u] | self._par[u] | self._chi[u]) >> v & 1)

    def is_undirected(self, u: int, v: int) -> bool:
        return bool(self._und[u] >> v & 1)

    def is_directed(self, tail: int, head: int) -> bool:
        return bool(self._chi[tail] >> head & 1)

    # -- adjacency masks ------------------------------------------------

    def und_mask(self, v: int) -> int:
        return self._und[v]

    def parents_mask(self, v: int) -> int:
        return self._par[v]

    def children_mask(self, v: int) -> int:
        return self._chi[v]

    def adj_mask(self, v: int) -> int:
        return self._und[v] | self._par[v] | self._chi[v]

    # -- edge iteration -------------------------------------------------

    def undirected_edges(self) -> Iterator[tuple[int, int]]:
        """Undirected pairs (u, v) with u < v, ascending."""
        for u in range(self.n):
            for v in iter_bits(self._und[u] >> (u + 1) << (u + 1)):
                yield (u, v)

    def directed_edges(self) -> Iterator[tuple[int, int]]:
        """Directed pairs (tail, head), ascending by tail then head."""
        for u in range(self.n):
            for v in iter_bits(self._chi[u]):
                yield (u, v)

    def num_undirected(self) -> int:
        return sum(self._und[v].bit_count() for v in range(self.n)) // 2

    def num_directed(self) -> int:
        return sum(self._chi[v].bit_count() for v in range(self.n))

    def degree_undirected(self, v: int) -> int:
        return self._und[v].bit_count()

    # -- equality -------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PDAG):
            return NotImplemented
        return (
            self.n == other.n
            and self._und == other._und
            and self._chi == other._chi
        )

    def __hash__(self) -> int:
        return hash((self.n, tuple(self._und), tuple(self._chi)))

    def __repr__(self) -> str:
        d = list(self.directed_edges())
        u = list(self.undirected_edges())
        return f"PDAG(n={self.n}, directed={d}, undirected={u})"

    # -- structural queries ---------------------------------------------

    def undirected_components(self) -> list[set[int]]:
        """Connected components of the undirected subgraph.

        Isolated vertices (no undirected edge) are excluded; components
        are ordered by their smallest contained id.
        """
        seen = 0
        comps = []
        for s in range(self.n):
            if seen >> s & 1 or not self._und[s]:
                continue
            frontier = 1 << s
            comp = 0
            while frontier:
                comp |= frontier
                nxt = 0
                for v in iter_bits(frontier):
                    nxt |= self._und[v]
                frontier = nxt & ~comp
            seen |= comp
            comps.append(set(iter_bits(comp)))
        return comps

    def bfs_distances(self, source: int) -> dict[int, int]:
        """Hop counts from ``source`` within its undirected component."""
        self._check_vertex(source)
        dist = {source: 0}
        q = deque([source])
        while q:
            v = q.popleft()
            for w in iter_bits(self._und[v]):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    q.append(w)
        return dist

    def v_structures(self) -> set[tuple[int, int, int]]:
        """All triples (a, b, c) with a -> b <- c, {a,c} absent, a < c."""
        out = set()
        for b in range(self.n):
            pa = self._par[b]
            for a in iter_bits(pa):
                for c in iter_bits(pa >> (a + 1) << (a + 1)):
                    if not self.has_edge(a, c):
                        out.add((a, b, c))
        return out

    def topological_order(self) -> list[int]:
        """Topological order of the directed part, or raise CycleError.

        Undirected pairs are ignored; ties go to the smallest id.
        """
        indeg = [self._par[v].bit_count() for v in range(self.n)]
        import heapq

        heap = [v for v in range(self.n) if indeg[v] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            v = heapq.heappop(heap)
            order.append(v)
            for w in iter_bits(self._chi[v]):
                indeg[w] -= 1
                if indeg[w] == 0:
                    heapq.heappush(heap, w)
        if len(order) < self.n:
            raise CycleError(self._find_directed_cycle())
        return order

    def _find_directed_cycle(self) -> list[int]:
        color = [0] * self.n  # 0 unseen, 1 on stack, 2 done
        stack_path: list[int] = []

        def dfs(v: int) -> Optional[list[int]]:
            color[v] = 1
            stack_path.append(v)
            for w in iter_bits(self._chi[v]):
                if color[w] == 1:
                    i = stack_path.index(w)
                    return stack_path[i:] + [w]
                if color[w] == 0:
                    found = dfs(w)
                    if found:
                        return found
            stack_path.pop()
            color[v] = 2
            return None

        for s in range(self.n):
            if color[s] == 0:
                cyc = dfs(s)
                if cyc:
                    return cyc
        raise AssertionError("no directed cycle found")

    def is_acyclic(self) -> bool:
        try:
            self.topological_order()
        except CycleError:
            return False
        return True

    def is_dag(self) -> bool:
        return self.num_undirected() == 0 and self.is_acyclic()

    def is_chordal(self) -> tuple[bool, Optional[list[int]]]:
        """Chordality of a fully undirected graph.

        Runs maximum-cardinality search and verifies the resulting
        ordering with the clique (perfect elimination) condition.
        Returns ``(True, peo)`` with a perfect elimination ordering
        witness, or ``(False, None)``.
        """
        if self.num_directed():
            raise InputValidationError("chordality is defined on undirected graphs")
        n = self.n
        weight = [0] * n
        visited = 0
        mcs: list[int] = []
        for _ in range(n):
            best = max(
                (v for v in range(n) if not visited >> v & 1),
                key=lambda v: (weight[v], -v),
            )
            mcs.append(best)
            visited |= 1 << best
            for w in iter_bits(self._und[best] & ~visited):
                weight[w] += 1
        # Reverse MCS order is a candidate PEO; chordal iff each vertex's
        # later neighbors form a clique.
        peo = mcs[::-1]
        pos = [0] * n
        for i, v in enumerate(peo):
            pos[v] = i
        for v in peo:
            later = [w for w in iter_bits(self._und[v]) if pos[w] > pos[v]]
            if not later:
                continue
            u = min(later, key=lambda w: pos[w])
            for w in later:
                if w != u and not self.is_undirected(u, w):
                    return False, None
        return True, peo

    def skeleton(self) -> "PDAG":
        """Fully undirected copy (all orientations dropped)."""
        g = PDAG(self.n, self.names)
        for v in range(self.n):
            g._und[v] = self._und[v] | self._par[v] | self._chi[v]
        return g


def incident_orientations(dag: PDAG, targets: Sequence[int]) -> set[tuple[int, int]]:
    """Directed edges of ``dag`` with tail or head in ``targets``.

    This is what a single-vertex intervention on each target reveals:
    every edge touching an intervened vertex, with its true orientation.
    """
    for t in targets:
        if not (0 <= t < dag.n):
            raise InputValidationError(f"intervention target {t} out of range")
    out: set[tuple[int, int]] = set()
    for t in targets:
        for h in iter_bits(dag.children_mask(t)):
            out.add((t, h))
        for p in iter_bits(dag.parents_mask(t)):
            out.add((p, t))
    return out


def check_intervention_set(targets: Sequence[int], n: int) -> tuple[int, ...]:
    """Validate an ordered set of distinct target ids for a graph of order n."""
    seen = set()
    for t in targets:
        if not (0 <= t < n):
            raise InputValidationError(f"intervention target {t} out of range [0, {n})")
        if t in seen:
            raise InputValidationError(f"duplicate intervention target {t}")
        seen.add(t)
    return tuple(targets)

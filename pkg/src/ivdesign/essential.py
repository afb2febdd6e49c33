"""Essential graph (CPDAG) computation from a ground-truth DAG.

The observational stage is simulated with a perfect oracle: the
essential graph is the Meek closure of the skeleton with only the
v-structures oriented.  Sample-based discovery is out of scope.
"""

from __future__ import annotations

from .errors import CycleError, InputValidationError
from .graph import PDAG
from .meek import meek_close


def essential_of(dag: PDAG) -> PDAG:
    """Essential graph of the Markov equivalence class of ``dag``."""
    if not dag.is_dag():
        if dag.num_undirected():
            raise InputValidationError("essential_of requires a fully directed DAG")
        raise CycleError(dag._find_directed_cycle())
    g = dag.skeleton()
    for a, b, c in dag.v_structures():
        # v-structures can share edges; orient each pair once
        if g.is_undirected(a, b):
            g.orient(a, b)
        if g.is_undirected(c, b):
            g.orient(c, b)
    return meek_close(g)


def validate_essential(g: PDAG, raise_on_invalid: bool = False) -> bool:
    """Check the essential-graph validity invariant.

    Directed part acyclic, every undirected component chordal, and the
    graph is a fixpoint of the Meek rules.  With ``raise_on_invalid`` a
    diagnostic naming the offending component or pair is raised instead
    of returning False.
    """
    try:
        g.topological_order()
    except CycleError as e:
        if raise_on_invalid:
            raise InputValidationError(f"directed part is cyclic: {e}") from e
        return False
    for comp in g.undirected_components():
        sub = _undirected_subgraph(g, comp)
        ok, _ = sub.is_chordal()
        if not ok:
            if raise_on_invalid:
                raise InputValidationError(
                    f"undirected component {sorted(comp)} is not chordal"
                )
            return False
    closed = meek_close(g)
    if closed != g:
        if raise_on_invalid:
            pair = next(
                (u, v) for u, v in g.undirected_edges() if not closed.is_undirected(u, v)
            )
            raise InputValidationError(
                f"not closed under Meek rules: pair {pair} has a pending orientation"
            )
        return False
    return True


def _undirected_subgraph(g: PDAG, vertices: set[int]) -> PDAG:
    """Induced subgraph on ``vertices`` keeping only undirected pairs.

    Vertex ids are preserved (the subgraph has the same order as ``g``).
    """
    mask = 0
    for v in vertices:
        mask |= 1 << v
    sub = PDAG(g.n)
    for v in vertices:
        sub._und[v] = g.und_mask(v) & mask
    return sub

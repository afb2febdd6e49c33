"""Text formats: the native graph format and DREAM3-style gold-standard
TSV ingestion.

Native format, one record per line::

    # pdag n=<n>
    # names g1,g2,g3        (optional)
    0 > 1                    directed 0 -> 1
    1 - 2                    undirected

Comments start with '#'; vertices may be written as ids or, when a name
table is present, as names.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Optional, Union

from .errors import CycleError, InputValidationError, ParseError
from .graph import PDAG


def dumps_graph(g: PDAG) -> str:
    lines = [f"# pdag n={g.n}"]
    if g.names is not None:
        lines.append("# names " + ",".join(g.names))
    for u, v in g.directed_edges():
        lines.append(f"{u} > {v}")
    for u, v in g.undirected_edges():
        lines.append(f"{u} - {v}")
    return "\n".join(lines) + "\n"


def write_graph(g: PDAG, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps_graph(g))


_HEADER_RE = re.compile(r"#\s*pdag\s+n=(\d+)\s*$")
_EDGE_RE = re.compile(r"(\S+)\s*([->])\s*(\S+)\s*$")


def loads_graph(text: str) -> PDAG:
    n: Optional[int] = None
    names: Optional[list[str]] = None
    name_to_id: dict[str, int] = {}
    g: Optional[PDAG] = None

    def resolve(token: str, line_no: int) -> int:
        if token in name_to_id:
            return name_to_id[token]
        try:
            v = int(token)
        except ValueError:
            raise ParseError(f"unknown vertex {token!r}", line_no) from None
        if not (0 <= v < n):
            raise ParseError(f"vertex id {v} out of range [0, {n})", line_no)
        return v

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _HEADER_RE.match(line)
            if m:
                if n is not None:
                    raise ParseError("duplicate header", line_no)
                n = int(m.group(1))
                continue
            if line.startswith("# names ") and n is not None:
                names = line[len("# names "):].split(",")
                if len(names) != n:
                    raise ParseError("name table length does not match n", line_no)
                name_to_id = {nm: i for i, nm in enumerate(names)}
            continue
        if n is None:
            raise ParseError("missing '# pdag n=<n>' header before edges", line_no)
        if g is None:
            g = PDAG(n, names)
        m = _EDGE_RE.match(line)
        if not m:
            raise ParseError(f"unrecognized record {line!r}", line_no)
        u = resolve(m.group(1), line_no)
        v = resolve(m.group(3), line_no)
        if u == v:
            raise ParseError(f"self-pair on vertex {u}", line_no)
        directed = m.group(2) == ">"
        if g.has_edge(u, v):
            same = g.is_directed(u, v) if directed else g.is_undirected(u, v)
            if same:
                continue  # harmless repeat
            raise ParseError(f"conflicting state for pair {{{u},{v}}}", line_no)
        if directed:
            g.add_directed(u, v)
        else:
            g.add_undirected(u, v)
    if n is None:
        raise ParseError("missing '# pdag n=<n>' header")
    return g if g is not None else PDAG(n, names)


def parse_graph(path: Union[str, Path]) -> PDAG:
    return loads_graph(Path(path).read_text())


def ingest_dream3(path: Union[str, Path]) -> PDAG:
    """Gold-standard TSV: ``source<TAB>target<TAB>flag`` per line, flag 1
    drawing the regulatory edge.  Gene names are interned to dense ids;
    a cyclic network is rejected (the pipeline needs a DAG ground truth).
    """
    name_to_id: dict[str, int] = {}
    edges: dict[tuple[int, int], int] = {}

    def intern(name: str) -> int:
        if name not in name_to_id:
            name_to_id[name] = len(name_to_id)
        return name_to_id[name]

    text = Path(path).read_text()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError(f"expected 'source<TAB>target<TAB>flag', got {line!r}", line_no)
        src, dst, flag_s = (p.strip() for p in parts)
        if flag_s not in ("0", "1"):
            raise ParseError(f"flag must be 0 or 1, got {flag_s!r}", line_no)
        if src == dst:
            raise ParseError(f"self-regulation {src!r} is not representable", line_no)
        u, v = intern(src), intern(dst)
        flag = int(flag_s)
        prev = edges.get((u, v))
        if prev is not None and prev != flag:
            raise ParseError(f"contradictory duplicate edge {src} -> {dst}", line_no)
        edges[(u, v)] = flag

    names = [None] * len(name_to_id)
    for nm, i in name_to_id.items():
        names[i] = nm
    g = PDAG(len(names), names)
    for (u, v), flag in edges.items():
        if not flag:
            continue
        if g.is_directed(v, u):
            raise CycleError(
                [names[u], names[v], names[u]],
                f"mutual regulation between {names[u]} and {names[v]}",
            )
        g.add_directed(u, v)
    try:
        g.topological_order()
    except CycleError as e:
        named = [names[v] for v in e.cycle]
        raise CycleError(named, "gold standard is cyclic: " + " -> ".join(named)) from None
    return g

"""DIMACS-style graph text format.

::

    c optional comment lines
    p edge <n_vertices> <n_edges>
    e <u> <v>            1-based vertex numbers

Duplicate edge lines collapse to one edge; self-loops are rejected.
"""

from __future__ import annotations

from .maxclique import Graph

__all__ = ["GraphFormatError", "parse_graph", "format_graph"]


class GraphFormatError(ValueError):
    pass


def parse_graph(data) -> Graph:
    """Parse DIMACS text (``str`` or ``bytes``) into a :class:`Graph` with 0-based vertices."""
    text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else str(data)
    n = None
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise GraphFormatError(f"line {lineno}: second 'p' header")
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise GraphFormatError(f"line {lineno}: malformed header {raw.strip()!r}")
            try:
                n, _ = int(parts[2]), int(parts[3])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: malformed header {raw.strip()!r}") from None
            if n < 1:
                raise GraphFormatError(f"line {lineno}: graph needs at least one vertex")
        elif tag == "e":
            if n is None:
                raise GraphFormatError(f"line {lineno}: edge before 'p' header")
            if len(parts) != 3:
                raise GraphFormatError(f"line {lineno}: malformed edge {raw.strip()!r}")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: malformed edge {raw.strip()!r}") from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphFormatError(f"line {lineno}: vertex out of range 1..{n} in {raw.strip()!r}")
            if u == v:
                raise GraphFormatError(f"line {lineno}: self-loop at vertex {u}")
            edges.add((min(u, v) - 1, max(u, v) - 1))
        else:
            raise GraphFormatError(f"line {lineno}: unknown line type {tag!r}")
    if n is None:
        raise GraphFormatError("missing 'p edge <n> <m>' header")
    return Graph(n, sorted(edges))


def format_graph(g: Graph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"c {row}" for row in comment.splitlines())
    edges = g.edges()
    lines.append(f"p edge {g.n_vertices} {len(edges)}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in edges)
    return "\n".join(lines) + "\n"

"""Edge-list text and graph6 readers/writers."""

from __future__ import annotations

from pathlib import Path

from .graph import SimpleGraph

GRAPH6_HEADER = ">>graph6<<"


def parse_edgelist(text: str) -> SimpleGraph:
    """Parse ``n m`` followed by ``m`` lines ``u v``; ``#`` comments and blank lines ignored."""
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows:
        raise ValueError("edge list is empty")
    if len(rows[0]) != 2:
        raise ValueError("first line must be 'n m'")
    n, m = int(rows[0][0]), int(rows[0][1])
    body = rows[1:]
    if len(body) != m:
        raise ValueError(f"header announces {m} edges, found {len(body)}")
    edges = []
    for k, row in enumerate(body, start=2):
        if len(row) != 2:
            raise ValueError(f"edge line {k} must hold two vertices")
        edges.append((int(row[0]), int(row[1])))
    return SimpleGraph.from_edges(n, edges)


def format_edgelist(g: SimpleGraph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines += [f"{u} {v}" for u, v in g.edge_list()]
    return "\n".join(lines) + "\n"


def _encode_n(n: int) -> bytes:
    if n < 0:
        raise ValueError("negative order")
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    if n <= 68719476735:
        return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])
    raise ValueError("graph too large for graph6")


def to_graph6(g: SimpleGraph, header: bool = False) -> str:
    """Encode the upper triangle column by column, six bits per byte, offset 63."""
    out = bytearray(GRAPH6_HEADER.encode() if header else b"")
    out += _encode_n(g.n)
    bitbuf, nbits = 0, 0
    for j in range(1, g.n):
        for i in range(j):
            bitbuf = (bitbuf << 1) | ((i, j) in g.edges)
            nbits += 1
            if nbits == 6:
                out.append(bitbuf + 63)
                bitbuf, nbits = 0, 0
    if nbits:
        out.append((bitbuf << (6 - nbits)) + 63)
    return out.decode("ascii")


def from_graph6(text: str) -> SimpleGraph:
    s = text.strip()
    if s.startswith(GRAPH6_HEADER):
        s = s[len(GRAPH6_HEADER):]
    data = [c - 63 for c in s.encode("ascii")]
    if any(not 0 <= c <= 63 for c in data):
        raise ValueError("graph6 bytes must lie in 63..126")
    if not data:
        raise ValueError("empty graph6 string")
    if data[0] != 63:
        n, pos = data[0], 1
    elif len(data) > 1 and data[1] == 63:
        n = 0
        for c in data[2:8]:
            n = (n << 6) | c
        pos = 8
    else:
        n = 0
        for c in data[1:4]:
            n = (n << 6) | c
        pos = 4
    need = (n * (n - 1) // 2 + 5) // 6
    body = data[pos:]
    if len(body) != need:
        raise ValueError(f"graph6 body has {len(body)} bytes, expected {need}")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte, off = divmod(k, 6)
            if (body[byte] >> (5 - off)) & 1:
                edges.append((i, j))
            k += 1
    return SimpleGraph.from_edges(n, edges)


def read_graph(source: str | Path) -> SimpleGraph:
    """Read a graph file, sniffing graph6 versus edge-list text."""
    text = Path(source).read_text()
    return parse_graph_text(text)


def parse_graph_text(text: str) -> SimpleGraph:
    stripped = text.strip()
    first = stripped.splitlines()[0].strip() if stripped else ""
    if first.startswith(GRAPH6_HEADER) or (first and " " not in first and not first.startswith("#")
                                           and len(stripped.splitlines()) == 1):
        return from_graph6(first)
    return parse_edgelist(text)

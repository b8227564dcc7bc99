"""graph6 and edge-list readers/writers.

graph6: ``N(n)`` header followed by the upper triangle of the adjacency
matrix in column order (x(0,1), x(0,2), x(1,2), x(0,3), ...), six bits per
byte, each byte offset by 63.  Only simple undirected graphs are accepted;
sparse6 (``:``) and digraph6 (``&``) inputs are rejected.
"""

from __future__ import annotations

from .graph import Graph

__all__ = ["GraphFormatError", "parse_graph6", "to_graph6", "parse_edge_list", "to_edge_list", "parse_graph"]

HEADER = ">>graph6<<"


class GraphFormatError(ValueError):
    """Malformed graph input; ``offset`` is the 0-based byte/char position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


def _encode_n(n: int) -> str:
    if n < 63:
        return chr(n + 63)
    if n < 258048:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n < 1 << 36:
        return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise ValueError("graph too large for graph6")


def to_graph6(g: Graph) -> str:
    """Encode ``g`` as a graph6 string (no header, no newline)."""
    bits = []
    rows = g.adj.rows
    for j in range(1, g.n):
        rj = rows[j]
        for i in range(j):
            bits.append((rj >> i) & 1)
    bits.extend([0] * (-len(bits) % 6))
    body = []
    for t in range(0, len(bits), 6):
        v = 0
        for b in bits[t : t + 6]:
            v = (v << 1) | b
        body.append(chr(v + 63))
    return _encode_n(g.n) + "".join(body)


def _sixes(text: str, start: int, count: int) -> int:
    v = 0
    for t in range(start, start + count):
        if t >= len(text):
            raise GraphFormatError("truncated size header", t)
        c = ord(text[t]) - 63
        if not 0 <= c < 64:
            raise GraphFormatError(f"byte {text[t]!r} outside graph6 range", t)
        v = (v << 6) | c
    return v


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 string.  A leading ``>>graph6<<`` and surrounding whitespace are ignored."""
    base = len(text) - len(text.lstrip())
    s = text.strip()
    if s.startswith(HEADER):
        base += len(HEADER)
        s = s[len(HEADER) :]
    if not s:
        raise GraphFormatError("empty graph6 string", base)
    if s[0] == ":":
        raise GraphFormatError("sparse6 input is not supported", base)
    if s[0] == "&":
        raise GraphFormatError("digraph6 input is not supported", base)
    if s[0] != "~":
        n, pos = _sixes(s, 0, 1), 1
    elif len(s) > 1 and s[1] == "~":
        n, pos = _sixes(s, 2, 6), 8
        if n < 258048:
            raise GraphFormatError("non-canonical 8-byte size header", base)
    else:
        n, pos = _sixes(s, 1, 3), 4
        if n < 63:
            raise GraphFormatError("non-canonical 4-byte size header", base)
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = s[pos:]
    if len(body) != need:
        where = base + pos + min(len(body), need)
        raise GraphFormatError(f"expected {need} data bytes for n={n}, got {len(body)}", where)
    rows = [0] * n
    i, j = 0, 1
    for t, ch in enumerate(body):
        c = ord(ch) - 63
        if not 0 <= c < 64:
            raise GraphFormatError(f"byte {ch!r} outside graph6 range", base + pos + t)
        for shift in range(5, -1, -1):
            bit = (c >> shift) & 1
            if j >= n:
                if bit:
                    raise GraphFormatError("nonzero padding bits", base + pos + t)
                continue
            if bit:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            i += 1
            if i == j:
                i, j = 0, j + 1
    return Graph.from_masks(rows)


def parse_edge_list(text: str, n: int | None = None) -> Graph:
    """Parse whitespace-separated ``u v`` lines (1-based).

    An optional first line ``n <count>`` fixes the vertex count; otherwise it
    is the largest endpoint seen.  ``#`` starts a comment.
    """
    edges: list[tuple[int, int, int]] = []
    declared = n
    offset = 0
    first = True
    for line in text.splitlines(keepends=True):
        content = line.split("#", 1)[0]
        tokens = content.split()
        lead = len(content) - len(content.lstrip())
        if tokens:
            if first and tokens[0] == "n":
                if len(tokens) != 2 or not tokens[1].isdigit():
                    raise GraphFormatError("header must be 'n <count>'", offset + lead)
                declared = int(tokens[1])
            else:
                if len(tokens) != 2:
                    raise GraphFormatError(f"expected two endpoints, got {len(tokens)} tokens", offset + lead)
                try:
                    u, v = int(tokens[0]), int(tokens[1])
                except ValueError:
                    raise GraphFormatError("endpoints must be integers", offset + lead) from None
                if u < 1 or v < 1:
                    raise GraphFormatError("vertices are 1-based", offset + lead)
                if u == v:
                    raise GraphFormatError(f"loop at vertex {u}", offset + lead)
                edges.append((u, v, offset + lead))
            first = False
        offset += len(line)
    if declared is None:
        declared = max((max(u, v) for u, v, _ in edges), default=0)
    for u, v, where in edges:
        if max(u, v) > declared:
            raise GraphFormatError(f"edge ({u}, {v}) exceeds declared n={declared}", where)
    return Graph.from_edges(declared, [(u, v) for u, v, _ in edges])


def to_edge_list(g: Graph) -> str:
    lines = [f"n {g.n}"] + [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    """graph6 if the first token decodes, else an edge list."""
    tokens = text.split()
    if len(tokens) == 1 and tokens[0] != "n":
        try:
            return parse_graph6(text)
        except GraphFormatError:
            if not tokens[0].lstrip("-").isdigit():
                raise
    elif tokens and tokens[0].startswith(HEADER):
        return parse_graph6(text)
    return parse_edge_list(text)

"""Simple graphs as symmetric zero-diagonal GF(2) matrices.

Vertices are labelled ``1..n``.  Internally vertex ``v`` is row/bit ``v - 1``
of the adjacency matrix.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .gf2 import Gf2Matrix, rank

__all__ = [
    "Graph",
    "TwinClasses",
    "AdjacentTwinMatching",
    "VERTEX_BUDGET",
    "empty",
    "complete",
    "cycle",
    "path",
    "star",
    "complete_bipartite",
    "k_triangles",
    "disjoint_union",
    "graph_Bk",
    "graph_Tk",
    "twin_classes",
    "reduce_twins",
    "adjacent_twin_matching",
    "r2",
]

EPS = None
VERTEX_BUDGET = 1 << 16


@dataclass(frozen=True)
class Graph:
    """A simple undirected graph.

    ``bipartition`` optionally labels each vertex ``"A"`` or ``"B"``;
    ``family`` records how a generator built the graph, e.g. ``("T", 2)``;
    ``labels`` optionally names vertices (the word strings of B_k / T_k).
    """

    n: int
    adj: Gf2Matrix
    bipartition: tuple[str, ...] | None = None
    family: tuple | None = field(default=None, compare=False)
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.adj.shape != (self.n, self.n):
            raise ValueError(f"adjacency must be {self.n}x{self.n}, got {self.adj.shape}")
        if not self.adj.is_symmetric_zero_diag():
            raise ValueError("adjacency must be symmetric with zero diagonal")
        if self.bipartition is not None:
            if len(self.bipartition) != self.n or set(self.bipartition) - {"A", "B"}:
                raise ValueError("bipartition must give one of 'A'/'B' per vertex")
            for u, v in self.edges():
                if self.bipartition[u - 1] == self.bipartition[v - 1]:
                    raise ValueError(f"edge {u}-{v} lies inside side {self.bipartition[u - 1]}")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], **kw) -> "Graph":
        if n < 0:
            raise ValueError("n must be non-negative")
        rows = [0] * n
        for u, v in edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge ({u}, {v}) outside 1..{n}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            rows[u - 1] |= 1 << (v - 1)
            rows[v - 1] |= 1 << (u - 1)
        return cls(n, Gf2Matrix(n, n, tuple(rows)), **kw)

    @classmethod
    def from_masks(cls, masks: Sequence[int], **kw) -> "Graph":
        n = len(masks)
        return cls(n, Gf2Matrix(n, n, tuple(masks)), **kw)

    # -- queries ----------------------------------------------------------

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def mask(self, v: int) -> int:
        """Neighbourhood of ``v`` as a bitmask (bit ``u - 1`` for neighbour ``u``)."""
        return self.adj.rows[v - 1]

    def neighbors(self, v: int) -> set[int]:
        return _bits_to_vertices(self.adj.rows[v - 1])

    def closed_neighbors(self, v: int) -> set[int]:
        return self.neighbors(v) | {v}

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj.rows[u - 1] >> (v - 1)) & 1)

    def degree(self, v: int) -> int:
        return self.adj.rows[v - 1].bit_count()

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for i, r in enumerate(self.adj.rows):
            r >>= i + 1
            j = i + 1
            while r:
                if r & 1:
                    out.append((i + 1, j + 1))
                r >>= 1
                j += 1
        return out

    @property
    def m(self) -> int:
        return sum(r.bit_count() for r in self.adj.rows) // 2

    def r2(self) -> int:
        return rank(self.adj)

    def induced(self, keep: Iterable[int]) -> "Graph":
        """Induced subgraph on ``keep``, relabelled ``1..len(keep)`` in ascending order."""
        keep = sorted(set(keep))
        for v in keep:
            if not 1 <= v <= self.n:
                raise ValueError(f"vertex {v} outside 1..{self.n}")
        idx = [v - 1 for v in keep]
        sub = self.adj.submatrix(idx, idx)
        bip = None
        if self.bipartition is not None:
            bip = tuple(self.bipartition[i] for i in idx)
        labels = None if self.labels is None else tuple(self.labels[i] for i in idx)
        return Graph(len(keep), sub, bipartition=bip, labels=labels)

    def delete(self, drop: Iterable[int]) -> "Graph":
        drop = set(drop)
        return self.induced(v for v in self.vertices if v not in drop)

    def components(self) -> list[list[int]]:
        seen = 0
        comps = []
        for v in self.vertices:
            if (seen >> (v - 1)) & 1:
                continue
            comp = 1 << (v - 1)
            frontier = comp
            while frontier:
                nxt = 0
                f = frontier
                while f:
                    low = f & -f
                    nxt |= self.adj.rows[low.bit_length() - 1]
                    f ^= low
                frontier = nxt & ~comp
                comp |= nxt
            seen |= comp
            comps.append(sorted(_bits_to_vertices(comp)))
        return comps

    def is_forest(self) -> bool:
        return self.m == self.n - len(self.components())

    def bipartition_sides(self) -> tuple[str, ...] | None:
        """2-colouring by BFS from the least vertex of each component, or None."""
        if self.bipartition is not None:
            return self.bipartition
        side: dict[int, str] = {}
        for comp in self.components():
            root = comp[0]
            side[root] = "A"
            queue = [root]
            for u in queue:
                other = "B" if side[u] == "A" else "A"
                for w in sorted(self.neighbors(u)):
                    if w not in side:
                        side[w] = other
                        queue.append(w)
                    elif side[w] != other:
                        return None
        return tuple(side[v] for v in self.vertices)

    def with_bipartition(self) -> "Graph":
        sides = self.bipartition_sides()
        if sides is None:
            raise ValueError("graph is not bipartite")
        return Graph(self.n, self.adj, bipartition=sides, family=self.family, labels=self.labels)

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2

    def __repr__(self) -> str:
        tag = f" {self.family}" if self.family else ""
        return f"Graph(n={self.n}, m={self.m}{tag})"


def _bits_to_vertices(bits: int) -> set[int]:
    out = set()
    while bits:
        low = bits & -bits
        out.add(low.bit_length())
        bits ^= low
    return out


def r2(g: Graph) -> int:
    """2-rank: rank of the adjacency matrix over GF(2)."""
    return rank(g.adj)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


def empty(n: int) -> Graph:
    if n < 0:
        raise ValueError("n must be non-negative")
    return Graph.from_edges(n, [], family=("empty", n))


def complete(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete(n) requires n >= 1")
    full = (1 << n) - 1
    return Graph.from_masks([full ^ (1 << i) for i in range(n)], family=("complete", n))


def cycle(n: int) -> Graph:
    """C_n with edges 1-2-...-n-1."""
    if n < 3:
        raise ValueError("cycle(n) requires n >= 3")
    edges = [(i, i + 1) for i in range(1, n)] + [(n, 1)]
    return Graph.from_edges(n, edges, family=("cycle", n))


def path(n: int) -> Graph:
    """P_n on n vertices with edges 1-2-...-n."""
    if n < 1:
        raise ValueError("path(n) requires n >= 1")
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)], family=("path", n))


def star(leaves: int) -> Graph:
    """K_{1,leaves} with centre 1."""
    if leaves < 0:
        raise ValueError("leaves must be non-negative")
    return Graph.from_edges(leaves + 1, [(1, i) for i in range(2, leaves + 2)], family=("star", leaves))


def complete_bipartite(a: int, b: int) -> Graph:
    """K_{a,b} with side A = 1..a and side B = a+1..a+b."""
    if a < 0 or b < 0:
        raise ValueError("part sizes must be non-negative")
    edges = [(i, a + j) for i in range(1, a + 1) for j in range(1, b + 1)]
    return Graph.from_edges(a + b, edges, bipartition=("A",) * a + ("B",) * b, family=("complete_bipartite", a, b))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    """``g + h``: the vertices of ``h`` are shifted by ``g.n``."""
    shift = g.n
    rows = list(g.adj.rows) + [r << shift for r in h.adj.rows]
    bip = None
    if g.bipartition is not None and h.bipartition is not None:
        bip = g.bipartition + h.bipartition
    return Graph.from_masks(rows, bipartition=bip)


def k_triangles(k: int) -> Graph:
    """kK_3: triangle ``t`` occupies vertices ``3t-2, 3t-1, 3t``."""
    if k < 1:
        raise ValueError("k_triangles(k) requires k >= 1")
    edges = []
    for t in range(k):
        a, b, c = 3 * t + 1, 3 * t + 2, 3 * t + 3
        edges += [(a, b), (a, c), (b, c)]
    return Graph.from_edges(3 * k, edges, family=("triangles", k))


def _word_string(word: Sequence[int | None]) -> str:
    return "".join("ε" if c is None else str(c) for c in word)


def _check_budget(count: int, budget: int | None) -> None:
    budget = VERTEX_BUDGET if budget is None else budget
    if count > budget:
        raise ValueError(f"{count} vertices exceeds the vertex budget {budget}")


def _pack_rows(bool_rows) -> list[int]:
    """Pack rows of a boolean numpy matrix into ints (bit j = column j)."""
    packed = np.packbits(bool_rows, axis=1, bitorder="little")
    return [int.from_bytes(r.tobytes(), "little") for r in packed]


def graph_Bk(k: int, budget: int | None = None) -> Graph:
    """Graph on {0,1,ε}^k; adjacent iff an odd number of places are 0 vs 1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    _check_budget(3**k, budget)
    words = list(itertools.product((0, 1, EPS), repeat=k))
    codes = np.array([[2 if c is None else c for c in w] for w in words], dtype=np.int8)
    parity = np.zeros((len(words), len(words)), dtype=np.uint8)
    for i in range(k):
        col = codes[:, i]
        parity ^= ((col[:, None] + col[None, :]) == 1).astype(np.uint8)
    return Graph.from_masks(_pack_rows(parity.astype(bool)), family=("B", k),
                            labels=tuple(_word_string(w) for w in words))


def graph_Tk(k: int, budget: int | None = None) -> Graph:
    """Graph on {0,1,2,ε}^k; adjacent iff an odd number of places differ with neither ε."""
    if k < 1:
        raise ValueError("k must be >= 1")
    _check_budget(4**k, budget)
    words = list(itertools.product((0, 1, 2, EPS), repeat=k))
    codes = np.array([[3 if c is None else c for c in w] for w in words], dtype=np.int8)
    parity = np.zeros((len(words), len(words)), dtype=np.uint8)
    for i in range(k):
        col = codes[:, i]
        live = col != 3
        parity ^= ((col[:, None] != col[None, :]) & live[:, None] & live[None, :]).astype(np.uint8)
    return Graph.from_masks(_pack_rows(parity.astype(bool)), family=("T", k),
                            labels=tuple(_word_string(w) for w in words))


# ---------------------------------------------------------------------------
# Twins
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwinClasses:
    """Partitions of V by open neighbourhood N(v) and closed neighbourhood N[v]."""

    open_classes: tuple[tuple[int, ...], ...]
    closed_classes: tuple[tuple[int, ...], ...]


def _classes_by(keys: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    groups: dict[int, list[int]] = defaultdict(list)
    for i, key in enumerate(keys):
        groups[key].append(i + 1)
    return tuple(sorted(tuple(vs) for vs in groups.values()))


def twin_classes(g: Graph) -> TwinClasses:
    rows = g.adj.rows
    return TwinClasses(
        open_classes=_classes_by(rows),
        closed_classes=_classes_by([r | (1 << i) for i, r in enumerate(rows)]),
    )


def reduce_twins(g: Graph) -> tuple[Graph, dict[int, int]]:
    """Keep the least vertex of each open twin class.

    Returns the reduced graph and the map from old vertices onto new ones.
    Deleting a twin never creates new twins, so the result is twin-free.
    """
    classes = twin_classes(g).open_classes
    reps = sorted(c[0] for c in classes)
    new_index = {v: i + 1 for i, v in enumerate(reps)}
    mapping = {}
    for c in classes:
        for v in c:
            mapping[v] = new_index[c[0]]
    return g.induced(reps), mapping


@dataclass(frozen=True)
class AdjacentTwinMatching:
    """Vertex-disjoint edges ``(u, v)`` with N[u] = N[v]."""

    pairs: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def check(self, g: Graph, perfect: bool = True) -> None:
        seen: set[int] = set()
        for u, v in self.pairs:
            if u in seen or v in seen or u == v:
                raise ValueError(f"pair ({u}, {v}) is not vertex-disjoint from the others")
            seen |= {u, v}
            if not g.has_edge(u, v):
                raise ValueError(f"pair ({u}, {v}) is not an edge")
            if g.closed_neighbors(u) != g.closed_neighbors(v):
                raise ValueError(f"pair ({u}, {v}) are not adjacent twins")
        if perfect and len(seen) != g.n:
            raise ValueError("matching is not perfect")


def adjacent_twin_matching(g: Graph) -> AdjacentTwinMatching | None:
    """Perfect matching into adjacent-twin pairs, or None.

    Vertices in one closed class are pairwise adjacent twins, and adjacent
    twins always share a class, so a perfect matching exists iff every closed
    class has even size.
    """
    if g.n == 0:
        return None
    pairs = []
    for cls in twin_classes(g).closed_classes:
        if len(cls) % 2:
            return None
        pairs.extend((cls[i], cls[i + 1]) for i in range(0, len(cls), 2))
    return AdjacentTwinMatching(tuple(sorted(pairs)))

"""Explicit odd covers whose sizes match the known upper bounds.

Every public constructor verifies its output before returning it and raises
``ConstructionError`` if verification fails.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .cover import (
    EPS,
    Biclique,
    CoverCode,
    OddCover,
    Triclique,
    decode,
    extend_by_lemma,
    restrict,
    split_triclique,
    verify,
)
from .gf2 import Gf2Matrix, Gf2Vector, rank, solve_subset, symplectic_decompose
from .graph import AdjacentTwinMatching, Graph, adjacent_twin_matching, complete, k_triangles

__all__ = [
    "ConstructionError",
    "ConstructionResult",
    "forest_cover",
    "bipartite_cover",
    "odd_cycle_cover",
    "cycle_order",
    "adjacent_twin_cover",
    "adjacent_twin_words",
    "complete_cover",
    "complete_words",
    "rank_cover",
    "star_cover",
    "k_triangles_cover",
    "TWO_TRIANGLES_COVER",
    "FAMILIES",
    "construct",
    "applicable",
]


class ConstructionError(RuntimeError):
    pass


@dataclass(frozen=True)
class ConstructionResult:
    cover: OddCover
    formula: str
    family: str
    bound: int  # the size formula evaluated on the input

    @property
    def size(self) -> int:
        return len(self.cover)

    def metadata(self) -> dict:
        return {"family": self.family, "formula": self.formula, "size": self.size}


def _checked(g: Graph, cover: OddCover, family: str, formula: str, bound: int, exact: bool = True) -> ConstructionResult:
    report = verify(cover, g)
    if not report.ok:
        raise ConstructionError(f"{family} construction failed verification at {report.mismatches[:5]}")
    if exact and len(cover) != bound:
        raise ConstructionError(f"{family} construction has {len(cover)} bicliques, expected {formula} = {bound}")
    if len(cover) > bound:
        raise ConstructionError(f"{family} construction exceeds {formula} = {bound}")
    return ConstructionResult(cover, formula, family, bound)


# ---------------------------------------------------------------------------
# Forests: star partition from a minimum vertex cover
# ---------------------------------------------------------------------------


def _forest_vertex_cover(f: Graph) -> tuple[set[int], dict[int, int | None]]:
    """Minimum vertex cover by tree DP; roots are the least vertex per component."""
    parent: dict[int, int | None] = {}
    order: list[int] = []
    for comp in f.components():
        root = comp[0]
        parent[root] = None
        stack = [root]
        while stack:
            u = stack.pop()
            order.append(u)
            for w in sorted(f.neighbors(u), reverse=True):
                if w != parent[u]:
                    parent[w] = u
                    stack.append(w)
    # out[u] = (size without u, size with u) for the subtree of u
    out: dict[int, tuple[int, int]] = {}
    for u in reversed(order):
        kids = [w for w in f.neighbors(u) if parent.get(w) == u]
        without = sum(out[w][1] for w in kids)
        with_u = 1 + sum(min(out[w]) for w in kids)
        out[u] = (without, with_u)
    chosen: set[int] = set()
    take: dict[int, bool] = {}
    for u in order:
        p = parent[u]
        if p is None or take[p]:
            take[u] = out[u][1] < out[u][0]
        else:
            take[u] = True
        if take[u]:
            chosen.add(u)
    return chosen, parent


def forest_cover(f: Graph) -> ConstructionResult:
    """Minimum odd cover of a forest: one star per vertex of a minimum vertex cover.

    An edge with both ends in the cover goes to the end nearer the root.
    """
    if not f.is_forest():
        raise ValueError("forest_cover requires an acyclic graph")
    vc, parent = _forest_vertex_cover(f)
    leaves: dict[int, list[int]] = {c: [] for c in vc}
    for u, p in parent.items():
        if p is None:
            continue
        centre = p if p in vc else u
        leaves[centre].append(u if centre == p else p)
    stars = [Biclique({c}, leaves[c]) for c in sorted(vc) if leaves[c]]
    return _checked(f, OddCover(f.n, tuple(stars)), "forest", "m(F)", len(vc))


# ---------------------------------------------------------------------------
# Bipartite graphs: vertex-by-vertex induction
# ---------------------------------------------------------------------------


def bipartite_cover(g: Graph) -> ConstructionResult:
    """Cover of size r2/2 in which every biclique has X in side A and Y in side B.

    Vertices are added in ascending order.  If the new vertex v raises the rank
    it contributes its own star; otherwise N(v) is an XOR of neighbourhoods of
    earlier same-side vertices S and v joins the partite sets that meet S oddly.
    """
    g = g.with_bipartition()
    side = g.bipartition
    cover = OddCover(g.n, ())
    processed = 0  # bitmask of vertices added so far
    for v in g.vertices:
        nv = g.mask(v) & processed
        same = [u for u in range(1, v) if side[u - 1] == side[v - 1]]
        rows = Gf2Matrix(len(same), g.n, tuple(g.mask(u) & processed for u in same))
        s = solve_subset(rows, Gf2Vector(g.n, nv)) if same else (set() if not nv else None)
        if s is None:
            nbrs = [u for u in g.vertices if (nv >> (u - 1)) & 1]
            star = Biclique({v}, nbrs) if side[v - 1] == "A" else Biclique(nbrs, {v})
            cover = OddCover(g.n, cover.bicliques + (star,))
        else:
            cover = extend_by_lemma(cover, {same[i] for i in s}, v)
        processed |= 1 << (v - 1)
    for b in cover.bicliques:
        if any(side[u - 1] != "A" for u in b.x) or any(side[u - 1] != "B" for u in b.y):
            raise ConstructionError("bipartite cover does not respect the bipartition")
    r = rank(g.adj)
    return _checked(g, cover, "bipartite", "r2/2", r // 2)


# ---------------------------------------------------------------------------
# Odd cycles
# ---------------------------------------------------------------------------


def _odd_cycle_bicliques(order: list[int]) -> list[Biclique]:
    n = len(order)
    out = [Biclique({order[c - 1]}, {order[c - 2], order[c]}) for c in range(2, n, 2)]
    out.append(Biclique({order[n - 1]}, {order[0]}))
    return out


def cycle_order(g: Graph) -> list[int] | None:
    """Vertices in cyclic order starting at 1 if ``g`` is a single cycle, else None."""
    if g.n < 3 or g.m != g.n or any(g.degree(v) != 2 for v in g.vertices):
        return None
    order = [1]
    prev = None
    cur = 1
    while True:
        nxt = min(w for w in g.neighbors(cur) if w != prev)
        if nxt == 1:
            break
        order.append(nxt)
        prev, cur = cur, nxt
    return order if len(order) == g.n else None


def odd_cycle_cover(n: int | Graph) -> ConstructionResult:
    """(n-1)/2 two-edge stars centred at 2, 4, ..., n-1 plus the edge {n, 1}.

    Accepts either ``n`` (the canonical C_n) or any graph that is an odd cycle.
    """
    if isinstance(n, Graph):
        g = n
        order = cycle_order(g)
        if order is None:
            raise ValueError("graph is not a cycle")
    else:
        if n < 3:
            raise ValueError("odd_cycle_cover requires n >= 3")
        from .graph import cycle

        g = cycle(n)
        order = list(range(1, n + 1))
    if g.n % 2 == 0:
        raise ValueError("even cycles are bipartite; use bipartite_cover")
    cover = OddCover(g.n, tuple(_odd_cycle_bicliques(order)))
    return _checked(g, cover, "odd-cycle", "(n+1)/2", (g.n + 1) // 2)


# ---------------------------------------------------------------------------
# Adjacent-twin perfect matchings
# ---------------------------------------------------------------------------


def adjacent_twin_words(g: Graph, m: AdjacentTwinMatching) -> tuple[list[list], list[list]]:
    """Inductive word construction for a graph with a perfect adjacent-twin matching.

    Returns the a-words and b-words (lists over 0/1/None) for pairs in the
    order of ``m``.  After the last step the length is j+1 (j odd) or j+2
    (j even), where j is the number of pairs.
    """
    pairs = list(m.pairs)
    j_total = len(pairs)

    def edge(i: int, j: int) -> int:  # 1-based pair indices
        return int(g.has_edge(pairs[i - 1][0], pairs[j - 1][0]))

    def comp(word: list) -> list:
        return [c if c is EPS else 1 - c for c in word]

    def s_sum(word: list, upto: int, skip: int) -> int:
        return sum(word[i - 1] for i in range(1, upto + 1) if i != skip) % 2

    a: list[list] = [[EPS, 0]]
    if j_total >= 2:
        i12 = edge(1, 2)
        a = [[EPS, 0, 0, 0], [0, EPS, i12, 0]]
    j = min(j_total, 2)
    while j < j_total:
        if j % 2 == 0:
            # j = 2k -> 2k+1: words keep length 2k+2
            new = [None] * (j + 2)
            new[j] = EPS
            for i in range(1, j + 1):
                new[i - 1] = (s_sum(a[i - 1], j, i) + edge(i, j + 1)) % 2
            new[j + 1] = sum(new[:j]) % 2
            a.append(new)
        else:
            # j = 2k+1 -> 2k+2: pad old words (a with 0 0, b with 1 1) to length 2k+4
            sums = [s_sum(a[i - 1], j, i) for i in range(1, j + 1)]
            for w in a:
                w.extend([0, 0])
            new = [None] * (j + 3)
            new[j] = EPS
            for i in range(1, j + 1):
                new[i - 1] = (sums[i - 1] + edge(i, j + 1)) % 2
            new[j + 1] = sum(new[:j]) % 2
            new[j + 2] = 0
            a.append(new)
        j += 1
    b = [comp(w) for w in a]
    return a, b


def adjacent_twin_cover(g: Graph, m: AdjacentTwinMatching | None = None) -> ConstructionResult:
    """Cover of size n/2 + 1 for a graph with a perfect adjacent-twin matching."""
    if m is None:
        m = adjacent_twin_matching(g)
        if m is None:
            raise ValueError("graph has no perfect adjacent-twin matching")
    m.check(g, perfect=True)
    a, b = adjacent_twin_words(g, m)
    length = len(a[0])
    words: list = [None] * g.n
    for (u, v), wa, wb in zip(m.pairs, a, b):
        words[u - 1] = tuple(wa)
        words[v - 1] = tuple(wb)
    cover = decode(CoverCode(length, tuple(words)))
    half = g.n // 2
    if half % 2 == 0:
        # the last two coordinates have no ε; their XOR is the biclique split by c1 + c2
        last, prev = cover.bicliques[-1], cover.bicliques[-2]
        merged = Biclique(
            (v for v in g.vertices if (v in prev.y) == (v in last.y)),
            (v for v in g.vertices if (v in prev.y) != (v in last.y)),
        )
        if merged.edges() != prev.edges() ^ last.edges():
            raise ConstructionError("last two coordinates do not merge into one biclique")
        cover = OddCover(g.n, cover.bicliques[:-2] + (merged,))
    # some graphs leave a coordinate empty; dropping it only helps
    cover = cover.nonempty()
    return _checked(g, cover, "adjacent-twin", "n/2+1", half + 1, exact=False)


# ---------------------------------------------------------------------------
# Complete graphs
# ---------------------------------------------------------------------------


def complete_words(k: int) -> list[tuple]:
    """The 4k a-words of the K_{8k} construction, followed by their complements."""
    size = 4 * k
    a = []
    for i in range(1, size + 1):
        w = []
        for j in range(1, size + 1):
            if j == i:
                w.append(EPS)
            elif j >= i + 2 or (i % 4 in (0, 1) and j == i + 1) or (i % 4 in (0, 3) and j == i - 1):
                w.append(0)
            else:
                w.append(1)
        a.append(tuple(w))
    b = [tuple(c if c is EPS else 1 - c for c in w) for w in a]
    return a + b


def _k8k_cover(n: int) -> OddCover:
    words = complete_words(n // 8)
    # vertex 2i-1 is a^(i), vertex 2i is b^(i)
    half = n // 2
    ordered = []
    for i in range(half):
        ordered.append(words[i])
        ordered.append(words[half + i])
    return decode(CoverCode(half, tuple(ordered)))


def _add_apex_star(cover: OddCover) -> OddCover:
    n = cover.n + 1
    return OddCover(n, cover.bicliques + (Biclique({n}, range(1, n)),))


def _complete_cover(n: int) -> tuple[OddCover, str, int]:
    half_up = (n + 1) // 2
    if n == 1:
        return OddCover(1, ()), "0", 0
    if n % 8 == 0:
        return _k8k_cover(n), "n/2", n // 2
    if n % 8 == 7:
        big = _k8k_cover(n + 1)
        return restrict(big, range(1, n + 1)).nonempty(), "(n+1)/2", half_up
    if n % 8 == 1:
        return _add_apex_star(_k8k_cover(n - 1)), "(n+1)/2", half_up
    if n % 2 == 0:
        res = adjacent_twin_cover(complete(n))
        return res.cover, "n/2+1", res.bound
    inner, _, inner_bound = _complete_cover(n - 1)
    return _add_apex_star(inner), "(n+1)/2+1", inner_bound + 1


def complete_cover(n: int) -> ConstructionResult:
    """Odd cover of K_n with ceil(n/2) bicliques for n = 0, ±1 mod 8, else at most ceil(n/2)+1."""
    if n < 1:
        raise ValueError("complete_cover requires n >= 1")
    cover, formula, bound = _complete_cover(n)
    return _checked(complete(n), cover, "complete", formula, bound, exact=n not in (2, 3))


# ---------------------------------------------------------------------------
# General graphs
# ---------------------------------------------------------------------------


def rank_cover(g: Graph) -> ConstructionResult:
    """At most r2 bicliques: split each triclique of the symplectic decomposition in two."""
    dec = symplectic_decompose(g.adj)
    bicliques = []
    for x, y in dec.pairs:
        xs, ys = x.bits, y.bits
        tri = Triclique(
            (v for v in g.vertices if (xs >> (v - 1)) & 1 and not (ys >> (v - 1)) & 1),
            (v for v in g.vertices if (ys >> (v - 1)) & 1 and not (xs >> (v - 1)) & 1),
            (v for v in g.vertices if (xs & ys) >> (v - 1) & 1),
        )
        bicliques.extend(b for b in split_triclique(tri) if not b.is_empty)
    r = 2 * len(dec.pairs)
    return _checked(g, OddCover(g.n, tuple(bicliques)), "rank", "r2", r, exact=False)


def _greedy_independent_set(g: Graph) -> list[int]:
    chosen: list[int] = []
    blocked = 0
    for v in sorted(g.vertices, key=lambda v: (g.degree(v), v)):
        if not (blocked >> (v - 1)) & 1:
            chosen.append(v)
            blocked |= g.mask(v) | (1 << (v - 1))
    return chosen


def star_cover(g: Graph) -> ConstructionResult:
    """Stars centred off a greedy independent set (low degree first).

    An edge between two centres goes to the smaller centre.
    """
    indep = set(_greedy_independent_set(g))
    centres = [v for v in g.vertices if v not in indep]
    leaves: dict[int, list[int]] = {c: [] for c in centres}
    for u, v in g.edges():
        c = u if u not in indep else v
        leaves[c].append(v if c == u else u)
    stars = tuple(Biclique({c}, leaves[c]) for c in centres)
    return _checked(g, OddCover(g.n, stars), "star", "n-|I|", len(centres))


# A minimum 2K3 cover, for triangles {5,6,1} and {2,3,4}.
TWO_TRIANGLES_COVER = OddCover(6, (Biclique({1, 3}, {2, 6}), Biclique({3, 5}, {4, 6}), Biclique({1, 4}, {2, 5})))
# relabel onto k_triangles(2): triangle {5,6,1} -> {1,2,3}, {2,3,4} -> {4,5,6}
_TWO_TRIANGLES_RELABEL = {5: 1, 6: 2, 1: 3, 2: 4, 3: 5, 4: 6}

MAX_TRIANGLES = 3


def k_triangles_cover(k: int, max_k: int = MAX_TRIANGLES) -> ConstructionResult:
    """Cover of kK_3 with k+1 bicliques (k <= 3; k = 3 comes from exact search)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > max_k:
        raise ValueError(f"k_triangles_cover supports k <= {max_k}; no general construction is implemented")
    g = k_triangles(k)
    if k == 1:
        cover = OddCover(3, (Biclique({1}, {2, 3}), Biclique({2}, {3})))
    elif k == 2:
        cover = OddCover(
            6,
            tuple(
                Biclique({_TWO_TRIANGLES_RELABEL[v] for v in b.x}, {_TWO_TRIANGLES_RELABEL[v] for v in b.y})
                for b in TWO_TRIANGLES_COVER.bicliques
            ),
        )
    else:
        from .search import SearchConfig, find_cover

        found = find_cover(g, k + 1, SearchConfig(max_k=k + 1))
        if found is None:
            raise ConstructionError(f"search found no cover of {k}K3 with {k + 1} bicliques")
        cover = found
    return _checked(g, cover, "triangles", "k+1", k + 1)


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------


def _is_k_triangles(g: Graph) -> int | None:
    if g.n % 3 or g.n == 0:
        return None
    if g == k_triangles(g.n // 3):
        return g.n // 3
    return None


def _try_complete(g: Graph) -> ConstructionResult | None:
    if g.n >= 1 and g.is_complete():
        return complete_cover(g.n)
    return None


def _try_odd_cycle(g: Graph) -> ConstructionResult | None:
    if g.n % 2 == 1 and cycle_order(g) is not None:
        return odd_cycle_cover(g)
    return None


def _try_adjacent_twin(g: Graph) -> ConstructionResult | None:
    m = adjacent_twin_matching(g)
    return adjacent_twin_cover(g, m) if m is not None else None


def _try_forest(g: Graph) -> ConstructionResult | None:
    return forest_cover(g) if g.is_forest() else None


def _try_bipartite(g: Graph) -> ConstructionResult | None:
    return bipartite_cover(g) if g.bipartition_sides() is not None else None


def _try_triangles(g: Graph) -> ConstructionResult | None:
    k = _is_k_triangles(g)
    if k is None or k > 2:
        return None
    return k_triangles_cover(k)


FAMILIES: dict[str, Callable[[Graph], ConstructionResult | None]] = {
    "forest": _try_forest,
    "bipartite": _try_bipartite,
    "odd-cycle": _try_odd_cycle,
    "complete": _try_complete,
    "adjacent-twin": _try_adjacent_twin,
    "rank": rank_cover,
    "star": star_cover,
    "triangles": _try_triangles,
}

AUTO_ORDER = ("forest", "bipartite", "odd-cycle", "complete", "adjacent-twin", "rank", "star")


def applicable(g: Graph) -> list[ConstructionResult]:
    """Results of every construction that applies to ``g``, in dispatch order."""
    out = []
    for name in AUTO_ORDER + ("triangles",):
        res = FAMILIES[name](g)
        if res is not None:
            out.append(res)
    return out


def construct(g: Graph, family: str = "auto", best: bool = False) -> ConstructionResult:
    """Run one named construction, or dispatch (``auto``).

    With ``best`` every applicable construction runs and the smallest cover wins;
    ties keep dispatch order.
    """
    if family != "auto":
        if family not in FAMILIES:
            raise ValueError(f"unknown family {family!r}")
        res = FAMILIES[family](g)
        if res is None:
            raise ValueError(f"construction {family!r} does not apply to this graph")
        return res
    if best:
        return min(applicable(g), key=lambda r: r.size)
    for name in AUTO_ORDER:
        res = FAMILIES[name](g)
        if res is not None:
            return res
    raise AssertionError("star construction always applies")

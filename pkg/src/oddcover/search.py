"""Exact b2 for small graphs by embedding into B_k.

A graph has an odd cover of size k iff its vertices can be given words in
{0, 1, ε}^k so that u ~ v exactly when the words are 0-vs-1 opposed in an odd
number of places.  After twin reduction the graph is twin-free and the words
must be distinct, so the search is an induced-subgraph embedding into B_k.

Search outline
--------------
* Domains are bitsets over the 3^k words, words being indexed in the total
  order (support size, then lexicographic with 0 < 1 < ε).
* Assigning a word intersects every open domain with that word's B_k
  neighbourhood or non-neighbourhood (forward checking).
* The next vertex is the one with the smallest domain; members of a closed
  twin class are taken in index order and must receive increasing words.
* Coordinate permutations and per-coordinate 0/1 swaps preserve B_k.  Given
  the words placed so far, only a word that is lexicographically least in its
  orbit under the stabiliser of those words is tried.  The stabiliser permutes
  coordinates whose columns agree up to complement; columns that are still all
  ε may also be flipped freely.  This subsumes "first non-ε entry of each
  coordinate is 0" and "coordinates ordered by first use".
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .cover import CoverCode, OddCover, cover_to_dict, decode, verify
from .gf2 import rank
from .graph import Graph, reduce_twins

__all__ = [
    "SearchConfig",
    "SearchResult",
    "lower_bound",
    "upper_bound",
    "exact_b2",
    "find_cover",
    "word_table",
    "EXACT",
    "LOWER_BOUND_ONLY",
    "BUDGET_EXHAUSTED",
    "default_threads",
]

EXACT = "exact"
LOWER_BOUND_ONLY = "lower_bound_only"
BUDGET_EXHAUSTED = "budget_exhausted"

_E = 2  # ε in the integer word codes
_CHECK_EVERY = 2048


@dataclass(frozen=True)
class SearchConfig:
    max_k: int = 8
    time_budget: float | None = None  # seconds
    node_budget: int | None = None
    deterministic: bool = True
    threads: int = 1

    def __post_init__(self) -> None:
        if self.max_k < 0:
            raise ValueError("max_k must be non-negative")
        if self.time_budget is not None and self.time_budget <= 0:
            raise ValueError("time_budget must be positive")
        if self.node_budget is not None and self.node_budget <= 0:
            raise ValueError("node_budget must be positive")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


@dataclass(frozen=True)
class SearchResult:
    status: str
    lb: int
    b2: int | None = None
    witness: OddCover | None = None
    nodes: int = 0
    elapsed: float = 0.0
    exhausted: tuple[int, ...] = ()  # cover sizes proven infeasible by complete DFS
    nodes_by_k: dict = field(default_factory=dict, compare=False)

    @property
    def certified(self) -> bool:
        """True when the DFS at b2 - 1 ran to completion without a solution."""
        return self.status == EXACT and (self.b2 == 0 or self.b2 - 1 in self.exhausted)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "b2": self.b2,
            "lb": self.lb,
            "nodes": self.nodes,
            "elapsed_ms": round(self.elapsed * 1000, 3),
            "certificate_k": (self.b2 - 1) if self.certified and self.b2 else None,
            "witness": cover_to_dict(self.witness) if self.witness is not None else None,
        }


# ---------------------------------------------------------------------------
# Bounds
# ---------------------------------------------------------------------------


def _min_l_with_3pow_at_least_4pow(k: int) -> int:
    """ceil(k * log_3 4), computed exactly as the least l with 3^l >= 4^k."""
    target = 4**k
    l = math.floor(k * math.log(4, 3))
    while 3**l < target:
        l += 1
    while l > 0 and 3 ** (l - 1) >= target:
        l -= 1
    return l


def lower_bound(g: Graph) -> int:
    """max of ceil(r2/2), (n+1)/2 for odd complete graphs, ceil(k log_3 4) for T_k."""
    lb = (rank(g.adj) + 1) // 2
    n = g.n
    if n >= 3 and n % 2 == 1 and g.m == n * (n - 1) // 2 and all(g.degree(v) == n - 1 for v in g.vertices):
        lb = max(lb, (n + 1) // 2)
    if g.family is not None and g.family[0] == "T":
        lb = max(lb, _min_l_with_3pow_at_least_4pow(g.family[1]))
    return lb


def upper_bound(g: Graph) -> tuple[int, OddCover]:
    """Smallest verified cover over every construction that applies to ``g``."""
    from .construct import applicable

    best = min(applicable(g), key=lambda r: r.size)
    return best.size, best.cover


# ---------------------------------------------------------------------------
# Word tables
# ---------------------------------------------------------------------------


@lru_cache(maxsize=16)
def word_table(k: int) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    """Words of length k (codes 0, 1, 2=ε) in search order, and their B_k neighbour masks."""
    import itertools

    words = sorted(itertools.product((0, 1, _E), repeat=k), key=lambda w: (sum(c != _E for c in w), w))
    if k == 0:
        return tuple(words), (0,)
    codes = np.array(words, dtype=np.int8)
    parity = np.zeros((len(words), len(words)), dtype=np.uint8)
    for i in range(k):
        col = codes[:, i]
        parity ^= ((col[:, None] + col[None, :]) == 1).astype(np.uint8)
    packed = np.packbits(parity.astype(bool), axis=1, bitorder="little")
    nbr = tuple(int.from_bytes(r.tobytes(), "little") for r in packed)
    return tuple(words), nbr


def _is_orbit_min(word: tuple[int, ...], groups: list[tuple[tuple[int, ...], tuple[int, ...], bool]]) -> bool:
    for positions, orient, free in groups:
        if free:
            seen_eps = False
            for p in positions:
                c = word[p]
                if c == 1:
                    return False
                if c == _E:
                    seen_eps = True
                elif seen_eps:
                    return False
            continue
        if len(positions) == 1:
            continue
        counts = [0, 0]
        for p, o in zip(positions, orient):
            c = word[p]
            if c != _E:
                counts[c ^ o] += 1
        for p, o in zip(positions, orient):
            best = _E
            for actual in (0, 1):
                nv = actual ^ o
                if counts[nv]:
                    counts[nv] -= 1
                    best = actual
                    break
            if best != word[p]:
                return False
    return True


def _stabiliser_groups(words: list[tuple[int, ...]], k: int) -> list[tuple[tuple[int, ...], tuple[int, ...], bool]]:
    """Coordinate classes whose columns agree up to complement, with orientation."""
    groups: dict[tuple, tuple[list[int], list[int]]] = {}
    for c in range(k):
        col = tuple(w[c] for w in words)
        first = next((x for x in col if x != _E), None)
        if first is None:
            key: tuple = ("free",)
            o = 0
        else:
            o = first
            key = tuple(x if x == _E else x ^ o for x in col)
        pos, ori = groups.setdefault(key, ([], []))
        pos.append(c)
        ori.append(o)
    return [(tuple(p), tuple(o), key == ("free",)) for key, (p, o) in groups.items()]


def _trivial(groups) -> bool:
    return all(len(p) == 1 and not free for p, _, free in groups)


# ---------------------------------------------------------------------------
# DFS
# ---------------------------------------------------------------------------


class _BudgetExceeded(Exception):
    pass


class _Embedder:
    """DFS embedding a twin-free graph without isolated vertices into B_k."""

    def __init__(self, masks: tuple[int, ...], k: int, deadline: float | None, node_budget: int | None):
        self.n = len(masks)
        self.masks = masks
        self.k = k
        self.words, self.nbr = word_table(k)
        nw = len(self.words)
        self.all = (1 << nw) - 1
        self.deadline = deadline
        self.node_budget = node_budget
        self.nodes = 0
        closed: dict[int, list[int]] = {}
        for v in range(self.n):
            closed.setdefault(masks[v] | (1 << v), []).append(v)
        self.cls_of = [0] * self.n
        self.classes: list[list[int]] = []
        for members in closed.values():
            for v in members:
                self.cls_of[v] = len(self.classes)
            self.classes.append(sorted(members))
        self.degree = [m.bit_count() for m in masks]

    # masks of words strictly after w in search order
    def _after(self, w: int) -> int:
        return self.all & ~((2 << w) - 1)

    def _tick(self) -> None:
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise _BudgetExceeded
        if self.deadline is not None and self.nodes % _CHECK_EVERY == 0 and time.monotonic() > self.deadline:
            raise _BudgetExceeded

    def initial_domains(self) -> list[int]:
        return [self.all] * self.n

    def assign(self, doms: list[int], assigned: list[int | None], v: int, w: int) -> list[int] | None:
        """Domains after giving ``v`` the word ``w``; None on a wipe-out."""
        nb = self.nbr[w]
        non = self.all & ~nb & ~(1 << w)
        mv = self.masks[v]
        new = list(doms)
        cls = self.classes[self.cls_of[v]]
        after = self._after(w)
        for u in range(self.n):
            if assigned[u] is not None or u == v:
                continue
            d = new[u] & (nb if (mv >> u) & 1 else non)
            if u in cls and u > v:
                d &= after
            if not d:
                return None
            new[u] = d
        # a closed class needs at least as many words as unplaced members
        for members in self.classes:
            left = [u for u in members if assigned[u] is None and u != v]
            if len(left) > 1 and new[left[0]].bit_count() < len(left):
                return None
        return new

    def pick(self, doms: list[int], assigned: list[int | None]) -> int:
        best = None
        best_key = None
        for members in self.classes:
            u = next((x for x in members if assigned[x] is None), None)
            if u is None:
                continue
            key = (doms[u].bit_count(), -self.degree[u], u)
            if best_key is None or key < best_key:
                best, best_key = u, key
        return best

    def candidates(self, dom: int, placed: list[tuple[int, ...]]) -> list[int]:
        groups = _stabiliser_groups(placed, self.k)
        trivial = _trivial(groups)
        out = []
        d = dom
        words = self.words
        while d:
            low = d & -d
            w = low.bit_length() - 1
            d ^= low
            if trivial or _is_orbit_min(words[w], groups):
                out.append(w)
        return out

    def solve(self, doms: list[int], assigned: list[int | None], depth: int) -> list[int] | None:
        if depth == self.n:
            return list(assigned)
        v = self.pick(doms, assigned)
        placed = [self.words[w] for w in assigned if w is not None]
        for w in self.candidates(doms[v], placed):
            self._tick()
            new = self.assign(doms, assigned, v, w)
            if new is None:
                continue
            assigned[v] = w
            found = self.solve(new, assigned, depth + 1)
            if found is not None:
                assigned[v] = None
                return found
            assigned[v] = None
        return None

    def root_branches(self) -> tuple[int, list[int]]:
        doms = self.initial_domains()
        assigned: list[int | None] = [None] * self.n
        v = self.pick(doms, assigned)
        return v, self.candidates(doms[v], [])

    def solve_branch(self, v: int, w: int) -> list[int] | None:
        doms = self.initial_domains()
        assigned: list[int | None] = [None] * self.n
        self._tick()
        new = self.assign(doms, assigned, v, w)
        if new is None:
            return None
        assigned[v] = w
        return self.solve(new, assigned, 1)


def _branch_worker(masks, k, v, w, deadline, node_budget):
    emb = _Embedder(masks, k, deadline, node_budget)
    try:
        found = emb.solve_branch(v, w)
    except _BudgetExceeded:
        return "budget", None, emb.nodes
    return "done", found, emb.nodes


@dataclass
class _Prepared:
    g: Graph
    mapping: dict[int, int]  # original vertex -> reduced vertex
    core: list[int]  # reduced vertices (1-based) kept for search
    masks: tuple[int, ...]  # adjacency of the core, 0-based


def _prepare(g: Graph) -> _Prepared:
    red, mapping = reduce_twins(g)
    core = [v for v in red.vertices if red.degree(v) > 0]
    sub = red.induced(core)
    return _Prepared(g, mapping, core, sub.adj.rows)


def _lift(prep: _Prepared, k: int, words_idx: list[int]) -> OddCover:
    table, _ = word_table(k)
    by_reduced = {}
    for pos, rv in enumerate(prep.core):
        by_reduced[rv] = tuple(None if c == _E else c for c in table[words_idx[pos]])
    blank = (None,) * k
    words = [by_reduced.get(prep.mapping[v], blank) for v in prep.g.vertices]
    return decode(CoverCode(k, tuple(words)))


def _run_k(prep: _Prepared, k: int, cfg: SearchConfig, deadline: float | None, budget_left: int | None):
    """Returns (status, words or None, nodes) where status is 'done' or 'budget'."""
    n = len(prep.masks)
    if n == 0:
        return "done", [], 0
    if k == 0:
        return "done", None, 0
    emb = _Embedder(prep.masks, k, deadline, budget_left)
    v, branches = emb.root_branches()
    if cfg.threads <= 1 or len(branches) <= 1:
        try:
            found = emb.solve(emb.initial_domains(), [None] * n, 0)
        except _BudgetExceeded:
            return "budget", None, emb.nodes
        return "done", found, emb.nodes
    return _run_parallel(prep, k, cfg, v, branches, deadline, budget_left)


def _run_parallel(prep, k, cfg, v, branches, deadline, budget_left):
    results: dict[int, tuple] = {}
    with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
        futs = {pool.submit(_branch_worker, prep.masks, k, v, w, deadline, budget_left): i for i, w in enumerate(branches)}
        pending = set(futs)
        while pending:
            done, pending = wait(pending, return_when=FIRST_COMPLETED)
            for f in done:
                results[futs[f]] = f.result()
            if cfg.deterministic:
                # stop once every branch up to the first success has finished
                for i in range(len(branches)):
                    if i not in results:
                        break
                    if results[i][0] == "budget" or results[i][1] is not None:
                        for f in pending:
                            if futs[f] > i:
                                f.cancel()
                        pending = {f for f in pending if futs[f] <= i and not f.cancelled()}
                        break
            elif any(r[1] is not None or r[0] == "budget" for r in results.values()):
                for f in pending:
                    f.cancel()
                pending = set()
    nodes = 0
    for i in range(len(branches)):
        if i not in results:
            break
        status, found, cnt = results[i]
        nodes += cnt
        if status == "budget":
            return "budget", None, nodes
        if found is not None:
            return "done", found, nodes
    if not cfg.deterministic:
        for status, found, cnt in results.values():
            if found is not None:
                return "done", found, sum(r[2] for r in results.values())
    if len(results) < len(branches):
        return "budget", None, sum(r[2] for r in results.values())
    return "done", None, nodes


def find_cover(g: Graph, k: int, cfg: SearchConfig | None = None) -> OddCover | None:
    """A cover of ``g`` with exactly ``k`` coordinates, or None if none exists."""
    cfg = cfg or SearchConfig(max_k=k)
    prep = _prepare(g)
    deadline = time.monotonic() + cfg.time_budget if cfg.time_budget else None
    status, found, _ = _run_k(prep, k, cfg, deadline, cfg.node_budget)
    if status == "budget":
        raise TimeoutError("search budget exhausted")
    if found is None:
        return None
    return _lift(prep, k, found)


def exact_b2(g: Graph, cfg: SearchConfig | None = None) -> SearchResult:
    """Smallest k admitting a B_k embedding, with a completed DFS at k - 1 as certificate."""
    cfg = cfg or SearchConfig()
    start = time.monotonic()
    deadline = start + cfg.time_budget if cfg.time_budget else None
    prep = _prepare(g)
    lb = lower_bound(g)
    nodes = 0
    nodes_by_k: dict[int, int] = {}
    exhausted: set[int] = set()

    def run(k):
        nonlocal nodes
        left = None if cfg.node_budget is None else cfg.node_budget - nodes
        status, found, cnt = _run_k(prep, k, cfg, deadline, left)
        nodes += cnt
        nodes_by_k[k] = nodes_by_k.get(k, 0) + cnt
        if status == "done" and found is None:
            exhausted.add(k)
        return status, found

    def result(status, b2=None, witness=None):
        # no B_k embedding rules out every cover with at most k bicliques
        known = max([lb] + [k + 1 for k in exhausted])
        return SearchResult(status, known, b2, witness, nodes, time.monotonic() - start,
                            tuple(sorted(exhausted)), nodes_by_k)

    k = max(lb - 1, 0)
    found_k, found = None, None
    while k <= cfg.max_k:
        status, words = run(k)
        if status == "budget":
            return result(BUDGET_EXHAUSTED)
        if words is not None:
            found_k, found = k, words
            break
        k += 1
    if found_k is None:
        return result(LOWER_BOUND_ONLY)
    # certificate: walk down until the size below is proven infeasible
    while found_k > 0 and found_k - 1 not in exhausted:
        status, words = run(found_k - 1)
        if status == "budget":
            return result(BUDGET_EXHAUSTED)
        if words is not None:
            found_k, found = found_k - 1, words
    witness = _lift(prep, found_k, found)
    if not verify(witness, g).ok:
        raise AssertionError("search produced a witness that does not verify")
    return result(EXACT, found_k, witness)


def default_threads() -> int:
    raw = os.environ.get("ODDCOVER_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return 1


"""Bicliques, tricliques, odd covers and their word encoding.

An odd cover of G is a list of bicliques (X, Y) whose edge sets XOR to E(G).
Equivalently each vertex gets a word in {0, 1, ε}^k (0 for X_j, 1 for Y_j),
and u ~ v iff the words are 0-vs-1 opposed in an odd number of places.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .gf2 import Gf2Matrix, rank
from .graph import Graph

__all__ = [
    "Biclique",
    "Triclique",
    "OddCover",
    "CoverCode",
    "VerificationReport",
    "LemmaPreconditionError",
    "MISMATCH_CAP",
    "EPS",
    "verify",
    "encode",
    "decode",
    "decode_words",
    "incidence_matrix",
    "reassemble",
    "split_triclique",
    "restrict",
    "extend_by_lemma",
    "cover_to_dict",
    "cover_to_json",
    "cover_from_dict",
    "cover_from_json",
    "format_word",
    "parse_word",
]

EPS = None
MISMATCH_CAP = 100

Word = tuple  # tuple of 0 / 1 / None


def _as_set(vs: Iterable[int]) -> frozenset[int]:
    return frozenset(int(v) for v in vs)


@dataclass(frozen=True)
class Biclique:
    x: frozenset[int]
    y: frozenset[int]

    def __init__(self, x: Iterable[int], y: Iterable[int]):
        object.__setattr__(self, "x", _as_set(x))
        object.__setattr__(self, "y", _as_set(y))
        if self.x & self.y:
            raise ValueError(f"partite sets overlap on {sorted(self.x & self.y)}")

    @property
    def is_empty(self) -> bool:
        """True when the biclique has no edges."""
        return not self.x or not self.y

    def edges(self) -> set[frozenset[int]]:
        return {frozenset((u, v)) for u in self.x for v in self.y}

    def vertices(self) -> frozenset[int]:
        return self.x | self.y

    def __repr__(self) -> str:
        return f"Biclique({sorted(self.x)}, {sorted(self.y)})"


@dataclass(frozen=True)
class Triclique:
    x: frozenset[int]
    y: frozenset[int]
    z: frozenset[int]

    def __init__(self, x: Iterable[int], y: Iterable[int], z: Iterable[int]):
        object.__setattr__(self, "x", _as_set(x))
        object.__setattr__(self, "y", _as_set(y))
        object.__setattr__(self, "z", _as_set(z))
        if self.x & self.y or self.x & self.z or self.y & self.z:
            raise ValueError("triclique parts must be pairwise disjoint")

    def edges(self) -> set[frozenset[int]]:
        parts = (self.x, self.y, self.z)
        out = set()
        for a in range(3):
            for b in range(a + 1, 3):
                out |= {frozenset((u, v)) for u in parts[a] for v in parts[b]}
        return out


@dataclass(frozen=True)
class OddCover:
    """Ordered bicliques over the ground set ``1..n``."""

    n: int
    bicliques: tuple[Biclique, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "bicliques", tuple(self.bicliques))
        for i, b in enumerate(self.bicliques):
            for v in b.x | b.y:
                if not 1 <= v <= self.n:
                    raise ValueError(f"biclique {i} uses vertex {v} outside 1..{self.n}")

    def __len__(self) -> int:
        return len(self.bicliques)

    def __iter__(self):
        return iter(self.bicliques)

    def nonempty(self) -> "OddCover":
        """Drop bicliques that contribute no edges."""
        return OddCover(self.n, tuple(b for b in self.bicliques if not b.is_empty))

    def adjacency_rows(self) -> list[int]:
        """Rows of the GF(2) sum of the bicliques' adjacency matrices."""
        rows = [0] * self.n
        for b in self.bicliques:
            xm = sum(1 << (v - 1) for v in b.x)
            ym = sum(1 << (v - 1) for v in b.y)
            for v in b.x:
                rows[v - 1] ^= ym
            for v in b.y:
                rows[v - 1] ^= xm
        return rows

    def graph(self) -> Graph:
        """The graph this collection covers."""
        return Graph.from_masks(self.adjacency_rows())


@dataclass(frozen=True)
class CoverCode:
    """One word in {0, 1, ε}^k per vertex; ``words[v - 1]`` belongs to vertex v."""

    k: int
    words: tuple[Word, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "words", tuple(tuple(w) for w in self.words))
        for i, w in enumerate(self.words):
            if len(w) != self.k:
                raise ValueError(f"word of vertex {i + 1} has length {len(w)}, expected {self.k}")
            for c in w:
                if c not in (0, 1, EPS):
                    raise ValueError(f"word of vertex {i + 1} has entry {c!r}")

    @property
    def n(self) -> int:
        return len(self.words)

    def strings(self) -> list[str]:
        return [format_word(w) for w in self.words]


def format_word(word: Sequence[int | None]) -> str:
    return "".join("ε" if c is None else str(c) for c in word)


def parse_word(text: str) -> Word:
    out = []
    for ch in text:
        if ch in "0":
            out.append(0)
        elif ch == "1":
            out.append(1)
        elif ch in "εe*":
            out.append(EPS)
        else:
            raise ValueError(f"bad word character {ch!r}")
    return tuple(out)


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    mismatches: tuple[tuple[int, int], ...]
    cover_parity: tuple[int, ...]
    mismatch_count: int
    cardinality: int
    rank_lower_bound: int

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "mismatches": [list(p) for p in self.mismatches],
            "cover_parity": list(self.cover_parity),
            "mismatch_count": self.mismatch_count,
            "cardinality": self.cardinality,
            "rank_lower_bound": self.rank_lower_bound,
        }


def verify(cover: OddCover, g: Graph, cap: int = MISMATCH_CAP) -> VerificationReport:
    """Compare the XOR of the cover's bicliques with A(g).

    Mismatched pairs ``u < v`` are listed (up to ``cap``) with the number of
    bicliques covering the pair mod 2.
    """
    if cover.n != g.n:
        raise ValueError(f"cover ground set has {cover.n} vertices, graph has {g.n}")
    got = cover.adjacency_rows()
    mismatches = []
    parities = []
    count = 0
    for i, (a, b) in enumerate(zip(got, g.adj.rows)):
        diff = (a ^ b) >> (i + 1)
        count += diff.bit_count()
        j = i + 1
        while diff and len(mismatches) < cap:
            if diff & 1:
                mismatches.append((i + 1, j + 1))
                parities.append((a >> j) & 1)
            diff >>= 1
            j += 1
    r = rank(g.adj)
    return VerificationReport(
        ok=count == 0,
        mismatches=tuple(mismatches),
        cover_parity=tuple(parities),
        mismatch_count=count,
        cardinality=len(cover),
        rank_lower_bound=(r + 1) // 2,
    )


# ---------------------------------------------------------------------------
# Word encoding and the incidence-matrix identity
# ---------------------------------------------------------------------------


def encode(cover: OddCover) -> CoverCode:
    k = len(cover)
    words = [[EPS] * k for _ in range(cover.n)]
    for j, b in enumerate(cover.bicliques):
        for v in b.x:
            words[v - 1][j] = 0
        for v in b.y:
            words[v - 1][j] = 1
    return CoverCode(k, tuple(tuple(w) for w in words))


def decode(code: CoverCode) -> OddCover:
    bicliques = []
    for j in range(code.k):
        x = [v for v, w in enumerate(code.words, 1) if w[j] == 0]
        y = [v for v, w in enumerate(code.words, 1) if w[j] == 1]
        bicliques.append(Biclique(x, y))
    return OddCover(code.n, tuple(bicliques))


def decode_words(words: Sequence[Sequence[int | None]]) -> OddCover:
    """Decode raw words, rejecting unequal lengths."""
    lengths = {len(w) for w in words}
    if len(lengths) > 1:
        raise ValueError(f"words have unequal lengths {sorted(lengths)}")
    k = lengths.pop() if lengths else 0
    return decode(CoverCode(k, tuple(tuple(w) for w in words)))


def incidence_matrix(code: CoverCode) -> Gf2Matrix:
    """n x 2k matrix: coordinate j contributes (1,0), (0,1) or (0,0) for 0, 1, ε."""
    rows = []
    for w in code.words:
        r = 0
        for j, c in enumerate(w):
            if c == 0:
                r |= 1 << (2 * j)
            elif c == 1:
                r |= 1 << (2 * j + 1)
        rows.append(r)
    return Gf2Matrix(code.n, 2 * code.k, tuple(rows))


def reassemble(m: Gf2Matrix) -> Gf2Matrix:
    """``M (H_2 ⊕ ... ⊕ H_2) M^T`` for an n x 2k matrix ``M``."""
    if m.ncols % 2:
        raise ValueError("incidence matrix needs an even number of columns")
    h = Gf2Matrix.h2_sum(m.ncols // 2)
    return m @ h @ m.transpose()


# ---------------------------------------------------------------------------
# Surgery
# ---------------------------------------------------------------------------


def split_triclique(t: Triclique) -> tuple[Biclique, Biclique]:
    """(X, Y ∪ Z) and (Y, Z): edge-disjoint, together exactly the triclique."""
    return Biclique(t.x, t.y | t.z), Biclique(t.y, t.z)


def restrict(cover: OddCover, keep: Iterable[int]) -> OddCover:
    """Delete vertices outside ``keep`` and relabel the rest ``1..|keep|`` in order."""
    keep = sorted(set(keep))
    for v in keep:
        if not 1 <= v <= cover.n:
            raise ValueError(f"vertex {v} outside 1..{cover.n}")
    new = {v: i + 1 for i, v in enumerate(keep)}
    out = []
    for b in cover.bicliques:
        out.append(Biclique((new[v] for v in b.x if v in new), (new[v] for v in b.y if v in new)))
    return OddCover(len(keep), tuple(out))


class LemmaPreconditionError(ValueError):
    """A biclique meets S oddly on both sides, so v cannot be placed."""

    def __init__(self, index: int):
        super().__init__(f"biclique {index} has odd intersection with S on both sides")
        self.index = index


def extend_by_lemma(cover: OddCover, s: Iterable[int], v: int, g: Graph | None = None) -> OddCover:
    """Place ``v`` in every partite set that meets ``s`` in an odd number of vertices.

    ``cover`` covers G - v written in G's labels (``v`` in no partite set).
    When the neighbourhoods of ``s`` XOR to N(v), the result covers G with
    the same cardinality.  If ``g`` is given that condition is checked.
    """
    s = set(s)
    n = max(cover.n, v)
    if v in s:
        raise ValueError("v cannot belong to S")
    for i, b in enumerate(cover.bicliques):
        if v in b.x or v in b.y:
            raise ValueError(f"vertex {v} already appears in biclique {i}")
    if g is not None:
        acc = 0
        for u in s:
            acc ^= g.mask(u)
        if acc != g.mask(v):
            raise ValueError("neighbourhoods of S do not sum to N(v)")
    out = []
    for i, b in enumerate(cover.bicliques):
        odd_x = len(s & b.x) % 2 == 1
        odd_y = len(s & b.y) % 2 == 1
        if odd_x and odd_y:
            raise LemmaPreconditionError(i)
        x = b.x | {v} if odd_x else b.x
        y = b.y | {v} if odd_y else b.y
        out.append(Biclique(x, y))
    return OddCover(n, tuple(out))


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def cover_to_dict(cover: OddCover) -> dict:
    return {
        "n": cover.n,
        "bicliques": [{"X": sorted(b.x), "Y": sorted(b.y)} for b in cover.bicliques],
    }


def cover_to_json(cover: OddCover, **extra) -> str:
    d = cover_to_dict(cover)
    d.update(extra)
    return json.dumps(d)


def cover_from_dict(d: dict) -> OddCover:
    try:
        n = d["n"]
        items = d["bicliques"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"cover JSON missing field {exc}") from None
    if not isinstance(n, int) or n < 0:
        raise ValueError("cover JSON 'n' must be a non-negative integer")
    out = []
    for i, b in enumerate(items):
        try:
            out.append(Biclique(b["X"], b["Y"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"biclique {i} malformed: {exc}") from None
    return OddCover(n, tuple(out))


def cover_from_json(text: str) -> OddCover:
    return cover_from_dict(json.loads(text))

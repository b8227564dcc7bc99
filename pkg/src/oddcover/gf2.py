"""Bit-packed linear algebra over GF(2).

Rows are stored as Python ints: bit ``j`` of a row is the entry in column
``j`` (0-based).  Python ints are arbitrary-width word arrays, so XOR of two
rows is a single C-level loop over machine words.

Indices at this layer are 0-based.  Graph vertices (1-based) live one layer up.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "Gf2Vector",
    "Gf2Matrix",
    "SymplecticDecomposition",
    "rank",
    "solve_subset",
    "symplectic_decompose",
    "row_echelon",
]


def _mask(length: int) -> int:
    return (1 << length) - 1


@dataclass(frozen=True)
class Gf2Vector:
    """A vector in GF(2)^length, packed into an int."""

    length: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("length must be non-negative")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError("bits set beyond vector length")

    @classmethod
    def from_list(cls, entries: Sequence[int]) -> "Gf2Vector":
        bits = 0
        for j, e in enumerate(entries):
            if e & 1:
                bits |= 1 << j
        return cls(len(entries), bits)

    @classmethod
    def from_support(cls, length: int, support: Iterable[int]) -> "Gf2Vector":
        bits = 0
        for j in support:
            if not 0 <= j < length:
                raise IndexError(f"index {j} out of range for length {length}")
            bits |= 1 << j
        return cls(length, bits)

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.length:
            raise IndexError(j)
        return (self.bits >> j) & 1

    def __add__(self, other: "Gf2Vector") -> "Gf2Vector":
        if self.length != other.length:
            raise ValueError("length mismatch")
        return Gf2Vector(self.length, self.bits ^ other.bits)

    __xor__ = __add__

    def dot(self, other: "Gf2Vector") -> int:
        if self.length != other.length:
            raise ValueError("length mismatch")
        return (self.bits & other.bits).bit_count() & 1

    def weight(self) -> int:
        return self.bits.bit_count()

    def support(self) -> list[int]:
        return [j for j in range(self.length) if (self.bits >> j) & 1]

    def to_list(self) -> list[int]:
        return [(self.bits >> j) & 1 for j in range(self.length)]

    def __iter__(self):
        return iter(self.to_list())

    def __len__(self) -> int:
        return self.length


@dataclass(frozen=True)
class Gf2Matrix:
    """Dense matrix over GF(2) with packed rows.

    ``rows[i]`` is an int whose bit ``j`` holds entry ``(i, j)``.
    """

    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.nrows:
            raise ValueError(f"expected {self.nrows} rows, got {len(self.rows)}")
        limit = self.ncols
        for i, r in enumerate(self.rows):
            if r < 0 or r >> limit:
                raise ValueError(f"row {i} has bits beyond column {limit}")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> "Gf2Matrix":
        ncols = nrows if ncols is None else ncols
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "Gf2Matrix":
        if not rows:
            return cls(0, 0, ())
        ncols = len(rows[0])
        packed = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            packed.append(Gf2Vector.from_list(r).bits)
        return cls(len(rows), ncols, tuple(packed))

    @classmethod
    def from_vectors(cls, vectors: Sequence[Gf2Vector], ncols: int | None = None) -> "Gf2Matrix":
        if ncols is None:
            if not vectors:
                raise ValueError("ncols required for an empty vector list")
            ncols = vectors[0].length
        for v in vectors:
            if v.length != ncols:
                raise ValueError("vector length mismatch")
        return cls(len(vectors), ncols, tuple(v.bits for v in vectors))

    @classmethod
    def h2(cls) -> "Gf2Matrix":
        """The 2x2 swap block ``[[0, 1], [1, 0]]``."""
        return cls(2, 2, (0b10, 0b01))

    @classmethod
    def h2_sum(cls, k: int) -> "Gf2Matrix":
        """Block-diagonal sum of ``k`` swap blocks (2k x 2k)."""
        rows = []
        for t in range(k):
            rows.append(1 << (2 * t + 1))
            rows.append(1 << (2 * t))
        return cls(2 * k, 2 * k, tuple(rows))

    # -- access -----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(ij)
        return (self.rows[i] >> j) & 1

    def row(self, i: int) -> Gf2Vector:
        return Gf2Vector(self.ncols, self.rows[i])

    def column(self, j: int) -> Gf2Vector:
        bits = 0
        for i, r in enumerate(self.rows):
            if (r >> j) & 1:
                bits |= 1 << i
        return Gf2Vector(self.nrows, bits)

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    # -- algebra ----------------------------------------------------------

    def __add__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Gf2Matrix(self.nrows, self.ncols, tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    __xor__ = __add__

    def transpose(self) -> "Gf2Matrix":
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            bit = 1 << i
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= bit
                r ^= low
        return Gf2Matrix(self.ncols, self.nrows, tuple(cols))

    @property
    def T(self) -> "Gf2Matrix":
        return self.transpose()

    def __matmul__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        orows = other.rows
        for r in self.rows:
            acc = 0
            while r:
                low = r & -r
                acc ^= orows[low.bit_length() - 1]
                r ^= low
            out.append(acc)
        return Gf2Matrix(self.nrows, other.ncols, tuple(out))

    def is_symmetric(self) -> bool:
        return self.nrows == self.ncols and self == self.transpose()

    def is_symmetric_zero_diag(self) -> bool:
        if not self.is_symmetric():
            return False
        return all(not (r >> i) & 1 for i, r in enumerate(self.rows))

    def permuted(self, perm: Sequence[int]) -> "Gf2Matrix":
        """Return ``P A P^T`` for the permutation sending index ``i`` to ``perm[i]``.

        Only defined for square matrices.
        """
        n = self.nrows
        if self.ncols != n or sorted(perm) != list(range(n)):
            raise ValueError("perm must be a permutation of a square matrix's indices")
        out = [0] * n
        for i, r in enumerate(self.rows):
            pr = 0
            while r:
                low = r & -r
                pr |= 1 << perm[low.bit_length() - 1]
                r ^= low
            out[perm[i]] = pr
        return Gf2Matrix(n, n, tuple(out))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Gf2Matrix":
        out = []
        for i in rows:
            r = self.rows[i]
            packed = 0
            for jj, j in enumerate(cols):
                if (r >> j) & 1:
                    packed |= 1 << jj
            out.append(packed)
        return Gf2Matrix(len(rows), len(cols), tuple(out))

    def rank(self) -> int:
        return rank(self)

    def __repr__(self) -> str:
        body = "; ".join("".join(str(b) for b in row) for row in self.to_lists())
        return f"Gf2Matrix({self.nrows}x{self.ncols}: {body})"


@dataclass(frozen=True)
class SymplecticDecomposition:
    """Pairs ``(x_t, y_t)`` with ``A = sum_t x_t y_t^T + y_t x_t^T`` over GF(2)."""

    n: int
    pairs: tuple[tuple[Gf2Vector, Gf2Vector], ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def reassemble(self) -> Gf2Matrix:
        """Sum of the rank-2 blocks; equals the decomposed matrix."""
        rows = [0] * self.n
        for x, y in self.pairs:
            for i in range(self.n):
                if (x.bits >> i) & 1:
                    rows[i] ^= y.bits
                if (y.bits >> i) & 1:
                    rows[i] ^= x.bits
        return Gf2Matrix(self.n, self.n, tuple(rows))

    def basis_matrix(self) -> Gf2Matrix:
        """The n x 2k matrix with columns ``x_1, y_1, ..., x_k, y_k``."""
        rows = [0] * self.n
        for t, (x, y) in enumerate(self.pairs):
            for i in range(self.n):
                if (x.bits >> i) & 1:
                    rows[i] |= 1 << (2 * t)
                if (y.bits >> i) & 1:
                    rows[i] |= 1 << (2 * t + 1)
        return Gf2Matrix(self.n, 2 * len(self.pairs), tuple(rows))


# ---------------------------------------------------------------------------
# Elimination
# ---------------------------------------------------------------------------


def row_echelon(m: Gf2Matrix) -> tuple[list[int], list[int]]:
    """Reduced row-echelon form of ``m``.

    Returns ``(rows, pivots)`` where ``rows`` are the nonzero reduced rows and
    ``pivots[i]`` is the pivot column of ``rows[i]`` (the lowest set bit).
    """
    basis: list[int] = []
    pivots: list[int] = []
    for r in m.rows:
        for b, p in zip(basis, pivots):
            if (r >> p) & 1:
                r ^= b
        if r:
            p = (r & -r).bit_length() - 1
            for i, b in enumerate(basis):
                if (b >> p) & 1:
                    basis[i] = b ^ r
            basis.append(r)
            pivots.append(p)
    return basis, pivots


def rank(m: Gf2Matrix) -> int:
    """Rank of ``m`` over GF(2).  The input is not modified."""
    rows = [r for r in m.rows if r]
    rk = 0
    while rows:
        pivot = rows.pop()
        if not pivot:
            continue
        rk += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
        rows = [r for r in rows if r]
    return rk


def solve_subset(rows: Gf2Matrix, target: Gf2Vector) -> set[int] | None:
    """Find row indices whose XOR equals ``target``.

    Each row is tagged with its own unit vector in an augmented block, so the
    reduction carries the combination along.  Free variables (rows that reduce
    to zero) are never selected, which makes the answer canonical.  Returns
    ``None`` when ``target`` is not in the row space.
    """
    if target.length != rows.ncols:
        raise ValueError(f"target length {target.length} != {rows.ncols} columns")
    ncols = rows.ncols
    basis: list[tuple[int, int, int]] = []  # (pivot bit, reduced row, combination)
    for i, r in enumerate(rows.rows):
        combo = 1 << i
        for low, b, c in basis:
            if r & low:
                r ^= b
                combo ^= c
        if r:
            basis.append((r & -r, r, combo))
    t = target.bits
    chosen = 0
    for low, b, c in basis:
        if t & low:
            t ^= b
            chosen ^= c
    if t & _mask(ncols):
        return None
    return {i for i in range(rows.nrows) if (chosen >> i) & 1}


def symplectic_decompose(a: Gf2Matrix) -> SymplecticDecomposition:
    """Split a symmetric zero-diagonal matrix into rank-2 symplectic blocks.

    Repeatedly take the lexicographically least ``(p, q)``, ``p < q``, with
    ``B[p][q] = 1``, emit ``x = B[:, q]``, ``y = B[:, p]`` and set
    ``B <- B + x y^T + y x^T``.  Each step clears rows and columns ``p`` and
    ``q`` and lowers the rank by exactly two.
    """
    if not a.is_symmetric_zero_diag():
        raise ValueError("symplectic_decompose requires a symmetric matrix with zero diagonal")
    n = a.nrows
    b = list(a.rows)
    pairs: list[tuple[Gf2Vector, Gf2Vector]] = []
    p = 0
    while p < n:
        if not b[p]:
            p += 1
            continue
        row_p = b[p]
        q = (row_p & -row_p).bit_length() - 1
        # symmetric: column q is row q, column p is row p
        x = b[q]
        y = row_p
        pairs.append((Gf2Vector(n, x), Gf2Vector(n, y)))
        for i in range(n):
            delta = 0
            if (x >> i) & 1:
                delta ^= y
            if (y >> i) & 1:
                delta ^= x
            if delta:
                b[i] ^= delta
        # row p is now zero; rows < p were already zero and stay zero
    return SymplecticDecomposition(n, tuple(pairs))

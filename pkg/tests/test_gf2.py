from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oddcover.gf2 import Gf2Matrix, Gf2Vector, rank, row_echelon, solve_subset, symplectic_decompose
from oddcover.graph import complete, cycle, path

from oracles import brute_rank, random_symmetric


@st.composite
def symmetric_matrices(draw, max_n=24):
    n = draw(st.integers(0, max_n))
    bits = draw(st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    a = [[0] * n for _ in range(n)]
    for (i, j), b in zip(itertools.combinations(range(n), 2), bits):
        a[i][j] = a[j][i] = int(b)
    return Gf2Matrix.from_rows(a) if n else Gf2Matrix.zeros(0)


@st.composite
def matrices(draw, max_rows=8, max_cols=8):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(1, max_cols))
    rows = draw(st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c), min_size=r, max_size=r))
    return rows, c


class TestVector:
    def test_basic_ops(self):
        u = Gf2Vector.from_list([1, 0, 1, 1])
        v = Gf2Vector.from_support(4, [1, 2])
        assert (u + v).to_list() == [1, 1, 0, 1]
        assert u.dot(v) == 1
        assert u.weight() == 3
        assert v.support() == [1, 2]
        assert u[0] == 1 and u[1] == 0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            Gf2Vector.from_list([1, 0]) + Gf2Vector.from_list([1, 0, 1])

    def test_bits_beyond_length_rejected(self):
        with pytest.raises(ValueError):
            Gf2Vector(2, 0b100)


class TestMatrix:
    def test_product_and_transpose(self):
        a = Gf2Matrix.from_rows([[1, 1, 0], [0, 1, 1]])
        assert a.T.to_lists() == [[1, 0], [1, 1], [0, 1]]
        assert (a @ a.T).to_lists() == [[0, 1], [1, 0]]

    def test_h2_sum(self):
        h = Gf2Matrix.h2_sum(2)
        assert h.to_lists() == [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]

    def test_permuted_keeps_rank(self):
        a = complete(5).adj
        assert rank(a.permuted([4, 2, 0, 1, 3])) == rank(a)

    def test_submatrix(self):
        a = complete(4).adj
        assert a.submatrix([0, 1], [2, 3]).to_lists() == [[1, 1], [1, 1]]


class TestRank:
    def test_complete_8(self):
        assert rank(complete(8).adj) == 8

    def test_zero(self):
        assert rank(Gf2Matrix.zeros(5)) == 0

    def test_even_cycle(self):
        assert rank(cycle(6).adj) == 4

    def test_does_not_mutate(self):
        a = complete(6).adj
        before = a.to_lists()
        rank(a)
        row_echelon(a)
        assert a.to_lists() == before

    @given(matrices())
    @settings(max_examples=200, deadline=None)
    def test_matches_subset_enumeration(self, mc):
        rows, c = mc
        m = Gf2Matrix.from_rows(rows) if rows else Gf2Matrix.zeros(0, c)
        assert rank(m) == brute_rank(rows)

    @given(matrices())
    @settings(max_examples=100, deadline=None)
    def test_transpose_invariant(self, mc):
        rows, c = mc
        m = Gf2Matrix.from_rows(rows) if rows else Gf2Matrix.zeros(0, c)
        assert rank(m) == rank(m.T)

    @given(symmetric_matrices(), symmetric_matrices())
    @settings(max_examples=100, deadline=None)
    def test_subadditive(self, a, b):
        if a.shape != b.shape:
            b = Gf2Matrix.zeros(a.nrows)
        assert rank(a + b) <= rank(a) + rank(b)

    @given(symmetric_matrices(), st.randoms())
    @settings(max_examples=100, deadline=None)
    def test_symmetric_rank_even_and_permutation_invariant(self, a, rnd):
        perm = list(range(a.nrows))
        rnd.shuffle(perm)
        assert rank(a) % 2 == 0
        assert rank(a.permuted(perm)) == rank(a)


class TestSolveSubset:
    # indices are 0-based row positions
    def test_target_is_a_row(self):
        rows = path(3).adj
        assert solve_subset(rows, Gf2Vector.from_support(3, [1])) == {0}

    def test_xor_of_two_rows(self):
        rows = Gf2Matrix.from_rows([[1, 1, 0], [0, 1, 1]])
        assert solve_subset(rows, Gf2Vector.from_list([1, 0, 1])) == {0, 1}

    def test_k4_neighbourhood(self):
        # A(K_4) has full rank, so N(4) lies outside the span of rows 1..3
        a = complete(4).adj
        rows = a.submatrix([0, 1, 2], [0, 1, 2, 3])
        target = a.row(3)
        hits = [set(c) for r in range(4) for c in itertools.combinations(range(3), r)
                if _xor(rows, c) == target.bits]
        assert hits == []
        assert solve_subset(rows, target) is None

    def test_outside_row_space(self):
        rows = Gf2Matrix.from_rows([[1, 1, 0]])
        assert solve_subset(rows, Gf2Vector.from_list([1, 0, 0])) is None

    def test_zero_target(self):
        rows = Gf2Matrix.from_rows([[1, 1, 0], [1, 1, 0]])
        assert solve_subset(rows, Gf2Vector(3, 0)) == set()

    def test_free_variables_set_to_zero(self):
        rows = Gf2Matrix.from_rows([[1, 0], [1, 0], [0, 1]])
        assert solve_subset(rows, Gf2Vector.from_list([1, 0])) == {0}

    @given(matrices(max_rows=7, max_cols=7), st.data())
    @settings(max_examples=200, deadline=None)
    def test_against_subset_enumeration(self, mc, data):
        rows, c = mc
        m = Gf2Matrix.from_rows(rows) if rows else Gf2Matrix.zeros(0, c)
        target = Gf2Vector.from_list(data.draw(st.lists(st.integers(0, 1), min_size=c, max_size=c)))
        reachable = any(_xor(m, s) == target.bits
                        for r in range(m.nrows + 1) for s in itertools.combinations(range(m.nrows), r))
        s = solve_subset(m, target)
        assert (s is not None) == reachable
        if s is not None:
            assert _xor(m, s) == target.bits


def _xor(m: Gf2Matrix, idx) -> int:
    out = 0
    for i in idx:
        out ^= m.rows[i]
    return out


class TestSymplectic:
    def test_h2(self):
        d = symplectic_decompose(Gf2Matrix.h2())
        assert len(d.pairs) == 1
        x, y = d.pairs[0]
        assert (x.to_list(), y.to_list()) == ([1, 0], [0, 1])

    def test_zero(self):
        assert symplectic_decompose(Gf2Matrix.zeros(4)).pairs == ()

    def test_k3(self):
        a = complete(3).adj
        d = symplectic_decompose(a)
        assert len(d.pairs) == 1
        assert d.reassemble() == a

    def test_rejects_nonsymmetric(self):
        with pytest.raises(ValueError):
            symplectic_decompose(Gf2Matrix.from_rows([[0, 1], [0, 0]]))

    def test_rejects_diagonal(self):
        with pytest.raises(ValueError):
            symplectic_decompose(Gf2Matrix.from_rows([[1, 0], [0, 0]]))

    def test_deterministic(self):
        a = Gf2Matrix.from_rows(random_symmetric(random.Random(3), 12))
        assert symplectic_decompose(a) == symplectic_decompose(a)

    @given(symmetric_matrices())
    @settings(max_examples=200, deadline=None)
    def test_reassembles_with_half_rank_pairs(self, a):
        d = symplectic_decompose(a)
        assert 2 * len(d.pairs) == rank(a)
        assert d.reassemble() == a
        b = d.basis_matrix()
        assert (b @ Gf2Matrix.h2_sum(len(d.pairs)) @ b.T) == a

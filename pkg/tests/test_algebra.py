from __future__ import annotations

import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kirbytietze.algebra import (
    block_sum,
    coboundary_matrix,
    coboundary_witness,
    determinant,
    f2_rank,
    format_h1,
    h1_invariants,
    h2_f2_dimension,
    mat_mul,
    smith_normal_form,
    symmetric_signature,
)
from kirbytietze.errors import MalformedInputError, PreconditionError
from kirbytietze.presentation import Presentation

from strategies import presentations

P_ = Presentation.from_strings


def determinantal_divisor_factors(M):
    """Invariant factors from gcds of k x k minors (independent of row reduction)."""
    import itertools

    m = len(M)
    n = len(M[0]) if m else 0
    divisors = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                g = math.gcd(g, determinant([[M[r][c] for c in cols] for r in rows]))
        if g == 0:
            break
        divisors.append(g)
    return tuple(divisors[i] // divisors[i - 1] for i in range(1, len(divisors)))


def int_matrices(max_dim=4, lo=-4, hi=4):
    return st.integers(1, max_dim).flatmap(
        lambda m: st.integers(1, max_dim).flatmap(
            lambda n: st.lists(
                st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=m, max_size=m
            )
        )
    )


def check_smith(M):
    s = smith_normal_form(M)
    assert mat_mul(mat_mul(s.left, M), s.right) == s.diagonal
    assert abs(determinant(s.left)) == 1 and abs(determinant(s.right)) == 1
    for i, row in enumerate(s.diagonal):
        for j, v in enumerate(row):
            if i != j:
                assert v == 0
    f = s.invariant_factors
    assert all(d > 0 for d in f)
    assert all(f[i + 1] % f[i] == 0 for i in range(len(f) - 1))
    assert s.rank == len(f)
    return s


def test_smith_examples():
    assert check_smith([[1, 0], [0, 1]]).invariant_factors == (1, 1)
    assert check_smith([[2, 0], [0, 3]]).invariant_factors == (1, 6)
    assert check_smith([[0, 0, 0], [0, 0, 0]]).invariant_factors == ()


def test_smith_empty_rows():
    s = smith_normal_form([], cols=2)
    assert s.invariant_factors == () and s.cols == 2


@settings(max_examples=150)
@given(int_matrices())
def test_smith_matches_determinantal_divisors(M):
    s = check_smith(M)
    assert s.invariant_factors == determinantal_divisor_factors(M)


def test_determinant_bareiss():
    rng = random.Random(4)
    for _ in range(50):
        n = rng.randint(1, 4)
        M = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        assert determinant(M) == round(np.linalg.det(np.array(M, dtype=float)))


@pytest.mark.parametrize(
    "P, expected",
    [(P_(1, []), (1, ())), (P_(1, ["aaa"]), (0, (3,))), (P_(2, ["abAB"]), (2, ())),
     (P_(2, ["aa", "bbbb"]), (0, (2, 4))), (P_(2, ["aabb"]), (1, (2,)))],
)
def test_h1(P, expected):
    assert h1_invariants(P) == expected


def test_format_h1():
    assert format_h1((0, ())) == "0"
    assert format_h1((1, (3,))) == "Z+Z/3"
    assert format_h1((2, (2, 4))) == "Z^2+Z/2+Z/4"


def test_coboundary_examples():
    assert coboundary_matrix(P_(1, ["aa"])) == [[0]]
    assert coboundary_matrix(P_(1, ["a"])) == [[1]]
    assert coboundary_matrix(P_(2, ["abAB"])) == [[0, 0]]
    assert coboundary_witness(P_(1, ["aa"]), [1]) is None
    assert coboundary_witness(P_(1, ["a"]), [1]) == (1,)
    assert coboundary_witness(P_(2, ["ab", "aab"]), [0, 0]) == (0, 0)
    with pytest.raises(MalformedInputError):
        coboundary_witness(P_(1, ["a"]), [1, 0])


def test_h2_examples():
    assert h2_f2_dimension(P_(1, ["aa"])) == 1
    assert h2_f2_dimension(P_(1, ["a"])) == 0
    assert h2_f2_dimension(P_(2, ["abAB"])) == 1


@given(presentations(max_gens=3, max_rels=4), st.data())
def test_coboundary_witness_sound_and_complete(P, data):
    k, n = P.num_relators, P.num_generators
    c = data.draw(st.lists(st.integers(0, 1), min_size=k, max_size=k))
    M = coboundary_matrix(P)
    x = coboundary_witness(P, c)
    if x is not None:
        assert all(sum(M[i][g] * x[g] for g in range(n)) % 2 == c[i] for i in range(k))
    else:
        aug = [row + [b] for row, b in zip(M, c)]
        assert f2_rank(aug, n + 1) == f2_rank(M, n) + 1


def test_signature_examples():
    assert symmetric_signature([[0, 1], [1, 0]]) == 0
    assert symmetric_signature([[1, 1], [1, 0]]) == 0
    assert symmetric_signature([[2]]) == 1
    assert symmetric_signature([]) == 0
    with pytest.raises(PreconditionError):
        symmetric_signature([[0, 1], [2, 0]])


def sym_matrices(max_dim=5):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_dim))
        M = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                M[i][j] = M[j][i] = draw(st.integers(-3, 3))
        return M

    return build()


def _numeric_signature(M):
    ev = np.linalg.eigvalsh(np.array(M, dtype=float))
    return int((ev > 1e-9).sum() - (ev < -1e-9).sum())


@settings(max_examples=150)
@given(sym_matrices())
def test_signature_matches_numeric_oracle(M):
    assert symmetric_signature(M) == _numeric_signature(M)


@given(sym_matrices(3), sym_matrices(3))
def test_signature_additive(M, N):
    assert symmetric_signature(block_sum(M, N)) == symmetric_signature(M) + symmetric_signature(N)

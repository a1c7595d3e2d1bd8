"""Exact integer and mod-2 linear algebra.

Matrices are plain row-major lists of Python ints, so intermediate values
never overflow.  Over the two-element field entries are 0/1 ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import MalformedInputError, PreconditionError
from .presentation import Presentation

Matrix = list[list[int]]

__all__ = [
    "Matrix",
    "SmithForm",
    "smith_normal_form",
    "exponent_matrix",
    "h1_invariants",
    "format_h1",
    "coboundary_matrix",
    "f2_rank",
    "f2_solve",
    "coboundary_witness",
    "h2_f2_dimension",
    "symmetric_signature",
    "block_sum",
    "mat_mul",
    "determinant",
]


def _copy(M: Sequence[Sequence[int]]) -> Matrix:
    return [[int(v) for v in row] for row in M]


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], inner: int | None = None) -> Matrix:
    if inner is None:
        inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][t] * B[t][j] for t in range(inner)) for j in range(cols)] for i in range(len(A))]


def determinant(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    A = _copy(M)
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


@dataclass(frozen=True)
class SmithForm:
    """Smith normal form ``left @ M @ right == diagonal``.

    ``invariant_factors`` are the positive diagonal entries d1 | d2 | ...;
    ``left`` and ``right`` are unimodular.
    """

    invariant_factors: tuple[int, ...]
    rank: int
    left: Matrix
    right: Matrix
    diagonal: Matrix
    rows: int
    cols: int


def smith_normal_form(M: Sequence[Sequence[int]], cols: int | None = None) -> SmithForm:
    """Compute the Smith normal form of an integer matrix.

    ``cols`` is only needed for matrices with zero rows, where the column
    count cannot be read off the data.
    """
    A = _copy(M)
    m = len(A)
    n = len(A[0]) if m else (cols or 0)
    if any(len(row) != n for row in A):
        raise MalformedInputError("ragged matrix")
    U, V = _identity(m), _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst += q * row src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col dst += q * col src
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        nonzero = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    dirty |= A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    dirty |= A[t][j] != 0
            if dirty:
                # a remainder smaller than the pivot is left; make it the pivot
                cands = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cands)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1

    factors = tuple(A[i][i] for i in range(min(m, n)) if A[i][i])
    return SmithForm(factors, len(factors), U, V, A, m, n)


def exponent_matrix(P: Presentation) -> Matrix:
    """Row i, column g: exponent sum of generator g in relator i."""
    return [[r.exponent_sum(g) for g in range(1, P.num_generators + 1)] for r in P.relators]


def h1_invariants(P: Presentation) -> tuple[int, tuple[int, ...]]:
    """Abelianization of the presented group as ``(free rank, torsion coefficients)``."""
    snf = smith_normal_form(exponent_matrix(P), cols=P.num_generators)
    return P.num_generators - snf.rank, tuple(d for d in snf.invariant_factors if d > 1)


def format_h1(h1: tuple[int, tuple[int, ...]]) -> str:
    free, torsion = h1
    parts = [f"Z/{d}" for d in torsion]
    if free == 1:
        parts.insert(0, "Z")
    elif free > 1:
        parts.insert(0, f"Z^{free}")
    return "+".join(parts) if parts else "0"


def coboundary_matrix(P: Presentation) -> Matrix:
    """Mod-2 coboundary from 1-cochains to 2-cochains of the presentation complex."""
    return [[v % 2 for v in row] for row in exponent_matrix(P)]


def _f2_reduce(M: Sequence[Sequence[int]], ncols: int):
    """Row-reduce a copy of ``M`` over F2; returns (rows, pivot columns)."""
    rows = [[v & 1 for v in row] for row in M]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                rows[i] = [a ^ b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def f2_rank(M: Sequence[Sequence[int]], ncols: int | None = None) -> int:
    if ncols is None:
        ncols = len(M[0]) if M else 0
    return len(_f2_reduce(M, ncols)[1])


def f2_solve(M: Sequence[Sequence[int]], b: Sequence[int], ncols: int) -> tuple[int, ...] | None:
    """A solution ``x`` of ``M x = b`` over F2, or ``None`` if there is none."""
    if len(b) != len(M):
        raise MalformedInputError(f"right-hand side has length {len(b)}, expected {len(M)}")
    aug = [list(row) + [bit & 1] for row, bit in zip(M, b)]
    rows, pivots = _f2_reduce(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [0] * ncols
    for row, c in zip(rows, pivots):
        x[c] = row[ncols]
    return tuple(x)


def coboundary_witness(P: Presentation, c: Sequence[int]) -> tuple[int, ...] | None:
    """A 1-cochain whose coboundary is ``c``, or ``None`` if ``c`` is not a coboundary."""
    if len(c) != P.num_relators:
        raise MalformedInputError(
            f"cocycle has {len(c)} entries but the presentation has {P.num_relators} relators"
        )
    return f2_solve(coboundary_matrix(P), c, P.num_generators)


def h2_f2_dimension(P: Presentation) -> int:
    """Dimension of the second mod-2 cohomology of the presentation complex."""
    return P.num_relators - f2_rank(coboundary_matrix(P), P.num_generators)


def symmetric_signature(M: Sequence[Sequence[int]]) -> int:
    """Signature of a symmetric integer matrix, by exact congruence diagonalization."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise PreconditionError("signature needs a square matrix")
    if any(M[i][j] != M[j][i] for i in range(n) for j in range(n)):
        raise PreconditionError("signature needs a symmetric matrix")
    A = [[Fraction(v) for v in row] for row in M]
    pos = neg = 0
    k = 0
    while k < len(A):
        size = len(A)
        if A[k][k] == 0:
            j = next((j for j in range(k + 1, size) if A[j][j] != 0), None)
            if j is not None:
                A[k], A[j] = A[j], A[k]
                for row in A:
                    row[k], row[j] = row[j], row[k]
            else:
                j = next((j for j in range(k + 1, size) if A[k][j] != 0), None)
                if j is None:
                    k += 1  # row k is zero: a null direction
                    continue
                # replace e_k by e_k + e_j; new diagonal entry 2*A[k][j] != 0
                A[k] = [a + b for a, b in zip(A[k], A[j])]
                for row in A:
                    row[k] += row[j]
        p = A[k][k]
        pos += p > 0
        neg += p < 0
        for i in range(k + 1, size):
            if A[i][k]:
                q = A[i][k] / p
                A[i] = [a - q * b for a, b in zip(A[i], A[k])]
                for r in range(size):
                    A[r][i] -= q * A[r][k]
        k += 1
    return pos - neg


def block_sum(*blocks: Sequence[Sequence[int]]) -> Matrix:
    """Block-diagonal sum of square matrices."""
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                out[off + i][off + j] = int(v)
        off += len(b)
    return out

"""Acceptance suite: eight exact checks with wall-clock limits.

Each test prints one ``[PASS]``/``[FAIL]`` line.  Run directly with
``python3 tests/test_acceptance.py`` for just the summary lines.
"""

from __future__ import annotations

import itertools
import random
import sys
import time
from contextlib import contextmanager


from kirbytietze.algebra import (
    block_sum,
    coboundary_matrix,
    determinant,
    h1_invariants,
    mat_mul,
    smith_normal_form,
    symmetric_signature,
)
from kirbytietze.classify import DistinctInvariant, Iso, StablyDiffeomorphic, stable_diffeo_decide
from kirbytietze.diagram import (
    NormalFormDiagram,
    canonicalize,
    euler_characteristic,
    from_presentation,
    linking_matrix,
    normal_one_type,
    signature,
)
from kirbytietze.groups import STANDARD_GROUPS, fingerprint
from kirbytietze.moves import (
    AddGenerator,
    CancelPair,
    Destabilize,
    HandleTwist,
    Isotopy,
    MeridianFrameSlide,
    RelatorMultiply,
    Stabilize,
    apply_move,
    geometric_T1,
    geometric_T1_inverse,
    normalize_framings,
    replay,
)
from kirbytietze.presentation import Presentation, Word, cyclic_reduce
from kirbytietze.surgery import realize_presentation_by_surgery

GROUPS_UP_TO_8 = [G for G in STANDARD_GROUPS.values() if G.order <= 8]


@contextmanager
def criterion(number: int, title: str, limit: float, capsys=None):
    """Time the block; print a pass/fail line; fail the test on error or overrun."""
    start = time.perf_counter()
    error = None
    try:
        yield
    except AssertionError as exc:
        error = exc
    elapsed = time.perf_counter() - start
    ok = error is None and elapsed < limit
    detail = f"{elapsed:.2f}s / {limit:.0f}s"
    if error is not None:
        detail += f"; {error}"
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    assert ok, line


# --- random generators ---------------------------------------------------------------

def random_word(rng: random.Random, n: int, max_len: int) -> Word:
    if n == 0:
        return Word()
    return Word(rng.choice((1, -1)) * rng.randint(1, n) for _ in range(rng.randint(0, max_len)))


def random_presentation(rng, max_gens=3, max_rels=3, max_len=6, min_gens=0) -> Presentation:
    n = rng.randint(min_gens, max_gens)
    return Presentation(n, tuple(random_word(rng, n, max_len) for _ in range(rng.randint(0, max_rels))))


def random_diagram(rng, **kw) -> NormalFormDiagram:
    P = random_presentation(rng, **kw)
    return from_presentation(P, [rng.randint(0, 1) for _ in P.relators])


def reduced_words(n: int, max_len: int) -> list[Word]:
    letters = [s * g for g in range(1, n + 1) for s in (1, -1)]
    out = [Word()]
    for length in range(1, max_len + 1):
        for t in itertools.product(letters, repeat=length):
            if all(t[i] != -t[i + 1] for i in range(length - 1)):
                out.append(Word(t))
    return out


def random_legal_move(D: NormalFormDiagram, rng: random.Random):
    n, k = D.num_one_handles, D.num_handle_pairs
    options = ["stab", "addgen"]
    if k:
        options += ["iso", "slide"]
    if k >= 2:
        options.append("mult")
    if n:
        options.append("twist")
    cancellable = [
        (g, i)
        for i, (w, f) in enumerate(D.handles, start=1)
        for g in range(1, n + 1)
        if f == 0 and cyclic_reduce(Word(w))[0].occurrences(g) == 1
    ]
    if cancellable:
        options.append("cancel")
    empties = [i for i, h in enumerate(D.handles, start=1) if h == ((), 0)]
    if empties:
        options.append("destab")
    kind = rng.choice(options)
    if kind == "stab":
        return Stabilize()
    if kind == "addgen":
        return AddGenerator(random_word(rng, n, 3))
    if kind == "iso":
        return Isotopy(rng.randint(1, k), random_word(rng, n, 2), rng.random() < 0.5)
    if kind == "slide":
        return MeridianFrameSlide(rng.randint(1, k), rng.choice((2, -2)))
    if kind == "twist":
        return HandleTwist(rng.randint(1, n))
    if kind == "cancel":
        return CancelPair(*rng.choice(cancellable))
    if kind == "destab":
        return Destabilize(rng.choice(empties))
    i, j = rng.sample(range(1, k + 1), 2)
    return RelatorMultiply(i, j, rng.choice((1, -1)), random_word(rng, n, 2))


def smith_oracle(M) -> tuple[int, ...]:
    """Invariant factors by naive elementary operations, independent of the library.

    Repeatedly moves the smallest non-zero entry to the pivot, clears its row
    and column by division with remainder, and fixes divisibility by adding
    an offending row into the pivot row.
    """
    A = [list(r) for r in M]
    m, n = len(A), len(A[0])
    diag = []
    for t in range(min(m, n)):
        while True:
            entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
            done = True
            for i in range(t + 1, m):
                q = A[i][t] // A[t][t]
                A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                done &= A[i][t] == 0
            for j in range(t + 1, n):
                q = A[t][j] // A[t][t]
                for row in A:
                    row[j] -= q * row[t]
                done &= A[t][j] == 0
            if not done:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]), None
            )
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad])]
        if all(A[i][j] == 0 for i in range(t, m) for j in range(t, n)):
            break
        diag.append(abs(A[t][t]))
    return tuple(diag)


# --- the eight criteria --------------------------------------------------------------

def test_criterion_1_surgery_realizes_thickening(capsys):
    with criterion(1, "surgery sweep equals thickening", 5.0, capsys):
        cases = 0
        for n in range(3):
            words = reduced_words(n, 4)
            for k in range(3):
                for rels in itertools.combinations_with_replacement(words, k):
                    P = Presentation(n, rels)
                    for f in itertools.product((0, 1), repeat=k):
                        got = realize_presentation_by_surgery(n, P, f)
                        assert got == canonicalize(from_presentation(P, f)), (P, f)
                        cases += 1
        assert cases > 300


def test_criterion_2_T1_round_trip(capsys):
    rng = random.Random(2)
    with criterion(2, "geometric T1 round trip", 5.0, capsys):
        for _ in range(50):
            D = random_diagram(rng, max_gens=3, max_rels=3, max_len=6)
            x = random_word(rng, D.num_one_handles, 4)
            E, c1 = geometric_T1(D, x)
            F, c2 = geometric_T1_inverse(E, E.num_one_handles)
            assert canonicalize(F) == canonicalize(D), (D, x)
            assert replay(D, c1, E) and replay(E, c2, F)


def test_criterion_3_move_invariance(capsys):
    rng = random.Random(3)
    with criterion(3, "1000 random moves preserve invariants", 60.0, capsys):
        for _ in range(1000):
            D = random_diagram(rng, max_gens=3, max_rels=3, max_len=5)
            for _ in range(rng.randint(0, 2)):  # vary the starting point
                D, _ = normalize_framings(apply_move(D, random_legal_move(D, rng)))
            m = random_legal_move(D, rng)
            E = apply_move(D, m)
            P, Q = D.presentation(), E.presentation()
            assert fingerprint(P, GROUPS_UP_TO_8) == fingerprint(Q, GROUPS_UP_TO_8), (D, m)
            assert h1_invariants(P) == h1_invariants(Q), (D, m)
            expected = {Stabilize: 2, Destabilize: -2}.get(type(m), 0)
            assert euler_characteristic(E) - euler_characteristic(D) == expected, (D, m)
            assert signature(D) == 0
            assert signature(normalize_framings(E)[0]) == 0, (D, m)


def test_criterion_4_twist_is_coboundary(capsys):
    rng = random.Random(4)
    with criterion(4, "twist changes cocycle by coboundary column", 5.0, capsys):
        checked = 0
        for _ in range(100):
            D = random_diagram(rng, max_gens=3, max_rels=4, max_len=6, min_gens=1)
            delta = coboundary_matrix(D.presentation())
            before = normal_one_type(D).w_class
            for g in range(1, D.num_one_handles + 1):
                after = normal_one_type(apply_move(D, HandleTwist(g))).w_class
                assert [(a - b) % 2 for a, b in zip(after, before)] == [row[g - 1] for row in delta]
                checked += 1
        assert checked >= 100


def test_criterion_5_stabilization_certificate(capsys):
    rng = random.Random(5)
    with criterion(5, "decide(D, D + S2xS2) gives k=1, l=0", 5.0, capsys):
        for _ in range(20):
            D = random_diagram(rng, max_gens=2, max_rels=2, max_len=4)
            D2 = apply_move(D, Stabilize())
            v = stable_diffeo_decide(D, D2)
            assert isinstance(v, StablyDiffeomorphic), (D, v)
            assert (v.cert.k, v.cert.l) == (1, 0), (D, v.cert)
            assert replay(D, v.cert, D2)


def test_criterion_6_desk_instance(capsys):
    Z3 = from_presentation(Presentation.from_strings(1, ["aaa"]), (0,))
    Z3b = from_presentation(Presentation.from_strings(2, ["aaa", "b"]), (0, 0))
    Z2 = from_presentation(Presentation.from_strings(1, ["aa"]), (0,))
    with criterion(6, "Z/3 desk instance and distinct pair", 10.0, capsys):
        v = stable_diffeo_decide(Z3, Z3b, search_depth=2)
        assert isinstance(v, StablyDiffeomorphic), v
        assert len([s for s in v.path if not isinstance(s, Iso)]) <= 2
        assert replay(Z3, v.cert, Z3b)
        w = stable_diffeo_decide(Z3, Z2)
        assert isinstance(w, DistinctInvariant), w
        assert ("hom_count Z/3", 3, 1) in w.witnesses


def test_criterion_7_smith_oracle(capsys):
    rng = random.Random(7)
    with criterion(7, "Smith form against reduction oracle", 10.0, capsys):
        for _ in range(200):
            M = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]
            s = smith_normal_form(M)
            assert s.invariant_factors == smith_oracle(M), M
            assert mat_mul(mat_mul(s.left, M), s.right) == s.diagonal, M
            assert abs(determinant(s.left)) == 1 and abs(determinant(s.right)) == 1, M
            f = s.invariant_factors
            assert all(f[i + 1] % f[i] == 0 for i in range(len(f) - 1)), M


def test_criterion_8_signature_zero(capsys):
    rng = random.Random(8)
    with criterion(8, "signature zero and block additivity", 5.0, capsys):
        for _ in range(200):
            D = random_diagram(rng, max_gens=3, max_rels=4, max_len=6)
            assert signature(D) == 0, D
            E = random_diagram(rng, max_gens=3, max_rels=3, max_len=6)
            L1, L2 = linking_matrix(D), linking_matrix(E)
            assert symmetric_signature(block_sum(L1, L2)) == 0
            size = rng.randint(1, 3)
            S = [[0] * size for _ in range(size)]
            for i in range(size):
                for j in range(i, size):
                    S[i][j] = S[j][i] = rng.randint(-3, 3)
            assert symmetric_signature(block_sum(L1, S)) == symmetric_signature(S)
            assert symmetric_signature(block_sum(S, S)) == 2 * symmetric_signature(S)


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn(None)
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)

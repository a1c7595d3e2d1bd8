"""Shared hypothesis strategies and small independent reference implementations."""

from __future__ import annotations

from hypothesis import strategies as st

from kirbytietze.diagram import NormalFormDiagram
from kirbytietze.presentation import Presentation, Word


def raw_letters(n: int, max_len: int = 8):
    return st.lists(
        st.integers(1, n).flatmap(lambda g: st.sampled_from([g, -g])), max_size=max_len
    )


def words(n: int, max_len: int = 6):
    if n == 0:
        return st.just(Word())
    return raw_letters(n, max_len).map(Word)


@st.composite
def presentations(draw, max_gens: int = 3, max_rels: int = 3, max_len: int = 6, min_gens: int = 0):
    n = draw(st.integers(min_gens, max_gens))
    k = draw(st.integers(0, max_rels))
    rels = [draw(words(n, max_len)) if n else Word() for _ in range(k)]
    return Presentation(n, tuple(rels))


@st.composite
def diagrams(draw, max_gens: int = 3, max_rels: int = 3, max_len: int = 6, min_gens: int = 0):
    P = draw(presentations(max_gens, max_rels, max_len, min_gens))
    framings = draw(st.lists(st.integers(0, 1), min_size=P.num_relators, max_size=P.num_relators))
    return NormalFormDiagram(P.num_generators, tuple((tuple(r), f) for r, f in zip(P.relators, framings)))


def naive_reduce(letters) -> tuple[int, ...]:
    """Repeatedly delete the first cancelling adjacent pair."""
    out = list(letters)
    changed = True
    while changed:
        changed = False
        for i in range(len(out) - 1):
            if out[i] == -out[i + 1]:
                del out[i : i + 2]
                changed = True
                break
    return tuple(out)

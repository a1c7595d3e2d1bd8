from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kirbytietze.classify import (
    S1,
    S2,
    T1,
    DistinctInvariant,
    Iso,
    NotDetermined,
    S2Inverse,
    StablyDiffeomorphic,
    T1Inverse,
    apply_path,
    apply_step,
    format_path,
    isotopy_class,
    parse_path,
    presentation_key,
    stable_diffeo_decide,
    tietze_search,
    transport,
)
from kirbytietze.diagram import NormalFormDiagram
from kirbytietze.errors import ParseError, PreconditionError, RejectedMoveError
from kirbytietze.moves import AddGenerator, HandleTwist, MoveCertificate, Stabilize, apply_move, replay
from kirbytietze.presentation import Presentation, Word, parse_letters

from strategies import diagrams, words

P_ = Presentation.from_strings


def D_(n, handles):
    return NormalFormDiagram(n, tuple((parse_letters(w) if w else (), f) for w, f in handles))


Z3 = D_(1, [("aaa", 0)])
Z3b = D_(2, [("aaa", 0), ("b", 0)])


def assert_path_reaches(P1, P2, path):
    assert presentation_key(apply_path(P1, path)) == presentation_key(P2)


# --- search -------------------------------------------------------------------------

def test_search_adds_trivial_generator():
    path = tietze_search(P_(1, ["aaa"]), P_(2, ["aaa", "b"]), depth=2)
    assert path == (T1(Word()),)


def test_search_identity_path():
    assert tietze_search(P_(1, ["aaa"]), P_(1, ["aaa"])) == ()


def test_search_fails_for_non_isomorphic_groups():
    assert tietze_search(P_(1, ["aaa"]), P_(1, ["aa"]), depth=2, budget=5_000) is None


@pytest.mark.parametrize(
    "P1, P2",
    [
        (P_(1, []), P_(2, ["ab"])),
        (P_(2, ["aab", "b"]), P_(1, ["aa"])),
        (P_(2, ["a", "b"]), P_(2, ["ab", "b"])),
        (P_(1, ["aaa"]), P_(1, ["aaa", ""])),
        (P_(1, ["aaa", ""]), P_(1, ["aaa"])),
        (P_(1, ["aaa"]), P_(1, ["AAA"])),
        (P_(2, ["ab"]), P_(2, ["ba"])),
    ],
)
def test_search_paths_are_valid(P1, P2):
    path = tietze_search(P1, P2, depth=3)
    assert path is not None
    assert_path_reaches(P1, P2, path)


def test_isotopy_class_forgets_rotation_and_order():
    assert isotopy_class(P_(2, ["ab", "bba"])) == isotopy_class(P_(2, ["abb", "BA"]))


# --- transport -----------------------------------------------------------------------

def test_transport_examples():
    E, cert = transport([T1(Word())], Z3)
    assert E == Z3b and cert == MoveCertificate((AddGenerator(Word()),))
    E, cert = transport([S2()], Z3)
    assert E == D_(1, [("aaa", 0), ("", 0)]) and (cert.k, cert.l) == (1, 0)
    assert transport([], Z3) == (Z3, MoveCertificate())


def test_transport_destabilization():
    D = D_(1, [("aaa", 0), ("", 0)])
    E, cert = transport([S2Inverse(2)], D)
    assert E == Z3 and (cert.k, cert.l) == (0, 1)
    assert replay(D, cert, E)
    with pytest.raises(RejectedMoveError):
        transport([S2Inverse(2)], D_(1, [("aaa", 0), ("", 1)]))


def test_transport_reports_step_index():
    with pytest.raises(RejectedMoveError) as info:
        transport([T1(Word()), T1Inverse(1, 5)], Z3)
    assert info.value.index == 2


def test_transport_mixed_path():
    D = D_(2, [("ab", 1), ("b", 0)])
    path = [S2(), S1(3, 1, 1, Word("a")), T1(Word("ab")), Iso(1, Word("a"), True), T1Inverse(3, 4)]
    E, cert = transport(path, D)
    assert E.presentation() == apply_path(D.presentation(), path)
    assert cert.k == 1
    assert replay(D, cert, E)


@settings(max_examples=40, deadline=None)
@given(diagrams(min_gens=1, max_rels=2, max_len=4), st.data())
def test_transport_random_paths_replay(D, data):
    path = []
    P = D.presentation()
    for _ in range(data.draw(st.integers(1, 4))):
        kind = data.draw(st.sampled_from(["T1", "S1", "S2", "Iso"]))
        n, k = P.num_generators, P.num_relators
        if kind == "T1":
            step = T1(data.draw(words(n, 3)))
        elif kind == "S2":
            step = S2()
        elif kind == "Iso" and k:
            step = Iso(data.draw(st.integers(1, k)), data.draw(words(n, 2)), data.draw(st.booleans()))
        elif kind == "S1" and k >= 2:
            i, j = data.draw(st.permutations(range(1, k + 1)))[:2]
            step = S1(i, j, data.draw(st.sampled_from([1, -1])), data.draw(words(n, 2)))
        else:
            continue
        path.append(step)
        P = apply_step(P, step)
    E, cert = transport(path, D)
    assert E.presentation() == P
    assert replay(D, cert, E)


# --- decision -------------------------------------------------------------------------

def test_decide_T1_pair():
    v = stable_diffeo_decide(Z3, Z3b, search_depth=2)
    assert isinstance(v, StablyDiffeomorphic)
    assert (v.cert.k, v.cert.l) == (0, 0)
    assert len(v.path) <= 2
    assert replay(Z3, v.cert, Z3b)
    assert v.exit_code == 0


def test_decide_stabilization():
    D2 = apply_move(Z3, Stabilize())
    v = stable_diffeo_decide(Z3, D2)
    assert isinstance(v, StablyDiffeomorphic)
    assert (v.cert.k, v.cert.l) == (1, 0)
    assert replay(Z3, v.cert, D2)


def test_decide_distinct_groups():
    v = stable_diffeo_decide(Z3, D_(1, [("aa", 0)]))
    assert isinstance(v, DistinctInvariant) and v.exit_code == 1
    assert ("hom_count Z/3", 3, 1) in v.witnesses
    assert ("H1", "Z/3", "Z/2") in v.witnesses


def test_decide_spin_mismatch():
    v = stable_diffeo_decide(D_(1, [("aa", 0)]), D_(1, [("aa", 1)]))
    assert isinstance(v, DistinctInvariant)
    assert v.name == "w-class" and (v.value1, v.value2) == ("spin", "non-spin")


def test_decide_twist_realizes_coboundary():
    v = stable_diffeo_decide(D_(1, [("a", 1)]), D_(1, [("a", 0)]))
    assert isinstance(v, StablyDiffeomorphic)
    assert HandleTwist(1) in v.cert.moves


def test_decide_not_determined_on_search_failure():
    v = stable_diffeo_decide(Z3, Z3b, search_depth=0)
    assert isinstance(v, NotDetermined) and v.exit_code == 2


def test_decide_not_determined_when_class_differs_along_path():
    # relabelling a <-> b identifies these, but the identity path does not
    v = stable_diffeo_decide(D_(2, [("aa", 1), ("bb", 0)]), D_(2, [("aa", 0), ("bb", 1)]))
    assert isinstance(v, NotDetermined)


def test_decide_with_user_path():
    v = stable_diffeo_decide(Z3, Z3b, path=[T1(Word())])
    assert isinstance(v, StablyDiffeomorphic)
    bad = stable_diffeo_decide(Z3, Z3b, path=[S2()])
    assert isinstance(bad, NotDetermined)
    broken = stable_diffeo_decide(Z3, Z3b, path=[T1Inverse(1, 3)])
    assert isinstance(broken, NotDetermined)


def test_decide_rejects_unnormalized():
    with pytest.raises(PreconditionError):
        stable_diffeo_decide(D_(1, [("a", 2)]), Z3)


@settings(max_examples=15, deadline=None)
@given(diagrams(max_gens=2, max_rels=2, max_len=4), st.data())
def test_decide_sound_on_T1_extensions(D, data):
    x = data.draw(words(D.num_one_handles, 2))
    E = apply_move(D, AddGenerator(x))
    v = stable_diffeo_decide(D, E, search_depth=2, budget=20_000)
    assert not isinstance(v, DistinctInvariant)
    if isinstance(v, StablyDiffeomorphic):
        assert replay(D, v.cert, E)


# --- path format ------------------------------------------------------------------------

def test_path_round_trip():
    path = (T1(Word("aB")), T1Inverse(2, 1), S1(1, 2, -1, Word("b")), S2(), S2Inverse(3), Iso(1, Word("a"), True), T1(Word()))
    text = format_path(path)
    assert text.splitlines()[0] == "T1 x=aB"
    assert parse_path(text) == path
    assert parse_path("# comment\n\nS2\n") == (S2(),)


@pytest.mark.parametrize("text", ["T1\n", "T1 y=a\n", "JUMP\n", "S1 i=1 j=2 sign=* w=a\n", "T1inv gen=B rel=1\n"])
def test_path_parse_errors(text):
    with pytest.raises(ParseError):
        parse_path(text)

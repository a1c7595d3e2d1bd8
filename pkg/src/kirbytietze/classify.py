"""Stable diffeomorphism of thickenings: Tietze paths, transport and decision.

Two normal-form diagrams are compared in stages.  Signatures and invariants
of the fundamental group (abelianization, homomorphism counts into small
groups) can prove the manifolds different.  Otherwise a path of Tietze
transformations between the two presentations is looked for; transported
along the path, each step becomes a handle move (or a stabilization), and
a remaining difference of the mod-2 framing cocycles by a coboundary is
removed by 1-handle twists.  The resulting move certificate is replayed
before it is returned.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence, Union

from .algebra import coboundary_matrix, f2_solve, format_h1, h1_invariants
from .diagram import NormalFormDiagram, normal_one_type, signature, validate
from .errors import (
    MalformedInputError,
    ParseError,
    PreconditionError,
    RejectedMoveError,
)
from .groups import DEFAULT_FINGERPRINT, STANDARD_GROUPS, FiniteGroup, hom_count
from .moves import (
    AddGenerator,
    Destabilize,
    HandleTwist,
    Isotopy,
    MoveCertificate,
    RelatorMultiply,
    Stabilize,
    apply_moves,
    elimination_moves,
    replay,
)
from .presentation import (
    Presentation,
    Word,
    cyclic_canonical,
    cyclic_reduce,
    format_letters,
    isotopy_between,
    parse_letters,
    relator_isotopy,
    solve_for_generator,
    tietze_S1,
    tietze_S2,
    tietze_T1,
    tietze_T1_inverse,
    word_key,
)

log = logging.getLogger(__name__)

__all__ = [
    "T1",
    "T1Inverse",
    "S1",
    "S2",
    "S2Inverse",
    "Iso",
    "TietzeStep",
    "isotopy_class",
    "apply_step",
    "apply_path",
    "presentation_key",
    "tietze_search",
    "transport",
    "StablyDiffeomorphic",
    "DistinctInvariant",
    "NotDetermined",
    "Verdict",
    "stable_diffeo_decide",
    "format_path",
    "parse_path",
]


@dataclass(frozen=True)
class T1:
    """Add a generator ``y`` and the relator ``y x^-1``."""

    x: Word = Word()


@dataclass(frozen=True)
class T1Inverse:
    """Remove generator ``gen`` using relator ``rel``, which contains it once."""

    gen: int
    rel: int


@dataclass(frozen=True)
class S1:
    """Replace relator ``i`` by ``r_i w^-1 r_j^sign w``."""

    i: int
    j: int
    sign: int
    w: Word = Word()


@dataclass(frozen=True)
class S2:
    """Append the empty relator."""


@dataclass(frozen=True)
class S2Inverse:
    """Delete relator ``rel``, which must be empty."""

    rel: int


@dataclass(frozen=True)
class Iso:
    """Replace relator ``rel`` by ``w r w^-1``, inverted if ``invert``.

    Not one of the S/T transformations; it is the presentation-level trace
    of isotoping an attaching circle and is used to line up relators that
    agree up to conjugation and inversion.
    """

    rel: int
    w: Word = Word()
    invert: bool = False


TietzeStep = Union[T1, T1Inverse, S1, S2, S2Inverse, Iso]


def apply_step(P: Presentation, step: TietzeStep) -> Presentation:
    if isinstance(step, T1):
        return tietze_T1(P, step.x)
    if isinstance(step, T1Inverse):
        return tietze_T1_inverse(P, step.gen, step.rel)
    if isinstance(step, S1):
        return tietze_S1(P, step.i, step.j, step.sign, step.w)
    if isinstance(step, S2):
        return tietze_S2(P, add=True)
    if isinstance(step, S2Inverse):
        return tietze_S2(P, add=False, rel=step.rel)
    if isinstance(step, Iso):
        return relator_isotopy(P, step.rel, step.w, step.invert)
    raise MalformedInputError(f"not a Tietze step: {step!r}")


def apply_path(P: Presentation, path: Sequence[TietzeStep]) -> Presentation:
    for idx, step in enumerate(path, start=1):
        try:
            P = apply_step(P, step)
        except (PreconditionError, MalformedInputError) as exc:
            raise RejectedMoveError(str(exc), idx) from None
    return P


def presentation_key(P: Presentation):
    """Equality of presentations up to the order of the relators."""
    return (P.num_generators, tuple(sorted(P.relators, key=word_key)))


def isotopy_class(P: Presentation) -> Presentation:
    """``P`` with each relator replaced by its cyclic canonical form, relators sorted."""
    rels = sorted((cyclic_canonical(r) for r in P.relators), key=word_key)
    return Presentation(P.num_generators, tuple(rels))


# --- bounded bidirectional search ---------------------------------------------

@lru_cache(maxsize=None)
def _words_up_to(n: int, length: int) -> tuple[Word, ...]:
    """All reduced words over ``n`` generators of length <= ``length``, shortlex order."""
    letters = [x for g in range(1, n + 1) for x in (g, -g)]
    out = [Word()]
    layer = [()]
    for _ in range(length):
        layer = [w + (x,) for w in layer for x in letters if not (w and w[-1] == -x)]
        out.extend(Word(w) for w in layer)
    return tuple(out)


def _eliminable(P: Presentation, backward: bool) -> Iterator[tuple[int, int]]:
    # backward steps must be undone by a plain T1, which appends the generator
    # last and cannot restore it inside the other relators
    gens = [P.num_generators] if backward else range(1, P.num_generators + 1)
    for g in gens:
        if g < 1:
            continue
        for r, w in enumerate(P.relators, start=1):
            if cyclic_reduce(w)[0].occurrences(g) != 1:
                continue
            if backward and any(
                v.occurrences(g) for s, v in enumerate(P.relators, start=1) if s != r
            ):
                continue
            yield g, r


def _neighbours(P: Presentation, word_bound: int, backward: bool) -> Iterator[TietzeStep]:
    """Candidate steps out of ``P`` in a fixed lexicographic order."""
    k = P.num_relators
    for r, w in enumerate(P.relators, start=1):
        if not w:
            yield S2Inverse(r)
    for g, r in _eliminable(P, backward):
        yield T1Inverse(g, r)
    yield S2()
    words = _words_up_to(P.num_generators, word_bound)
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            if i != j:
                for sign in (1, -1):
                    for w in words:
                        yield S1(i, j, sign, w)
    for x in words:
        yield T1(x)


class _Aligner:
    """Replays steps found on isotopy classes against an actual presentation.

    Relators are addressed by word: before a step uses a relator, an
    :class:`Iso` step makes the actual relator equal to the word the step
    was computed with.
    """

    def __init__(self, P: Presentation):
        self.current = P
        self.steps: list[TietzeStep] = []

    def push(self, step: TietzeStep) -> None:
        self.current = apply_step(self.current, step)
        self.steps.append(step)

    def locate(self, word: Word, exclude: tuple[int, ...] = ()) -> int:
        """Index of a relator isotopic to ``word``, made literally equal to it."""
        target = cyclic_canonical(word)
        hits = [
            idx
            for idx, r in enumerate(self.current.relators, start=1)
            if idx not in exclude and cyclic_canonical(r) == target
        ]
        if not hits:
            raise AssertionError(f"no relator isotopic to {word} while aligning a path")
        exact = [idx for idx in hits if self.current.relators[idx - 1] == word]
        if exact:
            return exact[0]
        idx = hits[0]
        w, invert = isotopy_between(self.current.relators[idx - 1], word)
        self.push(Iso(idx, w, invert))
        return idx

    def replay_on(self, N: Presentation, step: TietzeStep) -> None:
        """Apply ``step`` (stated for ``N``) to the current presentation."""
        if isinstance(step, S1):
            i = self.locate(N.relators[step.i - 1])
            j = self.locate(N.relators[step.j - 1], exclude=(i,))
            self.push(S1(i, j, step.sign, step.w))
        elif isinstance(step, T1Inverse):
            self.push(T1Inverse(step.gen, self.locate(N.relators[step.rel - 1])))
        elif isinstance(step, S2Inverse):
            self.push(S2Inverse(self.locate(Word())))
        else:
            self.push(step)

    def undo(self, Q: Presentation, step: TietzeStep, N: Presentation) -> None:
        """``step`` took ``N`` to ``Q``; move the current presentation back to ``N``."""
        if isinstance(step, T1):
            self.push(T1Inverse(Q.num_generators, self.locate(Q.relators[-1])))
        elif isinstance(step, S1):
            i = self.locate(Q.relators[step.i - 1])
            j = self.locate(Q.relators[step.j - 1], exclude=(i,))
            self.push(S1(i, j, -step.sign, step.w))
        elif isinstance(step, S2):
            self.push(S2Inverse(self.locate(Word())))
        elif isinstance(step, S2Inverse):
            self.push(S2())
        elif isinstance(step, T1Inverse):
            self.push(T1(solve_for_generator(N.relators[step.rel - 1], step.gen)))
        else:
            raise MalformedInputError(f"cannot undo {step!r}")

    def finish(self, P2: Presentation) -> None:
        """Make every relator literally equal to its partner in ``P2``."""
        used: list[int] = []
        for word in P2.relators:
            used.append(self.locate(word, exclude=tuple(used)))


def tietze_search(
    P1: Presentation,
    P2: Presentation,
    depth: int = 4,
    budget: int = 100_000,
    word_bound: int = 4,
) -> tuple[TietzeStep, ...] | None:
    """Breadth-first search from both ends for a Tietze path from ``P1`` to ``P2``.

    The search runs on presentations up to reordering, conjugation and
    inversion of relators.  Paths have at most ``depth`` T/S steps, not
    counting the :class:`Iso` steps inserted to line relators up; words in
    T1 and S1 steps have length at most ``word_bound``; at most ``budget``
    presentations are visited.  The returned path turns ``P1`` into ``P2``
    up to the order of the relators.  ``None`` means the bounds were
    exhausted, not that no path exists.
    """
    start, goal = isotopy_class(P1), isotopy_class(P2)
    # node -> (parent node, step applied to the parent)
    fwd: dict[Presentation, tuple] = {start: (None, None)}
    bwd: dict[Presentation, tuple] = {goal: (None, None)}

    def build(meet: Presentation) -> tuple[TietzeStep, ...]:
        chain = []
        node = meet
        while fwd[node][0] is not None:
            parent, step = fwd[node]
            chain.append((parent, step))
            node = parent
        aligner = _Aligner(P1)
        for parent, step in reversed(chain):
            aligner.replay_on(parent, step)
        node = meet
        while bwd[node][0] is not None:
            parent, step = bwd[node]
            aligner.undo(apply_step(parent, step), step, parent)
            node = parent
        aligner.finish(P2)
        if presentation_key(aligner.current) != presentation_key(P2):
            raise AssertionError("reconstructed Tietze path misses the target")
        return tuple(aligner.steps)

    if start == goal:
        return build(start)
    frontiers = {True: [start], False: [goal]}
    levels = 0
    visited = 2
    while levels < depth:
        forward = len(frontiers[True]) <= len(frontiers[False])
        table, other = (fwd, bwd) if forward else (bwd, fwd)
        nxt = []
        for node in frontiers[forward]:
            for step in _neighbours(node, word_bound, backward=not forward):
                try:
                    child = isotopy_class(apply_step(node, step))
                except PreconditionError:
                    continue
                if child in table:
                    continue
                table[child] = (node, step)
                visited += 1
                if child in other:
                    return build(child)
                if visited >= budget:
                    log.info("tietze_search: budget of %d nodes exhausted", budget)
                    return None
                nxt.append(child)
        frontiers[forward] = nxt
        levels += 1
        if not nxt:
            return None
    return None


# --- transport along a path ---------------------------------------------------

def transport(
    path: Sequence[TietzeStep], D: NormalFormDiagram
) -> tuple[NormalFormDiagram, MoveCertificate]:
    """Carry ``D`` along ``path`` by handle moves.

    Returns the diagram whose presentation is the end of the path, and a
    certificate from ``D`` to it.  S2 steps become stabilizations: the
    certificate stabilizes ``D`` once per S2 step up front (``k``) and the
    target once per S2-inverse step (``l``).
    """
    if any(validate(D)):
        raise PreconditionError("transport needs a diagram in normal form")
    k = sum(isinstance(s, S2) for s in path)
    l = sum(isinstance(s, S2Inverse) for s in path)
    m = D.num_handle_pairs
    current = D  # follows the path literally
    hoisted = apply_moves(D, [Stabilize()] * k)  # stabilized up front
    live = list(range(1, m + 1))  # path relator index -> handle index in `hoisted`
    reserve = list(range(m + 1, m + k + 1))
    moves = []

    for idx, step in enumerate(path, start=1):
        try:
            if isinstance(step, T1):
                here = [AddGenerator(step.x)]
                there = here
                live.append(hoisted.num_handle_pairs + 1)
            elif isinstance(step, T1Inverse):
                if not 1 <= step.rel <= len(live):
                    raise RejectedMoveError(f"relator index {step.rel} outside 1..{len(live)}")
                here = elimination_moves(current, step.gen, step.rel)
                gone = live.pop(step.rel - 1)
                there = elimination_moves(hoisted, step.gen, gone)
                live = [h - (h > gone) for h in live]
                reserve = [h - (h > gone) for h in reserve]
            elif isinstance(step, S1):
                for v in (step.i, step.j):
                    if not 1 <= v <= len(live):
                        raise RejectedMoveError(f"relator index {v} outside 1..{len(live)}")
                here = [RelatorMultiply(step.i, step.j, step.sign, step.w)]
                there = [RelatorMultiply(live[step.i - 1], live[step.j - 1], step.sign, step.w)]
            elif isinstance(step, Iso):
                if not 1 <= step.rel <= len(live):
                    raise RejectedMoveError(f"relator index {step.rel} outside 1..{len(live)}")
                here = [Isotopy(step.rel, step.w, step.invert)]
                there = [Isotopy(live[step.rel - 1], step.w, step.invert)]
            elif isinstance(step, S2):
                here, there = [Stabilize()], []
                live.append(reserve.pop(0))
            elif isinstance(step, S2Inverse):
                if not 1 <= step.rel <= len(live):
                    raise RejectedMoveError(f"relator index {step.rel} outside 1..{len(live)}")
                here, there = [Destabilize(step.rel)], []
                # the pair stays in `hoisted`; the target is stabilized to match
                live.pop(step.rel - 1)
            else:
                raise MalformedInputError(f"not a Tietze step: {step!r}")
            current = apply_moves(current, here)
            hoisted = apply_moves(hoisted, there)
        except RejectedMoveError as exc:
            raise RejectedMoveError(exc.clause, idx) from None
        moves.extend(there)

    cert = MoveCertificate(tuple(moves), k, l)
    check = replay(D, cert, current)
    if not check:
        raise AssertionError(f"transport produced a certificate that does not replay: {check.reason}")
    return current, cert


# --- decision -----------------------------------------------------------------

@dataclass(frozen=True)
class StablyDiffeomorphic:
    cert: MoveCertificate
    path: tuple[TietzeStep, ...] = ()

    exit_code = 0


@dataclass(frozen=True)
class DistinctInvariant:
    """Two diagrams differ in ``name``; ``witnesses`` lists every invariant that differs."""

    name: str
    value1: object
    value2: object
    witnesses: tuple[tuple[str, object, object], ...] = field(default=(), compare=False)

    exit_code = 1


@dataclass(frozen=True)
class NotDetermined:
    reason: str

    exit_code = 2


Verdict = Union[StablyDiffeomorphic, DistinctInvariant, NotDetermined]


def _match_cocycle(P2: Presentation, words1, w1, words2, w2):
    """A 1-cochain ``chi`` and a matching of handles with ``w1 + delta(chi) = w2``.

    Handles are matched by the isotopy class of their words.  Handles with
    the same class may be matched in either order, which matters
    when their framings differ.  Returns ``None`` if no matching works.
    """
    groups: dict[Word, tuple[list[int], list[int]]] = {}
    for idx, w in enumerate(words1):
        groups.setdefault(cyclic_canonical(w), ([], []))[0].append(idx)
    for idx, w in enumerate(words2):
        groups.setdefault(cyclic_canonical(w), ([], []))[1].append(idx)
    options = []
    for word, (left, right) in groups.items():
        a = sorted(w1[i] for i in left)
        b = sorted(w2[j] for j in right)
        if len(a) != len(b):
            return None
        consts = [c for c in (0, 1) if sorted((x + c) % 2 for x in a) == b]
        options.append((right, consts))
    if any(not consts for _, consts in options):
        return None
    delta = coboundary_matrix(P2)
    for choice in itertools.product(*(consts for _, consts in options)):
        diff = [0] * len(words2)
        for (right, _), c in zip(options, choice):
            for j in right:
                diff[j] = c
        chi = f2_solve(delta, diff, P2.num_generators)
        if chi is not None:
            return chi
    return None


def stable_diffeo_decide(
    D1: NormalFormDiagram,
    D2: NormalFormDiagram,
    path: Sequence[TietzeStep] | None = None,
    search_depth: int = 4,
    word_bound: int = 4,
    budget: int = 100_000,
    groups: Sequence[FiniteGroup] | None = None,
) -> Verdict:
    """Decide whether ``D1`` and ``D2`` are stably diffeomorphic, with a certificate.

    ``DistinctInvariant`` is only returned for a real invariant: signature,
    homomorphism counts, first homology, or spin versus non-spin.  Failure to
    find a path, or a framing class that does not match along the path that
    was found, gives ``NotDetermined``.
    """
    for D in (D1, D2):
        problems = validate(D)
        if problems:
            raise PreconditionError("diagram is not in normal form: " + "; ".join(problems))
    if groups is None:
        groups = [STANDARD_GROUPS[name] for name in DEFAULT_FINGERPRINT]

    s1, s2 = signature(D1), signature(D2)
    if s1 != s2:
        return DistinctInvariant("signature", s1, s2, (("signature", s1, s2),))

    P1, P2 = D1.presentation(), D2.presentation()
    witnesses = []
    for G in groups:
        c1, c2 = hom_count(P1, G), hom_count(P2, G)
        if c1 != c2:
            witnesses.append((f"hom_count {G.name}", c1, c2))
    h1, h2 = h1_invariants(P1), h1_invariants(P2)
    if h1 != h2:
        witnesses.append(("H1", format_h1(h1), format_h1(h2)))
    n1, n2 = normal_one_type(D1), normal_one_type(D2)
    if n1.spin != n2.spin:
        spin = {True: "spin", False: "non-spin"}
        witnesses.append(("w-class", spin[n1.spin], spin[n2.spin]))
    if witnesses:
        return DistinctInvariant(*witnesses[0], tuple(witnesses))

    if path is None:
        path = tietze_search(P1, P2, search_depth, budget, word_bound)
        if path is None:
            return NotDetermined(
                f"no Tietze path found (depth {search_depth}, word bound {word_bound}, "
                f"budget {budget})"
            )
    path = tuple(path)
    try:
        end = apply_path(P1, path)
    except RejectedMoveError as exc:
        return NotDetermined(f"Tietze path does not apply: {exc}")
    if isotopy_class(end) != isotopy_class(P2):
        return NotDetermined("Tietze path does not end at the second presentation")
    try:
        moved, cert = transport(path, D1)
    except RejectedMoveError as exc:
        return NotDetermined(f"Tietze path cannot be realized by moves: {exc}")

    chi = _match_cocycle(P2, moved.words, moved.framings, D2.words, D2.framings)
    if chi is None:
        return NotDetermined(
            "framing classes differ by a non-coboundary along this path; "
            "an automorphism of the group might still identify them"
        )
    twists = tuple(HandleTwist(g) for g, bit in enumerate(chi, start=1) if bit)
    cert = MoveCertificate(cert.moves + twists, cert.k, cert.l)
    check = replay(D1, cert, D2)
    if not check:
        raise AssertionError(f"emitted certificate does not replay: {check.reason}")
    return StablyDiffeomorphic(cert, path)


# --- path text format ---------------------------------------------------------

def format_step(step: TietzeStep) -> str:
    if isinstance(step, T1):
        return f"T1 x={format_letters(step.x)}"
    if isinstance(step, T1Inverse):
        return f"T1inv gen={format_letters([step.gen])} rel={step.rel}"
    if isinstance(step, S1):
        s = "+" if step.sign > 0 else "-"
        return f"S1 i={step.i} j={step.j} sign={s} w={format_letters(step.w)}"
    if isinstance(step, S2):
        return "S2"
    if isinstance(step, S2Inverse):
        return f"S2inv rel={step.rel}"
    if isinstance(step, Iso):
        return f"ISO i={step.rel} w={format_letters(step.w)} invert={int(step.invert)}"
    raise MalformedInputError(f"not a Tietze step: {step!r}")


def format_path(path: Sequence[TietzeStep]) -> str:
    return "".join(format_step(s) + "\n" for s in path)


def parse_path(text: str) -> tuple[TietzeStep, ...]:
    steps = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tag, *fields = line.split()
        kv = {}
        for item in fields:
            key, sep, value = item.partition("=")
            if not sep:
                raise ParseError(f"expected key=value, got {item!r}", lineno, 1)
            kv[key] = value
        try:
            if tag == "T1" and set(kv) == {"x"}:
                steps.append(T1(Word(parse_letters(kv["x"]))))
            elif tag == "T1inv" and set(kv) == {"gen", "rel"}:
                (g,) = parse_letters(kv["gen"])
                if g < 0:
                    raise ValueError("generator must be lower case")
                steps.append(T1Inverse(g, int(kv["rel"])))
            elif tag == "S1" and set(kv) == {"i", "j", "sign", "w"}:
                if kv["sign"] not in ("+", "-"):
                    raise ValueError("sign must be + or -")
                steps.append(
                    S1(int(kv["i"]), int(kv["j"]), 1 if kv["sign"] == "+" else -1,
                       Word(parse_letters(kv["w"])))
                )
            elif tag == "S2" and not kv:
                steps.append(S2())
            elif tag == "S2inv" and set(kv) == {"rel"}:
                steps.append(S2Inverse(int(kv["rel"])))
            elif tag == "ISO" and set(kv) == {"i", "w", "invert"}:
                if kv["invert"] not in ("0", "1"):
                    raise ValueError("invert must be 0 or 1")
                steps.append(Iso(int(kv["i"]), Word(parse_letters(kv["w"])), kv["invert"] == "1"))
            else:
                raise ValueError(f"malformed step {line!r}")
        except (ValueError, MalformedInputError) as exc:
            raise ParseError(str(exc), lineno, 1) from None
    return tuple(steps)

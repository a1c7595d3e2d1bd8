"""Normal-form Kirby diagrams of thickenings of 2-complexes.

A diagram in normal form consists of ``n`` dotted circles (1-handles) and
pairs of 2-handles: an attaching circle ``h_i`` that runs over the 1-handles
along a word, with framing 0 or 1, and a 0-framed meridian ``m_i`` of
``h_i``.  Nothing else is linked, and there are ``n`` 3-handles, one 0-handle
and one 4-handle.  The meridians and the 3-/4-handles are therefore
determined by the rest and are not stored: a diagram is the 1-handle count
plus a list of ``(word, framing)`` pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebra import Matrix, block_sum, coboundary_witness, symmetric_signature
from .errors import MalformedInputError, ParseError, PreconditionError
from .presentation import (
    Presentation,
    Word,
    canonical_letters,
    format_letters,
    parse_letters,
    word_key,
)

__all__ = [
    "NormalFormDiagram",
    "NormalOneTypeData",
    "from_presentation",
    "validate",
    "is_normalized",
    "euler_characteristic",
    "linking_matrix",
    "signature",
    "normal_one_type",
    "canonicalize",
    "parse_diagram",
    "serialize_diagram",
]

Handle = tuple[tuple[int, ...], int]


def _as_letters(word: Iterable[int] | str) -> tuple[int, ...]:
    if isinstance(word, str):
        return parse_letters(word)
    if type(word) is tuple and all(type(x) is int for x in word):
        return word
    return tuple(int(x) for x in word)


@dataclass(frozen=True)
class NormalFormDiagram:
    """1-handle count and the ``(word, framing)`` pair of each 2-handle pair.

    Words are kept exactly as given so that :func:`validate` can report
    unreduced input; every move produces reduced words.
    """

    num_one_handles: int
    handles: tuple[Handle, ...] = ()

    def __post_init__(self):
        n = int(self.num_one_handles)
        if n < 0:
            raise MalformedInputError("number of 1-handles must be non-negative")
        handles = tuple((_as_letters(w), int(f)) for w, f in self.handles)
        object.__setattr__(self, "num_one_handles", n)
        object.__setattr__(self, "handles", handles)

    @classmethod
    def _trusted(cls, n: int, handles: tuple[Handle, ...]) -> "NormalFormDiagram":
        # skips coercion; callers pass int n and tuples of (int letters, int framing)
        D = object.__new__(cls)
        object.__setattr__(D, "num_one_handles", n)
        object.__setattr__(D, "handles", handles)
        return D

    @property
    def words(self) -> tuple[Word, ...]:
        return tuple(Word(w) for w, _ in self.handles)

    @property
    def framings(self) -> tuple[int, ...]:
        return tuple(f for _, f in self.handles)

    @property
    def num_handle_pairs(self) -> int:
        return len(self.handles)

    def presentation(self) -> Presentation:
        return Presentation(self.num_one_handles, self.words)

    def __str__(self) -> str:
        pairs = ", ".join(f"({format_letters(w)},{f})" for w, f in self.handles)
        return f"({self.num_one_handles}, [{pairs}])"


@dataclass(frozen=True)
class NormalOneTypeData:
    """The fundamental-group presentation and mod-2 framing cocycle of a diagram.

    ``spin`` is true exactly when ``w_class`` is a coboundary.
    """

    presentation: Presentation
    w_class: tuple[int, ...]
    spin: bool


def from_presentation(P: Presentation, framings: Sequence[int] | None = None) -> NormalFormDiagram:
    """The normal-form diagram of the thickening of the presentation complex of ``P``."""
    if framings is None:
        framings = (0,) * P.num_relators
    if len(framings) != P.num_relators:
        raise MalformedInputError(
            f"{len(framings)} framings given for {P.num_relators} relators"
        )
    if any(f not in (0, 1) for f in framings):
        raise MalformedInputError("framings must be 0 or 1")
    return NormalFormDiagram._trusted(
        P.num_generators, tuple((tuple(r), int(f)) for r, f in zip(P.relators, framings))
    )


def validate(D: NormalFormDiagram) -> list[str]:
    """Violations of the normal-form conditions; empty when ``D`` is in normal form."""
    problems = []
    for i, (w, f) in enumerate(D.handles, start=1):
        if any(x == 0 or abs(x) > D.num_one_handles for x in w):
            problems.append(f"generator index out of range at handle {i}")
        if any(a == -b for a, b in zip(w, w[1:])):
            problems.append(f"word not freely reduced at handle {i}")
        if f not in (0, 1):
            problems.append(f"framing out of {{0,1}} at handle {i}")
    return problems


def is_normalized(D: NormalFormDiagram) -> bool:
    return not validate(D)


def _require_normalized(D: NormalFormDiagram) -> None:
    problems = validate(D)
    if problems:
        raise PreconditionError("diagram is not in normal form: " + "; ".join(problems))


def euler_characteristic(D: NormalFormDiagram) -> int:
    # one 0-handle, n 1-handles, 2k 2-handles, n 3-handles, one 4-handle
    return 2 - 2 * D.num_one_handles + 2 * D.num_handle_pairs


def linking_matrix(D: NormalFormDiagram) -> Matrix:
    """Linking matrix of the 2-handles, ordered ``h_1, m_1, h_2, m_2, ...``."""
    _require_normalized(D)
    return block_sum(*([[f, 1], [1, 0]] for f in D.framings))


def signature(D: NormalFormDiagram) -> int:
    return symmetric_signature(linking_matrix(D))


def normal_one_type(D: NormalFormDiagram) -> NormalOneTypeData:
    _require_normalized(D)
    P = D.presentation()
    w = tuple(f % 2 for f in D.framings)
    return NormalOneTypeData(P, w, coboundary_witness(P, w) is not None)


def canonicalize(D: NormalFormDiagram) -> NormalFormDiagram:
    """Canonical representative up to isotopy and reversal of attaching circles
    and reordering of handle pairs."""
    pairs = [(canonical_letters(w), f) for w, f in D.handles]
    pairs.sort(key=lambda p: (word_key(p[0]), p[1]))
    return NormalFormDiagram._trusted(D.num_one_handles, tuple(pairs))


def serialize_diagram(D: NormalFormDiagram) -> str:
    lines = [f"one_handles: {D.num_one_handles}"]
    lines += [f"handle: {format_letters(w)} {f}" for w, f in D.handles]
    return "\n".join(lines) + "\n"


def parse_diagram(text: str) -> NormalFormDiagram:
    """Parse the ``one_handles:`` / ``handle: WORD FRAMING`` text format."""
    n = None
    handles = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        col = len(raw) - len(raw.lstrip()) + 1
        if not sep:
            raise ParseError(f"expected 'key: value', got {line!r}", lineno, col)
        key, rest = key.strip(), rest.strip()
        if key == "one_handles":
            if n is not None:
                raise ParseError("duplicate one_handles line", lineno, col)
            try:
                n = int(rest)
            except ValueError:
                raise ParseError(f"bad 1-handle count {rest!r}", lineno, col) from None
            if n < 0:
                raise ParseError("1-handle count must be non-negative", lineno, col)
        elif key == "handle":
            if n is None:
                raise ParseError("handle line before one_handles line", lineno, col)
            fields = rest.split()
            if len(fields) != 2:
                raise ParseError("expected 'handle: WORD FRAMING'", lineno, col)
            try:
                letters = parse_letters(fields[0])
            except MalformedInputError as exc:
                raise ParseError(str(exc), lineno, col) from None
            try:
                framing = int(fields[1])
            except ValueError:
                raise ParseError(f"bad framing {fields[1]!r}", lineno, col) from None
            handles.append((letters, framing))
        else:
            raise ParseError(f"unknown key {key!r}", lineno, col)
    if n is None:
        raise ParseError("missing one_handles line", 1, 1)
    return NormalFormDiagram(n, tuple(handles))

"""Free-group words, finite presentations and Tietze transformations.

Generators are numbered from 1.  A letter is a non-zero integer: ``g`` stands
for generator ``g`` and ``-g`` for its inverse.  In text, generator 1 is
``a``, generator 2 is ``b`` and so on; upper case denotes the inverse, so
``abAB`` is the commutator of the first two generators.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import MalformedInputError, PreconditionError

__all__ = [
    "Word",
    "Presentation",
    "free_reduce",
    "parse_letters",
    "format_letters",
    "cyclic_reduce",
    "cyclic_canonical",
    "letter_key",
    "word_key",
    "solve_for_generator",
    "isotopy_between",
    "relator_isotopy",
    "tietze_T1",
    "tietze_T1_inverse",
    "tietze_S1",
    "tietze_S2",
]

MAX_GENERATORS = len(string.ascii_lowercase)


def _letter_from_char(ch: str) -> int:
    if ch in string.ascii_lowercase:
        return ord(ch) - ord("a") + 1
    if ch in string.ascii_uppercase:
        return -(ord(ch) - ord("A") + 1)
    raise MalformedInputError(f"not a generator letter: {ch!r}")


def _char_from_letter(letter: int) -> str:
    g = abs(letter)
    if not 1 <= g <= MAX_GENERATORS:
        raise MalformedInputError(f"generator index {g} has no one-letter name")
    ch = chr(ord("a") + g - 1)
    return ch if letter > 0 else ch.upper()


class Word(tuple):
    """A freely reduced word, stored as a tuple of signed generator indices.

    The constructor performs free reduction, so every ``Word`` is reduced.
    ``*`` is the free-group product and ``inverse()`` the formal inverse.
    """

    def __new__(cls, letters: Iterable[int] | str = ()):
        if type(letters) is Word:
            return letters
        if isinstance(letters, str):
            letters = [_letter_from_char(ch) for ch in letters if ch != "-"]
        stack: list[int] = []
        for x in letters:
            x = int(x)
            if x == 0:
                raise MalformedInputError("letter 0 is not a generator")
            if stack and stack[-1] == -x:
                stack.pop()
            else:
                stack.append(x)
        return super().__new__(cls, stack)

    def __mul__(self, other):  # type: ignore[override]
        return Word(tuple(self) + tuple(other))

    def __rmul__(self, other):  # type: ignore[override]
        return Word(tuple(other) + tuple(self))

    def __add__(self, other):  # type: ignore[override]
        return self * other

    def __getitem__(self, item):  # type: ignore[override]
        out = tuple.__getitem__(self, item)
        return Word(out) if isinstance(item, slice) else out

    def inverse(self) -> "Word":
        return Word(-x for x in reversed(self))

    def power(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(tuple(base) * abs(k))

    def exponent_sum(self, g: int) -> int:
        return sum(1 if x > 0 else -1 for x in self if abs(x) == g)

    def occurrences(self, g: int) -> int:
        return sum(1 for x in self if abs(x) == g)

    def max_generator(self) -> int:
        return max((abs(x) for x in self), default=0)

    def __str__(self) -> str:
        return "".join(_char_from_letter(x) for x in self)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def text(self) -> str:
        """String form with ``-`` for the empty word (used in file formats)."""
        return str(self) or "-"


def parse_letters(text: str) -> tuple[int, ...]:
    """Letters of ``text`` without reduction; ``-`` alone is the empty word."""
    if text == "-":
        return ()
    return tuple(_letter_from_char(ch) for ch in text)


def format_letters(letters: Iterable[int]) -> str:
    return "".join(_char_from_letter(x) for x in letters) or "-"


def free_reduce(raw: Iterable[int] | str, num_generators: int | None = None) -> Word:
    """Freely reduce ``raw``, checking indices against ``num_generators``.

    >>> str(free_reduce("abAa"))
    'ab'
    """
    if isinstance(raw, str):
        letters = [_letter_from_char(ch) for ch in raw if ch != "-"]
    else:
        letters = [int(x) for x in raw]
    for x in letters:
        if x == 0 or (num_generators is not None and abs(x) > num_generators):
            raise MalformedInputError(
                f"generator index {abs(x)} outside 1..{num_generators}"
            )
    return Word(letters)


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Split ``w`` as ``conjugator * core * conjugator^-1`` with ``core`` cyclically reduced."""
    w = Word(w)
    lo, hi = 0, len(w)
    while hi - lo >= 2 and w[lo] == -w[hi - 1]:
        lo += 1
        hi -= 1
    return Word(w[lo:hi]), Word(w[:lo])


def letter_key(x: int) -> int:
    # a < A < b < B < ...
    return 2 * abs(x) - (x > 0)


def word_key(w: Sequence[int]) -> tuple[int, ...]:
    return tuple(2 * abs(x) - (x > 0) for x in w)


@lru_cache(maxsize=65536)
def canonical_letters(w: tuple[int, ...]) -> tuple[int, ...]:
    """:func:`cyclic_canonical` on a raw letter tuple, cached."""
    stack: list[int] = []
    for x in w:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    lo, hi = 0, len(stack)
    while hi - lo >= 2 and stack[lo] == -stack[hi - 1]:
        lo += 1
        hi -= 1
    core = tuple(stack[lo:hi])
    if not core:
        return ()
    best = None
    for base in (core, tuple(-x for x in reversed(core))):
        for r in range(len(base)):
            cand = word_key(base[r:] + base[:r])
            if best is None or cand < best[0]:
                best = (cand, base[r:] + base[:r])
    return best[1]


def cyclic_canonical(w: Word) -> Word:
    """Least rotation of the cyclic reduction of ``w`` or of its inverse.

    Two words have the same canonical form exactly when one is a conjugate of
    the other or of its inverse.
    """
    return Word(canonical_letters(tuple(Word(w))))


def isotopy_between(src: Word, dst: Word) -> tuple[Word, bool] | None:
    """``(w, invert)`` with ``dst == (w src w^-1)`` (inverted when ``invert``), if any.

    Such a pair exists exactly when the two words have the same
    :func:`cyclic_canonical` form.
    """
    src, dst = Word(src), Word(dst)
    core2, c2 = cyclic_reduce(dst)
    for invert in (False, True):
        base = src.inverse() if invert else src
        core1, c1 = cyclic_reduce(base)
        if len(core1) != len(core2):
            return None
        for r in range(max(len(core1), 1)):
            # core2 == u^-1 core1 u with u = core1[:r]
            if tuple(core1[r:]) + tuple(core1[:r]) == tuple(core2):
                u = core1[:r]
                return c2 * u.inverse() * c1.inverse(), invert
    return None


def relator_isotopy(P: Presentation, i: int, w: Word | str, invert: bool = False) -> Presentation:
    """Replace relator ``i`` by ``w r_i w^-1`` (then by its inverse if ``invert``).

    The normal closure of the relators is unchanged.
    """
    a = _check_relator_index(P, i)
    w = free_reduce(w, P.num_generators)
    r = w * P.relators[a] * w.inverse()
    rels = list(P.relators)
    rels[a] = r.inverse() if invert else r
    return Presentation(P.num_generators, tuple(rels))


def solve_for_generator(r: Word, gen: int) -> Word:
    """Solve the relation ``r = 1`` for ``gen`` when ``gen`` occurs once in its cyclic core.

    Returns the word ``X`` (free of ``gen``) with ``gen = X`` modulo ``r``.
    """
    core, _ = cyclic_reduce(r)
    if core.occurrences(gen) != 1:
        raise PreconditionError(
            f"relator {core} must contain generator {gen} exactly once "
            f"after cyclic reduction (found {core.occurrences(gen)})"
        )
    pos = next(p for p, x in enumerate(core) if abs(x) == gen)
    before, after = Word(core[:pos]), Word(core[pos + 1 :])
    # before * gen^e * after = 1  =>  gen^e = before^-1 * after^-1
    solved = before.inverse() * after.inverse()
    return solved if core[pos] > 0 else solved.inverse()


def substitute(w: Word, gen: int, replacement: Word) -> Word:
    """Replace ``gen`` by ``replacement`` in ``w`` and shift higher generators down."""
    out: list[int] = []
    inv = replacement.inverse()
    for x in w:
        g = abs(x)
        if g == gen:
            out.extend(replacement if x > 0 else inv)
        else:
            out.append(x)
    return Word(x if abs(x) < gen else (x - 1 if x > 0 else x + 1) for x in out)


@dataclass(frozen=True)
class Presentation:
    """A finite presentation: ``num_generators`` generators and a list of relators.

    Relators are freely reduced on construction; the empty relator is allowed.
    """

    num_generators: int
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        n = int(self.num_generators)
        if n < 0:
            raise MalformedInputError("number of generators must be non-negative")
        if n > MAX_GENERATORS:
            raise MalformedInputError(f"at most {MAX_GENERATORS} generators supported")
        rels = tuple(free_reduce(r, n) for r in self.relators)
        object.__setattr__(self, "num_generators", n)
        object.__setattr__(self, "relators", rels)

    @classmethod
    def from_strings(cls, num_generators: int, relators: Iterable[str]) -> "Presentation":
        return cls(num_generators, tuple(free_reduce(r, num_generators) for r in relators))

    @property
    def num_relators(self) -> int:
        return len(self.relators)

    def sort_key(self):
        return (self.num_generators, tuple(sorted(word_key(r) for r in self.relators)))

    def __str__(self) -> str:
        gens = ",".join(_char_from_letter(g) for g in range(1, self.num_generators + 1))
        rels = ", ".join(r.text() for r in self.relators)
        return f"<{gens} | {rels}>"


def _check_relator_index(P: Presentation, idx: int, what: str = "relator") -> int:
    if not 1 <= idx <= P.num_relators:
        raise PreconditionError(f"{what} index {idx} outside 1..{P.num_relators}")
    return idx - 1


def tietze_T1(P: Presentation, x: Word | str) -> Presentation:
    """Adjoin a new generator ``y`` together with the relator ``y x^-1``."""
    x = free_reduce(x, P.num_generators)
    y = P.num_generators + 1
    return Presentation(y, P.relators + (Word([y]) * x.inverse(),))


def tietze_T1_inverse(P: Presentation, gen: int, rel: int) -> Presentation:
    """Eliminate generator ``gen`` using relator ``rel`` (both 1-based)."""
    if not 1 <= gen <= P.num_generators:
        raise PreconditionError(f"generator index {gen} outside 1..{P.num_generators}")
    r = _check_relator_index(P, rel)
    replacement = solve_for_generator(P.relators[r], gen)
    rels = tuple(
        substitute(w, gen, replacement) for i, w in enumerate(P.relators) if i != r
    )
    return Presentation(P.num_generators - 1, rels)


def tietze_S1(P: Presentation, i: int, j: int, sign: int, w: Word | str) -> Presentation:
    """Replace relator ``i`` by ``r_i w^-1 s w`` where ``s`` is relator ``j`` to the power ``sign``."""
    if i == j:
        raise PreconditionError("S1 needs two distinct relators (i == j)")
    if sign not in (1, -1):
        raise PreconditionError(f"sign must be +1 or -1, got {sign}")
    a = _check_relator_index(P, i)
    b = _check_relator_index(P, j)
    w = free_reduce(w, P.num_generators)
    s = P.relators[b].power(sign)
    rels = list(P.relators)
    rels[a] = rels[a] * w.inverse() * s * w
    return Presentation(P.num_generators, tuple(rels))


def tietze_S2(P: Presentation, add: bool, rel: int | None = None) -> Presentation:
    """Append an empty relator, or delete relator ``rel`` which must be empty."""
    if add:
        return Presentation(P.num_generators, P.relators + (Word(),))
    if rel is None:
        raise PreconditionError("S2 deletion needs a relator index")
    r = _check_relator_index(P, rel)
    if P.relators[r]:
        raise PreconditionError(f"relator {rel} is not the empty word: {P.relators[r]}")
    return Presentation(P.num_generators, P.relators[:r] + P.relators[r + 1 :])

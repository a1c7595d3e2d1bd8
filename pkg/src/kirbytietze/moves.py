"""Elementary moves on normal-form diagrams and replayable move certificates.

Every move takes a diagram in normal form to another diagram in normal form
(``MeridianFrameSlide`` is the exception: it changes an integer framing by 2
and is what brings raw framings back into {0, 1}).  Indices are 1-based, for
handle pairs and for generators alike.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .diagram import NormalFormDiagram, canonicalize
from .errors import MalformedInputError, ParseError, RejectedMoveError
from .presentation import (
    Word,
    cyclic_reduce,
    format_letters,
    free_reduce,
    parse_letters,
    solve_for_generator,
    substitute,
)

__all__ = [
    "RelatorMultiply",
    "MeridianFrameSlide",
    "HandleTwist",
    "Isotopy",
    "AddGenerator",
    "CancelPair",
    "Stabilize",
    "Destabilize",
    "Move",
    "MoveCertificate",
    "ReplayResult",
    "apply_move",
    "apply_moves",
    "replay",
    "normalize_framings",
    "geometric_T1",
    "geometric_T1_inverse",
    "geometric_S1",
    "geometric_S2",
    "geometric_S2_inverse",
    "format_move",
    "parse_move",
    "serialize_certificate",
    "parse_certificate",
]


@dataclass(frozen=True)
class RelatorMultiply:
    """Slide ``h_i`` over ``h_j`` along ``w``: word_i -> word_i w^-1 word_j^sign w."""

    i: int
    j: int
    sign: int
    w: Word = Word()


@dataclass(frozen=True)
class MeridianFrameSlide:
    """Slide ``h_i`` over its own meridian, shifting its framing by ``delta`` (+2 or -2)."""

    i: int
    delta: int


@dataclass(frozen=True)
class HandleTwist:
    """Twist 1-handle ``g``; each framing changes by the exponent sum of ``g`` mod 2."""

    g: int


@dataclass(frozen=True)
class Isotopy:
    """Conjugate the attaching word of ``h_i`` by ``w``, then optionally reverse it."""

    i: int
    w: Word = Word()
    invert: bool = False


@dataclass(frozen=True)
class AddGenerator:
    """Create a cancelling 1-/2-handle pair: new generator ``y`` and handle ``(y x^-1, 0)``."""

    x: Word = Word()


@dataclass(frozen=True)
class CancelPair:
    """Cancel 1-handle ``gen`` against handle pair ``rel``, which crosses it once."""

    gen: int
    rel: int


@dataclass(frozen=True)
class Stabilize:
    """Connected sum with S^2 x S^2: append the handle pair ``(empty word, 0)``."""


@dataclass(frozen=True)
class Destabilize:
    """Remove the handle pair ``rel``, which must be ``(empty word, 0)``."""

    rel: int


Move = Union[
    RelatorMultiply, MeridianFrameSlide, HandleTwist, Isotopy,
    AddGenerator, CancelPair, Stabilize, Destabilize,
]


@dataclass(frozen=True)
class MoveCertificate:
    """A move sequence witnessing ``D # k(S^2xS^2)  ~  target # l(S^2xS^2)``."""

    moves: tuple[Move, ...] = ()
    k: int = 0
    l: int = 0

    def then(self, other: "MoveCertificate") -> "MoveCertificate":
        if other.k or other.l:
            raise ValueError("only an unstabilized certificate can be appended")
        return MoveCertificate(self.moves + other.moves, self.k, self.l)


@dataclass(frozen=True)
class ReplayResult:
    ok: bool
    failed_index: int | None = None
    reason: str = ""
    result: NormalFormDiagram | None = field(default=None, compare=False)

    def __bool__(self) -> bool:
        return self.ok


def _handle(D: NormalFormDiagram, i: int, name: str = "handle") -> int:
    if not 1 <= i <= D.num_handle_pairs:
        raise RejectedMoveError(f"{name} index {i} outside 1..{D.num_handle_pairs}")
    return i - 1


def _generator(D: NormalFormDiagram, g: int) -> None:
    if not 1 <= g <= D.num_one_handles:
        raise RejectedMoveError(f"1-handle index {g} outside 1..{D.num_one_handles}")


def _word(D: NormalFormDiagram, w) -> Word:
    try:
        return free_reduce(w, D.num_one_handles)
    except MalformedInputError as exc:
        raise RejectedMoveError(str(exc)) from None


def apply_move(D: NormalFormDiagram, m: Move) -> NormalFormDiagram:
    """Apply one move; raises :class:`RejectedMoveError` naming the failed clause."""
    n = D.num_one_handles
    handles = [(Word(w), f) for w, f in D.handles]

    if isinstance(m, RelatorMultiply):
        a, b = _handle(D, m.i, "i"), _handle(D, m.j, "j")
        if a == b:
            raise RejectedMoveError("RelatorMultiply needs i != j")
        if m.sign not in (1, -1):
            raise RejectedMoveError(f"sign must be +1 or -1, got {m.sign}")
        w = _word(D, m.w)
        (ri, fi), (rj, fj) = handles[a], handles[b]
        # the integer framing picks up f_j plus an even linking term; the
        # meridian of h_i absorbs the even part
        handles[a] = (ri * w.inverse() * rj.power(m.sign) * w, (fi + fj) % 2)
        return NormalFormDiagram(n, tuple(handles))

    if isinstance(m, MeridianFrameSlide):
        a = _handle(D, m.i)
        if m.delta not in (2, -2):
            raise RejectedMoveError(f"meridian slide changes framing by +-2, got {m.delta}")
        w, f = handles[a]
        handles[a] = (w, f + m.delta)
        return NormalFormDiagram(n, tuple(handles))

    if isinstance(m, HandleTwist):
        _generator(D, m.g)
        handles = [(w, (f + w.exponent_sum(m.g)) % 2) for w, f in handles]
        return NormalFormDiagram(n, tuple(handles))

    if isinstance(m, Isotopy):
        a = _handle(D, m.i)
        c = _word(D, m.w)
        w, f = handles[a]
        w = c * w * c.inverse()
        handles[a] = (w.inverse() if m.invert else w, f)
        return NormalFormDiagram(n, tuple(handles))

    if isinstance(m, AddGenerator):
        x = _word(D, m.x)
        handles.append((Word([n + 1]) * x.inverse(), 0))
        return NormalFormDiagram(n + 1, tuple(handles))

    if isinstance(m, CancelPair):
        _generator(D, m.gen)
        a = _handle(D, m.rel, "rel")
        w, f = handles[a]
        core, _ = cyclic_reduce(w)
        if core.occurrences(m.gen) != 1:
            raise RejectedMoveError(
                f"handle {m.rel} must run over 1-handle {m.gen} exactly once "
                f"(runs {core.occurrences(m.gen)} times)"
            )
        if f != 0:
            raise RejectedMoveError(f"handle {m.rel} must have framing 0 to cancel (has {f})")
        replacement = solve_for_generator(w, m.gen)
        rest = [
            (substitute(v, m.gen, replacement), fv)
            for idx, (v, fv) in enumerate(handles)
            if idx != a
        ]
        return NormalFormDiagram(n - 1, tuple(rest))

    if isinstance(m, Stabilize):
        handles.append((Word(), 0))
        return NormalFormDiagram(n, tuple(handles))

    if isinstance(m, Destabilize):
        a = _handle(D, m.rel, "rel")
        if handles[a] != (Word(), 0):
            raise RejectedMoveError(f"handle {m.rel} is not the S^2xS^2 pair (empty word, 0)")
        del handles[a]
        return NormalFormDiagram(n, tuple(handles))

    raise MalformedInputError(f"not a move: {m!r}")


def apply_moves(D: NormalFormDiagram, moves) -> NormalFormDiagram:
    """Apply ``moves`` in order; a rejection carries the 1-based index of the failing move."""
    for idx, m in enumerate(moves, start=1):
        try:
            D = apply_move(D, m)
        except RejectedMoveError as exc:
            raise RejectedMoveError(exc.clause, idx) from None
    return D


def _stabilized(D: NormalFormDiagram, times: int) -> NormalFormDiagram:
    for _ in range(times):
        D = apply_move(D, Stabilize())
    return D


def replay(D: NormalFormDiagram, cert: MoveCertificate, target: NormalFormDiagram) -> ReplayResult:
    """Check that ``cert`` carries ``D`` (stabilized ``k`` times) onto ``target``
    (stabilized ``l`` times), up to canonical form."""
    if cert.k < 0 or cert.l < 0:
        return ReplayResult(False, None, "negative stabilization count")
    try:
        out = apply_moves(_stabilized(D, cert.k), cert.moves)
    except RejectedMoveError as exc:
        return ReplayResult(False, exc.index, exc.clause)
    goal = _stabilized(target, cert.l)
    if canonicalize(out) != canonicalize(goal):
        return ReplayResult(False, None, "final diagram differs from target", out)
    return ReplayResult(True, None, "", out)


def normalize_framings(D: NormalFormDiagram) -> tuple[NormalFormDiagram, MoveCertificate]:
    """Bring every framing into {0, 1} by sliding each ``h_i`` over its meridian."""
    moves = []
    for i, f in enumerate(D.framings, start=1):
        while f not in (0, 1):
            delta = -2 if f > 1 else 2
            moves.append(MeridianFrameSlide(i, delta))
            f += delta
    return apply_moves(D, moves), MoveCertificate(tuple(moves))


def geometric_T1(D: NormalFormDiagram, x) -> tuple[NormalFormDiagram, MoveCertificate]:
    """Realize the Tietze move adding a generator equal to ``x``."""
    m = AddGenerator(_word(D, x))
    return apply_move(D, m), MoveCertificate((m,))


def elimination_moves(D: NormalFormDiagram, gen: int, rel: int) -> list[Move]:
    """Twist (if needed), isotopy and cancellation eliminating ``gen`` via handle ``rel``.

    The isotopy rotates the attaching circle so that it starts at its unique
    crossing of 1-handle ``gen``.
    """
    _generator(D, gen)
    a = _handle(D, rel, "rel")
    w, f = Word(D.handles[a][0]), D.handles[a][1]
    core, conj = cyclic_reduce(w)
    if core.occurrences(gen) != 1:
        raise RejectedMoveError(
            f"handle {rel} must run over 1-handle {gen} exactly once "
            f"(runs {core.occurrences(gen)} times)"
        )
    moves: list[Move] = []
    if f % 2:
        moves.append(HandleTwist(gen))
    pos = next(p for p, x in enumerate(core) if abs(x) == gen)
    c = core[:pos].inverse() * conj.inverse()
    if c:
        moves.append(Isotopy(rel, c, False))
    moves.append(CancelPair(gen, rel))
    return moves


def geometric_T1_inverse(
    D: NormalFormDiagram, gen: int, rel: int | None = None
) -> tuple[NormalFormDiagram, MoveCertificate]:
    """Cancel 1-handle ``gen``; by default against the first handle crossing it once."""
    if rel is None:
        _generator(D, gen)
        rel = next(
            (
                i
                for i, w in enumerate(D.words, start=1)
                if cyclic_reduce(w)[0].occurrences(gen) == 1
            ),
            None,
        )
        if rel is None:
            raise RejectedMoveError(f"no handle runs over 1-handle {gen} exactly once")
    moves = elimination_moves(D, gen, rel)
    return apply_moves(D, moves), MoveCertificate(tuple(moves))


def geometric_S1(
    D: NormalFormDiagram, i: int, j: int, sign: int, w
) -> tuple[NormalFormDiagram, MoveCertificate]:
    m = RelatorMultiply(i, j, sign, _word(D, w))
    return apply_move(D, m), MoveCertificate((m,))


def geometric_S2(D: NormalFormDiagram) -> tuple[NormalFormDiagram, MoveCertificate]:
    """Stabilize once; the certificate records it as one left stabilization."""
    return apply_move(D, Stabilize()), MoveCertificate((), k=1, l=0)


def geometric_S2_inverse(
    D: NormalFormDiagram, rel: int | None = None
) -> tuple[NormalFormDiagram, MoveCertificate]:
    """Remove an ``(empty word, 0)`` pair (the last one unless ``rel`` is given)."""
    if rel is None:
        found = [i for i, h in enumerate(D.handles, start=1) if h == ((), 0)]
        if not found:
            raise RejectedMoveError("no (empty word, 0) handle pair to destabilize")
        rel = found[-1]
    return apply_move(D, Destabilize(rel)), MoveCertificate((), k=0, l=1)


# --- certificate text format -------------------------------------------------

def _gen_name(g: int) -> str:
    return format_letters([g])


def format_move(m: Move) -> str:
    if isinstance(m, RelatorMultiply):
        s = "+" if m.sign > 0 else "-"
        return f"S1 i={m.i} j={m.j} sign={s} w={format_letters(m.w)}"
    if isinstance(m, MeridianFrameSlide):
        return f"FRAME i={m.i} delta={m.delta:+d}"
    if isinstance(m, HandleTwist):
        return f"TWIST g={_gen_name(m.g)}"
    if isinstance(m, Isotopy):
        return f"ISO i={m.i} w={format_letters(m.w)} invert={int(m.invert)}"
    if isinstance(m, AddGenerator):
        return f"ADDGEN x={format_letters(m.x)}"
    if isinstance(m, CancelPair):
        return f"CANCEL gen={_gen_name(m.gen)} rel={m.rel}"
    if isinstance(m, Stabilize):
        return "STAB"
    if isinstance(m, Destabilize):
        return f"DESTAB rel={m.rel}"
    raise MalformedInputError(f"not a move: {m!r}")


_MOVE_FIELDS = {
    "S1": ("i", "j", "sign", "w"),
    "FRAME": ("i", "delta"),
    "TWIST": ("g",),
    "ISO": ("i", "w", "invert"),
    "ADDGEN": ("x",),
    "CANCEL": ("gen", "rel"),
    "STAB": (),
    "DESTAB": ("rel",),
}


def _key_values(fields: list[str], lineno: int) -> dict[str, str]:
    out = {}
    for item in fields:
        k, sep, v = item.partition("=")
        if not sep or not k or not v:
            raise ParseError(f"expected key=value, got {item!r}", lineno, 1)
        out[k] = v
    return out


def _gen_from_name(text: str, lineno: int) -> int:
    letters = parse_letters(text)
    if len(letters) != 1 or letters[0] < 0:
        raise ParseError(f"expected a lower-case generator letter, got {text!r}", lineno, 1)
    return letters[0]


def parse_move(line: str, lineno: int = 0) -> Move:
    tag, *fields = line.split()
    if tag not in _MOVE_FIELDS:
        raise ParseError(f"unknown move {tag!r}", lineno, 1)
    kv = _key_values(fields, lineno)
    if set(kv) != set(_MOVE_FIELDS[tag]):
        raise ParseError(
            f"{tag} takes fields {', '.join(_MOVE_FIELDS[tag]) or 'none'}", lineno, 1
        )
    try:
        if tag == "S1":
            if kv["sign"] not in ("+", "-"):
                raise ParseError("sign must be + or -", lineno, 1)
            return RelatorMultiply(
                int(kv["i"]), int(kv["j"]), 1 if kv["sign"] == "+" else -1,
                Word(parse_letters(kv["w"])),
            )
        if tag == "FRAME":
            return MeridianFrameSlide(int(kv["i"]), int(kv["delta"]))
        if tag == "TWIST":
            return HandleTwist(_gen_from_name(kv["g"], lineno))
        if tag == "ISO":
            if kv["invert"] not in ("0", "1"):
                raise ParseError("invert must be 0 or 1", lineno, 1)
            return Isotopy(int(kv["i"]), Word(parse_letters(kv["w"])), kv["invert"] == "1")
        if tag == "ADDGEN":
            return AddGenerator(Word(parse_letters(kv["x"])))
        if tag == "CANCEL":
            return CancelPair(_gen_from_name(kv["gen"], lineno), int(kv["rel"]))
        if tag == "STAB":
            return Stabilize()
        return Destabilize(int(kv["rel"]))
    except (ValueError, MalformedInputError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc), lineno, 1) from None


def serialize_certificate(cert: MoveCertificate) -> str:
    lines = [f"k={cert.k} l={cert.l}"] + [format_move(m) for m in cert.moves]
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> MoveCertificate:
    header = None
    moves = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            kv = _key_values(line.split(), lineno)
            if set(kv) != {"k", "l"}:
                raise ParseError("certificate must start with 'k=<int> l=<int>'", lineno, 1)
            try:
                header = (int(kv["k"]), int(kv["l"]))
            except ValueError:
                raise ParseError("stabilization counts must be integers", lineno, 1) from None
            if min(header) < 0:
                raise ParseError("stabilization counts must be non-negative", lineno, 1)
            continue
        moves.append(parse_move(line, lineno))
    if header is None:
        raise ParseError("missing 'k=<int> l=<int>' header", 1, 1)
    return MoveCertificate(tuple(moves), *header)

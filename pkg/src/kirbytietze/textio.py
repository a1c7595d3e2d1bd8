"""Presentation file format and human-readable diagram rendering.

Presentation files look like::

    # the cyclic group of order 3
    gens: a
    rel: aaa framing=0

Generator names are single lower-case letters, numbered in the order of the
``gens:`` line; in a word the upper-case letter is the inverse.  ``rel: -``
is the empty relator.  ``framing=`` annotations are optional but must be
given for all relators or for none.
"""

from __future__ import annotations

import string
from typing import Sequence

from .diagram import NormalFormDiagram
from .errors import ParseError
from .presentation import Presentation, Word, format_letters

__all__ = [
    "parse_presentation_file",
    "serialize_presentation",
    "render_diagram_text",
]


def parse_presentation_file(text: str) -> tuple[Presentation, tuple[int, ...] | None]:
    """Parse a presentation file; returns the presentation and framings (if annotated)."""
    names: dict[str, int] | None = None
    relators: list[Word] = []
    framings: list[int | None] = []
    rel_lines: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        key, sep, rest = line.strip().partition(":")
        if not sep:
            raise ParseError(f"expected 'gens:' or 'rel:', got {line.strip()!r}", lineno, indent + 1)
        value_col = indent + len(key) + 2 + (len(rest) - len(rest.lstrip()))
        key = key.strip()
        if key == "gens":
            if names is not None:
                raise ParseError("duplicate gens line", lineno, indent + 1)
            names = {}
            col = value_col
            for token in rest.split():
                col = line.index(token, col - 1) + 1
                if len(token) != 1 or token not in string.ascii_lowercase:
                    raise ParseError(
                        f"generator names are single lower-case letters, got {token!r}", lineno, col
                    )
                if token in names:
                    raise ParseError(f"duplicate generator name {token!r}", lineno, col)
                names[token] = len(names) + 1
                col += len(token)
        elif key == "rel":
            if names is None:
                raise ParseError("rel line before gens line", lineno, indent + 1)
            fields = rest.split()
            if not fields or len(fields) > 2:
                raise ParseError("expected 'rel: WORD [framing=0|1]'", lineno, value_col)
            word_text = fields[0]
            letters = []
            if word_text != "-":
                for offset, ch in enumerate(word_text):
                    g = names.get(ch.lower())
                    if g is None or not ch.isalpha():
                        raise ParseError(f"unknown generator letter {ch!r}", lineno, value_col + offset)
                    letters.append(g if ch.islower() else -g)
            relators.append(Word(letters))
            rel_lines.append(lineno)
            if len(fields) == 2:
                k, eq, v = fields[1].partition("=")
                col = line.index(fields[1]) + 1
                if k != "framing" or not eq or v not in ("0", "1"):
                    raise ParseError("framing annotation must be framing=0 or framing=1", lineno, col)
                framings.append(int(v))
            else:
                framings.append(None)
        else:
            raise ParseError(f"unknown key {key!r}", lineno, indent + 1)
    if names is None:
        raise ParseError("missing gens line", 1, 1)
    P = Presentation(len(names), tuple(relators))
    given = [f for f in framings if f is not None]
    if not given:
        return P, None
    if len(given) != len(framings):
        missing = framings.index(None)
        raise ParseError(
            f"relator {missing + 1} has no framing while others do", rel_lines[missing], 1
        )
    return P, tuple(given)


def serialize_presentation(P: Presentation, framings: Sequence[int] | None = None) -> str:
    gens = " ".join(format_letters([g]) for g in range(1, P.num_generators + 1))
    lines = [f"gens: {gens}".rstrip()]
    for idx, r in enumerate(P.relators):
        suffix = f" framing={framings[idx]}" if framings is not None else ""
        lines.append(f"rel: {r.text()}{suffix}")
    return "\n".join(lines) + "\n"


def render_diagram_text(D: NormalFormDiagram) -> str:
    lines = [f"1-handles: {D.num_one_handles}"]
    if not D.handles:
        lines.append("(no 2-handle pairs)")
    for i, (w, f) in enumerate(D.handles, start=1):
        lines.append(f"h_{i}: {format_letters(w)} [f={f}]  m_{i}: 0-framed meridian")
    return "\n".join(lines)

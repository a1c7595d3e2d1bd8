"""Surgery on loops, read off on normal-form diagrams.

Surgery on a loop representing the word ``x`` is carried out by first adding
a cancelling 1-/2-handle pair whose 1-handle represents ``x``, then turning
that dotted circle into a 0-framed 2-handle.  The attaching circle of ``x``
ends up with two 0-framed meridians; one of them unlinks the other, which
then cancels a 3-handle.  The net effect on the diagram is a single new
handle pair ``(x, parity)``, where the parity is the framing choice made for
the loop (only its value mod 2 matters once a 0-framed meridian is present).
"""

from __future__ import annotations

from typing import Sequence

from .diagram import NormalFormDiagram, canonicalize, from_presentation
from .errors import MalformedInputError, PreconditionError
from .presentation import Presentation, Word, free_reduce

__all__ = ["surgery_on_loop", "realize_presentation_by_surgery"]


def surgery_on_loop(D: NormalFormDiagram, x: Word | str, parity: int) -> NormalFormDiagram:
    """Diagram after surgery on the loop ``x`` with framing parity ``parity``."""
    if parity not in (0, 1):
        raise MalformedInputError(f"parity must be 0 or 1, got {parity}")
    word = free_reduce(x, D.num_one_handles)
    return NormalFormDiagram._trusted(D.num_one_handles, D.handles + ((tuple(word), int(parity)),))


def realize_presentation_by_surgery(
    n: int, P: Presentation, framings: Sequence[int]
) -> NormalFormDiagram:
    """Canonical diagram of ``#_n S^1xS^3`` after surgery on the relators of ``P``.

    Starting from ``n`` dotted circles, each relator is killed in turn by
    :func:`surgery_on_loop`.  The result is checked against the thickening of
    the presentation complex, which it must equal after canonicalization.
    """
    if P.num_generators != n:
        raise PreconditionError(
            f"presentation has {P.num_generators} generators but the manifold has {n} 1-handles"
        )
    if len(framings) != P.num_relators:
        raise PreconditionError(f"{len(framings)} framings given for {P.num_relators} relators")
    D = NormalFormDiagram(n)
    for r, f in zip(P.relators, framings):
        D = surgery_on_loop(D, r, f)
    D = canonicalize(D)
    expected = canonicalize(from_presentation(P, framings))
    if D != expected:
        raise AssertionError(f"surgery result {D} differs from thickening {expected}")
    return D

"""Small finite groups given by multiplication tables, and homomorphism counts.

Counting homomorphisms from a finitely presented group into a fixed finite
group is an isomorphism invariant of the presented group, which makes it a
cheap independent check that Tietze moves and diagram moves do not change
the fundamental group.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Hashable, Sequence

import numpy as np

from .errors import MalformedInputError
from .presentation import Presentation

__all__ = [
    "FiniteGroup",
    "hom_count",
    "cyclic_group",
    "direct_product",
    "symmetric_group",
    "dihedral_group",
    "quaternion_group",
    "STANDARD_GROUPS",
    "DEFAULT_FINGERPRINT",
    "group_by_name",
    "fingerprint",
]


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group on the elements ``0..order-1``.

    ``table[x][y]`` is the product ``x*y``.  The group axioms are checked
    once, at construction.
    """

    name: str
    table: tuple[tuple[int, ...], ...]
    identity: int = field(init=False)
    inverses: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        table = tuple(tuple(int(v) for v in row) for row in self.table)
        m = len(table)
        if m == 0:
            raise MalformedInputError("a group needs at least one element")
        if any(len(row) != m for row in table):
            raise MalformedInputError("multiplication table must be square")
        if any(not 0 <= v < m for row in table for v in row):
            raise MalformedInputError("multiplication table is not closed")
        ident = next(
            (e for e in range(m) if all(table[e][x] == x == table[x][e] for x in range(m))),
            None,
        )
        if ident is None:
            raise MalformedInputError("multiplication table has no identity")
        inv = []
        for x in range(m):
            y = next((y for y in range(m) if table[x][y] == ident), None)
            if y is None or table[y][x] != ident:
                raise MalformedInputError(f"element {x} has no two-sided inverse")
            inv.append(y)
        for x, y, z in itertools.product(range(m), repeat=3):
            if table[table[x][y]][z] != table[x][table[y][z]]:
                raise MalformedInputError(f"multiplication is not associative at {(x, y, z)}")
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "identity", ident)
        object.__setattr__(self, "inverses", tuple(inv))
        object.__setattr__(self, "_array", np.array(table, dtype=np.int64))
        object.__setattr__(self, "_inv_array", np.array(inv, dtype=np.int64))

    @property
    def order(self) -> int:
        return len(self.table)

    @classmethod
    def from_elements(
        cls, name: str, elements: Sequence[Hashable], mul: Callable[[Hashable, Hashable], Hashable]
    ) -> "FiniteGroup":
        index = {e: i for i, e in enumerate(elements)}
        try:
            table = [[index[mul(x, y)] for y in elements] for x in elements]
        except KeyError as exc:
            raise MalformedInputError(f"{name}: product {exc} is not an element") from None
        return cls(name, tuple(map(tuple, table)))

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"


@lru_cache(maxsize=None)
def _assignments(order: int, n: int) -> np.ndarray:
    # row g holds the image of generator g+1 in every one of the order**n maps
    if n == 0:
        return np.zeros((0, 1), dtype=np.int64)
    grids = np.indices((order,) * n, dtype=np.int64)
    return grids.reshape(n, -1)


def hom_count(P: Presentation, G: FiniteGroup | Sequence[Sequence[int]]) -> int:
    """Number of homomorphisms from the group presented by ``P`` into ``G``.

    Every assignment of group elements to generators is tried; the relator
    images are evaluated for all assignments at once with numpy indexing.
    """
    if not isinstance(G, FiniteGroup):
        G = FiniteGroup("G", tuple(map(tuple, G)))
    imgs = _assignments(G.order, P.num_generators)
    ok = np.ones(imgs.shape[1], dtype=bool)
    table, inv = G._array, G._inv_array
    for r in P.relators:
        cur = np.full(imgs.shape[1], G.identity, dtype=np.int64)
        for x in r:
            img = imgs[abs(x) - 1]
            cur = table[cur, img if x > 0 else inv[img]]
        ok &= cur == G.identity
    return int(ok.sum())


def cyclic_group(m: int) -> FiniteGroup:
    return FiniteGroup.from_elements(f"Z/{m}", range(m), lambda x, y: (x + y) % m)


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    pairs = [(g, h) for g in range(G.order) for h in range(H.order)]
    return FiniteGroup.from_elements(
        f"{G.name}x{H.name}",
        pairs,
        lambda p, q: (G.table[p[0]][q[0]], H.table[p[1]][q[1]]),
    )


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    # (p*q)(i) = p(q(i))
    return tuple(p[i] for i in q)


def symmetric_group(k: int) -> FiniteGroup:
    return FiniteGroup.from_elements(f"S{k}", list(itertools.permutations(range(k))), _compose)


def dihedral_group(k: int) -> FiniteGroup:
    """Symmetries of the regular ``k``-gon (order ``2k``)."""
    rot = tuple((i + 1) % k for i in range(k))
    ref = tuple((-i) % k for i in range(k))
    elems = {tuple(range(k))}
    frontier = list(elems)
    while frontier:
        p = frontier.pop()
        for s in (rot, ref):
            q = _compose(p, s)
            if q not in elems:
                elems.add(q)
                frontier.append(q)
    return FiniteGroup.from_elements(f"D{k}", sorted(elems), _compose)


_QUAT_UNITS = {
    # (u, v) -> (sign, w) with u*v = sign*w, for units 1, i, j, k
    ("1", u): (1, u) for u in "1ijk"
}
_QUAT_UNITS.update({(u, "1"): (1, u) for u in "1ijk"})
_QUAT_UNITS.update(
    {
        ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
    }
)


def quaternion_group() -> FiniteGroup:
    elems = [(s, u) for u in "1ijk" for s in (1, -1)]

    def mul(p, q):
        sign, unit = _QUAT_UNITS[(p[1], q[1])]
        return (p[0] * q[0] * sign, unit)

    return FiniteGroup.from_elements("Q8", elems, mul)


def _standard() -> dict[str, FiniteGroup]:
    z2, z3 = cyclic_group(2), cyclic_group(3)
    groups = [
        z2,
        z3,
        cyclic_group(4),
        direct_product(z2, z2),
        symmetric_group(3),
        cyclic_group(5),
        cyclic_group(6),
        dihedral_group(4),
        quaternion_group(),
    ]
    return {g.name: g for g in groups}


STANDARD_GROUPS: dict[str, FiniteGroup] = _standard()
DEFAULT_FINGERPRINT: tuple[str, ...] = tuple(STANDARD_GROUPS)

_ALIASES = {
    "Z2": "Z/2", "Z3": "Z/3", "Z4": "Z/4", "Z5": "Z/5", "Z6": "Z/6",
    "Z2xZ2": "Z/2xZ/2", "V4": "Z/2xZ/2", "Q8": "Q8", "S3": "S3", "D4": "D4",
}


def group_by_name(name: str) -> FiniteGroup:
    """Look up one of the fingerprint groups (``Z/3``, ``Z3``, ``S3``, ``D4``, ``Q8`` ...)."""
    key = _ALIASES.get(name, name)
    try:
        return STANDARD_GROUPS[key]
    except KeyError:
        raise MalformedInputError(
            f"unknown group {name!r}; known: {', '.join(STANDARD_GROUPS)}"
        ) from None


def fingerprint(
    P: Presentation, groups: Sequence[FiniteGroup] | None = None
) -> tuple[tuple[str, int], ...]:
    """``(group name, hom_count)`` for each group of the fingerprint list."""
    if groups is None:
        groups = [STANDARD_GROUPS[n] for n in DEFAULT_FINGERPRINT]
    return tuple((G.name, hom_count(P, G)) for G in groups)

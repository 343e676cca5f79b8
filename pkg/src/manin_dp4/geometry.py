"""The quartic surface, its height, lines, curve configuration and F_p counts.

The surface S in P^4 is cut out by

    x0*x3 - x2*x4 = 0,
    x0*x1 + x1*x3 + x2^2 = 0,

with an A3 singularity at (0:0:0:0:1) and an A1 at (0:1:0:0:0).  U is the
complement of the three lines { x2 = 0, x0*x1 = x0*x3 = x1*x3 = 0 }.

Divisor-class data for the desingularisation lives in the basis
l0, ..., l5 of its Picard lattice with intersection form diag(1,-1,...,-1);
the nine curve classes and their adjacency (the Dynkin-style configuration
diagram) drive the coprimality conditions of the torsor module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np

from .numberfield import (
    AlgInt,
    FieldDescriptor,
    canonical_associate,
    exact_divide,
    gcd,
    product_of_max_le,
)

__all__ = [
    "DynkinData",
    "ProjPoint",
    "EDGES",
    "count_Fp",
    "count_Fp_resolved_formula",
    "dynkin_data",
    "in_open_subset",
    "height_le",
    "height_value",
    "intersection_number",
    "on_lines",
    "on_surface",
]


# Edges of the configuration diagram: pairs {i, j} with [E_i].[E_j] = 1.
EDGES = frozenset(
    frozenset(e)
    for e in [
        (1, 6), (2, 6), (3, 6), (3, 4), (4, 5), (5, 7),
        (7, 8), (7, 9), (8, 9), (1, 9), (2, 8),
    ]
)


def _ell(*coeffs: int) -> tuple[int, ...]:
    return tuple(coeffs)


# [E_1], ..., [E_9] in the basis l0..l5.
CURVE_CLASSES: dict[int, tuple[int, ...]] = {
    1: _ell(0, 0, 0, 0, 0, 1),
    2: _ell(0, 0, 0, 0, 1, 0),
    3: _ell(0, 1, -1, 0, 0, 0),
    4: _ell(0, 0, 1, -1, 0, 0),
    5: _ell(0, 0, 0, 1, 0, 0),
    6: _ell(1, -1, 0, 0, -1, -1),
    7: _ell(1, -1, -1, -1, 0, 0),
    8: _ell(1, 0, 0, 0, -1, 0),
    9: _ell(1, 0, 0, 0, 0, -1),
}


def intersection_number(a: Sequence[int], b: Sequence[int]) -> int:
    """Intersection pairing in the signature (1,5) basis: l0^2=1, li^2=-1."""
    if len(a) != 6 or len(b) != 6:
        raise ValueError("divisor classes live in Z^6")
    return a[0] * b[0] - sum(ai * bi for ai, bi in zip(a[1:], b[1:]))


@dataclass(frozen=True)
class DynkinData:
    """The nine curve classes, their Gram matrix and coprimality pair lists."""

    classes: dict[int, tuple[int, ...]]
    gram: tuple[tuple[int, ...], ...]
    adjacent_pairs: frozenset[frozenset[int]]
    nonadjacent_pairs: tuple[tuple[int, int], ...]


@lru_cache(maxsize=1)
def dynkin_data() -> DynkinData:
    gram = tuple(
        tuple(
            intersection_number(CURVE_CLASSES[i], CURVE_CLASSES[j])
            for j in range(1, 10)
        )
        for i in range(1, 10)
    )
    adjacent = frozenset(
        frozenset((i, j))
        for i, j in combinations(range(1, 10), 2)
        if gram[i - 1][j - 1] != 0
    )
    nonadjacent = tuple(
        (i, j)
        for i, j in combinations(range(1, 10), 2)
        if gram[i - 1][j - 1] == 0
    )
    return DynkinData(dict(CURVE_CLASSES), gram, adjacent, nonadjacent)


# ---------------------------------------------------------------------------
# Points on S.
# ---------------------------------------------------------------------------


class ProjPoint:
    """A projective 5-tuple with exact coordinates and a canonical form.

    The canonical representative is content-free (the gcd of the coordinates
    is a unit) and scaled by the unique unit making the first nonzero
    coordinate a canonical associate, so equality of points is equality of
    tuples.
    """

    __slots__ = ("coords", "canonical")

    def __init__(self, coords: Sequence[AlgInt], canonical: bool = False):
        coords = tuple(coords)
        if len(coords) != 5:
            raise ValueError("five coordinates required")
        if not any(coords):
            raise ValueError("the zero tuple is not projective")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "canonical", canonical)

    def __setattr__(self, *a):
        raise AttributeError("ProjPoint is immutable")

    @property
    def field(self) -> FieldDescriptor:
        return self.coords[0].field

    @classmethod
    def from_ints(cls, field: FieldDescriptor, *values) -> "ProjPoint":
        coords = [AlgInt.coerce(field, v) for v in values]
        return cls(coords).canonicalize()

    def canonicalize(self) -> "ProjPoint":
        if self.canonical:
            return self
        coords = list(self.coords)
        nonzero = [c for c in coords if c]
        g = nonzero[0]
        for c in nonzero[1:]:
            g = gcd(g, c)
        if not g.is_unit():
            coords = [exact_divide(c, g) for c in coords]
        lead = next(c for c in coords if c)
        u = exact_divide(canonical_associate(lead), lead)
        coords = [u * c for c in coords]
        return ProjPoint(coords, canonical=True)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return self.canonicalize().coords == other.canonicalize().coords

    def __hash__(self) -> int:
        return hash(self.canonicalize().coords)

    def key(self) -> tuple:
        """A sortable exact key (field tag plus coordinate pairs)."""
        p = self.canonicalize()
        return tuple((c.x, c.y) for c in p.coords)

    def __repr__(self) -> str:
        inner = " : ".join(repr(c) for c in self.coords)
        return f"ProjPoint({inner})"


def on_surface(point: ProjPoint) -> bool:
    """Both defining quadrics vanish exactly."""
    x0, x1, x2, x3, x4 = point.coords
    q1 = x0 * x3 - x2 * x4
    q2 = x0 * x1 + x1 * x3 + x2 * x2
    return not q1 and not q2


def on_lines(point: ProjPoint) -> bool:
    """Whether the point lies on one of the three lines of S."""
    x0, x1, x2, x3, _x4 = point.coords
    return not x2 and not x0 * x1 and not x0 * x3 and not x1 * x3


def in_open_subset(point: ProjPoint) -> bool:
    return on_surface(point) and not on_lines(point)


def height_value(point: ProjPoint) -> int | None:
    """H(P) when exactly representable as an integer, else None.

    Over Q the height of a content-free vector is max |x_i|; over an
    imaginary quadratic field it is max N(x_i) at the single complex place.
    Real quadratic heights are generally irrational.
    """
    p = point.canonicalize()
    field = p.field
    if field.is_rational:
        return max(abs(c.x) for c in p.coords)
    if field.is_imaginary:
        return max(c.norm() for c in p.coords)
    return None


def height_le(point: ProjPoint, bound) -> bool:
    """Certified comparison H(P) <= bound for a canonical representative."""
    p = point.canonicalize()
    exact = height_value(p)
    if exact is not None:
        return exact <= Fraction(bound)
    return product_of_max_le(p.coords, Fraction(bound))


# ---------------------------------------------------------------------------
# Finite-field point counts.
# ---------------------------------------------------------------------------


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in range(2, int(n**0.5) + 1):
        if n % q == 0:
            return False
    return True


def count_Fp(p: int, chunk: int = 1 << 22) -> int:
    """|S(F_p)| by brute-force scan of P^4(F_p).

    Charts x_i = 1, x_j = 0 for j < i, x_j free for j > i partition the
    projective space, so each point is tested exactly once.  Chunked numpy
    evaluation keeps memory flat; feasible for p up to a few hundred.
    """
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p > 1000:
        raise ValueError("count_Fp is a desk-scale scan; p <= 1000 required")
    total = 0
    for lead in range(5):
        nfree = 4 - lead
        size = p**nfree
        for start in range(0, size, chunk):
            idx = np.arange(start, min(start + chunk, size), dtype=np.int64)
            coords = np.zeros((5, len(idx)), dtype=np.int64)
            coords[lead] = 1
            rest = idx
            for j in range(4, lead, -1):
                coords[j] = rest % p
                rest = rest // p
            x0, x1, x2, x3, x4 = coords
            q1 = (x0 * x3 - x2 * x4) % p
            q2 = (x0 * x1 + x1 * x3 + x2 * x2) % p
            total += int(np.count_nonzero((q1 == 0) & (q2 == 0)))
    return total


def count_Fp_resolved_formula(p: int) -> int:
    """Predicted point count of the desingularised surface over F_p."""
    return p * p + 6 * p + 1


def resolution_defect(p: int) -> int:
    """|S~(F_p)| - |S(F_p)| from the exceptional chains.

    The A3 chain over the singular point contributes 3p+1 points in place
    of 1, the A1 chain p+1 in place of 1, so the resolved surface gains
    (3p+1-1) + (p+1-1) = 4p points.
    """
    return 4 * p

"""Every ingredient of the predicted leading constant, exact where possible.

The constant factors as

    c = alpha * beta * (class-number-formula term) * prod_v omega_v

with alpha an exact rational polytope volume (1/8640 here), beta = 1, the
finite omega_v forming the Euler product (1 - 1/q)^6 (1 + 6/q + 1/q^2) over
prime ideal norms q, and the archimedean omega_v computed numerically by the
density module.  This module owns the exact pieces: the polytope volume, the
Euler product with a rigorous tail interval, the theta tables and the local
Moebius identity they satisfy, and the final assembly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import factorial

import numpy as np

from .numberfield import FieldDescriptor, make_field

__all__ = [
    "ConstantBundle",
    "EulerProduct",
    "PolytopeH",
    "THETA0_SUPPORT",
    "alpha",
    "alpha_polytope",
    "assemble_c",
    "euler_factor",
    "finite_product",
    "mobius_local_check",
    "polytope_volume",
    "prime_ideal_norms",
    "theta0_p",
    "theta1_p",
]


# ---------------------------------------------------------------------------
# Exact polytope volume.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolytopeH:
    """An H-polytope: rows (a, b) meaning a . x <= b, exact rationals."""

    halfspaces: tuple[tuple[tuple[Fraction, ...], Fraction], ...]
    dim: int

    @classmethod
    def from_rows(cls, rows, dim: int) -> "PolytopeH":
        hs = []
        for a, b in rows:
            hs.append((tuple(Fraction(c) for c in a), Fraction(b)))
        return cls(tuple(hs), dim)

    def normalized(self) -> "PolytopeH":
        """Scale each inequality so its first nonzero entry is +-1; dedup."""
        seen = []
        for a, b in self.halfspaces:
            lead = next((c for c in a if c), None)
            if lead is None:
                if b < 0:
                    raise ValueError("infeasible trivial constraint")
                continue
            s = abs(lead)
            row = (tuple(c / s for c in a), b / s)
            if row not in seen:
                seen.append(row)
        return PolytopeH(tuple(seen), self.dim)


def _solve_exact(rows: list[list[Fraction]]) -> list[Fraction] | None:
    """Solve a square exact system [A | b]; None when singular."""
    n = len(rows)
    m = [row[:] for row in rows]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [c / pv for c in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [c - f * d for c, d in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def _rank(rows) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][col]
        m[rank] = [c / pv for c in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col]
                m[r] = [c - f * d for c, d in zip(m[r], m[rank])]
        rank += 1
    return rank


def polytope_vertices(poly: PolytopeH) -> list[tuple[Fraction, ...]]:
    """All vertices by exhaustive dim-subset intersection of boundaries."""
    poly = poly.normalized()
    d = poly.dim
    hs = poly.halfspaces
    verts: list[tuple[Fraction, ...]] = []
    for subset in combinations(range(len(hs)), d):
        rows = [list(hs[i][0]) + [hs[i][1]] for i in subset]
        sol = _solve_exact(rows)
        if sol is None:
            continue
        pt = tuple(sol)
        if all(sum(a * x for a, x in zip(row, pt)) <= b for row, b in hs):
            if pt not in verts:
                verts.append(pt)
    return verts


def _assert_bounded(poly: PolytopeH) -> None:
    """Certify boundedness: the recession cone {Ax <= 0} must be {0}."""
    hs = poly.normalized().halfspaces
    d = poly.dim
    A = [list(a) for a, _b in hs]
    if _rank(A) < d:
        raise ValueError("polytope is unbounded (lineality space)")
    for subset in combinations(range(len(A)), d - 1):
        rows = [A[i] for i in subset]
        if _rank(rows) != d - 1:
            continue
        ray = _nullspace_vector(rows, d)
        if ray is None:
            continue
        for r in (ray, tuple(-c for c in ray)):
            if all(sum(a * x for a, x in zip(row, r)) <= 0 for row in A):
                raise ValueError("polytope is unbounded (recession ray found)")


def _nullspace_vector(rows, d) -> tuple[Fraction, ...] | None:
    """A nonzero kernel vector of a rank d-1 system of d-vectors."""
    m = [list(r) for r in rows]
    pivots = []
    rank = 0
    for col in range(d):
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][col]
        m[rank] = [c / pv for c in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col]
                m[r] = [c - f * e for c, e in zip(m[r], m[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(d) if c not in pivots]
    if not free:
        return None
    f0 = free[0]
    vec = [Fraction(0)] * d
    vec[f0] = Fraction(1)
    for r, pc in enumerate(pivots):
        vec[pc] = -m[r][f0]
    return tuple(vec)


def _triangulate(poly: PolytopeH) -> list[tuple[tuple[Fraction, ...], ...]]:
    """Decompose into simplices (tuples of dim+1 vertices), exactly.

    Cone from the lexicographically least vertex over recursively
    triangulated facets; flat pieces contribute zero volume downstream.
    """
    poly = poly.normalized()
    d = poly.dim
    verts = polytope_vertices(poly)
    if len(verts) <= d:
        return []
    if d == 1:
        lo, hi = min(verts), max(verts)
        return [(lo, hi)] if lo != hi else []
    verts.sort()
    v0 = verts[0]
    out = []
    for a, b in poly.halfspaces:
        if sum(c * x for c, x in zip(a, v0)) == b:
            continue  # facet through the apex: zero-volume cones
        fverts = [v for v in verts if sum(c * x for c, x in zip(a, v)) == b]
        if len(fverts) < d:
            continue
        j = next(i for i, c in enumerate(a) if c != 0)
        reduced_rows = []
        for a2, b2 in poly.halfspaces:
            if (a2, b2) == (a, b):
                continue
            # substitute x_j = (b - sum_{i != j} a_i x_i)/a_j
            coef = [
                a2[i] - a2[j] * a[i] / a[j] for i in range(d) if i != j
            ]
            rhs = b2 - a2[j] * b / a[j]
            reduced_rows.append((coef, rhs))
        sub = PolytopeH.from_rows(reduced_rows, d - 1)
        for simplex in _triangulate(sub):
            lifted = []
            for p in simplex:
                full = list(p)
                xj = (b - sum(a[i] * c for i, c in zip(
                    [i for i in range(d) if i != j], p))) / a[j]
                full.insert(j, xj)
                lifted.append(tuple(full))
            out.append(tuple(lifted) + (v0,))
    return out


def _det(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    m = [r[:] for r in rows]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] / inv
                m[r] = [c - f * e for c, e in zip(m[r], m[col])]
    return det


def polytope_volume(poly: PolytopeH) -> Fraction:
    """Exact volume: certified boundedness, then simplicial triangulation."""
    poly = poly.normalized()
    _assert_bounded(poly)
    total = Fraction(0)
    d = poly.dim
    for simplex in _triangulate(poly):
        apex = simplex[-1]
        rows = [[c - a for c, a in zip(v, apex)] for v in simplex[:-1]]
        total += abs(_det(rows))
    return total / factorial(d)


def alpha_polytope() -> PolytopeH:
    """The 5-dimensional effective-cone polytope behind the alpha factor."""
    rows = []
    for i in range(5):
        e = [0] * 5
        e[i] = -1
        rows.append((e, 0))  # x_i >= 0
    rows.append(([2, 2, 2, 1, 0], 1))
    rows.append(([-1, -1, 2, 4, 6], 1))
    return PolytopeH.from_rows(rows, 5)


@lru_cache(maxsize=1)
def alpha() -> Fraction:
    """The rational volume factor of the leading constant: exactly 1/8640."""
    return polytope_volume(alpha_polytope()) / 3


# ---------------------------------------------------------------------------
# Euler product over prime ideal norms.
# ---------------------------------------------------------------------------


def euler_factor(q: int) -> Fraction:
    """(1 - 1/q)^6 (1 + 6/q + 1/q^2) at a prime ideal of norm q, exact."""
    one = Fraction(1)
    return (one - Fraction(1, q)) ** 6 * (one + Fraction(6, q) + Fraction(1, q * q))


def _primes_up_to(n: int) -> np.ndarray:
    if n < 2:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def prime_ideal_norms(field: FieldDescriptor, bound: int) -> list[int]:
    """Norms of the prime ideals of O_K with norm <= bound, with multiplicity."""
    primes = _primes_up_to(bound)
    if field.is_rational:
        return [int(p) for p in primes]
    D = field.discriminant
    out: list[int] = []
    for p in primes:
        p = int(p)
        if D % p == 0:
            out.append(p)  # ramified
        elif p == 2:
            # D odd here: split at 1 mod 8, inert at 5 mod 8
            if D % 8 == 1:
                out.extend([2, 2])
            elif 4 <= bound:
                out.append(4)
        else:
            symbol = pow(D % p, (p - 1) // 2, p)
            if symbol == 1:
                out.extend([p, p])  # split
            elif p * p <= bound:
                out.append(p * p)  # inert
    return sorted(out)


TAIL_CONSTANT = 21  # |log euler_factor(q)| <= 21/q^2 for q >= 11


@dataclass(frozen=True)
class EulerProduct:
    """Truncated Euler product with a rigorous multiplicative tail interval."""

    field_tag: str
    truncation: int
    value: float
    tail_lo: float
    tail_hi: float

    def contains(self, x: float) -> bool:
        return self.tail_lo <= x <= self.tail_hi

    def as_dict(self) -> dict:
        return {
            "P": self.truncation,
            "value": self.value,
            "tail_lo": self.tail_lo,
            "tail_hi": self.tail_hi,
        }


def finite_product(field: FieldDescriptor, bound: int) -> EulerProduct:
    """prod over prime ideal norms q <= bound of euler_factor(q), bracketed.

    Tail: each rational prime above `bound` contributes at most two ideals,
    and |log factor(q)| <= 21/q^2 for q >= 11, so the missing log mass is at
    most 2 * 21 / bound in absolute value.  A small float slop is folded in.
    """
    if bound < 11:
        raise ValueError("truncation bound must be at least 11")
    norms = prime_ideal_norms(field, bound)
    logs = [math.log(float(euler_factor(q))) for q in norms]
    total = math.fsum(logs)
    value = math.exp(total)
    tail = 2 * TAIL_CONSTANT / bound
    slop = 1e-12 + 1e-15 * len(norms)
    lo = value * math.exp(-tail) * (1 - slop)
    hi = value * math.exp(tail) * (1 + slop)
    return EulerProduct(field.tag, bound, value, lo, hi)


# ---------------------------------------------------------------------------
# Theta tables and the local Moebius identity.
# ---------------------------------------------------------------------------


THETA0_SUPPORT = frozenset(
    frozenset(J)
    for J in [(), (1,), (2,), (3,), (4,), (5,), (3, 4), (4, 5)]
)


def theta0_p(J) -> int:
    """Local coprimality indicator of a 5-tuple divisibility pattern."""
    return 1 if frozenset(J) in THETA0_SUPPORT else 0


def theta1_p(J, q: int) -> Fraction:
    """Local Moebius-averaged density table at a prime of norm q."""
    J = frozenset(J)
    one = Fraction(1)
    u = Fraction(1, q)
    if J == frozenset():
        return (one - u) ** 2 * (one + 2 * u)
    if J in (frozenset({1}), frozenset({2})):
        return (one - u) ** 2 * (one + u)
    if J in (frozenset({3}), frozenset({5})):
        return (one - u) ** 2
    if J in (frozenset({4}), frozenset({3, 4}), frozenset({4, 5})):
        return (one - u) ** 3
    return Fraction(0)


def mobius_local_check(q: int, J) -> tuple[Fraction, Fraction]:
    """Both sides of the local Moebius identity at a prime of norm q.

    The left side multiplies theta0 by the sum, over the <= 2^6 local
    divisor tuples (d67, d68, d69, d6, d7, d8) with entries in {1, p} obeying
    the coprimality/divisibility constraints localized at the pattern J, of
    mu / N(d6 d7 d8 d67 d68 d69 (d67 meet d68*d69)).  The right side is the
    theta1 table value; the two must agree exactly as rationals.
    """
    J = frozenset(J)
    allow_67 = not J  # d67 coprime to a1..a5
    allow_68 = not (J & {1, 3, 4, 5})
    allow_69 = not (J & {2, 3, 4, 5})
    allow_6 = bool(J & {4, 5})  # d6 | a4 a5
    allow_7 = bool(J & {1, 2, 3, 4})
    allow_8 = bool(J & {3, 4, 5})
    total = Fraction(0)
    for v67, v68, v69, v6, v7, v8 in product((0, 1), repeat=6):
        if v67 and not allow_67:
            continue
        if v68 and not allow_68:
            continue
        if v69 and not allow_69:
            continue
        if v68 and v69:
            continue  # d68 + d69 = O_K
        if v6 and not allow_6:
            continue
        if v7 and not allow_7:
            continue
        if v8 and not allow_8:
            continue
        exponent = v6 + v7 + v8 + v67 + v68 + v69 + max(v67, v68 + v69)
        mu = (-1) ** (v6 + v7 + v8 + v67 + v68 + v69)
        total += Fraction(mu, q**exponent)
    lhs = theta0_p(J) * total
    rhs = theta1_p(J, q)
    return lhs, rhs


# ---------------------------------------------------------------------------
# Assembly.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstantBundle:
    """The assembled leading constant with an explicit error interval."""

    field_tag: str
    alpha_exact: Fraction
    beta: int
    euler: EulerProduct
    omegas: tuple[dict, ...]  # one {place, value, err} per archimedean place
    prefactor: float  # (2^r1 (2 pi)^r2 R h / |mu|)^6 / |Delta|^4
    c_lo: float
    c_hi: float

    @property
    def c_mid(self) -> float:
        return 0.5 * (self.c_lo + self.c_hi)

    def as_dict(self) -> dict:
        return {
            "field": self.field_tag,
            "alpha": f"{self.alpha_exact.numerator}/{self.alpha_exact.denominator}",
            "beta": self.beta,
            "euler": self.euler.as_dict(),
            "omega": list(self.omegas),
            "prefactor": self.prefactor,
            "c": {"lo": self.c_lo, "hi": self.c_hi},
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.as_dict(), **kw)


def class_number_prefactor(field: FieldDescriptor) -> float:
    """(2^r1 (2 pi)^r2 R_K h_K / |mu_K|)^6 / |Delta_K|^4."""
    r1, r2 = field.signature
    base = (
        2.0**r1
        * (2 * math.pi) ** r2
        * field.regulator
        * field.class_number
        / field.mu_order
    )
    return base**6 / abs(field.discriminant) ** 4


def assemble_c(
    field: FieldDescriptor | str,
    truncation: int = 10**6,
    omega_values: tuple[tuple[float, float], ...] | None = None,
    samples: int = 2_000_000,
    seed: int = 1,
) -> ConstantBundle:
    """Assemble the leading constant from its closed-form ingredients.

    ``omega_values`` may supply precomputed archimedean densities as
    (value, err) per place; otherwise the density module computes them by
    quadrature of the two-variable local integral.
    """
    if isinstance(field, str):
        field = make_field(field)
    ep = finite_product(field, truncation)
    if omega_values is None:
        from .density import omega_archimedean

        omega_values = tuple(
            omega_archimedean(place, method="adelic2d-quad", samples=samples, seed=seed)
            for place in field.places
        )
    omegas = tuple(
        {"place": p, "value": v, "err": e}
        for p, (v, e) in zip(field.places, omega_values)
    )
    pref = class_number_prefactor(field)
    a = float(alpha())
    lo = a * pref * ep.tail_lo
    hi = a * pref * ep.tail_hi
    for _, (v, e) in zip(field.places, omega_values):
        lo *= max(v - e, 0.0)
        hi *= v + e
    return ConstantBundle(field.tag, alpha(), 1, ep, omegas, pref, lo, hi)

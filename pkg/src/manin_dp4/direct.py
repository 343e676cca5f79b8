"""Brute-force oracle for N_{U,H}(B), independent of the torsor machinery.

On the open subset U we have x2 != 0, and the second defining form reads
x1*(x0 + x3) = -x2^2, so x1 divides x2^2 and x4 = x0*x3/x2 is determined.
The oracle loops over (x2, x1 | x2^2, x0), reconstructs the remaining
coordinates, and keeps exactly the primitive representatives of height <= B.
Derivations (chart analysis, the unit-balancing box for quadratic fields)
are spelled out in docs/derivations.md; a full 5-box scan cross-checks the
chart logic for small B in the test suite.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import isqrt

import numpy as np

from .geometry import ProjPoint, height_le, height_value, in_open_subset
from .numberfield import (
    AlgInt,
    FieldDescriptor,
    compare_sigma1_with_rational,
    enumerate_box,
    exact_divide,
    gcd,
    make_field,
)

__all__ = [
    "CountResult",
    "direct_count",
    "direct_count_Q",
    "direct_count_quadratic",
    "full_scan_count_Q",
]

DEFAULT_LIMIT_Q = 10**4
DEFAULT_LIMIT_QUADRATIC = 50


@dataclass(frozen=True)
class CountResult:
    field_tag: str
    B: Fraction
    count: int
    elapsed_s: float
    method: str
    points: tuple | None = None  # canonical coordinate keys when collected

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("counts are nonnegative")


def _divisors_from_factorization(factors: dict[int, int]) -> list[int]:
    divs = [1]
    for p, e in factors.items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return divs


def _factorize(n: int, spf: np.ndarray | None = None) -> dict[int, int]:
    out: dict[int, int] = {}
    if spf is not None and n < len(spf):
        while n > 1:
            p = int(spf[n])
            out[p] = out.get(p, 0) + 1
            n //= p
        return out
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _spf_sieve(n: int) -> np.ndarray:
    spf = np.zeros(n + 1, dtype=np.int64)
    spf[1] = 1
    for i in range(2, n + 1):
        if spf[i] == 0:
            spf[i::i][spf[i::i] == 0] = i
    return spf


def direct_count_Q(
    B,
    limit: int = DEFAULT_LIMIT_Q,
    collect_points: bool = False,
    loop_order: str = "default",
) -> CountResult:
    """Exact N_{U,H}(B) over Q by the chart loop, deduplicated by sign.

    Each point of U(Q) has exactly two primitive integer representatives,
    and exactly one of them has x2 > 0, so looping x2 >= 1 counts each
    point once; the collected set keys are canonical forms, which makes the
    result independent of loop order.
    """
    t0 = time.time()
    B = Fraction(B)
    if B > limit:
        raise ValueError(f"direct oracle limit is B <= {limit}")
    Bi = math.floor(B)
    points: set[tuple] = set()
    if Bi >= 1:
        spf = _spf_sieve(Bi)
        x2_range = range(1, Bi + 1)
        if loop_order == "reversed":
            x2_range = reversed(x2_range)
        x0_all = np.arange(-Bi, Bi + 1, dtype=np.int64)
        for x2 in x2_range:
            divs = _divisors_from_factorization(
                {p: 2 * e for p, e in _factorize(x2, spf).items()}
            )
            if loop_order == "reversed":
                divs = divs[::-1]
            x2sq = x2 * x2
            for d in divs:
                if d > Bi:
                    continue
                for x1 in ((d, -d) if loop_order != "reversed" else (-d, d)):
                    s = -x2sq // x1  # x0 + x3
                    if abs(s) > 2 * Bi:
                        continue
                    lo = max(-Bi, s - Bi)
                    hi = min(Bi, s + Bi)
                    if lo > hi:
                        continue
                    x0 = x0_all[lo + Bi : hi + Bi + 1]
                    x3 = s - x0
                    prod = x0 * x3
                    mask = prod % x2 == 0
                    if not mask.any():
                        continue
                    x0m = x0[mask]
                    x3m = x3[mask]
                    x4 = prod[mask] // x2
                    mask2 = np.abs(x4) <= Bi
                    if not mask2.any():
                        continue
                    for a0, a3, a4 in zip(x0m[mask2], x3m[mask2], x4[mask2]):
                        tup = (int(a0), x1, x2, int(a3), int(a4))
                        if math.gcd(*tup) != 1:
                            continue
                        key = _sign_canonical_Q(tup)
                        points.add(key)
    count = len(points)
    pts = tuple(sorted(points)) if collect_points else None
    return CountResult("Q", B, count, time.time() - t0, "direct", pts)


def _sign_canonical_Q(tup: tuple[int, ...]) -> tuple[int, ...]:
    lead = next(c for c in tup if c)
    return tup if lead > 0 else tuple(-c for c in tup)


def full_scan_count_Q(B: int) -> int:
    """Independent guard: scan the full 5-box |x_i| <= B, no chart logic."""
    n = 2 * B + 1
    vals = np.arange(-B, B + 1, dtype=np.int64)
    count = 0
    # x2 >= 1 picks one representative per point of U (x2 != 0 on U)
    for x2 in range(1, B + 1):
        for x1 in vals:
            if x1 == 0:
                continue
            # x1*(x0+x3) = -x2^2 and x0*x3 = x2*x4
            if (x2 * x2) % x1:
                continue
            s = -(x2 * x2) // x1
            x0 = vals
            x3 = s - x0
            ok = (np.abs(x3) <= B) & ((x0 * x3) % x2 == 0)
            x0v = x0[ok]
            x3v = x3[ok]
            x4v = (x0v * x3v) // x2
            ok2 = np.abs(x4v) <= B
            for a0, a3, a4 in zip(x0v[ok2], x3v[ok2], x4v[ok2]):
                if math.gcd(int(a0), int(x1), x2, int(a3), int(a4)) == 1:
                    count += 1
    return count


# ---------------------------------------------------------------------------
# Quadratic fields: unit-balanced box scan with the same chart structure.
# ---------------------------------------------------------------------------


class _BoxData:
    """Precomputed coordinate arrays for all nonzero elements of a box."""

    def __init__(self, field: FieldDescriptor, bounds: list[Fraction]):
        self.field = field
        self.bounds = bounds
        elems = list(enumerate_box(field, bounds))
        self.elems = elems
        self.X = np.array([e.x for e in elems], dtype=np.int64)
        self.Y = np.array([e.y for e in elems], dtype=np.int64)
        self.N = np.array([e.norm() for e in elems], dtype=np.int64)
        # zero is a legitimate x0/x3 value but not an x1/x2 value
        self.X0 = np.append(self.X, np.int64(0))
        self.Y0 = np.append(self.Y, np.int64(0))
        by_norm: dict[int, list[int]] = {}
        for i, n in enumerate(self.N):
            by_norm.setdefault(int(abs(n)), []).append(i)
        self.by_abs_norm = by_norm
        max_norm = int(np.abs(self.N).max()) if len(elems) else 1
        self.spf = _spf_sieve(max_norm)

    def mul_arrays(self, X1, Y1, X2, Y2):
        """Coordinatewise product in the ring basis (vectorized)."""
        s, t = self.field._omega_sq
        yy = Y1 * Y2
        return X1 * X2 + s * yy, X1 * Y2 + Y1 * X2 + t * yy

    def conj_arrays(self, X, Y):
        if self.field.omega_half:
            return X + Y, -Y
        return X, -Y


def _box_bounds(field: FieldDescriptor, B: Fraction) -> list[Fraction]:
    """Per-place |.|_v bounds inside which every point has a primitive rep.

    Imaginary: the single place carries |x|_v = N(x) <= B for any height-B
    representative.  Real quadratic: a unit rescaling balances the two place
    maxima to within a factor eps^2, giving |x_i|_v <= eps^2 B^(1/2)
    (documented in docs/derivations.md).
    """
    if field.is_imaginary:
        return [B]
    eps1 = field.fundamental_unit().embed_floats()[0]
    cap = eps1 * eps1 * math.sqrt(float(B)) * (1 + 1e-9)
    capf = Fraction(math.ceil(cap * 2**20), 2**20)
    return [capf, capf]


def direct_count_quadratic(
    field: FieldDescriptor | str,
    B,
    limit: int = DEFAULT_LIMIT_QUADRATIC,
    collect_points: bool = False,
    loop_order: str = "default",
) -> CountResult:
    """Exact N_{U,H}(B) for the quadratic fields by balanced-box scanning."""
    t0 = time.time()
    if isinstance(field, str):
        field = make_field(field)
    if field.is_rational:
        raise ValueError("use direct_count_Q over Q")
    B = Fraction(B)
    if B > limit:
        raise ValueError(f"direct oracle limit is B <= {limit} for quadratic fields")
    points: set[tuple] = set()
    if B > 0:
        bounds = _box_bounds(field, B)
        box = _BoxData(field, bounds)
        order = range(len(box.elems))
        if loop_order == "reversed":
            order = reversed(order)
        for i2 in order:
            x2 = box.elems[i2]
            _scan_x2(field, B, box, x2, points)
    count = len(points)
    pts = tuple(sorted(points)) if collect_points else None
    return CountResult(field.tag, B, count, time.time() - t0, "direct", pts)


def _scan_x2(field, B, box: _BoxData, x2: AlgInt, points: set) -> None:
    n2 = abs(x2.norm())
    x2sq = x2 * x2
    # candidate x1: elements of the box whose norm divides N(x2)^2
    fac2 = {p: 2 * e for p, e in _factorize(n2, box.spf).items()}
    cand: list[int] = []
    for d in _divisors_from_factorization(fac2):
        cand.extend(box.by_abs_norm.get(d, ()))
    Bf = float(B)
    caps = [float(b) for b in box.bounds]
    sig2 = _sig_floats(field, x2.x, x2.y)
    for i1 in cand:
        x1 = box.elems[i1]
        q = exact_divide(x2sq, x1)
        if q is None:
            continue
        s = -q  # x0 + x3
        sig_s = _sig_floats(field, s.x, s.y)
        # |x0 + x3|_v <= (2^d_v) cap_v: |.|_v is the squared modulus when complex
        tri = 4.0 if field.is_imaginary else 2.0
        if any(abs(v) > tri * c * (1 + 1e-9) + 1e-9 for v, c in zip(sig_s, caps)):
            continue
        SX, SY = np.int64(s.x), np.int64(s.y)
        # vectorized pass over x0 in the box (zero included)
        X0, Y0 = box.X0, box.Y0
        X3 = SX - X0
        Y3 = SY - Y0
        in_box = _in_box_mask(field, box, X3, Y3)
        if not in_box.any():
            continue
        X0v, Y0v, X3v, Y3v = X0[in_box], Y0[in_box], X3[in_box], Y3[in_box]
        # w = x0*x3; x4 = w / x2 exactly when x2 | w
        WX, WY = box.mul_arrays(X0v, Y0v, X3v, Y3v)
        CX, CY = box.conj_arrays(np.int64(x2.x), np.int64(x2.y))
        PX, PY = box.mul_arrays(WX, WY, CX, CY)
        nrm = x2.norm()
        ok = (PX % nrm == 0) & (PY % nrm == 0)
        if not ok.any():
            continue
        X0v, Y0v, X3v, Y3v = X0v[ok], Y0v[ok], X3v[ok], Y3v[ok]
        X4 = PX[ok] // nrm
        Y4 = PY[ok] // nrm
        # height prescreen before any exact object work
        sig1 = _sig_floats(field, x1.x, x1.y)
        keep = _height_prescreen_mask(
            field, B, Bf, (X0v, Y0v), sig1, sig2, (X3v, Y3v), (X4, Y4)
        )
        if not keep.any():
            continue
        for a0x, a0y, a3x, a3y, a4x, a4y in zip(
            X0v[keep], Y0v[keep], X3v[keep], Y3v[keep], X4[keep], Y4[keep]
        ):
            coords = [
                field.element(int(a0x), int(a0y)),
                x1,
                x2,
                field.element(int(a3x), int(a3y)),
                field.element(int(a4x), int(a4y)),
            ]
            g = None
            for c in coords:
                if c:
                    g = c if g is None else gcd(g, c)
                if g is not None and g.is_unit():
                    break
            if not g.is_unit():
                continue
            pt = ProjPoint(coords).canonicalize()
            if not height_le(pt, B):
                continue
            points.add(pt.key())


def _sig_floats(field, x: int, y: int):
    """Per-place float |sigma| (real quadratic) or the norm (imaginary)."""
    if field.is_imaginary:
        s, _t = field._omega_sq
        if field.omega_half:
            return (float(x * x + x * y - s * y * y),)
        return (float(x * x - s * y * y),)
    sq = math.sqrt(field.m)
    if field.omega_half:
        u = 2 * x + y
        return (abs(u + y * sq) / 2, abs(u - y * sq) / 2)
    return (abs(x + y * sq), abs(x - y * sq))


def _height_prescreen_mask(field, B, Bf, c0, sig1, sig2, c3, c4):
    """Vectorized superset filter H <= B on raw tuples.

    Exact for imaginary fields (H = max of integer norms); float with a
    relative margin for real quadratic fields, so every primitive tuple of
    true height <= B survives.
    """
    X0, Y0 = c0
    X3, Y3 = c3
    X4, Y4 = c4
    if field.is_imaginary:
        s, _t = field._omega_sq
        if field.omega_half:
            n = lambda X, Y: X * X + X * Y - s * Y * Y
        else:
            n = lambda X, Y: X * X - s * Y * Y
        H = np.maximum(n(X0, Y0), np.maximum(n(X3, Y3), n(X4, Y4)))
        H = np.maximum(H, max(int(sig1[0]), int(sig2[0])))
        return H * B.denominator <= B.numerator
    sq = math.sqrt(field.m)
    if field.omega_half:
        U0, U3, U4 = 2 * X0 + Y0, 2 * X3 + Y3, 2 * X4 + Y4
        den = 2.0
    else:
        U0, U3, U4 = X0, X3, X4
        den = 1.0
    out = None
    prod = None
    for sgn in (1, -1):
        a0 = np.abs(U0 + sgn * Y0 * sq) / den
        a3 = np.abs(U3 + sgn * Y3 * sq) / den
        a4 = np.abs(U4 + sgn * Y4 * sq) / den
        place = 0 if sgn == 1 else 1
        mx = np.maximum(a0, np.maximum(a3, a4))
        mx = np.maximum(mx, max(sig1[place], sig2[place]))
        prod = mx if prod is None else prod * mx
    return prod <= Bf * (1 + 1e-6) + 1e-9


def _in_box_mask(field, box: _BoxData, X, Y):
    """Vectorized superset of |x|_v <= bound_v membership.

    Exact integer norms for imaginary fields; a margin-padded float test for
    real quadratic fields (pruning only, exact filters follow downstream).
    """
    if field.is_imaginary:
        s, _t = field._omega_sq
        if field.omega_half:
            N = X * X + X * Y - s * Y * Y
        else:
            N = X * X - s * Y * Y
        b = box.bounds[0]
        return N * b.denominator <= b.numerator
    sq = math.sqrt(field.m)
    if field.omega_half:
        U = 2 * X + Y
        den = 2.0
    else:
        U = X
        den = 1.0
    out = np.ones(X.shape, dtype=bool)
    for place, sgn in ((0, 1), (1, -1)):
        b = float(box.bounds[place])
        sig = np.abs(U + sgn * Y * sq) / den
        out &= sig <= b * (1 + 1e-9) + 1e-9
    return out


def direct_count(field: FieldDescriptor | str, B, **kw) -> CountResult:
    if isinstance(field, str):
        field = make_field(field)
    if field.is_rational:
        return direct_count_Q(B, **kw)
    return direct_count_quadratic(field, B, **kw)

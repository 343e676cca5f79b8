"""Exact arithmetic in the rings of integers of eight small number fields.

Supported: Q and the quadratic fields Q(i), Q(sqrt-2), Q(sqrt-3), Q(sqrt-7),
Q(sqrt-11), Q(sqrt2), Q(sqrt5).  All have class number one and are
norm-Euclidean, so gcds exist element-wise and every ideal is principal.
Elements are stored exactly as integer pairs (x, y) with respect to the ring
basis (1, omega), omega = sqrt(m) or (1 + sqrt(m))/2 depending on the
discriminant class.  Embeddings into R or C are produced as certified
intervals at a requested bit precision; all order decisions offered here are
either interval-certified or fall back to exact integer sign tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Iterator, Sequence

__all__ = [
    "AlgInt",
    "CertifiedComparisonError",
    "FieldDescriptor",
    "FieldNotSupportedError",
    "Interval",
    "SUPPORTED_TAGS",
    "canonical_associate",
    "enumerate_box",
    "exact_divide",
    "gcd",
    "is_canonical",
    "is_coprime",
    "make_field",
    "product_of_max_le",
    "unit_inverse",
    "unit_power",
]


class FieldNotSupportedError(ValueError):
    """Raised for base fields outside the fixed h_K = 1, norm-Euclidean list."""


class CertifiedComparisonError(ArithmeticError):
    """An interval comparison failed to separate at the maximum precision.

    Carries the data that could not be adjudicated so callers can log it or
    retry with exact algebraic comparison.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


# Canonical tag -> squarefree m (None for Q).
_FIELDS = {
    "Q": None,
    "Q(i)": -1,
    "Q(sqrt-2)": -2,
    "Q(sqrt-3)": -3,
    "Q(sqrt-7)": -7,
    "Q(sqrt-11)": -11,
    "Q(sqrt2)": 2,
    "Q(sqrt5)": 5,
}

SUPPORTED_TAGS = tuple(_FIELDS)

_ALIASES = {
    "q": "Q",
    "qq": "Q",
    "rational": "Q",
    "q(i)": "Q(i)",
    "qi": "Q(i)",
    "gaussian": "Q(i)",
    "q(sqrt-1)": "Q(i)",
    "q(sqrt-2)": "Q(sqrt-2)",
    "q(sqrt-3)": "Q(sqrt-3)",
    "eisenstein": "Q(sqrt-3)",
    "q(sqrt-7)": "Q(sqrt-7)",
    "q(sqrt-11)": "Q(sqrt-11)",
    "q(sqrt2)": "Q(sqrt2)",
    "q(sqrt5)": "Q(sqrt5)",
}


@dataclass(frozen=True)
class FieldDescriptor:
    """Invariants of one supported base field.

    ``omega_half`` tells whether the ring basis is (1, (1+sqrt(m))/2) (true
    for m = 1 mod 4) or (1, sqrt(m)).  ``mu_order`` is the number of roots of
    unity; ``regulator`` is log(eps) for the two real quadratic fields and
    1.0 otherwise.
    """

    tag: str
    m: int | None  # squarefree m with K = Q(sqrt m); None for Q
    degree: int
    signature: tuple[int, int]
    discriminant: int
    mu_order: int
    omega_half: bool
    class_number: int = 1

    @property
    def is_rational(self) -> bool:
        return self.m is None

    @property
    def is_imaginary(self) -> bool:
        return self.m is not None and self.m < 0

    @property
    def is_real_quadratic(self) -> bool:
        return self.m is not None and self.m > 0

    @property
    def unit_rank(self) -> int:
        r1, r2 = self.signature
        return r1 + r2 - 1

    @property
    def places(self) -> tuple[str, ...]:
        """Archimedean places, 'R' or 'C', in a fixed order."""
        r1, r2 = self.signature
        return ("R",) * r1 + ("C",) * r2

    @property
    def local_degrees(self) -> tuple[int, ...]:
        return tuple(1 if p == "R" else 2 for p in self.places)

    # omega as an exact pair (s, t): omega^2 = s + t*omega.
    @property
    def _omega_sq(self) -> tuple[int, int]:
        if self.omega_half:
            return ((self.m - 1) // 4, 1)
        return (self.m, 0)

    def element(self, x: int, y: int = 0) -> "AlgInt":
        return AlgInt(self, int(x), int(y))

    def one(self) -> "AlgInt":
        return self.element(1)

    def zero(self) -> "AlgInt":
        return self.element(0)

    def omega(self) -> "AlgInt":
        if self.is_rational:
            raise ValueError("Q has no second basis element")
        return self.element(0, 1)

    def fundamental_unit(self) -> "AlgInt | None":
        """eps > 1 in the first embedding; None unless the field is real quadratic."""
        if not self.is_real_quadratic:
            return None
        if self.m == 2:
            return self.element(1, 1)  # 1 + sqrt2
        return self.element(0, 1)  # (1+sqrt5)/2

    @property
    def regulator(self) -> float:
        eps = self.fundamental_unit()
        if eps is None:
            return 1.0
        return math.log(eps.embed_floats()[0])

    def roots_of_unity(self) -> tuple["AlgInt", ...]:
        one = self.one()
        if self.mu_order == 2:
            return (one, -one)
        if self.mu_order == 4:
            i = self.omega()
            return (one, i, -one, -i)
        # mu_order == 6: omega = (1+sqrt-3)/2 is a primitive 6th root.
        w = self.omega()
        out = [one]
        for _ in range(5):
            out.append(out[-1] * w)
        return tuple(out)

    def units(self) -> tuple["AlgInt", ...]:
        """All units for finite unit groups; mu_K only for real quadratic."""
        return self.roots_of_unity()

    def __repr__(self) -> str:
        return f"FieldDescriptor({self.tag})"


@lru_cache(maxsize=None)
def make_field(tag: str) -> FieldDescriptor:
    """Look up a supported field by tag (case-insensitive, aliases allowed)."""
    key = str(tag).strip()
    canonical = _ALIASES.get(key.lower(), key)
    if canonical not in _FIELDS:
        raise FieldNotSupportedError(
            f"field {tag!r} is not supported: only class-number-one, "
            f"norm-Euclidean fields from {list(_FIELDS)} are available"
        )
    m = _FIELDS[canonical]
    if m is None:
        return FieldDescriptor("Q", None, 1, (1, 0), 1, 2, False)
    omega_half = m % 4 == 1
    disc = m if omega_half else 4 * m
    if m > 0:
        signature = (2, 0)
    else:
        signature = (0, 1)
    mu = {-1: 4, -3: 6}.get(m, 2)
    return FieldDescriptor(canonical, m, 2, signature, disc, mu, omega_half)


class AlgInt:
    """An exact ring-of-integers element x + y*omega (y = 0 over Q)."""

    __slots__ = ("field", "x", "y")

    def __init__(self, field: FieldDescriptor, x: int, y: int = 0):
        if field.is_rational and y != 0:
            raise ValueError("rational integers have no omega component")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __setattr__(self, *args):  # immutable
        raise AttributeError("AlgInt is immutable")

    def _check(self, other: "AlgInt") -> None:
        if self.field is not other.field and self.field != other.field:
            raise ValueError("mixed-field arithmetic is not defined")

    @classmethod
    def coerce(cls, field: FieldDescriptor, value) -> "AlgInt":
        if isinstance(value, AlgInt):
            return value
        return cls(field, int(value))

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.x == other and self.y == 0
        if not isinstance(other, AlgInt):
            return NotImplemented
        return self.field == other.field and self.x == other.x and self.y == other.y

    def __hash__(self) -> int:
        return hash((self.field.tag, self.x, self.y))

    def __bool__(self) -> bool:
        return self.x != 0 or self.y != 0

    def __add__(self, other):
        if isinstance(other, int):
            return AlgInt(self.field, self.x + other, self.y)
        self._check(other)
        return AlgInt(self.field, self.x + other.x, self.y + other.y)

    __radd__ = __add__

    def __neg__(self):
        return AlgInt(self.field, -self.x, -self.y)

    def __sub__(self, other):
        return self + (-other if isinstance(other, AlgInt) else -int(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return AlgInt(self.field, self.x * other, self.y * other)
        self._check(other)
        if self.field.is_rational:
            return AlgInt(self.field, self.x * other.x)
        s, t = self.field._omega_sq
        yy = self.y * other.y
        return AlgInt(
            self.field,
            self.x * other.x + s * yy,
            self.x * other.y + self.y * other.x + t * yy,
        )

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "AlgInt":
        if n < 0:
            inv = unit_inverse(self)
            return inv ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self) -> "AlgInt":
        """The nontrivial Galois conjugate (identity over Q)."""
        if self.field.is_rational:
            return self
        if self.field.omega_half:
            return AlgInt(self.field, self.x + self.y, -self.y)
        return AlgInt(self.field, self.x, -self.y)

    def norm(self) -> int:
        if self.field.is_rational:
            return self.x
        m = self.field.m
        if self.field.omega_half:
            return self.x * self.x + self.x * self.y - ((m - 1) // 4) * self.y * self.y
        return self.x * self.x - m * self.y * self.y

    def trace(self) -> int:
        if self.field.is_rational:
            return self.x
        return 2 * self.x + (self.y if self.field.omega_half else 0)

    def is_unit(self) -> bool:
        return abs(self.norm()) == 1

    def sqrt_coeffs(self) -> tuple[int, int, int]:
        """(P, Q, den) with sigma_1 = (P + Q*sqrt(m))/den exactly."""
        if self.field.omega_half:
            return (2 * self.x + self.y, self.y, 2)
        return (self.x, self.y, 1)

    def embed_floats(self) -> tuple[float, ...]:
        """Float images under the real embeddings / the complex embedding.

        For a complex place a single complex number is returned.  Only for
        display and prescreens; certified work goes through intervals.
        """
        if self.field.is_rational:
            return (float(self.x),)
        P, Q, den = self.sqrt_coeffs()
        m = self.field.m
        if m > 0:
            r = math.sqrt(m)
            return ((P + Q * r) / den, (P - Q * r) / den)
        r = math.sqrt(-m)
        return (complex(P / den, Q * r / den),)

    def abs_place_floats(self) -> tuple[float, ...]:
        """Float |.|_v per archimedean place (norm-compatible powers)."""
        if self.field.is_rational:
            return (abs(float(self.x)),)
        if self.field.is_imaginary:
            return (float(self.norm()),)  # |z|^2 = N exactly
        e1, e2 = self.embed_floats()
        return (abs(e1), abs(e2))

    def abs_place_intervals(self, bits: int = 64) -> tuple["Interval", ...]:
        """Certified enclosures of |.|_v per archimedean place."""
        if self.field.is_rational:
            v = Fraction(abs(self.x))
            return (Interval(v, v),)
        if self.field.is_imaginary:
            v = Fraction(self.norm())
            return (Interval(v, v),)
        P, Q, den = self.sqrt_coeffs()
        lo, hi = _sqrt_enclosure(self.field.m, bits)
        cands1 = (Fraction(P + Q * lo, den), Fraction(P + Q * hi, den))
        cands2 = (Fraction(P - Q * lo, den), Fraction(P - Q * hi, den))
        return (
            Interval(min(cands1), max(cands1)).abs(),
            Interval(min(cands2), max(cands2)).abs(),
        )

    def __repr__(self) -> str:
        if self.field.is_rational:
            return f"AlgInt(Q, {self.x})"
        sym = "w" if self.field.omega_half else f"sqrt({self.field.m})"
        return f"AlgInt({self.field.tag}, {self.x}{self.y:+}*{sym})"


@lru_cache(maxsize=None)
def _sqrt_enclosure(m: int, bits: int) -> tuple[Fraction, Fraction]:
    """[lo, hi] rationals with lo <= sqrt(|m|) <= hi, width 2^-bits."""
    s = isqrt(abs(m) << (2 * bits))
    scale = 1 << bits
    return Fraction(s, scale), Fraction(s + 1, scale)


@dataclass(frozen=True)
class Interval:
    """A closed rational interval; the building block of certified embeddings."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty interval")

    @classmethod
    def point(cls, v) -> "Interval":
        f = Fraction(v)
        return cls(f, f)

    def abs(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return Interval(-self.hi, -self.lo)
        return Interval(Fraction(0), max(-self.lo, self.hi))

    def __mul__(self, other: "Interval") -> "Interval":
        c = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Interval(min(c), max(c))

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def max(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), max(self.hi, other.hi))

    def compare_le(self, bound: Fraction) -> bool | None:
        """True/False when certified, None when the interval straddles."""
        if self.hi <= bound:
            return True
        if self.lo > bound:
            return False
        return None

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def midpoint_float(self) -> float:
        return float((self.lo + self.hi) / 2)


# ---------------------------------------------------------------------------
# Exact sign tests for quadratic irrationalities.
# ---------------------------------------------------------------------------


def sign_p_q_sqrt(P: int, Q: int, m: int) -> int:
    """Exact sign of P + Q*sqrt(m) for m > 0."""
    if Q == 0:
        return (P > 0) - (P < 0)
    if P == 0:
        return (Q > 0) - (Q < 0)
    if P > 0 and Q > 0:
        return 1
    if P < 0 and Q < 0:
        return -1
    # opposite signs: compare P^2 with Q^2 m
    d = P * P - Q * Q * m
    if d == 0:
        return 0
    if P > 0:  # Q < 0
        return 1 if d > 0 else -1
    return -1 if d > 0 else 1


def sigma_sign(a: AlgInt, place: int = 0) -> int:
    """Exact sign of the image of ``a`` under the chosen real embedding."""
    if a.field.is_rational:
        return (a.x > 0) - (a.x < 0)
    if not a.field.is_real_quadratic:
        raise ValueError("sigma_sign needs a real embedding")
    P, Q, _den = a.sqrt_coeffs()
    if place == 1:
        Q = -Q
    return sign_p_q_sqrt(P, Q, a.field.m)


def compare_sigma1_with_rational(a: AlgInt, c: Fraction) -> int:
    """Exact sign of sigma_1(a) - c for real quadratic / rational fields."""
    if a.field.is_rational:
        v = Fraction(a.x) - c
        return (v > 0) - (v < 0)
    P, Q, den = a.sqrt_coeffs()
    # sigma_1(a) - c = (P*c.den - c.num*den + Q*c.den*sqrt(m)) / (den*c.den)
    num = P * c.denominator - c.numerator * den
    return sign_p_q_sqrt(num, Q * c.denominator, a.field.m)


# ---------------------------------------------------------------------------
# Division, gcd, canonical associates.
# ---------------------------------------------------------------------------


def exact_divide(a: AlgInt, b: AlgInt) -> AlgInt | None:
    """a/b when it lies in the ring, else None.  b must be nonzero."""
    if not b:
        raise ZeroDivisionError("division by zero in the ring of integers")
    if a.field.is_rational:
        q, r = divmod(a.x, b.x)
        return AlgInt(a.field, q) if r == 0 else None
    n = b.norm()
    p = a * b.conj()
    if p.x % n or p.y % n:
        return None
    return AlgInt(a.field, p.x // n, p.y // n)


def _nearest_div(a: AlgInt, b: AlgInt) -> tuple[AlgInt, AlgInt]:
    """Quotient and remainder with |N(r)| < |N(b)| (norm-Euclidean division)."""
    field = a.field
    if field.is_rational:
        q = round(Fraction(a.x, b.x))
        qa = AlgInt(field, q)
        return qa, a - qa * b
    n = b.norm()
    p = a * b.conj()
    qx = round(Fraction(p.x, n))
    qy = round(Fraction(p.y, n))
    best = None
    nb = abs(n)
    # nearest rounding contracts for all eight fields except possibly
    # m = -7, -11, where a neighbour of the rounded point always works
    for dx in (0, 1, -1):
        for dy in (0, 1, -1):
            q = AlgInt(field, qx + dx, qy + dy)
            r = a - q * b
            nr = abs(r.norm())
            if nr < nb:
                return q, r
            if best is None or nr < best[2]:
                best = (q, r, nr)
    raise ArithmeticError(f"norm-Euclidean division failed for {a!r}, {b!r}")


def gcd(a: AlgInt, b: AlgInt) -> AlgInt:
    """Canonical-associate generator of the ideal (a, b); (0,0) is rejected."""
    if not a and not b:
        raise ValueError("gcd(0, 0) is undefined")
    if a.field != b.field:
        raise ValueError("gcd of elements of different fields")
    while b:
        _, r = _nearest_div(a, b)
        a, b = b, r
    return canonical_associate(a)


def unit_inverse(u: AlgInt) -> AlgInt:
    n = u.norm()
    if abs(n) != 1:
        raise ZeroDivisionError("not a unit")
    c = u.conj()
    return c if n == 1 else -c


def is_coprime(a: AlgInt, b: AlgInt) -> bool:
    """Whether (a) + (b) = O_K; ideal-level, so units and zeros behave."""
    if not a and not b:
        return False
    return gcd(a, b).is_unit() if not (a.is_unit() or b.is_unit()) else True


def _canonical_imaginary(a: AlgInt) -> AlgInt:
    """Associate with complex argument in [0, 2*pi/|mu_K|)."""
    field = a.field
    for u in field.roots_of_unity():
        b = u * a
        P, Q, _den = b.sqrt_coeffs()  # sigma = (P + Q i sqrt|m|)/den
        if field.mu_order == 2:
            if Q > 0 or (Q == 0 and P > 0):
                return b
        elif field.mu_order == 4:
            if P > 0 and Q >= 0:
                return b
        else:  # mu_order == 6, window [0, pi/3)
            if b.x > 0 and b.y >= 0:
                return b
    raise AssertionError("no associate fell in the argument window")


def _canonical_real_quadratic(a: AlgInt) -> AlgInt:
    """Associate b with sigma_1(b) > 0 and sigma_1(b)^2 / |N(b)| in [1, eps^2).

    The window has multiplicative length eps in sigma_1, so exactly one
    associate qualifies; both conjugates then satisfy
    |N|^(1/2)/eps <= |sigma_v| <= eps |N|^(1/2).
    """
    field = a.field
    eps = field.fundamental_unit()
    n = abs(a.norm())
    # float estimate of the required eps-shift, then exact adjustment
    s1 = abs(a.embed_floats()[0])
    k = math.floor(math.log(s1 / math.sqrt(n)) / field.regulator + 1e-12)
    b = a * unit_power(eps, -k)
    if sigma_sign(b) < 0:
        b = -b
    epssq = eps * eps
    for _ in range(8):
        # window test: |N| <= sigma_1(b)^2 < eps^2 |N|, exactly
        bb = b * b
        lowdiff = bb - n  # sigma_1(b^2) - n >= 0 ?
        low_ok = sigma_sign(lowdiff) >= 0 if lowdiff else True
        highdiff = epssq * n - bb
        high_ok = sigma_sign(highdiff) > 0 if highdiff else False
        if low_ok and high_ok:
            return b
        b = b * (unit_inverse(eps) if not high_ok else eps)
        if sigma_sign(b) < 0:
            b = -b
    raise AssertionError(f"unit window normalisation did not settle for {a!r}")


def unit_power(eps: AlgInt, k: int) -> AlgInt:
    if k >= 0:
        return eps**k
    return unit_inverse(eps) ** (-k)


def canonical_associate(a: AlgInt) -> AlgInt:
    """The deterministic representative of the unit orbit of ``a``.

    Q: the positive associate.  Imaginary quadratic: argument window
    [0, 2*pi/|mu_K|).  Real quadratic: sigma_1 > 0 with the half-open
    logarithmic window sigma_1^2/|N| in [1, eps^2).
    """
    if not a:
        raise ValueError("0 has no canonical associate")
    field = a.field
    if field.is_rational:
        return a if a.x > 0 else -a
    if field.is_imaginary:
        return _canonical_imaginary(a)
    return _canonical_real_quadratic(a)


def is_canonical(a: AlgInt) -> bool:
    return bool(a) and canonical_associate(a) == a


# ---------------------------------------------------------------------------
# Exact lattice box enumeration.
# ---------------------------------------------------------------------------


def _floor_quad(A: int, B: int, C: int, m: int) -> int:
    """floor((A + B*sqrt(m)) / C) for m > 0, C > 0, exactly."""
    approx = (A + B * math.sqrt(m)) / C
    k = math.floor(approx)
    # verify k <= (A + B sqrt m)/C < k+1 by exact sign tests, adjust if needed
    while sign_p_q_sqrt(A - k * C, B, m) < 0:  # value < k
        k -= 1
    while sign_p_q_sqrt(A - (k + 1) * C, B, m) >= 0:  # value >= k+1
        k += 1
    return k


def _ceil_quad(A: int, B: int, C: int, m: int) -> int:
    return -_floor_quad(-A, -B, C, m)


def enumerate_box(field: FieldDescriptor, bounds: Sequence) -> Iterator[AlgInt]:
    """All nonzero a with |a|_v <= bounds[v] at every archimedean place.

    Bounds are taken as exact rationals.  Completeness comes from exact
    coordinate ranges for the embedding lattice; each element is produced
    once.  An empty stream is fine.
    """
    bounds = [Fraction(b) for b in bounds]
    if len(bounds) != len(field.places):
        raise ValueError("one bound per archimedean place required")
    if any(b < 0 for b in bounds):
        raise ValueError("bounds must be nonnegative")
    if field.is_rational:
        limit = math.floor(bounds[0])
        for n in range(1, limit + 1):
            yield field.element(n)
            yield field.element(-n)
        return
    if field.is_imaginary:
        # |a|_v = N(a) <= b: positive definite form
        limit = bounds[0]
        am = -field.m
        if field.omega_half:
            # N = (x + y/2)^2 + am y^2/4 <= b
            ymax = math.floor(_sqrt_frac_floor(4 * limit / am))
            for y in range(-ymax, ymax + 1):
                rem = limit - Fraction(am * y * y, 4)
                if rem < 0:
                    continue
                half = _sqrt_frac_floor(rem)
                xlo = math.ceil(-half - Fraction(y, 2))
                xhi = math.floor(half - Fraction(y, 2))
                for x in range(xlo, xhi + 1):
                    a = field.element(x, y)
                    if a and Fraction(a.norm()) <= limit:
                        yield a
        else:
            ymax = math.floor(_sqrt_frac_floor(limit / am))
            for y in range(-ymax, ymax + 1):
                rem = limit - am * y * y
                xmax = math.floor(_sqrt_frac_floor(rem))
                for x in range(-xmax, xmax + 1):
                    a = field.element(x, y)
                    if a and Fraction(a.norm()) <= limit:
                        yield a
        return
    # real quadratic: |sigma_1| <= b1, |sigma_2| <= b2 with
    # sigma_{1,2} = (u +/- y sqrt(m))/den, u = x (den=1) or 2x+y (den=2)
    m = field.m
    b1, b2 = bounds
    den = 2 if field.omega_half else 1
    s1 = den * b1  # |u + y sqrt m| <= s1
    s2 = den * b2
    # |y| sqrt m <= (s1+s2)/2, i.e. y^2 m <= ((s1+s2)/2)^2
    stot = s1 + s2
    ymax = math.floor(_sqrt_frac_floor((stot / 2) ** 2 / m))
    for y in range(-ymax, ymax + 1):
        # u in [-s1 - y sqrt m, s1 - y sqrt m] intersect [y sqrt m - s2, y sqrt m + s2]
        lo1 = _ceil_quad(-s1.numerator, -y * s1.denominator, s1.denominator, m)
        hi1 = _floor_quad(s1.numerator, -y * s1.denominator, s1.denominator, m)
        lo2 = _ceil_quad(-s2.numerator, y * s2.denominator, s2.denominator, m)
        hi2 = _floor_quad(s2.numerator, y * s2.denominator, s2.denominator, m)
        for u in range(max(lo1, lo2), min(hi1, hi2) + 1):
            if den == 2:
                if (u - y) % 2:
                    continue
                x = (u - y) // 2
            else:
                x = u
            a = field.element(x, y)
            if a:
                yield a


def _sqrt_frac_floor(q: Fraction) -> Fraction:
    """Largest integer n with n^2 <= q, as a Fraction (0 if q < 0)."""
    if q < 0:
        return Fraction(0)
    n = isqrt(q.numerator // q.denominator)
    while (n + 1) * (n + 1) * q.denominator <= q.numerator:
        n += 1
    while n * n * q.denominator > q.numerator:
        n -= 1
    return Fraction(n)


# ---------------------------------------------------------------------------
# Certified comparisons of products of coordinate maxima (heights).
# ---------------------------------------------------------------------------


def product_of_max_le(
    vectors: Sequence[AlgInt],
    bound: Fraction,
    start_bits: int = 128,
    max_bits: int = 1024,
) -> bool:
    """Certified test  prod_v max_i |a_i|_v <= bound  over the field's places.

    Interval refinement with doubling precision; for the supported quadratic
    fields an exact algebraic comparison settles any remaining tie.
    """
    field = vectors[0].field
    bound = Fraction(bound)
    bits = start_bits
    while bits <= max_bits:
        per_place = [a.abs_place_intervals(bits) for a in vectors]
        prod = Interval.point(1)
        for v in range(len(field.places)):
            mx = per_place[0][v]
            for ivs in per_place[1:]:
                mx = mx.max(ivs[v])
            prod = prod * mx
        res = prod.compare_le(bound)
        if res is not None:
            return res
        bits *= 2
    if field.is_real_quadratic:
        return _exact_product_of_max_le(vectors, bound)
    raise CertifiedComparisonError(
        "height comparison undecided at maximum precision", witness=(vectors, bound)
    )


def _exact_product_of_max_le(vectors: Sequence[AlgInt], bound: Fraction) -> bool:
    """Exact H <= bound for real quadratic fields via sign tests on squares."""
    m = vectors[0].field.m
    field = vectors[0].field

    def argmax(place: int) -> AlgInt:
        best = vectors[0]
        for a in vectors[1:]:
            # |sigma(a)| > |sigma(best)| iff sigma(a^2 - best^2) > 0
            d = a * a - best * best
            if d and sigma_sign(d, place) > 0:
                best = a
        return best

    z1 = argmax(0)
    z2 = argmax(1)
    # H^2 = sigma_1(z1^2) sigma_2(z2^2) = sigma_1(z1^2 * conj(z2^2))
    prod = (z1 * z1) * (z2 * z2).conj()
    return compare_sigma1_with_rational(prod, bound * bound) <= 0

"""Exact scalar helpers: rationals, integer scaling and quadratic surds.

``Rat`` is :class:`fractions.Fraction`; a ``RatVec`` is a plain tuple of
Fractions.  Everything geometric in this package is built from these.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Tuple, Union

from gmpy2 import mpq

Rat = Fraction
RatVec = Tuple[Fraction, ...]
Number = Union[int, Fraction]


def to_mpq(x) -> mpq:
    """Exact conversion to gmpy2's rational type, used inside hot loops."""
    x = rat(x)
    return mpq(x.numerator, x.denominator)


def from_mpq(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def rat(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected on purpose: they would silently inject rounding.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot build an exact rational from {type(x).__name__}")


def ratvec(xs: Iterable) -> RatVec:
    return tuple(rat(x) for x in xs)


def fmt_rat(x: Fraction) -> str:
    """Serialize as ``"num/den"`` (always with a denominator)."""
    return f"{x.numerator}/{x.denominator}"


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def norm_sq(a: Sequence) -> Fraction:
    return sum((x * x for x in a), Fraction(0))


def lcm_denominators(xs: Iterable[Fraction]) -> int:
    return reduce(lambda acc, x: acc * x.denominator // math.gcd(acc, x.denominator), xs, 1)


def primitive(ints: Sequence[int]) -> Tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries (sign kept)."""
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g <= 1:
        return tuple(ints)
    return tuple(v // g for v in ints)


def to_primitive_ints(xs: Sequence[Fraction]) -> Tuple[int, ...]:
    """Positive rescaling of a rational vector to a primitive integer one."""
    m = lcm_denominators(xs)
    return primitive([int(x * m) for x in xs])


def support(a: Sequence) -> Tuple[int, ...]:
    return tuple(i for i, v in enumerate(a) if v != 0)


def sign(x) -> int:
    """Sign with sign(0) = 1, the convention used by the sparsifier."""
    return -1 if x < 0 else 1


class QuadRat:
    """A number ``p + q*sqrt(s)`` with rational p, q and rational radicand s >= 0.

    Only the operations needed for exact comparisons are provided.  Two
    operands must share the same radicand unless one of them is rational.
    """

    __slots__ = ("p", "q", "s")

    def __init__(self, p: Number = 0, q: Number = 0, s: Number = 0):
        self.p = Fraction(p)
        self.q = Fraction(q)
        self.s = Fraction(s)
        if self.s < 0:
            raise ValueError("negative radicand")
        if self.s == 0 or self.q == 0:
            self.q = Fraction(0)

    @classmethod
    def sqrt(cls, s: Number, scale: Number = 1) -> "QuadRat":
        """``scale * sqrt(s)``, collapsing to a rational when s is a perfect square."""
        s = Fraction(s)
        r = _rational_sqrt(s)
        if r is not None:
            return cls(Fraction(scale) * r)
        return cls(0, scale, s)

    def _radicand(self, other: "QuadRat") -> Fraction:
        if self.q == 0:
            return other.s
        if other.q == 0 or other.s == self.s:
            return self.s
        raise ValueError("mixed radicands are not supported")

    @staticmethod
    def _lift(x) -> "QuadRat":
        return x if isinstance(x, QuadRat) else QuadRat(x)

    def __add__(self, other):
        other = self._lift(other)
        return QuadRat(self.p + other.p, self.q + other.q, self._radicand(other))

    __radd__ = __add__

    def __neg__(self):
        return QuadRat(-self.p, -self.q, self.s)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        s = self._radicand(other)
        return QuadRat(self.p * other.p + self.q * other.q * s,
                       self.p * other.q + self.q * other.p, s)

    __rmul__ = __mul__

    def signum(self) -> int:
        """Exact sign of ``p + q*sqrt(s)`` by comparing squares."""
        p, q = self.p, self.q
        if q == 0:
            return (p > 0) - (p < 0)
        qs = q * q * self.s
        if p >= 0 and q > 0:
            return 1
        if p <= 0 and q < 0:
            return -1
        # opposite signs: compare p^2 with q^2 s
        if p * p == qs:
            return 0
        if p > 0:
            return 1 if p * p > qs else -1
        return -1 if p * p > qs else 1

    def __abs__(self):
        return -self if self.signum() < 0 else self

    def _cmp(self, other) -> int:
        return (self - self._lift(other)).signum()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if not isinstance(other, (QuadRat, int, Fraction)):
            return NotImplemented
        return self._cmp(other) == 0

    def __hash__(self):
        if self.q == 0:
            return hash(self.p)
        return hash((self.p, self.q, self.s))

    def __float__(self):
        return float(self.p) + float(self.q) * math.sqrt(self.s)

    def __repr__(self):
        if self.q == 0:
            return f"QuadRat({self.p})"
        return f"QuadRat({self.p} + {self.q}*sqrt({self.s}))"


def _rational_sqrt(s: Fraction):
    if s < 0:
        return None
    a, b = s.numerator, s.denominator
    ra, rb = math.isqrt(a), math.isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


def floor_sqrt(x: Fraction) -> int:
    """``floor(sqrt(x))`` for rational x >= 0, exactly."""
    if x < 0:
        raise ValueError("negative argument")
    return math.isqrt(x.numerator // x.denominator)

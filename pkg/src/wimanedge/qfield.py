"""Exact arithmetic in k = Q(X), X^2 = X + 1, and its residue rings.

Elements are stored on the basis {1, X}.  The ring of integers is O = Z[X];
the index-two subring O_o = Z[1, 2X] is the set of integral elements with an
even X-coordinate.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Union

Rational = Union[int, Fraction]


class DomainError(ValueError):
    """Raised when an operation is applied outside its domain."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class QuadElt:
    """An element a + b*X of k with exact rational coordinates."""

    __slots__ = ("a", "b", "_hash")

    def __init__(self, a: Rational = 0, b: Rational = 0) -> None:
        self.a = _frac(a)
        self.b = _frac(b)
        self._hash = None

    @classmethod
    def coerce(cls, x) -> QuadElt:
        if isinstance(x, QuadElt):
            return x
        return cls(x, 0)

    # --- structure -------------------------------------------------------
    def __iter__(self) -> Iterator[Fraction]:
        return iter((self.a, self.b))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if not isinstance(other, QuadElt):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.a, self.b))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __repr__(self) -> str:
        return f"QuadElt({self})"

    def __str__(self) -> str:
        return format_quad(self)

    # --- ring operations -------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, QuadElt):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            return QuadElt(self.a + other, self.b)
        return QuadElt(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self) -> QuadElt:
        return QuadElt(-self.a, -self.b)

    def __sub__(self, other):
        if not isinstance(other, QuadElt):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            return QuadElt(self.a - other, self.b)
        return QuadElt(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QuadElt):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            return QuadElt(self.a * other, self.b * other)
        a, b, c, d = self.a, self.b, other.a, other.b
        # (a + bX)(c + dX) = ac + (ad + bc)X + bd(X + 1)
        return QuadElt(a * c + b * d, a * d + b * c + b * d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * QuadElt.coerce(other).inv()

    def __rtruediv__(self, other):
        return QuadElt.coerce(other) * self.inv()

    def __pow__(self, n: int) -> QuadElt:
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inv()
        n = abs(n)
        result = ONE
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def galois(self) -> QuadElt:
        """The conjugate under X -> 1 - X."""
        return QuadElt(self.a + self.b, -self.b)

    def norm(self) -> Fraction:
        # (a + bX)(a + b - bX) = a^2 + ab - b^2
        return self.a * self.a + self.a * self.b - self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a + self.b

    def inv(self) -> QuadElt:
        n = self.norm()
        if n == 0:
            raise DomainError("inverse of zero")
        g = self.galois()
        return QuadElt(g.a / n, g.b / n)

    # --- predicates ------------------------------------------------------
    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def in_Oo(self) -> bool:
        return self.is_integral() and self.b.numerator % 2 == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def sign_at(self, place: Place) -> int:
        return sign_at(self, place)

    def is_totally_positive(self) -> bool:
        return is_totally_positive(self)

    def embed(self, place: Place) -> float:
        """Floating-point value at a real place; for rendering only."""
        r5 = 5 ** 0.5
        phi = (1 + r5) / 2 if place is Place.FIRST else (1 - r5) / 2
        return float(self.a) + float(self.b) * phi


ZERO = QuadElt(0)
ONE = QuadElt(1)
X = QuadElt(0, 1)
SQRT5 = QuadElt(-1, 2)  # 2X - 1, squares to 5


def mul(x: QuadElt, y: QuadElt) -> QuadElt:
    return x * y


def inv(x: QuadElt) -> QuadElt:
    return x.inv()


def galois(x: QuadElt) -> QuadElt:
    return x.galois()


def norm(x: QuadElt) -> Fraction:
    return x.norm()


def trace(x: QuadElt) -> Fraction:
    return x.trace()


# --- signs at the real places ---------------------------------------------


class Place(enum.Enum):
    FIRST = 1  # X -> (1 + sqrt5)/2
    SECOND = 2  # X -> (1 - sqrt5)/2


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def sign_sqrt5(p: Fraction, q: Fraction) -> int:
    """Exact sign of p + q*sqrt(5) for rationals p, q."""
    sp, sq = _sign(p), _sign(q)
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    # opposite signs: compare p^2 with 5 q^2
    d = p * p - 5 * q * q
    return sp if d > 0 else (sq if d < 0 else 0)


def sign_at(x: QuadElt, place: Place) -> int:
    # a + b(1 +- sqrt5)/2 = (a + b/2) +- (b/2) sqrt5
    p = x.a + x.b / 2
    q = x.b / 2
    return sign_sqrt5(p, q if place is Place.FIRST else -q)


def is_totally_positive(x: QuadElt) -> bool:
    return sign_at(x, Place.FIRST) > 0 and sign_at(x, Place.SECOND) > 0


def compare_at(x: QuadElt, y: QuadElt, place: Place) -> int:
    """Sign of x - y at the given place."""
    return sign_at(x - y, place)


# --- text form ------------------------------------------------------------


def _fmt_rat(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_quad(x: QuadElt) -> str:
    """Render as "a + b*X" (terms with zero coefficient dropped)."""
    a, b = x.a, x.b
    if b == 0:
        return _fmt_rat(a)
    if b == 1:
        bx = "X"
    elif b == -1:
        bx = "-X"
    else:
        bx = f"{_fmt_rat(b)}*X"
    if a == 0:
        return bx
    if bx.startswith("-"):
        return f"{_fmt_rat(a)} - {bx[1:]}"
    return f"{_fmt_rat(a)} + {bx}"


_TERM = re.compile(r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*(\*\s*X|X)?\s*")


def parse_quad(text: str) -> QuadElt:
    """Parse the output grammar of :func:`format_quad`."""
    s = text.strip()
    if not s:
        raise ValueError("empty field element")
    a = Fraction(0)
    b = Fraction(0)
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        sign, num, xpart = m.groups()
        if m.end() == pos or (num is None and xpart is None):
            raise ValueError(f"cannot parse field element {text!r}")
        if sign is None and pos > 0:
            raise ValueError(f"missing operator in {text!r}")
        if xpart is not None and xpart.startswith("*") and num is None:
            raise ValueError(f"dangling '*' in {text!r}")
        coeff = Fraction(num) if num is not None else Fraction(1)
        if sign == "-":
            coeff = -coeff
        if xpart is not None:
            b += coeff
        else:
            a += coeff
        pos = m.end()
    return QuadElt(a, b)


# --- residue rings --------------------------------------------------------


class RingKind(enum.Enum):
    MOD2 = "mod2"
    MODP5 = "modp5"
    MOD4 = "mod4"
    MOD4P5 = "mod4p5"
    MODN = "modn"


@dataclass(frozen=True)
class ResidueRing:
    """A finite quotient of O.

    ``MOD2``/``MOD4``/``MODN`` are (Z/n)[X] with X^2 = X + 1 and coordinates
    (a, b).  ``MODP5`` is O/p5 = F5 with X -> 3.  ``MOD4P5`` is the CRT pair
    (O/4O, O/p5) with coordinates (a, b, c).
    """

    kind: RingKind
    n: int = 0

    @classmethod
    def mod2(cls) -> ResidueRing:
        return cls(RingKind.MOD2, 2)

    @classmethod
    def mod4(cls) -> ResidueRing:
        return cls(RingKind.MOD4, 4)

    @classmethod
    def modp5(cls) -> ResidueRing:
        return cls(RingKind.MODP5, 5)

    @classmethod
    def mod4p5(cls) -> ResidueRing:
        return cls(RingKind.MOD4P5, 0)

    @classmethod
    def modn(cls, n: int) -> ResidueRing:
        if n < 2:
            raise DomainError("modulus must be at least 2")
        return cls(RingKind.MODN, n)

    @property
    def tag(self) -> str:
        return self.kind.value if self.kind is not RingKind.MODN else f"mod{self.n}"

    @property
    def is_product(self) -> bool:
        return self.kind is RingKind.MOD4P5

    def factors(self) -> tuple[ResidueRing, ResidueRing]:
        if not self.is_product:
            raise DomainError(f"{self.tag} is not a product ring")
        return MOD4, MODP5

    @cached_property
    def size(self) -> int:
        if self.kind is RingKind.MODP5:
            return 5
        if self.kind is RingKind.MOD4P5:
            return 80
        return self.n * self.n

    # coordinates <-> integer codes; code order is lexicographic on coords
    def encode(self, coords: tuple[int, ...]) -> int:
        if self.kind is RingKind.MODP5:
            return coords[0]
        if self.kind is RingKind.MOD4P5:
            return (coords[0] * 4 + coords[1]) * 5 + coords[2]
        return coords[0] * self.n + coords[1]

    def decode(self, code: int) -> tuple[int, ...]:
        if self.kind is RingKind.MODP5:
            return (code,)
        if self.kind is RingKind.MOD4P5:
            ab, c = divmod(code, 5)
            a, b = divmod(ab, 4)
            return (a, b, c)
        return divmod(code, self.n)

    def canonical(self, coords: tuple[int, ...]) -> tuple[int, ...]:
        if self.kind is RingKind.MODP5:
            return (coords[0] % 5,)
        if self.kind is RingKind.MOD4P5:
            return (coords[0] % 4, coords[1] % 4, coords[2] % 5)
        return (coords[0] % self.n, coords[1] % self.n)

    def _mul_coords(self, x: tuple[int, ...], y: tuple[int, ...]) -> tuple[int, ...]:
        if self.kind is RingKind.MODP5:
            return (x[0] * y[0] % 5,)
        if self.kind is RingKind.MOD4P5:
            a, b, c, d = x[0], x[1], y[0], y[1]
            return ((a * c + b * d) % 4, (a * d + b * c + b * d) % 4, x[2] * y[2] % 5)
        a, b, c, d = x[0], x[1], y[0], y[1]
        n = self.n
        return ((a * c + b * d) % n, (a * d + b * c + b * d) % n)

    def _add_coords(self, x, y) -> tuple[int, ...]:
        return self.canonical(tuple(p + q for p, q in zip(x, y)))

    @cached_property
    def add_table(self) -> list[list[int]]:
        s = self.size
        cs = [self.decode(i) for i in range(s)]
        return [[self.encode(self._add_coords(cs[i], cs[j])) for j in range(s)] for i in range(s)]

    @cached_property
    def mul_table(self) -> list[list[int]]:
        s = self.size
        cs = [self.decode(i) for i in range(s)]
        return [[self.encode(self._mul_coords(cs[i], cs[j])) for j in range(s)] for i in range(s)]

    @cached_property
    def neg_table(self) -> list[int]:
        return [self.encode(self.canonical(tuple(-c for c in self.decode(i)))) for i in range(self.size)]

    @property
    def zero(self) -> ResidueElt:
        return self.elt((0, 0, 0)[: len(self.decode(0))])

    @property
    def one(self) -> ResidueElt:
        return self.reduce(ONE)

    def elt(self, coords) -> ResidueElt:
        return ResidueElt(self, self.canonical(tuple(coords)))

    def elements(self) -> list[ResidueElt]:
        return [ResidueElt(self, self.decode(i)) for i in range(self.size)]

    def reduce(self, x: QuadElt) -> ResidueElt:
        return reduce(x, self)

    def __str__(self) -> str:
        return self.tag


MOD2 = ResidueRing.mod2()
MOD4 = ResidueRing.mod4()
MODP5 = ResidueRing.modp5()
MOD4P5 = ResidueRing.mod4p5()


@dataclass(frozen=True)
class ResidueElt:
    ring: ResidueRing
    coords: tuple[int, ...]

    @property
    def code(self) -> int:
        return self.ring.encode(self.coords)

    def _check(self, other: ResidueElt) -> None:
        if other.ring != self.ring:
            raise DomainError(f"ring mismatch: {self.ring} vs {other.ring}")

    def __add__(self, other: ResidueElt) -> ResidueElt:
        self._check(other)
        return ResidueElt(self.ring, self.ring._add_coords(self.coords, other.coords))

    def __neg__(self) -> ResidueElt:
        return ResidueElt(self.ring, self.ring.canonical(tuple(-c for c in self.coords)))

    def __sub__(self, other: ResidueElt) -> ResidueElt:
        return self + (-other)

    def __mul__(self, other: ResidueElt) -> ResidueElt:
        self._check(other)
        return ResidueElt(self.ring, self.ring._mul_coords(self.coords, other.coords))

    def __pow__(self, n: int) -> ResidueElt:
        if n < 0:
            raise DomainError("negative powers are not defined in residue rings")
        out = self.ring.one
        for _ in range(n):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not any(self.coords)

    def component(self, i: int) -> ResidueElt:
        """The Mod4 (i = 0) or ModP5 (i = 1) part of a CRT pair."""
        if not self.ring.is_product:
            raise DomainError("component() needs a product ring")
        if i == 0:
            return ResidueElt(MOD4, self.coords[:2])
        return ResidueElt(MODP5, self.coords[2:])

    def __str__(self) -> str:
        if self.ring.kind is RingKind.MODP5:
            return str(self.coords[0])
        if self.ring.kind is RingKind.MOD4P5:
            a, b, c = self.coords
            return f"({format_quad(QuadElt(a, b))}, {c})"
        return format_quad(QuadElt(*self.coords))


def reduce(x: QuadElt, ring: ResidueRing) -> ResidueElt:
    """Reduction O -> ring, a ring homomorphism."""
    if not x.is_integral():
        raise DomainError(f"{x} is not in O")
    a, b = x.a.numerator, x.b.numerator
    if ring.kind is RingKind.MODP5:
        # 1 - 2X = 0 forces X = 3 in F5
        return ResidueElt(ring, ((a + 3 * b) % 5,))
    if ring.kind is RingKind.MOD4P5:
        return ResidueElt(ring, (a % 4, b % 4, (a + 3 * b) % 5))
    return ResidueElt(ring, (a % ring.n, b % ring.n))


def in_prime_subfield(e: ResidueElt) -> bool:
    """For O/2O = F4: True iff the element lies in F2 (X-coordinate zero)."""
    if e.ring.kind is not RingKind.MOD2:
        raise DomainError("prime-subfield test is defined on O/2O")
    return e.coords[1] == 0


def f4_trace(e: ResidueElt) -> int:
    """Tr_{F4/F2}(x) = x + x^2, returned as 0 or 1."""
    if e.ring.kind is not RingKind.MOD2:
        raise DomainError("trace F4 -> F2 is defined on O/2O")
    t = e + e * e
    assert t.coords[1] == 0
    return t.coords[0]

"""Exact projective geometry on the Klein plane over k.

Points, lines and the S3 action come from the shipped fixture and are
re-verified here; the invariant cubic family and the case analysis for the
smooth monodromy plane curve are computed with exact linear algebra and
univariate polynomial arithmetic over k.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Iterable, Sequence

import sympy

from .finquot import SuiteReport
from .matgrp import VerificationError
from .qfield import ONE, ZERO, DomainError, QuadElt, X, format_quad, parse_quad

SQRT5 = 2 * X - 1  # (2X - 1)^2 = 5

class QuadExt:
    """x + y*w in k(w), w^2 = delta, delta a non-square of k.

    Only scalar arithmetic is provided; it is enough to run the polynomial
    helpers below over the extension.
    """

    __slots__ = ("x", "y", "delta")

    def __init__(self, x, y, delta: QuadElt) -> None:
        self.x = QuadElt.coerce(x)
        self.y = QuadElt.coerce(y)
        self.delta = delta

    def _lift(self, o) -> QuadExt | None:
        if isinstance(o, QuadExt):
            if o.delta != self.delta:
                raise DomainError("mixing different quadratic extensions")
            return o
        if isinstance(o, (QuadElt, int, Fraction)):
            return QuadExt(o, ZERO, self.delta)
        return None

    def __add__(self, o):
        o = self._lift(o)
        return NotImplemented if o is None else QuadExt(self.x + o.x, self.y + o.y, self.delta)

    __radd__ = __add__

    def __neg__(self) -> QuadExt:
        return QuadExt(-self.x, -self.y, self.delta)

    def __sub__(self, o):
        o = self._lift(o)
        return NotImplemented if o is None else QuadExt(self.x - o.x, self.y - o.y, self.delta)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = self._lift(o)
        if o is None:
            return NotImplemented
        return QuadExt(self.x * o.x + self.delta * self.y * o.y, self.x * o.y + self.y * o.x, self.delta)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._lift(o)
        return self * o.inv()

    def inv(self) -> QuadExt:
        n = self.x * self.x - self.delta * self.y * self.y
        if not n:
            raise DomainError("inverse of zero")
        ni = n.inv()
        return QuadExt(self.x * ni, -self.y * ni, self.delta)

    def __bool__(self) -> bool:
        return bool(self.x) or bool(self.y)

    def __eq__(self, o) -> bool:
        o = self._lift(o)
        return o is not None and self.x == o.x and self.y == o.y

    def __hash__(self) -> int:
        return hash((self.x, self.y, self.delta))

    def __str__(self) -> str:
        return f"({self.x}) + ({self.y})*w"


# --- univariate polynomials over k (coefficients low to high) --------------

KPoly = tuple  # tuple[QuadElt, ...], no trailing zeros


def kpoly(coeffs: Iterable) -> KPoly:
    c = [x if isinstance(x, (QuadElt, QuadExt)) else QuadElt.coerce(x) for x in coeffs]
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def pdeg(p: KPoly) -> int:
    return len(p) - 1


def padd(p: KPoly, q: KPoly) -> KPoly:
    n = max(len(p), len(q))
    return kpoly((p[i] if i < len(p) else ZERO) + (q[i] if i < len(q) else ZERO) for i in range(n))


def pneg(p: KPoly) -> KPoly:
    return tuple(-c for c in p)


def psub(p: KPoly, q: KPoly) -> KPoly:
    return padd(p, pneg(q))


def pmul(p: KPoly, q: KPoly) -> KPoly:
    if not p or not q:
        return ()
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] = out[i + j] + a * b
    return kpoly(out)


def pscale(p: KPoly, c: QuadElt) -> KPoly:
    return kpoly(c * a for a in p)


def pdivmod(p: KPoly, q: KPoly) -> tuple[KPoly, KPoly]:
    if not q:
        raise DomainError("polynomial division by zero")
    r = list(p)
    quo = [ZERO] * max(len(p) - len(q) + 1, 0)
    lead = q[-1].inv()
    while len(r) >= len(q) and r:
        c = r[-1] * lead
        k = len(r) - len(q)
        quo[k] = c
        for i, b in enumerate(q):
            r[k + i] = r[k + i] - c * b
        r = list(kpoly(r[:-1]))
    return kpoly(quo), kpoly(r)


def pmonic(p: KPoly) -> KPoly:
    return pscale(p, p[-1].inv()) if p else p


def pgcd(p: KPoly, q: KPoly) -> KPoly:
    while q:
        p, q = q, pdivmod(p, q)[1]
    return pmonic(p)


def pgcd_all(polys: Iterable[KPoly]) -> KPoly:
    g: KPoly = ()
    for p in polys:
        g = pgcd(g, p)
    return g


def pderiv(p: KPoly) -> KPoly:
    return kpoly(c * i for i, c in enumerate(p) if i)


def peval(p: KPoly, x: QuadElt) -> QuadElt:
    out = ZERO
    for c in reversed(p):
        out = out * x + c
    return out


def _to_sympy_rational_poly(coeffs: Sequence[Fraction], t):
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], t, domain="QQ")


def k_roots(p: KPoly) -> tuple[list[tuple[QuadElt, int]], KPoly]:
    """Roots of p lying in k, with multiplicity, and the cofactor with no roots in k.

    Candidates come from the rational factorization of the norm polynomial
    p * conj(p); every candidate is confirmed by exact division.
    """
    if pdeg(p) < 1:
        return [], p
    norm = pmul(p, kpoly(c.galois() for c in p))
    if any(c.b for c in norm):
        raise VerificationError("norm polynomial is not rational")
    t = sympy.Symbol("t")
    _, factors = _to_sympy_rational_poly([c.a for c in norm], t).factor_list()
    cands: list[QuadElt] = []
    for fac, _ in factors:
        cs = [Fraction(int(sympy.numer(c)), int(sympy.denom(c))) for c in fac.all_coeffs()]
        if len(cs) == 2:
            cands.append(QuadElt(-cs[1] / cs[0]))
        elif len(cs) == 3:
            a, b, c = cs
            disc = (b * b - 4 * a * c) / 5
            r = _rational_sqrt(disc)
            if r is not None:
                for sgn in (1, -1):
                    cands.append((QuadElt(-b) + SQRT5 * (sgn * r)) / (2 * a))
    roots = []
    rest = p
    for c in dict.fromkeys(cands):
        lin = kpoly([-c, ONE])
        m = 0
        while pdeg(rest) >= 1:
            q, r = pdivmod(rest, lin)
            if r:
                break
            rest, m = q, m + 1
        if m:
            roots.append((c, m))
    return roots, rest


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = sympy.integer_nthroot(q.numerator, 2), sympy.integer_nthroot(q.denominator, 2)
    if n[1] and d[1]:
        return Fraction(int(n[0]), int(d[0]))
    return None


# --- exact linear algebra over k ------------------------------------------


def nullspace(rows: Sequence[Sequence[QuadElt]], ncols: int) -> list[tuple[QuadElt, ...]]:
    """Basis of the right kernel, one vector per free column (free entry 1)."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inv()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [ZERO] * ncols
        v[fc] = ONE
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(tuple(v))
    return basis


def det3(m: Sequence[Sequence[QuadElt]]) -> QuadElt:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def cross(u: Sequence[QuadElt], v: Sequence[QuadElt]) -> tuple[QuadElt, QuadElt, QuadElt]:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def dot(u: Sequence[QuadElt], v: Sequence[QuadElt]) -> QuadElt:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


# --- points, lines, transforms --------------------------------------------


@dataclass(frozen=True)
class ProjPoint:
    coords: tuple[QuadElt, QuadElt, QuadElt]

    @classmethod
    def of(cls, *xs) -> ProjPoint:
        if len(xs) == 1:
            xs = tuple(xs[0])
        c = tuple(parse_quad(x) if isinstance(x, str) else QuadElt.coerce(x) for x in xs)
        if len(c) != 3:
            raise DomainError("projective point needs three coordinates")
        lead = next((x for x in c if x), None)
        if lead is None:
            raise DomainError("all coordinates zero")
        inv = lead.inv()
        return cls(tuple(x * inv for x in c))

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i: int) -> QuadElt:
        return self.coords[i]

    def __str__(self) -> str:
        return "[" + " : ".join(format_quad(x) for x in self.coords) + "]"


@dataclass(frozen=True)
class ProjLine:
    i: int
    j: int
    p: ProjPoint
    q: ProjPoint

    @property
    def key(self) -> str:
        return f"{self.i},{self.j}"

    @property
    def name(self) -> str:
        return f"l_{{{self.i},{self.j}}}"

    @property
    def vector(self) -> tuple[QuadElt, QuadElt, QuadElt]:
        return cross(self.p.coords, self.q.coords)

    def contains(self, pt: ProjPoint) -> bool:
        return not dot(self.vector, pt.coords)

    def point(self, r, s) -> ProjPoint:
        r, s = QuadElt.coerce(r), QuadElt.coerce(s)
        return ProjPoint.of([r * a + s * b for a, b in zip(self.p, self.q)])

    def parameter(self, pt: ProjPoint) -> tuple[QuadElt, QuadElt]:
        """[r : s] with pt = r p + s q (normalized so the first nonzero entry is 1)."""
        if not self.contains(pt):
            raise DomainError(f"{pt} is not on {self.name}")
        # solve on a pair of coordinates where (p, q) is independent
        for a, b in ((0, 1), (0, 2), (1, 2)):
            d = self.p[a] * self.q[b] - self.p[b] * self.q[a]
            if d:
                r = (pt[a] * self.q[b] - pt[b] * self.q[a]) / d
                s = (self.p[a] * pt[b] - self.p[b] * pt[a]) / d
                lead = r if r else s
                return r / lead, s / lead
        raise DomainError("degenerate line")


def line_intersection(l1: ProjLine, l2: ProjLine) -> ProjPoint:
    c = cross(l1.vector, l2.vector)
    if not any(c):
        raise DomainError(f"{l1.name} and {l2.name} coincide")
    return ProjPoint.of(c)


@dataclass(frozen=True)
class ProjTransform:
    rows: tuple[tuple[QuadElt, ...], ...]

    @classmethod
    def of(cls, rows) -> ProjTransform:
        return cls(tuple(tuple(parse_quad(x) if isinstance(x, str) else QuadElt.coerce(x) for x in r) for r in rows))

    def __matmul__(self, o: ProjTransform) -> ProjTransform:
        return ProjTransform(
            tuple(tuple(sum((self.rows[i][k] * o.rows[k][j] for k in range(3)), ZERO) for j in range(3)) for i in range(3))
        )

    def apply(self, pt: ProjPoint) -> ProjPoint:
        return ProjPoint.of([dot(r, pt.coords) for r in self.rows])

    def det(self) -> QuadElt:
        return det3(self.rows)

    def scalar(self) -> QuadElt | None:
        """The scalar c if this is c times the identity."""
        c = self.rows[0][0]
        for i in range(3):
            for j in range(3):
                if self.rows[i][j] != (c if i == j else ZERO):
                    return None
        return c

    def is_projective_identity(self) -> bool:
        c = self.scalar()
        return c is not None and bool(c)


IDENTITY3 = ProjTransform.of([[1, 0, 0], [0, 1, 0], [0, 0, 1]])

# --- ternary forms ---------------------------------------------------------

Mono = tuple  # (i, j, l) exponents of z1, z2, z3


def monomials(d: int) -> list[Mono]:
    return [(i, j, d - i - j) for i in range(d, -1, -1) for j in range(d - i, -1, -1)]


MONOS3 = monomials(3)
VARS = ("z1", "z2", "z3")


def _fmul(f: dict, g: dict) -> dict:
    out: dict = {}
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
            out[m] = out.get(m, ZERO) + c1 * c2
    return {m: c for m, c in out.items() if c}


def _fcompose(f: dict, rows) -> dict:
    """f(M z) for a 3x3 matrix M, with f given as {mono: coeff}."""
    lin = [{(1, 0, 0): r[0], (0, 1, 0): r[1], (0, 0, 1): r[2]} for r in rows]
    lin = [{m: c for m, c in L.items() if c} for L in lin]
    powers: dict = {}

    def pw(i: int, e: int) -> dict:
        if (i, e) not in powers:
            powers[(i, e)] = {(0, 0, 0): ONE} if e == 0 else _fmul(pw(i, e - 1), lin[i])
        return powers[(i, e)]

    out: dict = {}
    for m, c in f.items():
        term = _fmul(_fmul(pw(0, m[0]), pw(1, m[1])), pw(2, m[2]))
        for mm, cc in term.items():
            out[mm] = out.get(mm, ZERO) + c * cc
    return {m: c for m, c in out.items() if c}


def _feval(f: dict, pt) -> QuadElt:
    out = ZERO
    for (i, j, l), c in f.items():
        out = out + c * pt[0] ** i * pt[1] ** j * pt[2] ** l
    return out


def _fpartial(f: dict, v: int) -> dict:
    out = {}
    for m, c in f.items():
        if m[v]:
            mm = list(m)
            mm[v] -= 1
            out[tuple(mm)] = c * m[v]
    return out


def _mono_str(m: Mono) -> str:
    parts = []
    for v, e in zip(VARS, m):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts) or "1"


def _parse_mono(text: str) -> Mono:
    exps = [0, 0, 0]
    for tok in text.replace(" ", "").split("*"):
        name, _, e = tok.partition("^")
        exps[VARS.index(name)] += int(e) if e else 1
    return tuple(exps)


@dataclass(frozen=True)
class Cubic:
    """Ternary cubic form; coefficients follow MONOS3."""

    coeffs: tuple[QuadElt, ...]

    def __post_init__(self):
        if len(self.coeffs) != 10:
            raise DomainError("a cubic has ten coefficients")

    @classmethod
    def from_dict(cls, d: dict) -> Cubic:
        return cls(tuple(QuadElt.coerce(d.get(m, ZERO)) for m in MONOS3))

    @classmethod
    def from_terms(cls, terms: dict[str, str | int | QuadElt]) -> Cubic:
        """e.g. ``{"z1^3": 1, "z1*z3^2": "-5 + 3*X"}``."""
        d: dict = {}
        for mono, c in terms.items():
            m = _parse_mono(mono)
            if sum(m) != 3:
                raise DomainError(f"{mono} is not a cubic monomial")
            d[m] = d.get(m, ZERO) + (parse_quad(c) if isinstance(c, str) else QuadElt.coerce(c))
        return cls.from_dict(d)

    def as_dict(self) -> dict:
        return {m: c for m, c in zip(MONOS3, self.coeffs) if c}

    def coeff(self, mono: str | Mono) -> QuadElt:
        m = _parse_mono(mono) if isinstance(mono, str) else mono
        return self.coeffs[MONOS3.index(m)]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __call__(self, pt) -> QuadElt:
        return _feval(self.as_dict(), tuple(pt))

    def __add__(self, o: Cubic) -> Cubic:
        return Cubic(tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    def __neg__(self) -> Cubic:
        return Cubic(tuple(-a for a in self.coeffs))

    def scale(self, c) -> Cubic:
        c = QuadElt.coerce(c)
        return Cubic(tuple(c * a for a in self.coeffs))

    def compose(self, g: ProjTransform) -> Cubic:
        """F o g, i.e. z -> F(g z)."""
        return Cubic.from_dict(_fcompose(self.as_dict(), g.rows))

    def partial(self, v: int) -> dict:
        return _fpartial(self.as_dict(), v)

    def normalized(self) -> Cubic:
        lead = next((c for c in self.coeffs if c), None)
        if lead is None:
            return self
        return self.scale(lead.inv())

    def proportional(self, o: Cubic) -> bool:
        return not self.is_zero() and self.normalized() == o.normalized()

    def ratio_to(self, o: Cubic) -> QuadElt | None:
        """c with self = c * o, or None."""
        i = next((k for k, c in enumerate(o.coeffs) if c), None)
        if i is None:
            return None
        c = self.coeffs[i] / o.coeffs[i]
        return c if o.scale(c) == self else None

    def terms(self) -> dict[str, str]:
        return {_mono_str(m): format_quad(c) for m, c in zip(MONOS3, self.coeffs) if c}

    def __str__(self) -> str:
        out = []
        for m, c in zip(MONOS3, self.coeffs):
            if not c:
                continue
            mono = _mono_str(m)
            if c == ONE:
                s = f"+ {mono}"
            elif c == -ONE:
                s = f"- {mono}"
            elif not c.b:
                s = f"{'-' if c.a < 0 else '+'} {format_quad(abs(c.a) * ONE)}*{mono}"
            else:
                s = f"+ ({format_quad(c)})*{mono}"
            out.append(s)
        if not out:
            return "0"
        text = " ".join(out)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


# --- the Klein plane configuration ----------------------------------------


def load_fixture() -> dict:
    return json.loads(resources.files("wimanedge").joinpath("data/klein_plane.json").read_text())


def _key(i: int, j: int) -> str:
    return f"{min(i, j)},{max(i, j)}"


# sign character of S3; reflections act on the invariant cubics by -1
S3_NAMES = ("id", "sigma1", "sigma2", "sigma3", "tau", "tau2")
S3_SIGN = {"id": 1, "sigma1": -1, "sigma2": -1, "sigma3": -1, "tau": 1, "tau2": 1}


@dataclass
class KleinPlane:
    points: dict[str, ProjPoint]
    lines: dict[str, ProjLine]
    group: dict[str, ProjTransform]
    fixture: dict

    @classmethod
    def from_fixture(cls, fx: dict | None = None) -> KleinPlane:
        fx = fx or load_fixture()
        points = {name: ProjPoint.of(c) for name, c in fx["points"].items()}
        lines = {}
        for i, j in fx["lines"]:
            lines[_key(i, j)] = ProjLine(i, j, points[f"e{i}"], points[f"e{j}"])
        tr = {name: ProjTransform.of(rows) for name, rows in fx["transforms"].items()}
        s1, s2 = tr["sigma1"], tr["sigma2"]
        tau = s1 @ s2
        group = {
            "id": IDENTITY3,
            "sigma1": s1,
            "sigma2": s2,
            "sigma3": tau @ s1,
            "tau": tau,
            "tau2": tau @ tau,
        }
        return cls(points, lines, group, fx)

    # named subsets
    def orbit_points(self, name: str) -> list[ProjPoint]:
        return [self.points[p] for p in self.fixture["partitions"][name]]

    def orbit_lines(self, name: str) -> list[ProjLine]:
        return [self.lines[k] for k in self.fixture["partitions"][name]]

    def point_name(self, pt: ProjPoint) -> str | None:
        for name, p in self.points.items():
            if p == pt:
                return name
        return None

    def point_orbit(self, name: str) -> str:
        for orb in ("P1", "P2", "Q1", "Q2", "Q3"):
            if name in self.fixture["partitions"][orb]:
                return orb
        raise KeyError(name)

    def line_orbit(self, key: str) -> str:
        for orb in ("L1", "L2", "L3", "L4"):
            if key in self.fixture["partitions"][orb]:
                return orb
        raise KeyError(key)

    def image_point(self, g: str, name: str) -> str:
        out = self.point_name(self.group[g].apply(self.points[name]))
        if out is None:
            raise VerificationError(f"{g} maps {name} off the configuration")
        return out

    def image_line(self, g: str, key: str) -> str:
        ln = self.lines[key]
        i = self.image_point(g, f"e{ln.i}")
        j = self.image_point(g, f"e{ln.j}")
        k = _key(int(i[1:]), int(j[1:]))
        if k not in self.lines:
            raise VerificationError(f"{g} maps {key} to a non-edge {k}")
        return k

    def crossings(self) -> dict[frozenset, ProjPoint]:
        """Intersections of pairs of the 15 lines that are not named points."""
        out = {}
        for a, b in itertools.combinations(self.lines, 2):
            p = line_intersection(self.lines[a], self.lines[b])
            if self.point_name(p) is None:
                out[frozenset((a, b))] = p
        return out

    def triangles(self) -> list[tuple[str, str, str]]:
        """Triples of lines meeting pairwise away from the named points."""
        cr = self.crossings()
        tris = []
        for a, b, c in itertools.combinations(self.lines, 3):
            if all(frozenset(p) in cr for p in ((a, b), (a, c), (b, c))):
                pts = {cr[frozenset((a, b))], cr[frozenset((a, c))], cr[frozenset((b, c))]}
                if len(pts) == 3:
                    tris.append((a, b, c))
        return tris

    def triangle_vertices(self, tri: Sequence[str]) -> list[ProjPoint]:
        return [line_intersection(self.lines[a], self.lines[b]) for a, b in itertools.combinations(tri, 2)]

    def triangle_of(self, key: str) -> tuple[str, str, str]:
        return next(t for t in self.triangles() if key in t)

    def triangle_stabilizer(self, tri: Sequence[str]) -> str:
        """The involution fixing each line of a triangle."""
        for g in ("sigma1", "sigma2", "sigma3"):
            if all(self.image_line(g, k) == k for k in tri):
                return g
        raise VerificationError(f"no involution stabilizes {tri}")


@lru_cache(maxsize=None)
def klein_plane() -> KleinPlane:
    return KleinPlane.from_fixture()


def _orbits_of(perm: dict[str, str]) -> list[frozenset]:
    seen, out = set(), []
    for x in perm:
        if x in seen:
            continue
        orb, y = [], x
        while y not in orb:
            orb.append(y)
            y = perm[y]
        seen.update(orb)
        out.append(frozenset(orb))
    return out


def _as_sets(groups) -> set[frozenset]:
    return {frozenset(g) for g in groups}


def verify_incidence(kp: KleinPlane | None = None) -> SuiteReport:
    kp = kp or klein_plane()
    rep = SuiteReport("Klein plane incidence")
    pts = list(kp.points.values())
    rep.add("16 named points are distinct", len(set(pts)), 16)
    rep.add("15 lines are distinct", len({ProjPoint.of(l.vector) for l in kp.lines.values()}), 15)
    for key, ln in kp.lines.items():
        on = sorted((n for n, p in kp.points.items() if ln.contains(p)), key=lambda n: (n[0] != "v", int(n[1:])))
        expected = sorted(kp.fixture["incidence"][key], key=lambda n: int(n[1:])) + [f"e{ln.i}", f"e{ln.j}"]
        rep.add(f"points on {ln.name}", on, expected)
    return rep


def verify_action(kp: KleinPlane | None = None) -> SuiteReport:
    kp = kp or klein_plane()
    fx = kp.fixture
    rep = SuiteReport("S3 action on the Klein plane")
    g = kp.group
    rep.add("tau = sigma1 sigma2 (as printed)", (g["sigma1"] @ g["sigma2"]) == ProjTransform.of(fx["transforms"]["tau"]), True)
    for name, w in (("sigma1^2", g["sigma1"] @ g["sigma1"]), ("sigma2^2", g["sigma2"] @ g["sigma2"]),
                    ("tau^3", g["tau"] @ g["tau"] @ g["tau"]), ("sigma3 = sigma1 sigma2 sigma1 (ratio)",
                                                               g["sigma3"] @ (g["sigma1"] @ g["sigma2"] @ g["sigma1"])
                                                               )):
        rep.add(f"{name} is the identity projectively", w.is_projective_identity(), True)
    rep.add("six distinct projective transforms", len({_proj_key(t) for t in g.values()}), 6)

    for gname, orbits in fx["vertex_orbits"].items():
        perm = {n: kp.image_point(gname, n) for n in kp.points}
        rep.add(f"vertex orbits under {gname}", _as_sets(_orbits_of(perm)) == _as_sets(orbits), True)
    printed = fx["vertex_orbits_as_printed"]["tau"]
    rep.data["printed_tau_vertex_row_matches"] = _as_sets(printed) == _as_sets(fx["vertex_orbits"]["tau"])

    for gname, spec in fx["edge_orbits"].items():
        perm = {k: kp.image_line(gname, k) for k in kp.lines}
        rep.add(f"edge orbits under {gname}", _as_sets(_orbits_of(perm)) == _as_sets(spec["orbits"]), True)
        flip = sorted(k for k in kp.lines if perm[k] == k and not _pointwise(kp, gname, k))
        point = sorted(k for k in kp.lines if perm[k] == k and _pointwise(kp, gname, k))
        rep.add(f"{gname}: lines with nontrivial Z/2 action", flip, sorted(spec["flip"]))
        rep.add(f"{gname}: lines fixed pointwise", point, sorted(spec["pointwise"]))

    # full S3 orbits
    elems = S3_NAMES
    pt_orbits = {frozenset(kp.image_point(h, n) for h in elems) for n in kp.points}
    ln_orbits = {frozenset(kp.image_line(h, k) for h in elems) for k in kp.lines}
    parts = fx["partitions"]
    rep.add("point orbits P1, P2, Q1, Q2, Q3", pt_orbits,
            {frozenset(parts[n]) for n in ("P1", "P2", "Q1", "Q2", "Q3")})
    rep.add("line orbits L1..L4", ln_orbits, {frozenset(parts[n]) for n in ("L1", "L2", "L3", "L4")})

    tris = kp.triangles()
    rep.add("number of cusp triangles", len(tris), 5)
    rep.add("triangles partition the 15 lines", sorted(k for t in tris for k in t), sorted(kp.lines))
    t1 = [t for t in tris if kp.line_orbit(t[0]) != "L1"]
    t2 = [t for t in tris if kp.line_orbit(t[0]) == "L1"]
    rep.add("triangles of the first kind", len(t1), fx["triangles"]["triangle1"]["count"])
    rep.add("triangles of the second kind", len(t2), fx["triangles"]["triangle2"]["count"])
    ok = True
    for kind, group_ in (("triangle1", t1), ("triangle2", t2)):
        sides = fx["triangles"][kind]["sides"]
        for tri in group_:
            got = sorted(kp.line_orbit(k) for k in tri)
            if kind == "triangle1" and got != ["L2", "L3", "L4"]:
                ok = False
            if kind == "triangle2" and got != ["L1"] * 3:
                ok = False
            for k in tri:
                labels = sorted(kp.point_orbit(n) for n, p in kp.points.items() if kp.lines[k].contains(p))
                if labels != sorted(sides[kp.line_orbit(k)]):
                    ok = False
    rep.add("named points on each triangle side match the triangle diagrams", ok, True)
    rep.data["triangles"] = [list(t) for t in tris]
    return rep


def _proj_key(t: ProjTransform):
    lead = next(x for r in t.rows for x in r if x)
    return tuple(x / lead for r in t.rows for x in r)


def _pointwise(kp: KleinPlane, g: str, key: str) -> bool:
    ln = kp.lines[key]
    t = kp.group[g]
    return all(t.apply(p) == p for p in (ln.p, ln.q, ln.point(1, 1)))


# --- invariant cubics -------------------------------------------------------


def _action_matrix(g: ProjTransform) -> list[list[QuadElt]]:
    """A with (F o g) coefficients = A @ (F coefficients)."""
    cols = []
    for m in MONOS3:
        img = _fcompose({m: ONE}, g.rows)
        cols.append([img.get(mm, ZERO) for mm in MONOS3])
    return [[cols[c][r] for c in range(10)] for r in range(10)]


def invariant_space(sign: int, kp: KleinPlane | None = None) -> list[Cubic]:
    """Cubics with F o sigma1 = sign F and F o sigma2 = sign F (basis)."""
    kp = kp or klein_plane()
    rows = []
    for g in ("sigma1", "sigma2"):
        a = _action_matrix(kp.group[g])
        rows += [[a[i][j] - (sign * ONE if i == j else ZERO) for j in range(10)] for i in range(10)]
    return [Cubic(v) for v in nullspace(rows, 10)]


FREE_MONOS = ("z1^3", "z2^3", "z2*z3^2")

# the three-parameter family: each monomial's coefficient as a linear form in (a1, a2, a3)
FAMILY_TERMS: dict[str, tuple[str, str, str]] = {
    "z1^3": ("1", "0", "0"),
    "z2^3": ("0", "1", "0"),
    "z2*z3^2": ("0", "0", "1"),
    "z1^2*z2": ("-2 + 2*X", "-X", "1 - X"),
    "z1*z2^2": ("2 - X", "1", "-1 + X"),
    "z1*z3^2": ("-5 + 3*X", "1 + X", "2 - X"),
}

EVEN_CUBIC = Cubic.from_terms({"z1^2*z3": "-2 + X", "z1*z2*z3": 2, "z2^2*z3": "-1 - X", "z3^3": 1})


def family_basis() -> tuple[Cubic, Cubic, Cubic]:
    """Basis cubics B1, B2, B3 with F = a1 B1 + a2 B2 + a3 B3."""
    out = []
    for k in range(3):
        out.append(Cubic.from_terms({m: c[k] for m, c in FAMILY_TERMS.items()}))
    return tuple(out)


def family_member(a1, a2, a3) -> Cubic:
    b = family_basis()
    out = Cubic((ZERO,) * 10)
    for a, bi in zip((a1, a2, a3), b):
        out = out + bi.scale(a)
    return out


@dataclass
class InvariantFamily:
    basis: tuple[Cubic, Cubic, Cubic]
    dimension: int
    matches_formulas: bool
    even_case: Cubic
    even_dimension: int


def invariant_family(kp: KleinPlane | None = None) -> InvariantFamily:
    """Solve both sign cases and normalize the odd one on the free monomials."""
    kp = kp or klein_plane()
    odd = invariant_space(-1, kp)
    if len(odd) != 3:
        raise VerificationError(f"odd invariant space has dimension {len(odd)}, expected 3")
    # change basis so the free monomials carry a1, a2, a3
    free = [MONOS3.index(_parse_mono(m)) for m in FREE_MONOS]
    mat = [[b.coeffs[i] for b in odd] for i in free]
    basis = []
    for k in range(3):
        rhs = [ONE if i == k else ZERO for i in range(3)]
        sol = _solve3(mat, rhs)
        c = Cubic((ZERO,) * 10)
        for s, b in zip(sol, odd):
            c = c + b.scale(s)
        basis.append(c)
    basis = tuple(basis)
    matches = basis == family_basis()
    even = invariant_space(1, kp)
    if len(even) != 1:
        raise VerificationError(f"even invariant space has dimension {len(even)}, expected 1")
    return InvariantFamily(basis, len(odd), matches, even[0].normalized(), len(even))


def _solve3(mat, rhs) -> list[QuadElt]:
    aug = [list(r) + [v] for r, v in zip(mat, rhs)]
    ns = nullspace(aug, 4)
    for v in ns:
        if v[3]:
            return [-x / v[3] for x in v[:3]]
    raise VerificationError("singular normalization")


def anti_invariance(f: Cubic, kp: KleinPlane | None = None) -> dict[str, bool]:
    """F o g == sign(g) F for each g in S3."""
    kp = kp or klein_plane()
    return {g: f.compose(kp.group[g]) == f.scale(S3_SIGN[g]) for g in S3_NAMES}


# --- restriction to lines and intersection profiles -------------------------


def restrict_to_line(f: Cubic, line: ProjLine) -> tuple[QuadElt, QuadElt, QuadElt, QuadElt]:
    """Coefficients of r^3, r^2 s, r s^2, s^3 in f(r p + s q)."""
    rows = [[line.p[i], line.q[i], ZERO] for i in range(3)]
    d = _fcompose(f.as_dict(), rows)
    return tuple(d.get((3 - k, k, 0), ZERO) for k in range(4))


def binary_roots(c: Sequence[QuadElt]) -> tuple[list[tuple[tuple[QuadElt, QuadElt], int]], KPoly]:
    """Roots [r : s] in P^1(k) of a nonzero binary cubic, plus the irreducible leftover in t = r/s."""
    if not any(c):
        raise DomainError("zero binary form")
    m0 = 0
    while m0 < 4 and not c[m0]:
        m0 += 1
    out = []
    if m0:
        out.append(((ONE, ZERO), m0))
    p = kpoly(reversed(c))  # c0 t^3 + c1 t^2 + c2 t + c3, low to high
    roots, rest = k_roots(p)
    out += [((t, ONE), m) for t, m in roots]
    return out, rest


def binary_discriminant(c: Sequence[QuadElt]) -> QuadElt:
    a, b, cc, d = c
    return b * b * cc * cc - 4 * a * cc ** 3 - 4 * b ** 3 * d - 27 * a * a * d * d + 18 * a * b * cc * d


class PointKind(enum.Enum):
    ICOS_VERTEX = "IcosVertex"
    DODEC_VERTEX = "DodecVertex"
    LINE_CROSSING = "LineCrossing"
    PUNCTURE = "PuncturePoint"


@dataclass(frozen=True)
class ProfilePoint:
    point: ProjPoint | None
    multiplicity: int
    kind: PointKind
    label: str
    degree: int = 1  # > 1 for a factor irreducible over k

    @property
    def is_puncture(self) -> bool:
        return self.kind in (PointKind.LINE_CROSSING, PointKind.PUNCTURE)


@dataclass
class IntersectionProfile:
    line: ProjLine
    points: list[ProfilePoint] = field(default_factory=list)
    contained: bool = False

    @property
    def total_multiplicity(self) -> int:
        return sum(p.multiplicity * p.degree for p in self.points)

    @property
    def has_irrational(self) -> bool:
        return any(p.degree > 1 for p in self.points)

    def punctures(self) -> list[ProfilePoint]:
        return [p for p in self.points if p.is_puncture]

    def puncture_count(self) -> int:
        return sum(p.degree for p in self.punctures())

    def named(self) -> list[str]:
        return [p.label for p in self.points if p.kind in (PointKind.ICOS_VERTEX, PointKind.DODEC_VERTEX)]

    def summary(self) -> list[str]:
        return [f"{p.label}^{p.multiplicity}" if p.multiplicity > 1 else p.label for p in self.points]


def classify_point(pt: ProjPoint, line: ProjLine, kp: KleinPlane) -> tuple[PointKind, str]:
    name = kp.point_name(pt)
    if name is not None:
        return (PointKind.ICOS_VERTEX if name[0] == "v" else PointKind.DODEC_VERTEX), name
    for pair, cp in kp.crossings().items():
        if line.key in pair and cp == pt:
            other = next(iter(pair - {line.key}))
            return PointKind.LINE_CROSSING, f"x({line.key}|{other})"
    return PointKind.PUNCTURE, str(pt)


def intersection_profile(f: Cubic, line: ProjLine, kp: KleinPlane | None = None) -> IntersectionProfile:
    kp = kp or klein_plane()
    c = restrict_to_line(f, line)
    prof = IntersectionProfile(line)
    if not any(c):
        prof.contained = True
        return prof
    roots, rest = binary_roots(c)
    for (r, s), m in roots:
        pt = line.point(r, s)
        kind, label = classify_point(pt, line, kp)
        prof.points.append(ProfilePoint(pt, m, kind, label))
    if pdeg(rest) >= 1:
        # not k-rational: flagged, counted as puncture points by degree
        prof.points.append(ProfilePoint(None, 1, PointKind.PUNCTURE, f"irrational(deg {pdeg(rest)})", pdeg(rest)))
    return prof


# --- singularity by elimination ---------------------------------------------


def _as_y_quadratic(q: dict) -> tuple[QuadElt, KPoly, KPoly]:
    """q(x, y, 1) = A y^2 + B(x) y + C(x)."""
    A = q.get((0, 2, 0), ZERO)
    B = kpoly([q.get((0, 1, 1), ZERO), q.get((1, 1, 0), ZERO)])
    C = kpoly([q.get((0, 0, 2), ZERO), q.get((1, 0, 1), ZERO), q.get((2, 0, 0), ZERO)])
    return A, B, C


def _quad_res(p, q) -> KPoly:
    (a2, a1, a0), (b2, b1, b0) = p, q
    a2, b2 = kpoly([a2]), kpoly([b2])
    u = psub(pmul(a2, b0), pmul(a0, b2))
    v = psub(pmul(a2, b1), pmul(a1, b2))
    w = psub(pmul(a1, b0), pmul(a0, b1))
    return psub(pmul(u, u), pmul(v, w))


def _chart_singular(g: list[dict]) -> bool | None:
    """Common zero of three quadrics: True/False, or None when this chart is degenerate."""
    qs = [_as_y_quadratic(q) for q in g]
    order = sorted(range(3), key=lambda i: not qs[i][0])
    if not qs[order[0]][0] or not qs[order[1]][0]:
        return None
    q1, q2, q3 = (qs[i] for i in order)
    r12, r13 = _quad_res(q1, q2), _quad_res(q1, q3)
    if not r12:
        return True  # the two quadrics share a component, which meets the third
    h = pgcd(r12, r13) if r13 else pmonic(r12)
    if pdeg(h) < 1:
        affine = False
    else:
        (a2, a1, a0), (b2, b1, b0) = q1, q2
        S1 = psub(pscale(a1, b2), pscale(b1, a2))
        S0 = psub(pscale(a0, b2), pscale(b0, a2))
        A3, B3, C3 = q3
        N = padd(psub(pscale(pmul(S0, S0), A3), pmul(B3, pmul(S0, S1))), pmul(C3, pmul(S1, S1)))
        affine = pdeg(pgcd(h, N)) >= 1
    if affine:
        return True
    # the line z = 0
    at_inf = [kpoly([q.get((0, 2, 0), ZERO), q.get((1, 1, 0), ZERO), q.get((2, 0, 0), ZERO)]) for q in g]
    if all(not q.get((2, 0, 0), ZERO) for q in g):
        return True  # (1 : 0 : 0)
    nz = [p for p in at_inf if p]
    if not nz:
        return True
    return pdeg(pgcd_all(nz)) >= 1


def _charts() -> Iterable[ProjTransform]:
    for perm in itertools.permutations(range(3)):
        yield ProjTransform(tuple(tuple(ONE if c == perm[r] else ZERO for c in range(3)) for r in range(3)))
    for a, b in ((1, 0), (0, 1), (1, 1), (1, 2), (2, 3)):
        yield ProjTransform.of([[1, 0, 0], [a, 1, 0], [b, a, 1]])


def is_singular(f: Cubic) -> bool:
    """True iff the three partials of f have a common projective zero over the closure of k."""
    if f.is_zero():
        raise DomainError("zero cubic")
    grads = [f.partial(v) for v in range(3)]
    if any(not any(g.values()) for g in grads):
        # two conics in P^2 always meet
        return True
    for t in _charts():
        g = [_fcompose(q, t.rows) for q in grads]
        verdict = _chart_singular(g)
        if verdict is not None:
            return verdict
    raise VerificationError("elimination degenerate in every chart")


# --- linear conditions on the family ----------------------------------------


@dataclass(frozen=True)
class Condition:
    """A linear condition on the family: F(p) = 0, or F tangent to a line at p."""

    kind: str  # "vanish" | "tangent"
    point: ProjPoint
    line: ProjLine | None = None
    label: str = ""

    def __call__(self, f: Cubic) -> QuadElt:
        if self.kind == "vanish":
            return f(self.point)
        q = self.line.q if self.line.p == self.point else self.line.p
        return sum((qi * _feval(f.partial(i), self.point.coords) for i, qi in enumerate(q.coords)), ZERO)


def vanish_at(pt: ProjPoint, label: str = "") -> Condition:
    return Condition("vanish", pt, None, label or str(pt))


def tangent_at(pt: ProjPoint, line: ProjLine, label: str = "") -> list[Condition]:
    """F(p) = 0 and the derivative of F along the line vanishes at p."""
    if not line.contains(pt):
        raise DomainError(f"{pt} is not on {line.name}")
    lab = label or str(pt)
    return [Condition("vanish", pt, None, lab), Condition("tangent", pt, line, f"{lab} tangent to {line.name}")]


@dataclass
class Solution:
    """Kernel of a system of conditions, as vectors (a1, a2, a3)."""

    basis: list[tuple[QuadElt, QuadElt, QuadElt]]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def empty(self) -> bool:
        return not self.basis

    def cubics(self) -> list[Cubic]:
        return [family_member(*v).normalized() for v in self.basis]

    def unique(self) -> Cubic | None:
        return self.cubics()[0] if self.rank == 1 else None


def solve_conditions(conds: Sequence[Condition]) -> Solution:
    basis = family_basis()
    rows = [[c(b) for b in basis] for c in conds]
    return Solution(nullspace(rows, 3))


# --- puncture bookkeeping ---------------------------------------------------


def _distinct_roots(c: Sequence) -> int:
    """Distinct points of a nonzero binary cubic over the algebraic closure."""
    m0 = 0
    while not c[m0]:
        m0 += 1
    p = kpoly(list(reversed(c[m0:])))
    n = pdeg(p)
    if n >= 1:
        n -= max(pdeg(pgcd(p, pderiv(p))), 0)
    return n + (1 if m0 else 0)


@dataclass
class PencilMember:
    """u + lam v with lam in k or in a quadratic extension; lam None means v."""

    u: Cubic
    v: Cubic
    lam: object | None

    def at(self, pt: ProjPoint):
        if self.lam is None:
            return self.v(pt)
        return self.u(pt) + self.lam * self.v(pt)

    def restrict(self, line: ProjLine) -> list:
        cv = restrict_to_line(self.v, line)
        if self.lam is None:
            return list(cv)
        cu = restrict_to_line(self.u, line)
        return [a + self.lam * b for a, b in zip(cu, cv)]


def _as_member(f) -> PencilMember:
    if isinstance(f, PencilMember):
        return f
    return PencilMember(f, f, None)


def triangle_punctures(f, tri: Sequence[str], kp: KleinPlane | None = None) -> int | None:
    """Geometric puncture points on a triangle of lines (None if f contains a side)."""
    kp = kp or klein_plane()
    m = _as_member(f)
    total = 0
    for key in tri:
        ln = kp.lines[key]
        c = m.restrict(ln)
        if not any(c):
            return None
        named = sum(1 for p in kp.points.values() if ln.contains(p) and not m.at(p))
        total += _distinct_roots(c) - named
    for v in kp.triangle_vertices(tri):
        if not m.at(v):
            total -= 1  # each vertex sits on two sides
    return total


def line_punctures(f, key: str, kp: KleinPlane | None = None) -> int:
    kp = kp or klein_plane()
    m = _as_member(f)
    ln = kp.lines[key]
    c = m.restrict(ln)
    named = sum(1 for p in kp.points.values() if ln.contains(p) and not m.at(p))
    return _distinct_roots(c) - named


# Triangles of the first kind carry the 12 punctures over the infinity_0 cusp, four each;
# those of the second kind carry the 6 over infinity_X, three each.
TRIANGLE1_PUNCTURES = 4
TRIANGLE2_PUNCTURES = 3


def _tri_kinds(kp: KleinPlane) -> tuple[list, list]:
    tris = kp.triangles()
    t1 = [t for t in tris if kp.line_orbit(t[0]) != "L1"]
    t2 = [t for t in tris if kp.line_orbit(t[0]) == "L1"]
    return t1, t2


# --- the case analysis --------------------------------------------------------

REFERENCE_CUBICS: dict[str, dict[str, str]] = {
    "candidate1": {"z1^3": "1", "z2^3": "13 - 8*X", "z1^2*z2": "3 - X", "z1*z2^2": "18 - 11*X",
                   "z1*z3^2": "-5 + 3*X", "z2*z3^2": "-2 + X"},
    "candidate2": {"z1^3": "1", "z2^3": "5 - 3*X", "z1^2*z2": "X", "z1*z2^2": "4 - 5*X",
                   "z1*z3^2": "-5 + 3*X", "z2*z3^2": "-1"},
    "1b": {"z1^3": "1", "z2^3": "-1", "z1^2*z2": "1 + X", "z1*z2^2": "-2 + X",
           "z1*z3^2": "-1 - X", "z2*z3^2": "2 - X"},
    # printed with z2^2 for the second term; read as z2^3
    "1d": {"z1^3": "1 + X", "z2^3": "1", "z1^2*z2": "1 + 3*X", "z1*z2^2": "1 - 2*X",
           "z1*z3^2": "-2 + X", "z2*z3^2": "-2 - 3*X"},
    "1g_P1": {"z1^3": "1", "z1^2*z2": "-2 + 2*X", "z1*z2^2": "2 - X", "z1*z3^2": "-5 + 3*X"},
    "1g_P2": {"z2^3": "1", "z1^2*z2": "1 + X", "z1*z2^2": "-2*X", "z2*z3^2": "-2 - 3*X"},
    "2b": {"z1^3": "1", "z2^3": "1 + X", "z1^2*z2": "X", "z1*z2^2": "-X",
           "z1*z3^2": "-1 + 3*X", "z2*z3^2": "-1 - 4*X"},
    "2d_1": {"z1^3": "1", "z2^3": "-1 + X", "z1^2*z2": "X", "z1*z2^2": "-2 + X",
             "z1*z3^2": "-1 + X", "z2*z3^2": "1 - 2*X"},
    "2d_2": {"z1^3": "1", "z2^3": "1 - X", "z1^2*z2": "X", "z1*z2^2": "2 - X",
             "z1*z3^2": "-3 + X", "z2*z3^2": "1"},
}


def reference_cubic(name: str) -> Cubic:
    return Cubic.from_terms(REFERENCE_CUBICS[name])


EXPECTED_VERDICTS = {
    "1a": "eliminated", "1b": "eliminated", "1c": "eliminated", "1d": "eliminated",
    "1e": "eliminated", "1f": "possible", "1g": "eliminated", "1h": "eliminated",
    "2a": "eliminated", "2b": "eliminated", "2c": "possible", "2d": "eliminated",
}


@dataclass
class CaseResult:
    case: str
    hypothesis: str
    verdict: str
    reason: str
    cubics: list[Cubic] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def expected_verdict(self) -> str:
        return EXPECTED_VERDICTS[self.case]

    @property
    def ok(self) -> bool:
        return self.verdict == self.expected_verdict

    def as_dict(self) -> dict:
        return {
            "case": self.case,
            "hypothesis": self.hypothesis,
            "verdict": self.verdict,
            "expected": self.expected_verdict,
            "ok": self.ok,
            "reason": self.reason,
            "cubics": [c.terms() for c in self.cubics],
            "details": self.details,
        }


class _Ctx:
    def __init__(self, kp: KleinPlane):
        self.kp = kp
        self.t1, self.t2 = _tri_kinds(kp)
        self.vertices = [v for t in self.t2 for v in kp.triangle_vertices(t)]
        self.l1 = kp.fixture["partitions"]["L1"]

    def orbit(self, name: str) -> list[Condition]:
        return [vanish_at(self.kp.points[n], n) for n in self.kp.fixture["partitions"][name]]

    def tangent_on_l1(self, name: str) -> list[Condition]:
        out = []
        for key in self.l1:
            ln = self.kp.lines[key]
            for n in self.kp.fixture["partitions"][name]:
                p = self.kp.points[n]
                if ln.contains(p):
                    out += tangent_at(p, ln, n)
        return out

    def vertex(self) -> list[Condition]:
        return [vanish_at(v, "triangle2 vertex") for v in self.vertices]

    def meets(self, f: Cubic, name: str) -> bool:
        return all(not f(self.kp.points[n]) for n in self.kp.fixture["partitions"][name])

    def t1_punctures(self, f) -> list[int | None]:
        return [triangle_punctures(f, t, self.kp) for t in self.t1]

    def avoids_vertices(self, f: Cubic) -> bool:
        return all(f(v) for v in self.vertices)


def _pencil(conds: list[Condition]) -> tuple[Cubic, Cubic]:
    sol = solve_conditions(conds)
    if sol.rank != 2:
        raise VerificationError(f"expected a pencil, got rank {sol.rank}")
    return tuple(family_member(*v) for v in sol.basis)


def _tangent_members(u: Cubic, v: Cubic, ln: ProjLine, base: ProjPoint) -> tuple[KPoly, list[PencilMember]]:
    """Members u + lam v whose residual quadratic on ln (after removing base) has a double root."""
    r, s = ln.parameter(base)
    cu, cv = restrict_to_line(u, ln), restrict_to_line(v, ln)
    if (r, s) == (ONE, ZERO):
        qu, qv = cu[1:], cv[1:]
    elif (r, s) == (ZERO, ONE):
        qu, qv = cu[:3], cv[:3]
    else:
        raise DomainError("base point must be an endpoint of the line")
    a, b, c = (kpoly([x, y]) for x, y in zip(qu, qv))
    disc = psub(pmul(b, b), pscale(pmul(a, c), QuadElt(4)))
    members = []
    if pdeg(disc) >= 1:
        roots, rest = k_roots(disc)
        members += [PencilMember(u, v, lam) for lam, _ in roots]
        if pdeg(rest) == 2:
            c0, c1, c2 = rest
            delta = c1 * c1 - 4 * c2 * c0
            w = QuadExt(ZERO, ONE, delta)
            for sg in (1, -1):
                members.append(PencilMember(u, v, (w * sg - c1) / (2 * c2)))
    # lam = infinity: the member v itself
    if not (qv[1] * qv[1] - 4 * qv[0] * qv[2]):
        members.append(PencilMember(u, v, None))
    return disc, members


def _cube_members(u: Cubic, v: Cubic, ln: ProjLine) -> tuple[KPoly, list[PencilMember]]:
    """Members whose restriction to ln is a perfect cube."""
    cu, cv = restrict_to_line(u, ln), restrict_to_line(v, ln)
    c = [kpoly([x, y]) for x, y in zip(cu, cv)]
    three, nine = QuadElt(3), QuadElt(9)
    eqs = [
        psub(pmul(c[1], c[1]), pscale(pmul(c[0], c[2]), three)),
        psub(pmul(c[2], c[2]), pscale(pmul(c[1], c[3]), three)),
        psub(pmul(c[1], c[2]), pscale(pmul(c[0], c[3]), nine)),
    ]
    g = pgcd_all(eqs)
    members = []
    if pdeg(g) >= 1:
        roots, _ = k_roots(g)
        members += [PencilMember(u, v, lam) for lam, _ in roots]
    a, b, cc, d = cv
    if not (b * b - 3 * a * cc) and not (cc * cc - 3 * b * d) and not (b * cc - 9 * a * d):
        members.append(PencilMember(u, v, None))
    return g, members


def _double_root_named(m: PencilMember, ln: ProjLine, kp: KleinPlane) -> list[str]:
    """Named points of ln where the member meets the line with multiplicity >= 2."""
    out = []
    for name, p in kp.points.items():
        if ln.contains(p) and not m.at(p):
            if m.lam is None:
                d = tangent_at(p, ln)[1](m.v)
            else:
                t = tangent_at(p, ln)[1]
                d = t(m.u) + m.lam * t(m.v)
            if not d:
                out.append(name)
    return out


def run_case_analysis(kp: KleinPlane | None = None) -> list[CaseResult]:
    kp = kp or klein_plane()
    cx = _Ctx(kp)
    P = kp.points
    L = kp.lines
    out: list[CaseResult] = []

    def no_solution(case, hyp, conds, why) -> CaseResult:
        sol = solve_conditions(conds)
        v = "eliminated" if sol.empty else "possible"
        return CaseResult(case, hyp, v, why if sol.empty else "solutions exist", sol.cubics(), {"rank": sol.rank})

    # Case 1: no vertex of a second-kind triangle on C
    out.append(no_solution("1a", "P1, P2 on C; Q3 on C", cx.orbit("P1") + cx.orbit("P2") + cx.orbit("Q3"),
                           "no invariant cubic through P1, P2 and Q3"))

    s1b = solve_conditions(cx.orbit("P1") + cx.orbit("Q1"))
    c1b = s1b.unique()
    r = CaseResult("1b", "P1, Q1 on C", "possible", "", s1b.cubics(), {"rank": s1b.rank})
    if c1b is not None:
        r.details["matches_printed"] = c1b.proportional(reference_cubic("1b"))
        r.details["meets_P2"] = cx.meets(c1b, "P2")
        if r.details["meets_P2"]:
            r.verdict, r.reason = "eliminated", "the unique cubic also contains P2, so C meets three orbits"
    out.append(r)

    s1c = solve_conditions(cx.orbit("P2") + cx.orbit("Q1"))
    r = CaseResult("1c", "P2, Q1 on C", "possible", "", s1c.cubics(), {"rank": s1c.rank})
    if s1c.unique() is not None and c1b is not None and s1c.unique().proportional(c1b):
        r.verdict, r.reason = "eliminated", "same cubic as case 1b"
        r.details["same_as_1b"] = True
    out.append(r)

    s1d = solve_conditions(cx.orbit("Q1") + cx.orbit("Q2"))
    c1d = s1d.unique()
    r = CaseResult("1d", "Q1, Q2 on C", "possible", "", s1d.cubics(), {"rank": s1d.rank})
    if c1d is not None:
        pun = cx.t1_punctures(c1d)
        r.details.update(matches_printed=c1d.proportional(reference_cubic("1d")), triangle1_punctures=pun,
                         avoids_triangle2_vertices=cx.avoids_vertices(c1d))
        if any(p != TRIANGLE1_PUNCTURES for p in pun):
            r.verdict, r.reason = "eliminated", f"first-kind triangle carries {pun[0]} puncture points, not 4"
    out.append(r)

    # tangent to L1 at a named orbit
    r = CaseResult("1e", "L1 tangent to C at P1, P2 or Q1", "eliminated", "", [], {})
    for name in ("P1", "P2", "Q1"):
        sol = solve_conditions(cx.tangent_on_l1(name))
        smooth = [c for c in sol.cubics() if not is_singular(c)]
        r.details[name] = {"rank": sol.rank, "smooth_solutions": len(smooth),
                           "solutions": [c.terms() for c in sol.cubics()]}
        if smooth:
            r.verdict = "possible"
    r.reason = "every invariant cubic tangent to L1 at these points is singular" if r.verdict == "eliminated" else ""
    out.append(r)

    s1f = solve_conditions(cx.tangent_on_l1("Q2"))
    c1f = s1f.unique()
    r = CaseResult("1f", "L1 tangent to C at Q2", "eliminated", "no solution", s1f.cubics(), {"rank": s1f.rank})
    if c1f is not None:
        pun = cx.t1_punctures(c1f)
        r.details.update(singular=is_singular(c1f), triangle1_punctures=pun,
                         avoids_triangle2_vertices=cx.avoids_vertices(c1f))
        if not r.details["singular"] and all(p == TRIANGLE1_PUNCTURES for p in pun) and r.details["avoids_triangle2_vertices"]:
            r.verdict, r.reason = "possible", "smooth, four puncture points on each first-kind triangle"
        else:
            r.reason = "fails the puncture count or smoothness"
    out.append(r)

    out.append(_case_1g(cx))
    out.append(_case_1h(cx))

    # Case 2: the second-kind triangle vertices lie on C
    r = CaseResult("2a", "a triangle vertex and P_i on C, Q3 on C", "eliminated", "", [], {})
    for name in ("P1", "P2"):
        sol = solve_conditions(cx.vertex() + cx.orbit(name) + cx.orbit("Q3"))
        r.details[name] = {"rank": sol.rank}
        if not sol.empty:
            r.verdict = "possible"
    r.reason = "no invariant cubic through the vertices, P_i and Q3" if r.verdict == "eliminated" else ""
    out.append(r)

    s2b = solve_conditions(cx.vertex() + cx.orbit("Q1"))
    c2b = s2b.unique()
    r = CaseResult("2b", "triangle vertices and Q1 on C", "possible", "", s2b.cubics(), {"rank": s2b.rank})
    if c2b is not None:
        pun = cx.t1_punctures(c2b)
        r.details.update(matches_printed=c2b.proportional(reference_cubic("2b")), triangle1_punctures=pun)
        if any(p != TRIANGLE1_PUNCTURES for p in pun):
            r.verdict, r.reason = "eliminated", f"first-kind triangle carries {pun[0]} puncture points, not 4"
    out.append(r)

    s2c = solve_conditions(cx.vertex() + cx.orbit("Q2"))
    c2c = s2c.unique()
    r = CaseResult("2c", "triangle vertices and Q2 on C", "eliminated", "no solution", s2c.cubics(), {"rank": s2c.rank})
    if c2c is not None:
        pun = cx.t1_punctures(c2c)
        r.details.update(singular=is_singular(c2c), triangle1_punctures=pun)
        if not r.details["singular"] and all(p == TRIANGLE1_PUNCTURES for p in pun):
            r.verdict, r.reason = "possible", "smooth, four puncture points on each first-kind triangle"
        else:
            r.reason = "fails the puncture count or smoothness"
    out.append(r)

    out.append(_case_2d(cx))
    return out


def _case_1g(cx: _Ctx) -> CaseResult:
    kp = cx.kp
    P, L = kp.points, kp.lines
    r = CaseResult("1g", "L1 tangent to C at a puncture point", "eliminated", "", [], {})
    ok = True
    # meeting P_i forces Q3 as well; the unique such cubic must be smooth
    for name in ("P1", "P2"):
        sol = solve_conditions(cx.orbit(name) + cx.orbit("Q3"))
        c = sol.unique()
        sing = c is not None and is_singular(c)
        printed = reference_cubic(f"1g_{name}")
        r.details[name] = {
            "rank": sol.rank,
            "cubic": c.terms() if c is not None else None,
            "singular": sing,
            "printed_matches": c is not None and c.proportional(printed),
            "printed_contains_Q3": not printed(P["e9"]),
            "printed_is_singular": is_singular(printed),
        }
        if c is not None:
            r.cubics.append(c)
        ok &= sol.empty or sing
    # meeting Q1: tangency on l_{1,5} away from e1 cuts the pencil through Q1
    u, v = _pencil(cx.orbit("Q1")[:1])
    disc, members = _tangent_members(u, v, L["1,5"], P["e1"])
    pun = [triangle_punctures(m, cx.t1[0], kp) for m in members]
    named = [_double_root_named(m, L["1,5"], kp) for m in members]
    r.details["Q1"] = {
        "discriminant_degree": pdeg(disc),
        "k_rational_members": sum(1 for m in members if not isinstance(m.lam, QuadExt)),
        "members": len(members),
        "tangent_at_named_point": named,
        "triangle1_punctures": pun,
    }
    ok &= all(p is None or p > TRIANGLE1_PUNCTURES for p in pun)
    # meeting Q2: any member tangent on l_{1,5} away from e5 touches at a named point
    u, v = _pencil(cx.orbit("Q2")[:1])
    base = P["e5"]
    disc, members = _tangent_members(u, v, L["1,5"], base)
    named = [_double_root_named(m, L["1,5"], kp) for m in members]
    away = [[n for n in nm if P[n] != base] for nm in named]
    r.details["Q2"] = {"members": len(members), "tangent_at_named_point": named}
    ok &= all(away)
    if not ok:
        r.verdict = "possible"
    r.reason = ("P_i: singular; Q1: seven puncture points on a first-kind triangle; "
                "Q2: tangency only at named points") if ok else "a surviving configuration"
    return r


def _case_1h(cx: _Ctx) -> CaseResult:
    kp = cx.kp
    u, v = _pencil(cx.orbit("Q3"))
    g, members = _cube_members(u, v, kp.lines["1,5"])
    r = CaseResult("1h", "L1 meets C in a triple point; Q3 on C", "eliminated", "", [], {"gcd_degree": max(pdeg(g), 0),
                                                                                       "members": len(members)})
    if members:
        r.verdict, r.reason = "possible", "perfect-cube members exist"
    else:
        r.reason = "no member of the pencil through Q3 meets an L1 line in a triple point"
    return r


def _case_2d(cx: _Ctx) -> CaseResult:
    kp = cx.kp
    L = kp.lines
    vtx = line_intersection(L["1,5"], L["4,8"])
    r = CaseResult("2d", "L1 tangent to C at the triangle vertices", "eliminated", "", [], {})
    sols = []
    for key in ("1,5", "4,8"):
        sol = solve_conditions(tangent_at(vtx, L[key], "vertex"))
        c = sol.unique()
        if c is None:
            r.details[key] = {"rank": sol.rank}
            continue
        sols.append(c)
        r.cubics.append(c)
        r.details[key] = {
            "rank": sol.rank,
            "value_at_e9": format_quad(c(kp.points["e9"])),
            "meets_Q1": cx.meets(c, "Q1"),
            "meets_Q2": cx.meets(c, "Q2"),
        }
    printed = [reference_cubic("2d_1"), reference_cubic("2d_2")]
    r.details["matches_printed"] = len(sols) == 2 and all(any(c.proportional(p) for c in sols) for p in printed)
    alive = [c for c in sols if not c(kp.points["e9"]) or cx.meets(c, "Q1") or cx.meets(c, "Q2")]
    if alive:
        r.verdict, r.reason = "possible", "a tangency cubic meets some Q orbit"
    else:
        r.reason = "neither tangency cubic meets Q1, Q2 or Q3"
    return r


def surviving_cubics(cases: list[CaseResult] | None = None) -> list[Cubic]:
    cases = cases if cases is not None else run_case_analysis()
    return [c for r in cases if r.verdict == "possible" for c in r.cubics]


# --- puncture constraints on a candidate --------------------------------------


def puncture_profile_check(f: Cubic, kp: KleinPlane | None = None, name: str = "cubic") -> SuiteReport:
    """Puncture-point constraints on all 15 lines, orbit invariance and Q-orbit contact."""
    kp = kp or klein_plane()
    rep = SuiteReport(f"puncture profile of {name}")
    profiles = {k: intersection_profile(f, ln, kp) for k, ln in kp.lines.items()}
    rep.add("no line is contained in the curve", [k for k, p in profiles.items() if p.contained], [])
    rep.add("Bezout: multiplicities sum to 3", all(p.total_multiplicity == 3 for p in profiles.values()), True)
    counts = {k: p.puncture_count() for k, p in profiles.items()}
    for k in kp.lines:
        orb = kp.line_orbit(k)
        c = counts[k]
        if orb == "L1":
            rep.add(f"{k} (L1): one or two puncture points", c in (1, 2), True)
        elif orb == "L2":
            rep.add(f"{k} (L2): three or four puncture points", c in (3, 4), True)
        else:
            g = kp.triangle_stabilizer(kp.triangle_of(k))
            fixed = all(
                pp.point is not None and kp.group[g].apply(pp.point) == pp.point for pp in profiles[k].punctures()
            )
            rep.add(f"{k} ({orb}): puncture points fixed by {g}", fixed, True)
            rep.add(f"{k} ({orb}): at most two puncture points", c <= 2, True)
    for orb in ("L1", "L2", "L3", "L4"):
        rep.add(f"puncture count constant on {orb}", len({counts[k] for k in kp.fixture["partitions"][orb]}), 1)
    t1, t2 = _tri_kinds(kp)
    per_tri = {",".join(t): triangle_punctures(f, t, kp) for t in t1 + t2}
    rep.add("first-kind triangles carry 4 puncture points",
            [per_tri[",".join(t)] for t in t1], [TRIANGLE1_PUNCTURES] * len(t1))
    rep.add("second-kind triangles carry 3 puncture points",
            [per_tri[",".join(t)] for t in t2], [TRIANGLE2_PUNCTURES] * len(t2))
    rep.add("total puncture points", sum(per_tri.values()), 18)
    met = [o for o in ("Q1", "Q2", "Q3") if any(not f(p) for p in kp.orbit_points(o))]
    rep.add("meets one of the Q orbits", bool(met), True)
    rep.data.update(
        puncture_counts=counts,
        profiles={k: p.summary() for k, p in profiles.items()},
        irrational_lines=sorted(k for k, p in profiles.items() if p.has_irrational),
        q_orbits_met=met,
    )
    return rep


def cubic_diff(got: Cubic, want: Cubic) -> dict[str, tuple[str, str]]:
    """Monomials where two cubics disagree (after normalizing both)."""
    g, w = got.normalized(), want.normalized()
    return {
        _mono_str(m): (format_quad(a), format_quad(b))
        for m, a, b in zip(MONOS3, g.coeffs, w.coeffs)
        if a != b
    }


def verify_plane(kp: KleinPlane | None = None) -> SuiteReport:
    kp = kp or klein_plane()
    rep = SuiteReport("monodromy plane curve")
    for sub in (verify_incidence(kp), verify_action(kp)):
        rep.checks += sub.checks
        rep.data.update(sub.data)
    fam = invariant_family(kp)
    rep.add("odd invariant space dimension", fam.dimension, 3)
    rep.add("family coefficients match the closed form", fam.matches_formulas, True)
    rep.add("even invariant space dimension", fam.even_dimension, 1)
    rep.add("even case is the stated cubic", fam.even_case.proportional(EVEN_CUBIC), True)
    rep.add("even case is singular", is_singular(fam.even_case), True)
    cases = run_case_analysis(kp)
    for r in cases:
        rep.add(f"case {r.case}: {r.expected_verdict}", r.verdict, r.expected_verdict)
    surv = surviving_cubics(cases)
    rep.add("number of surviving cubics", len(surv), 2)
    for i, c in enumerate(surv[:2], 1):
        printed = reference_cubic(f"candidate{i}")
        rep.add(f"candidate {i} coefficients", cubic_diff(c, printed), {})
        rep.add(f"candidate {i} is nonsingular", is_singular(c), False)
        rep.add(f"candidate {i} anti-invariant under S3", all(anti_invariance(c, kp).values()), True)
        sub = puncture_profile_check(c, kp, f"candidate {i}")
        rep.add(f"candidate {i} puncture constraints", sub.failures(), [])
        rep.data[f"candidate{i}"] = {"terms": c.terms(), "printed_anti_invariant": all(anti_invariance(printed, kp).values()),
                                     "puncture_counts": sub.data["puncture_counts"],
                                     "q_orbits_met": sub.data["q_orbits_met"]}
    rep.data["cases"] = [r.as_dict() for r in cases]
    return rep

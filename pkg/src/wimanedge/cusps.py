"""Cusps of the monodromy group: coset orbits, cusp subgroups, and resolutions.

Cusps correspond to Gamma-orbits on the right cosets of the upper-triangular
image in PSL2(O/4p5).  A right coset D g is determined by the bottom row of g
up to the scalar units of D, which gives a cheap canonical key.

Resolution cycles come from the exact convex hull of the totally positive
points of the translation lattice, plotted under the two real places.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .finquot import (
    FinGroup,
    FinMat,
    SuiteReport,
    monodromy_image,
    monodromy_image_matrices,
    reduce_mat,
    reduce_word,
)
from .matgrp import Mat2, VerificationError, Word, e, eval_word, m, parse_word, sl2o_words, t
from .qfield import (
    MOD4P5,
    ONE,
    ZERO,
    DomainError,
    Place,
    QuadElt,
    X,
    format_quad,
    is_totally_positive,
    reduce,
    sign_at,
)

TWO_ZETA_MINUS1 = Fraction(1, 15)


# --- coset table ------------------------------------------------------------


def _unit_codes(ring=MOD4P5) -> list[int]:
    """Image of <-1, X> in the unit group of the residue ring."""
    mt, ng = ring.mul_table, ring.neg_table
    x = reduce(X, ring).code
    out = {ring.one.code}
    frontier = [ring.one.code]
    while frontier:
        nxt = []
        for u in frontier:
            for v in (mt[u][x], ng[u]):
                if v not in out:
                    out.add(v)
                    nxt.append(v)
        frontier = nxt
    return sorted(out)


@dataclass
class CosetTable:
    """Right cosets of the image of Delta in PSL2(O/4p5), keyed by bottom rows."""

    ring: object
    keys: list[int]
    reps: list[FinMat]
    action: list[list[int]]  # action[j][i]: coset j under Gamma generator i
    units: list[int] = field(repr=False)
    index_of: dict[int, int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.keys)

    def key_of_row(self, c: int, d: int) -> int:
        mt, size = self.ring.mul_table, self.ring.size
        return min(mt[u][c] * size + mt[u][d] for u in self.units)

    def coset_of(self, g: FinMat) -> int:
        """Index of the coset D g."""
        return self.index_of[self.key_of_row(g.entries[2], g.entries[3])]

    def act(self, j: int, h: FinMat) -> int:
        return self.coset_of(self.reps[j] @ h)


def build_coset_table(expected: int | None = 240) -> CosetTable:
    ring = MOD4P5
    units = _unit_codes(ring)
    gens = [reduce_word(w, ring) for w in sl2o_words()]
    ident = FinMat.identity(ring)
    table = CosetTable(ring, [], [], [], units, {})

    def add(g: FinMat) -> bool:
        k = table.key_of_row(g.entries[2], g.entries[3])
        if k in table.index_of:
            return False
        table.index_of[k] = len(table.keys)
        table.keys.append(k)
        table.reps.append(g)
        return True

    add(ident)
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                gh = g @ h
                if add(gh):
                    nxt.append(gh)
        frontier = nxt
    gamma = monodromy_image_matrices(ring)
    table.action = [[table.act(j, h) for h in gamma] for j in range(len(table.keys))]
    if expected is not None and len(table) != expected:
        raise VerificationError(f"coset count {len(table)} != {expected}")
    return table


def cusp_orbits(table: CosetTable) -> list[list[int]]:
    """Partition of the cosets into Gamma-orbits, each sorted, ordered by smallest member."""
    seen = [False] * len(table)
    orbits = []
    for start in range(len(table)):
        if seen[start]:
            continue
        seen[start] = True
        orbit, stack = [start], [start]
        while stack:
            j = stack.pop()
            for nj in table.action[j]:
                if not seen[nj]:
                    seen[nj] = True
                    orbit.append(nj)
                    stack.append(nj)
        orbits.append(sorted(orbit))
    return orbits


def stabilizer_order(table: CosetTable, j: int, group: FinGroup) -> int:
    """Number of elements of ``group`` fixing coset j (direct enumeration)."""
    return sum(1 for h in group.elements() if table.act(j, h) == j)


# --- cusp subgroups -----------------------------------------------------------


@dataclass(frozen=True)
class CuspSubgroup:
    """Lambda = <mu^a y, tau^b1 eta^b2, tau^c1 eta^c2> inside Delta."""

    name: str
    a: int
    y: Word
    b: tuple[int, int]
    c: tuple[int, int]
    expected_index: int

    @property
    def gen_words(self) -> tuple[Word, Word, Word]:
        return (
            m**self.a * self.y,
            t ** self.b[0] * e ** self.b[1],
            t ** self.c[0] * e ** self.c[1],
        )

    @property
    def t1(self) -> QuadElt:
        return QuadElt(self.b[0], self.b[1])

    @property
    def t2(self) -> QuadElt:
        return QuadElt(self.c[0], self.c[1])

    @property
    def index(self) -> int:
        return abs(self.a * (self.b[0] * self.c[1] - self.b[1] * self.c[0]))

    def lattice(self) -> CuspLattice:
        unit, _ = multiplier_of(self)
        return CuspLattice((self.t1, self.t2), unit)


CUSP_SUBGROUPS: dict[str, CuspSubgroup] = {
    "lambda8": CuspSubgroup("lambda8", -2, e, (0, 2), (2, 0), 8),
    "lambda24": CuspSubgroup("lambda24", 6, Word(), (2, 0), (1, 2), 24),
    "lambda40": CuspSubgroup("lambda40", 2, t**-2 * e**-1, (2, 6), (0, 10), 40),
    "lambda120": CuspSubgroup("lambda120", 6, Word(), (1, 18), (0, 20), 120),
}


@dataclass(frozen=True)
class CuspClass:
    """One cusp of X_Gamma: Delta_i = c^-1 Lambda c (``inverse_left``) or c Lambda c^-1."""

    name: str
    subgroup: str
    conjugator: Word
    inverse_left: bool = True

    def conjugate(self, w: Mat2) -> Mat2:
        c = eval_word(self.conjugator)
        if self.inverse_left:
            return c.inverse() @ w @ c
        return c @ w @ c.inverse()

    def coset_matrix(self) -> Mat2:
        """g with Delta_i = g^-1 Lambda g; the cusp is the coset D g."""
        c = eval_word(self.conjugator)
        return c if self.inverse_left else c.inverse()


# Delta_2 is printed with the same conjugator on both sides; which side carries
# the inverse is settled by membership in cusp_classes().
_CUSP_TABLE = [
    ("delta1", "lambda8", "s t m^2", True),
    ("delta2", "lambda8", "t s t s m^-1", None),
    ("delta3", "lambda24", "s t", True),
    ("delta4", "lambda40", "s e", True),
    ("delta5", "lambda40", "m s t m", True),
    ("delta6", "lambda120", "1", True),
]


def _raw_cusp_table() -> list[tuple[str, str, Word, bool | None]]:
    out = []
    for name, sub, conj, side in _CUSP_TABLE:
        out.append((name, sub, parse_word(conj), side))
    return out


def in_gamma(mat: Mat2, H: FinGroup, psl: bool = True) -> bool:
    """Membership of an element of SL2(O) in Gamma, through its image mod 4p5."""
    r = reduce_mat(mat, MOD4P5)
    return r in H or (psl and (-r) in H)


def _conjugates_in_gamma(cc: CuspClass, H: FinGroup) -> bool:
    sub = CUSP_SUBGROUPS[cc.subgroup]
    return all(in_gamma(cc.conjugate(eval_word(w)), H) for w in sub.gen_words)


@functools.lru_cache(maxsize=None)
def cusp_classes() -> tuple[CuspClass, ...]:
    H = monodromy_image(MOD4P5)
    out = []
    for name, sub, w, side in _raw_cusp_table():
        if side is None:
            ok = [sd for sd in (True, False) if _conjugates_in_gamma(CuspClass(name, sub, w, sd), H)]
            if len(ok) != 1:
                raise VerificationError(f"{name}: conjugator side not determined ({ok})")
            side = ok[0]
        out.append(CuspClass(name, sub, w, side))
    return tuple(out)


def verify_cusp_subgroups(table: CosetTable | None = None) -> SuiteReport:
    rep = SuiteReport("cusp subgroups")
    table = table or build_coset_table()
    H = monodromy_image(MOD4P5)
    orbits = cusp_orbits(table)
    orbit_of = {j: i for i, orb in enumerate(orbits) for j in orb}
    for key, sub in CUSP_SUBGROUPS.items():
        rep.add(f"{key}: index |a(b1c2 - b2c1)|", sub.index, sub.expected_index)
        in_delta = all(eval_word(w).c == ZERO for w in sub.gen_words)
        rep.add(f"{key}: generators are upper triangular", in_delta, True)
    seen_orbits = []
    classes = cusp_classes()
    for cc in classes:
        sub = CUSP_SUBGROUPS[cc.subgroup]
        for w in sub.gen_words:
            rep.add(f"{cc.name}: conjugate of {w} lies in Gamma", in_gamma(cc.conjugate(eval_word(w)), H), True)
        j = table.coset_of(reduce_mat(cc.coset_matrix(), MOD4P5))
        o = orbit_of[j]
        seen_orbits.append(o)
        rep.add(f"{cc.name}: orbit size equals index", len(orbits[o]), sub.expected_index)
    rep.add("the six cusp classes lie in six distinct orbits", len(set(seen_orbits)), 6)
    rep.data["delta2_inverse_left"] = classes[1].inverse_left
    rep.data["orbit_of_class"] = {cc.name: o for cc, o in zip(classes, seen_orbits)}
    return rep


def verify_cusp_orbits(table: CosetTable | None = None) -> SuiteReport:
    rep = SuiteReport("cusp orbits")
    table = table or build_coset_table(expected=None)
    rep.add("coset count", len(table), 240)
    orbits = cusp_orbits(table)
    sizes = [len(o) for o in orbits]
    rep.add("number of orbits", len(orbits), 6)
    rep.add("orbit sizes sum", sum(sizes), len(table))
    rep.add("orbit sizes multiset", sorted(sizes), sorted(s.expected_index for s in _six_subgroups()))
    H = monodromy_image(MOD4P5)
    stab = [stabilizer_order(table, o[0], H) for o in orbits]
    rep.add("orbit-stabilizer: |H| = size * |Stab|", all(n * k == H.order for n, k in zip(sizes, stab)), True)
    rep.data.update(orbit_sizes=sizes, stabilizers=stab, representatives=[o[0] for o in orbits])
    return rep


def _six_subgroups() -> list[CuspSubgroup]:
    return [CUSP_SUBGROUPS[cc[1]] for cc in _CUSP_TABLE]


# --- multipliers and lattices -------------------------------------------------


def _translation(w: Mat2) -> QuadElt:
    if not (w.a == ONE and w.d == ONE and w.c == ZERO):
        raise VerificationError(f"{w} is not a translation")
    return w.b


def _coords(v: QuadElt, t1: QuadElt, t2: QuadElt) -> tuple[Fraction, Fraction]:
    """Coordinates of v in the Q-basis (t1, t2) of k."""
    det = t1.a * t2.b - t1.b * t2.a
    if det == 0:
        raise DomainError("basis is degenerate")
    return ((v.a * t2.b - v.b * t2.a) / det, (t1.a * v.b - t1.b * v.a) / det)


def multiplier_of(sub: CuspSubgroup) -> tuple[QuadElt, list[list[int]]]:
    """Unit X^(2a) by which mu^a y acts on T, and its integer matrix on (t1, t2).

    The unit is read off from conjugating the translations, then cross-checked
    against X^(2a).
    """
    g = eval_word(sub.gen_words[0])
    unit = X ** (2 * sub.a)
    cols = []
    for tj in (sub.t1, sub.t2):
        conj = _translation(g @ Mat2(ONE, tj, ZERO, ONE) @ g.inverse())
        if conj != unit * tj:
            raise VerificationError(f"{sub.name}: conjugation gives {conj}, expected {unit * tj}")
        x, y = _coords(conj, sub.t1, sub.t2)
        if x.denominator != 1 or y.denominator != 1:
            raise VerificationError(f"{sub.name}: multiplier does not preserve the lattice")
        cols.append((int(x), int(y)))
    if abs(unit.norm()) != 1 or not is_totally_positive(unit):
        raise VerificationError(f"{sub.name}: {unit} is not a totally positive unit")
    return unit, [[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]]


@dataclass(frozen=True)
class CuspLattice:
    basis: tuple[QuadElt, QuadElt]
    multiplier: QuadElt

    def __post_init__(self):
        u = self.multiplier
        if abs(u.norm()) != 1 or not is_totally_positive(u):
            raise DomainError(f"{u} is not a totally positive unit")
        for tj in self.basis:
            x, y = _coords(u * tj, *self.basis)
            if x.denominator != 1 or y.denominator != 1:
                raise DomainError("multiplier does not preserve the lattice")

    def coords(self, v: QuadElt) -> tuple[Fraction, Fraction]:
        return _coords(v, *self.basis)

    def contains(self, v: QuadElt) -> bool:
        x, y = self.coords(v)
        return x.denominator == 1 and y.denominator == 1

    def point(self, n1: int, n2: int) -> QuadElt:
        return self.basis[0] * n1 + self.basis[1] * n2

    def rebased(self, a: int, b: int, c: int, d: int) -> CuspLattice:
        """Same lattice with basis (a t1 + b t2, c t1 + d t2), ad - bc = +-1."""
        if abs(a * d - b * c) != 1:
            raise DomainError("basis change must be unimodular")
        t1, t2 = self.basis
        return CuspLattice((t1 * a + t2 * b, t1 * c + t2 * d), self.multiplier)


# --- exact hull -------------------------------------------------------------


def phi(v: QuadElt) -> tuple[float, float]:
    """Float image under the two places (rendering and search ranges only)."""
    return v.embed(Place.FIRST), v.embed(Place.SECOND)


def turn(p: QuadElt, q: QuadElt, r: QuadElt) -> int:
    """Orientation of the plotted points p, q, r: +1 left turn, -1 right, 0 collinear.

    With d1 = q - p, d2 = r - p the cross product equals sqrt5 times the
    X-coordinate of d1 * galois(d2).
    """
    w = (q - p) * (r - p).galois()
    return (w.b > 0) - (w.b < 0)


def _cmp_first(u: QuadElt, v: QuadElt) -> int:
    return sign_at(u - v, Place.FIRST)


def _lt(u: QuadElt, v: QuadElt, place: Place = Place.FIRST) -> bool:
    return sign_at(u - v, place) < 0


def reduced_basis(lat: CuspLattice) -> tuple[QuadElt, QuadElt]:
    """Gauss-reduced basis of the plotted lattice (same lattice, short vectors)."""
    b1, b2 = lat.basis
    for _ in range(200):
        f1, f2 = phi(b1), phi(b2)
        n1, n2 = f1[0] ** 2 + f1[1] ** 2, f2[0] ** 2 + f2[1] ** 2
        if n2 < n1:
            b1, b2 = b2, b1
            continue
        k = round((f1[0] * f2[0] + f1[1] * f2[1]) / n1)
        if k == 0:
            return b1, b2
        b2 = b2 - b1 * k
    raise VerificationError("basis reduction did not terminate")


def _band_points(basis, a: float, b: float, ymax: float):
    """Integer pairs whose plotted point may lie in [a, b] x [0, ymax] (with margin)."""
    (x1, y1), (x2, y2) = phi(basis[0]), phi(basis[1])
    det = x1 * y2 - x2 * y1
    corners = [(a, 0.0), (a, ymax), (b, 0.0), (b, ymax)]
    n1s = [(x * y2 - y * x2) / det for x, y in corners]
    for n1 in range(math.floor(min(n1s)) - 1, math.ceil(max(n1s)) + 2):
        lo, hi = -math.inf, math.inf
        for base, coef, ca, cb in ((n1 * x1, x2, a, b), (n1 * y1, y2, 0.0, ymax)):
            if coef == 0:
                if not (ca - 1 <= base <= cb + 1):
                    lo, hi = 1.0, 0.0
                continue
            ra, rb = (ca - base) / coef, (cb - base) / coef
            lo, hi = max(lo, min(ra, rb)), min(hi, max(ra, rb))
        for n2 in range(math.floor(lo) - 1, math.ceil(hi) + 2):
            yield n1, n2


def enumerate_positive(
    lat: CuspLattice, xlo: Fraction, xhi: Fraction, nmax: Fraction
) -> list[QuadElt]:
    """Totally positive lattice points with xlo <= phi1 <= xhi and norm <= nmax.

    The window is cut into bands [a, 2a] so each search box has area about
    nmax; floats only prune, every returned point passes the exact tests.
    """
    basis = reduced_basis(lat)
    (x1, y1), (x2, y2) = phi(basis[0]), phi(basis[1])
    lo, hi = QuadElt(xlo), QuadElt(xhi)
    fn = float(nmax) * (1 + 1e-9) + 1e-9
    seen = set()
    found = []
    a = float(xlo)
    while a <= float(xhi):
        b = min(2 * a, float(xhi))
        for n in _band_points(basis, a * (1 - 1e-9), b * (1 + 1e-9), fn / a):
            if n in seen:
                continue
            n1, n2 = n
            fx, fy = n1 * x1 + n2 * x2, n1 * y1 + n2 * y2
            if fx <= -1e-9 or fy <= -1e-9 or fx * fy > fn:
                continue
            seen.add(n)
            v = basis[0] * n1 + basis[1] * n2
            if is_totally_positive(v) and v.norm() <= nmax and not _lt(v, lo) and not _lt(hi, v):
                found.append(v)
        a *= 2
    return sorted(found, key=functools.cmp_to_key(_cmp_first))


def lower_chain(points: Sequence[QuadElt]) -> list[QuadElt]:
    """Boundary chain facing the origin, left to right, keeping collinear points."""
    pts = sorted(set(points), key=functools.cmp_to_key(_cmp_first))
    chain: list[QuadElt] = []
    for p in pts:
        while len(chain) >= 2 and turn(chain[-2], chain[-1], p) < 0:
            chain.pop()
        chain.append(p)
    return chain


def _intercepts(p: QuadElt, q: QuadElt) -> tuple[QuadElt, QuadElt]:
    """Axis intercepts (A, B) of the line through plotted p, q, as elements of k.

    Points of the open quadrant strictly below the line have x < A, y < B and
    x*y < A*B/4.
    """
    xp, yp = p, p.galois()
    xq, yq = q, q.galois()
    # line: (y - yp)(xq - xp) = (yq - yp)(x - xp)
    slope = (yq - yp) / (xq - xp)
    B = yp - slope * xp
    A = xp - yp / slope
    return A, B


@dataclass
class HullCycle:
    vertices: list[QuadElt]  # one period, left to right
    b_values: list[int]
    unit: QuadElt  # moves vertices to the right: unit * vertices[0] follows vertices[-1]
    lattice: CuspLattice | None = None

    @property
    def self_intersections(self) -> list[int]:
        return [-b for b in self.b_values]

    def __len__(self) -> int:
        return len(self.b_values)

    def canonical(self) -> tuple[int, ...]:
        """Self-intersections of the lexicographically least rotation/reflection of b."""
        return tuple(-b for b in canonical_cycle(self.b_values))

    def contains_vertex(self, v: QuadElt) -> bool:
        """v is a hull vertex (some unit translate of v lies in the stored period)."""
        if not is_totally_positive(v):
            return False
        start, u = self.vertices[0], self.unit
        w = v
        while _lt(w, start):
            w = w * u
        while not _lt(w, start * u):
            w = w / u
        return w in self.vertices

    def extended(self, before: int = 1, after: int = 1) -> list[QuadElt]:
        n, u = len(self.vertices), self.unit
        out = []
        for k in range(-before, n + after):
            q, r = divmod(k, n)
            out.append(self.vertices[r] * (u**q))
        return out


def canonical_cycle(bs: Sequence[int]) -> tuple[int, ...]:
    n = len(bs)
    cands = []
    for seq in (list(bs), list(reversed(bs))):
        cands += [tuple(seq[i:] + seq[:i]) for i in range(n)]
    return min(cands)


def _rightward_unit(u: QuadElt) -> QuadElt:
    return u if sign_at(u - ONE, Place.FIRST) > 0 else u.inv()


def resolve_cusp(lat: CuspLattice, max_rounds: int = 40) -> HullCycle:
    """One period of the hull boundary of the totally positive lattice points.

    The enumeration window grows until every edge of the period carries a
    certificate: no lattice point below its line can lie outside the window.
    """
    u = _rightward_unit(lat.multiplier)
    lam = Fraction(math.ceil(u.embed(Place.FIRST)))
    anchor = ONE
    xlo, xhi = Fraction(1, 2), 2 * lam
    # start from the reduced basis so the window does not depend on the basis given
    nmax = Fraction(max(max(abs(b.norm()) for b in reduced_basis(lat)), 1))
    for _ in range(max_rounds):
        chain = lower_chain(enumerate_positive(lat, xlo, xhi, nmax))
        verts = _period(chain, u, anchor)
        if verts is not None and _certified(verts, u, xlo, xhi, nmax):
            out = HullCycle(verts, _b_values(verts, u), u, lat)
            check_hull_cycle(out)
            return out
        xlo, xhi, nmax = xlo / 2, xhi * 2, nmax * 2
    raise VerificationError("hull enumeration did not certify; lattice or multiplier suspect")


def _period(chain: list[QuadElt], u: QuadElt, anchor: QuadElt):
    starts = [i for i, v in enumerate(chain) if not _lt(v, anchor)]
    if not starts or starts[0] == 0:
        return None
    i0 = starts[0]
    image = chain[i0] * u
    try:
        i1 = chain.index(image)
    except ValueError:
        return None
    if i1 + 1 >= len(chain) or i1 == i0:
        return None
    return chain[i0:i1]


def _b_values(verts: list[QuadElt], u: QuadElt) -> list[int]:
    ext = [verts[-1] / u] + verts + [verts[0] * u]
    bs = []
    for k in range(1, len(ext) - 1):
        q = (ext[k - 1] + ext[k + 1]) / ext[k]
        if not q.is_rational() or q.a.denominator != 1:
            raise VerificationError(f"non-integral b at {format_quad(ext[k])}: {q}")
        bs.append(int(q.a))
    return bs


def _edge_bounds(verts: list[QuadElt], u: QuadElt):
    ext = verts + [verts[0] * u]
    for p, q in zip(ext, ext[1:]):
        yield _intercepts(p, q)


def _certified(verts: list[QuadElt], u: QuadElt, xlo: Fraction, xhi: Fraction, nmax: Fraction) -> bool:
    for A, B in _edge_bounds(verts, u):
        # points strictly below the line: 1/B < x < A and x*y < A*B/4 (norm >= 1)
        if _lt(QuadElt(xhi), A) or _lt(ONE / B, QuadElt(xlo)):
            return False
        if sign_at(A * B / 4 - QuadElt(nmax), Place.FIRST) > 0:
            return False
    return True


def check_hull_cycle(c: HullCycle) -> None:
    """v_{k-1} + v_{k+1} = b_k v_k, b_k >= 2, and unit-periodicity, exactly."""
    ext = c.extended(1, 1)
    for k, b in enumerate(c.b_values):
        if ext[k] + ext[k + 2] != ext[k + 1] * b:
            raise VerificationError(f"relation fails at vertex {format_quad(ext[k + 1])}")
        if b < 2:
            raise VerificationError(f"b = {b} < 2 at {format_quad(ext[k + 1])}")
    for v in c.vertices:
        if not is_totally_positive(v) or (c.lattice and not c.lattice.contains(v)):
            raise VerificationError(f"{format_quad(v)} is not a positive lattice point")
    if c.lattice is not None:
        # every positive point near the period lies on or above the boundary
        bound = max((A * B).embed(Place.FIRST) / 4 for A, B in _edge_bounds(c.vertices, c.unit))
        lo = Fraction(c.vertices[0].embed(Place.FIRST) / 2).limit_denominator(10**6)
        hi = Fraction((c.vertices[0] * c.unit).embed(Place.FIRST) * 2).limit_denominator(10**6)
        pts = enumerate_positive(c.lattice, lo, hi, Fraction(math.ceil(bound)))
        ext = c.extended(0, 1)
        for p in pts:
            for a, b in zip(ext, ext[1:]):
                if not _lt(p, a) and not _lt(b, p) and turn(a, b, p) < 0:
                    raise VerificationError(f"{format_quad(p)} lies inside the hull boundary")


@functools.lru_cache(maxsize=None)
def resolve_named(name: str) -> HullCycle:
    try:
        sub = CUSP_SUBGROUPS[name]
    except KeyError:
        raise DomainError(f"unknown cusp {name!r}; choose from {sorted(CUSP_SUBGROUPS)}") from None
    return resolve_cusp(sub.lattice())


def verify_resolutions() -> SuiteReport:
    rep = SuiteReport("cusp resolutions")
    sixteen = canonical_cycle([4] + [2] * 7 + [4] + [2] * 7)
    expected = {
        "lambda8": (-3, -3),
        "lambda40": (-3, -3),
        "lambda24": tuple(-b for b in sixteen),
        "lambda120": tuple(-b for b in sixteen),
    }
    cycles = {}
    for name, sub in CUSP_SUBGROUPS.items():
        unit, mat = multiplier_of(sub)
        rep.add(f"{name}: multiplier", format_quad(unit), format_quad(X ** (2 * sub.a)))
        c = resolve_cusp(sub.lattice())
        cycles[name] = c
        rep.add(f"{name}: cycle", list(c.canonical()), list(expected[name]))
        fours = [k for k, b in enumerate(c.b_values) if b == 4]
        if len(c) == 16:
            rep.add(f"{name}: the two -4 curves are opposite", fours[1] - fours[0] if len(fours) == 2 else None, 8)
        rep.data[name] = {
            "multiplier": format_quad(unit),
            "action_matrix": mat,
            "cycle": list(c.canonical()),
            "vertices": [format_quad(v) for v in c.vertices],
        }
    c24, c120 = cycles["lambda24"], cycles["lambda120"]
    fam24 = [QuadElt(2 + j, 2 * j) for j in range(9)] + [QuadElt(2 + 3 * j, -2 * j) for j in range(9)]
    rep.add("lambda24 vertices include both families", all(c24.contains_vertex(v) for v in fam24), True)
    fam120 = [QuadElt(6 + j, 8 - 2 * j) for j in range(9)]
    rep.add("lambda120 boundary includes (6 + j) + (8 - 2j)X", all(c120.contains_vertex(v) for v in fam120), True)
    c8 = cycles["lambda8"]
    rep.add(
        "lambda8 vertex relations",
        [QuadElt(10, -6) + 2 == QuadElt(4, -2) * 3, QuadElt(4, -2) + QuadElt(2, 2) == QuadElt(6)],
        [True, True],
    )
    rep.add("lambda8 vertices 2, 2 + 2X, 4 - 2X", all(c8.contains_vertex(v) for v in (QuadElt(2), QuadElt(2, 2), QuadElt(4, -2))), True)
    return rep


# --- invariants -------------------------------------------------------------


def euler_number(index_psl: int) -> int:
    v = index_psl * TWO_ZETA_MINUS1
    if v.denominator != 1:
        raise DomainError(f"{index_psl} / 15 is not an integer")
    return int(v)


@dataclass(frozen=True)
class SurfaceInvariants:
    e_open: int
    c1_sq: int
    c2: int
    chi: int
    q: int
    p_g: int
    two_zeta_minus1: Fraction = TWO_ZETA_MINUS1

    def as_dict(self) -> dict:
        return {
            "e_open": self.e_open,
            "c1_sq": self.c1_sq,
            "c2": self.c2,
            "chi": self.chi,
            "q": self.q,
            "p_g": self.p_g,
            "two_zeta_minus1": str(self.two_zeta_minus1),
        }


def chern(e_open: int, cycles: Sequence[HullCycle | Sequence[int]]) -> SurfaceInvariants:
    """c2 = e + total cycle length, c1^2 = 2e - sum(b - 2); chi, q, p_g follow."""
    bss = [c.b_values if isinstance(c, HullCycle) else [abs(x) for x in c] for c in cycles]
    c2 = e_open + sum(len(bs) for bs in bss)
    c1_sq = 2 * e_open - sum(b - 2 for bs in bss for b in bs)
    if (c1_sq + c2) % 12:
        raise VerificationError(f"c1^2 + c2 = {c1_sq + c2} is not divisible by 12")
    chi = (c1_sq + c2) // 12
    q = 0
    return SurfaceInvariants(e_open, c1_sq, c2, chi, q, chi - 1 + q)


def six_cycles() -> list[HullCycle]:
    cache = {name: resolve_named(name) for name in CUSP_SUBGROUPS}
    return [cache[sub] for _, sub, _, _ in _CUSP_TABLE]


def verify_chern(index_psl: int | None = None) -> SuiteReport:
    rep = SuiteReport("Chern numbers")
    if index_psl is None:
        H = monodromy_image(MOD4P5, psl_mode=True)
        # [PSL2(O) : image of Gamma] = [SL2(O) : Gamma] / 2 when -I is not in Gamma
        index_psl = (460800 // 2) // H.order
    rep.add("index in PSL2(O)", index_psl, 240)
    e_open = euler_number(index_psl)
    inv = chern(e_open, six_cycles())
    rep.add("e", inv.e_open, 16)
    rep.add("c2", inv.c2, 56)
    rep.add("c1^2", inv.c1_sq, 16)
    rep.add("chi", inv.chi, 6)
    rep.add("q", inv.q, 0)
    rep.add("p_g", inv.p_g, 5)
    rep.add("12 chi = c1^2 + c2", 12 * inv.chi, inv.c1_sq + inv.c2)
    rep.add("chi = 1 - q + p_g", inv.chi, 1 - inv.q + inv.p_g)
    rep.data.update(inv.as_dict())
    return rep


# --- figures ----------------------------------------------------------------


def hull_svg(c: HullCycle, path: str | Path | None = None, size: int = 480, periods: int = 1) -> str:
    """SVG 1.1 drawing of the hull boundary near one period, axes and labels."""
    verts = c.extended(periods, periods)
    pts = [phi(v) for v in verts]
    mid = [phi(v) for v in c.extended(0, 1)]
    top = max(max(x, y) for x, y in mid) * 1.15
    pad = 40
    scale = (size - 2 * pad) / top

    def xy(x: float, y: float) -> tuple[float, float]:
        return pad + x * scale, size - pad - y * scale

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
    ]
    ox, oy = xy(0, 0)
    out.append(f'<line x1="{ox:.2f}" y1="{oy:.2f}" x2="{size - pad / 2:.2f}" y2="{oy:.2f}" stroke="black"/>')
    out.append(f'<line x1="{ox:.2f}" y1="{oy:.2f}" x2="{ox:.2f}" y2="{pad / 2:.2f}" stroke="black"/>')
    if c.lattice is not None:
        basis = reduced_basis(c.lattice)
        (x1, y1), (x2, y2) = phi(basis[0]), phi(basis[1])
        near = 3 * max(float(v.norm()) for v in c.vertices)  # only dots close to the boundary
        for n1, n2 in _band_points(basis, 0.0, top, top):
            x, y = n1 * x1 + n2 * x2, n1 * y1 + n2 * y2
            if 0 < x <= top and 0 < y <= top and x * y <= near:
                px, py = xy(x, y)
                out.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="1.5" fill="#999999"/>')
    shown = [(v, p) for v, p in zip(verts, pts) if p[0] <= top and p[1] <= top]
    line = " ".join("{:.2f},{:.2f}".format(*xy(*p)) for p in pts)
    out.append(f'<clipPath id="frame"><rect x="0" y="0" width="{size}" height="{size}"/></clipPath>')
    out.append(
        f'<polyline points="{line}" fill="none" stroke="#1f4e9a" stroke-width="1.5" clip-path="url(#frame)"/>'
    )
    for v, (x, y) in shown:
        px, py = xy(x, y)
        out.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="3" fill="red" stroke="black"/>')
        out.append(
            f'<text x="{px + 5:.2f}" y="{py - 5:.2f}" font-family="serif" font-size="10" fill="red">'
            f"{format_quad(v)}</text>"
        )
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text

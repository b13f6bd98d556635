"""Finite matrix groups over residue rings of O.

Group elements are stored as integer codes.  The code of a matrix over a
simple ring with ``s`` elements is the base-``s`` number formed by its entry
codes in row-major order, so integer order is lexicographic order on entries.
Over the CRT ring O/4p5 the scan order is: the four O/4O entries, then the
four O/p5 entries, i.e. ``code = code_mod4 * 625 + code_modp5``.
"""

from __future__ import annotations

import enum
import hashlib
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .matgrp import (
    Mat2,
    MONODROMY,
    VerificationError,
    Word,
    eval_word,
    sl2o_words,
    sl2oo_words,
    z0,
)
from .qfield import (
    MOD2,
    MOD4,
    MOD4P5,
    MODP5,
    DomainError,
    QuadElt,
    ResidueElt,
    ResidueRing,
    RingKind,
    f4_trace,
    reduce,
)

P5_MAT_CODES = 5**4


# --- matrices over a residue ring -----------------------------------------


@dataclass(frozen=True)
class FinMat:
    ring: ResidueRing
    entries: tuple[int, int, int, int]  # entry codes, row-major

    @classmethod
    def from_elts(cls, a: ResidueElt, b: ResidueElt, c: ResidueElt, d: ResidueElt) -> FinMat:
        ring = a.ring
        return cls(ring, (a.code, b.code, c.code, d.code))

    @classmethod
    def identity(cls, ring: ResidueRing) -> FinMat:
        one, zero = ring.one.code, ring.encode(ring.canonical((0, 0, 0)[: len(ring.decode(0))]))
        return cls(ring, (one, zero, zero, one))

    def elt(self, i: int) -> ResidueElt:
        return ResidueElt(self.ring, self.ring.decode(self.entries[i]))

    @property
    def elts(self) -> tuple[ResidueElt, ...]:
        return tuple(self.elt(i) for i in range(4))

    def __matmul__(self, o: FinMat) -> FinMat:
        if o.ring != self.ring:
            raise DomainError("ring mismatch")
        return FinMat(self.ring, _mul_entries(self.ring, self.entries, o.entries))

    def __neg__(self) -> FinMat:
        ng = self.ring.neg_table
        return FinMat(self.ring, tuple(ng[x] for x in self.entries))

    def det(self) -> ResidueElt:
        a, b, c, d = self.elts
        return a * d - b * c

    def trace(self) -> ResidueElt:
        return self.elt(0) + self.elt(3)

    def inverse(self) -> FinMat:
        ng = self.ring.neg_table
        a, b, c, d = self.entries
        return FinMat(self.ring, (d, ng[b], ng[c], a))

    def __pow__(self, n: int) -> FinMat:
        base = self if n >= 0 else self.inverse()
        out = FinMat.identity(self.ring)
        for _ in range(abs(n)):
            out = out @ base
        return out

    def is_identity(self) -> bool:
        return self == FinMat.identity(self.ring)

    @property
    def code(self) -> int:
        return matrix_code(self.ring, self.entries)

    def component(self, i: int) -> FinMat:
        """Project a CRT-pair matrix to its O/4O (0) or O/p5 (1) factor."""
        if not self.ring.is_product:
            raise DomainError("component() needs the O/4p5 ring")
        if i == 0:
            return FinMat(MOD4, tuple(x // 5 for x in self.entries))
        return FinMat(MODP5, tuple(x % 5 for x in self.entries))

    def map_to(self, ring: ResidueRing) -> FinMat:
        """Natural map to a quotient ring (O/4O -> O/2O, O/4p5 -> either factor)."""
        src = self.ring
        if ring == src:
            return self
        if src.is_product:
            if ring == MODP5:
                return self.component(1)
            return self.component(0).map_to(ring)
        if src.kind in (RingKind.MOD4, RingKind.MODN) and ring.kind in (RingKind.MOD2, RingKind.MODN):
            if src.n % ring.n == 0:
                return FinMat(
                    ring,
                    tuple(ring.encode(ring.canonical(src.decode(x))) for x in self.entries),
                )
        raise DomainError(f"no natural map {src} -> {ring}")

    def order(self, limit: int = 10_000) -> int:
        x = self
        for n in range(1, limit + 1):
            if x.is_identity():
                return n
            x = x @ self
        raise DomainError("order exceeds limit")

    def __str__(self) -> str:
        a, b, c, d = self.elts
        return f"[[{a}, {b}], [{c}, {d}]]"


def _mul_entries(ring: ResidueRing, x, y) -> tuple[int, int, int, int]:
    mt, at = ring.mul_table, ring.add_table
    a, b, c, d = x
    e, f, g, h = y
    return (
        at[mt[a][e]][mt[b][g]],
        at[mt[a][f]][mt[b][h]],
        at[mt[c][e]][mt[d][g]],
        at[mt[c][f]][mt[d][h]],
    )


def matrix_code(ring: ResidueRing, entries: Sequence[int]) -> int:
    if ring.is_product:
        c4 = c5 = 0
        for x in entries:
            c4 = c4 * 16 + x // 5
            c5 = c5 * 5 + x % 5
        return c4 * P5_MAT_CODES + c5
    s = ring.size
    c = 0
    for x in entries:
        c = c * s + x
    return c


def matrix_from_code(ring: ResidueRing, code: int) -> FinMat:
    if ring.is_product:
        c4, c5 = divmod(code, P5_MAT_CODES)
        e4 = matrix_from_code(MOD4, c4).entries
        e5 = matrix_from_code(MODP5, c5).entries
        return FinMat(ring, tuple(a * 5 + b for a, b in zip(e4, e5)))
    s = ring.size
    out = []
    for _ in range(4):
        code, r = divmod(code, s)
        out.append(r)
    return FinMat(ring, tuple(reversed(out)))


def reduce_mat(m: Mat2, ring: ResidueRing) -> FinMat:
    return FinMat.from_elts(*(reduce(x, ring) for x in m.entries))


def reduce_word(w: Word, ring: ResidueRing) -> FinMat:
    return reduce_mat(eval_word(w), ring)


def neg_code(ring: ResidueRing, code: int) -> int:
    return (-matrix_from_code(ring, code)).code


def canonical_code(ring: ResidueRing, code: int) -> int:
    """Canonical representative of {M, -M}: the smaller code."""
    return min(code, neg_code(ring, code))


# --- closure ---------------------------------------------------------------


def _simple_closure(ring: ResidueRing, gens: Sequence[FinMat]):
    """Breadth-first closure over a simple ring.

    Returns sorted codes and, per generator, the right-multiplication table on
    indices into the sorted codes.
    """
    ident = FinMat.identity(ring).entries
    gen_entries = [g.entries for g in gens]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gen_entries:
                y = _mul_entries(ring, x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    by_code = sorted((matrix_code(ring, x), x) for x in seen)
    codes = np.array([c for c, _ in by_code], dtype=np.int64)
    index = {x: i for i, (_, x) in enumerate(by_code)}
    tables = [
        np.array([index[_mul_entries(ring, x, g)] for _, x in by_code], dtype=np.int64)
        for g in gen_entries
    ]
    neg = ring.neg_table
    neg_codes = np.array([matrix_code(ring, [neg[v] for v in x]) for _, x in by_code], dtype=np.int64)
    return codes, tables, neg_codes


def _product_closure(gens: Sequence[FinMat]):
    parts = []
    for i, ring in enumerate((MOD4, MODP5)):
        parts.append(_simple_closure(ring, [g.component(i) for g in gens]))
    (c4, t4, n4), (c5, t5, n5) = parts
    size5 = len(c5)
    visited = np.zeros(len(c4) * size5, dtype=bool)
    # identity has the smallest code in neither factor in general; locate it
    id4 = int(np.searchsorted(c4, FinMat.identity(MOD4).code))
    id5 = int(np.searchsorted(c5, FinMat.identity(MODP5).code))
    start = id4 * size5 + id5
    visited[start] = True
    frontier = np.array([start], dtype=np.int64)
    while frontier.size:
        i, j = np.divmod(frontier, size5)
        found = [tg4[i] * size5 + tg5[j] for tg4, tg5 in zip(t4, t5)]
        cand = np.unique(np.concatenate(found))
        cand = cand[~visited[cand]]
        visited[cand] = True
        frontier = cand
    idx = np.flatnonzero(visited)
    i, j = np.divmod(idx, size5)
    codes = c4[i] * P5_MAT_CODES + c5[j]
    neg_codes = n4[i] * P5_MAT_CODES + n5[j]
    return codes, neg_codes


@dataclass
class FinGroup:
    ring: ResidueRing
    generators: tuple[FinMat, ...]
    psl_mode: bool
    codes: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        return int(self.codes.size)

    def __len__(self) -> int:
        return self.order

    def contains_code(self, code: int) -> bool:
        i = int(np.searchsorted(self.codes, code))
        return i < self.codes.size and int(self.codes[i]) == code

    def key(self, m: FinMat) -> int:
        if m.ring != self.ring:
            raise DomainError(f"ring mismatch: {m.ring} vs {self.ring}")
        return canonical_code(self.ring, m.code) if self.psl_mode else m.code

    def __contains__(self, m: FinMat) -> bool:
        return self.contains_code(self.key(m))

    def contains_codes(self, codes: np.ndarray) -> np.ndarray:
        i = np.searchsorted(self.codes, codes)
        i = np.minimum(i, self.codes.size - 1)
        return self.codes[i] == codes

    def elements(self) -> Iterable[FinMat]:
        for c in self.codes:
            yield matrix_from_code(self.ring, int(c))

    def is_subgroup_of(self, other: FinGroup) -> bool:
        return (
            self.ring == other.ring
            and self.psl_mode == other.psl_mode
            and bool(np.all(other.contains_codes(self.codes)))
        )

    @property
    def fingerprint(self) -> str:
        return generator_fingerprint(self.ring, self.generators, self.psl_mode)


def generator_fingerprint(ring: ResidueRing, gens: Sequence[FinMat], psl_mode: bool) -> str:
    h = hashlib.sha256()
    h.update(ring.tag.encode())
    h.update(b"psl" if psl_mode else b"sl")
    for g in gens:
        h.update(struct.pack("<q", g.code))
    return h.hexdigest()


def closure(
    ring: ResidueRing,
    gens: Sequence[FinMat],
    psl_mode: bool = False,
    cache_dir: str | Path | None = None,
) -> FinGroup:
    """The group generated by ``gens``, enumerated breadth-first.

    In ``psl_mode`` the elements are +-classes, each stored as its canonical
    (smaller) code.  Element order is ascending code order, independent of the
    order of ``gens``.
    """
    gens = tuple(gens)
    if not gens:
        raise DomainError("closure needs at least one generator")
    for g in gens:
        if g.ring != ring:
            raise DomainError(f"generator over {g.ring}, expected {ring}")
    if cache_dir is not None:
        cached = load_group(cache_dir, ring, gens, psl_mode)
        if cached is not None:
            return cached
    if ring.is_product:
        codes, negs = _product_closure(gens)
    else:
        codes, _, negs = _simple_closure(ring, gens)
    if psl_mode:
        codes = np.unique(np.minimum(codes, negs))
    group = FinGroup(ring, gens, psl_mode, codes)
    if cache_dir is not None:
        save_group(cache_dir, group)
    return group


def subgroup_from_codes(parent: FinGroup, mask: np.ndarray, gens: Sequence[FinMat] = ()) -> FinGroup:
    return FinGroup(parent.ring, tuple(gens), parent.psl_mode, parent.codes[mask])


def index(g: FinGroup, h: FinGroup) -> int:
    if not h.is_subgroup_of(g):
        raise DomainError("index(): second argument is not a subgroup of the first")
    q, r = divmod(g.order, h.order)
    if r:
        raise DomainError("group order not divisible by subgroup order")
    return q


def is_closed(group: FinGroup, sample: int | None = None, seed: int = 0) -> bool:
    """Check closure under products (exhaustive, or on ``sample`` random pairs)."""
    els = list(group.elements()) if sample is None or group.order <= 200 else None
    if els is not None:
        pairs = ((a, b) for a in els for b in els)
    else:
        rng = np.random.default_rng(seed)
        picks = rng.integers(0, group.order, size=(sample, 2))
        pairs = (
            (
                matrix_from_code(group.ring, int(group.codes[i])),
                matrix_from_code(group.ring, int(group.codes[j])),
            )
            for i, j in picks
        )
    return all((a @ b) in group for a, b in pairs)


# --- binary cache ---------------------------------------------------------

_MAGIC = b"WEFGRP01"
_HEADER = struct.Struct("<8s16sBBQ")


def _cache_path(cache_dir: str | Path, fingerprint: str) -> Path:
    return Path(cache_dir) / f"{fingerprint[:32]}.fgrp"


def save_group(cache_dir: str | Path, group: FinGroup) -> Path:
    """Write the element codes: header (magic, ring tag, psl flag, width, count), then int64 LE."""
    path = _cache_path(cache_dir, group.fingerprint)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = _HEADER.pack(_MAGIC, group.ring.tag.encode().ljust(16, b"\0"), int(group.psl_mode), 8, group.order)
    tmp = path.with_suffix(".tmp")
    with open(tmp, "wb") as fh:
        fh.write(header)
        fh.write(group.codes.astype("<i8").tobytes())
    tmp.replace(path)
    return path


def load_group(
    cache_dir: str | Path, ring: ResidueRing, gens: Sequence[FinMat], psl_mode: bool
) -> FinGroup | None:
    path = _cache_path(cache_dir, generator_fingerprint(ring, gens, psl_mode))
    if not path.exists():
        return None
    data = path.read_bytes()
    magic, tag, psl, width, count = _HEADER.unpack_from(data)
    if magic != _MAGIC or tag.rstrip(b"\0").decode() != ring.tag or bool(psl) != psl_mode or width != 8:
        return None
    codes = np.frombuffer(data, dtype="<i8", count=count, offset=_HEADER.size).astype(np.int64)
    return FinGroup(ring, tuple(gens), psl_mode, codes)


# --- congruence conditions ------------------------------------------------


class CongCondition(enum.Enum):
    UNIPOTENT_MOD_P5 = "unipotent_mod_p5"
    MOD4_C4 = "mod4_c4"
    MOD2_IN_F2 = "mod2_in_f2"


def _as_ring(m: FinMat, ring: ResidueRing) -> FinMat:
    if m.ring == ring:
        return m
    if m.ring.is_product:
        return m.map_to(ring)
    raise DomainError(f"condition needs a matrix over {ring}, got {m.ring}")


def in_c4(x1: ResidueElt, x2: ResidueElt, x3: ResidueElt) -> bool:
    """Trace-form condition Tr_{F4/F2}(x1 + x2 + x3) = 0."""
    return f4_trace(x1 + x2 + x3) == 0


def kernel_matrix(m: FinMat) -> tuple[ResidueElt, ResidueElt, ResidueElt, ResidueElt] | None:
    """For m = I + 2M over O/4O, the entries of M in F4; None if m is not 1 mod 2."""
    if m.ring != MOD4:
        raise DomainError("kernel_matrix expects a matrix over O/4O")
    out = []
    for i, v in enumerate(m.elts):
        a, b = v.coords
        if i in (0, 3):
            a -= 1
        if a % 2 or b % 2:
            return None
        out.append(MOD2.elt(((a % 4) // 2, (b % 4) // 2)))
    return tuple(out)


_SL2_Z4_LIFTS: dict[FinMat, FinMat] | None = None


def integer_lift(s: FinMat) -> FinMat:
    """A lift of s in SL2(F2) to SL2(Z/4) inside SL2(O/4O)."""
    global _SL2_Z4_LIFTS
    if _SL2_Z4_LIFTS is None:
        from .matgrp import s as sw, t as tw

        grp = closure(MOD4, [reduce_word(sw, MOD4), reduce_word(tw, MOD4)])
        lifts: dict[FinMat, FinMat] = {}
        for g in grp.elements():
            lifts.setdefault(g.map_to(MOD2), g)
        _SL2_Z4_LIFTS = lifts
    try:
        return _SL2_Z4_LIFTS[s]
    except KeyError:
        raise DomainError(f"{s} is not in SL2(F2)") from None


def sl2f2_parity(s: FinMat) -> int:
    """Sign character SL2(F2) = S3 -> Z/2: 1 on the three involutions."""
    return int(not s.is_identity() and (s @ s).is_identity())


def c4_coset(m: FinMat) -> int:
    """Trace form of M, where m = lift(m mod 2) (I + 2M); 0 iff M lies in C4.

    The lift is taken in SL2(Z/4); two lifts differ by I + 2N with N over F2,
    which lies in C4, so the value does not depend on the choice.
    """
    k = kernel_matrix(integer_lift(m.map_to(MOD2)).inverse() @ m)
    assert k is not None and k[0] == k[3]
    return f4_trace(k[0] + k[1] + k[2])


def check_condition(m: FinMat, c: CongCondition) -> bool:
    """Elementwise congruence predicates.

    MOD4_C4 on m = I + 2M (m trivial mod 2) is the trace-form test on M.  Off
    the kernel it asks that m mod 2 lie in SL2(F2) and that the C4-coset of
    m match the sign of m mod 2; this is the set the monodromy image fills.
    """
    if c is CongCondition.UNIPOTENT_MOD_P5:
        mm = _as_ring(m, MODP5)
        # det is 1, so the characteristic polynomial is (t-1)^2 iff trace = 2
        return mm.trace() == MODP5.elt((2,)) and mm.det() == MODP5.one
    if c is CongCondition.MOD2_IN_F2:
        mm = m if m.ring == MOD2 else m.map_to(MOD2)
        return all(e.coords[1] == 0 for e in mm.elts)
    if c is CongCondition.MOD4_C4:
        mm = _as_ring(m, MOD4)
        s = mm.map_to(MOD2)
        if not check_condition(s, CongCondition.MOD2_IN_F2):
            return False
        return c4_coset(mm) == sl2f2_parity(s)
    raise DomainError(f"unknown condition {c}")


# --- the concrete groups --------------------------------------------------


def full_group(ring: ResidueRing, psl_mode: bool = False, cache_dir=None) -> FinGroup:
    """Image of SL2(O) = <z0, sigma, mu, tau, eta>."""
    return closure(ring, [reduce_word(w, ring) for w in sl2o_words()], psl_mode, cache_dir)


def monodromy_image(ring: ResidueRing, psl_mode: bool = False, cache_dir=None) -> FinGroup:
    return closure(ring, [reduce_mat(mat, ring) for _, _, mat in MONODROMY], psl_mode, cache_dir)


def monodromy_image_matrices(ring: ResidueRing) -> list[FinMat]:
    return [reduce_mat(mat, ring) for _, _, mat in MONODROMY]


@dataclass
class Check:
    """One named assertion with its observed and expected values."""

    name: str
    ok: bool
    observed: object
    expected: object

    def as_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "observed": self.observed, "expected": self.expected}


@dataclass
class SuiteReport:
    title: str
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, name: str, observed, expected, ok: bool | None = None) -> bool:
        if ok is None:
            ok = observed == expected
        self.checks.append(Check(name, bool(ok), observed, expected))
        return bool(ok)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def raise_on_failure(self) -> SuiteReport:
        bad = self.failures()
        if bad:
            raise VerificationError(f"{self.title}: " + "; ".join(f"{c.name}: {c.observed} != {c.expected}" for c in bad))
        return self


def sl2_order(q: int) -> int:
    return q * (q * q - 1)


def verify_mod4_sequence(cache_dir=None) -> SuiteReport:
    rep = SuiteReport("mod-4 exact sequence")
    g2 = full_group(MOD2, cache_dir=cache_dir)
    g4 = full_group(MOD4, cache_dir=cache_dir)
    rep.add("order SL2(O/2O)", g2.order, sl2_order(4))
    rep.add("order SL2(O/4O)", g4.order, 3840)

    kernel = [m for m in g4.elements() if m.map_to(MOD2).is_identity()]
    rep.add("kernel order", len(kernel), 64)
    rep.add("quotient order", g4.order // len(kernel), 60)

    to_sl2: dict[tuple, FinMat] = {}
    traceless = True
    for m in kernel:
        x = kernel_matrix(m)
        traceless &= x is not None and x[0] + x[3] == MOD2.zero
        to_sl2[tuple(v.code for v in x[:3])] = m
    rep.add("kernel elements are I + 2M with trace M = 0", traceless, True)
    rep.add("I + 2M -> M is a bijection onto sl2(F4)", len(to_sl2), 64)

    hom = True
    for a in kernel:
        xa = kernel_matrix(a)
        for b in kernel:
            xb = kernel_matrix(b)
            xab = kernel_matrix(a @ b)
            hom &= all(xab[i] == xa[i] + xb[i] for i in range(4))
    rep.add("I + 2M -> M is additive", hom, True)
    rep.add("kernel has exponent 2", all((m @ m).is_identity() for m in kernel), True)

    oo = closure(MOD4, [reduce_word(w, MOD4) for w in sl2oo_words()])
    pullback = [m for m in g4.elements() if check_condition(m.map_to(MOD2), CongCondition.MOD2_IN_F2)]
    rep.add("pullback of SL2(F2) order", len(pullback), 6 * 64)
    rep.add(
        "image of SL2(O_o) generators is the full pullback",
        oo.order == len(pullback) and all(m in oo for m in pullback),
        True,
    )
    rep.data.update(kernel_order=len(kernel), oo_image_order=oo.order)
    return rep


def c4_elements() -> list[tuple[ResidueElt, ResidueElt, ResidueElt]]:
    f4 = MOD2.elements()
    return [(a, b, c) for a in f4 for b in f4 for c in f4 if in_c4(a, b, c)]


def verify_congruence_image(cache_dir=None) -> SuiteReport:
    rep = SuiteReport("monodromy image mod 4p5")
    G = full_group(MOD4P5, cache_dir=cache_dir)
    H = monodromy_image(MOD4P5, cache_dir=cache_dir)
    rep.add("|G| = |SL2(O/4p5)|", G.order, 3840 * 120)
    rep.add("H is a subgroup of G", H.is_subgroup_of(G), True)
    rep.add("index [G : H]", index(G, H), 480)

    h5 = closure(MODP5, [g.component(1) for g in H.generators])
    rep.add("order of mod-p5 image", h5.order, 5)
    rep.add(
        "mod-p5 image is unipotent",
        all(check_condition(m, CongCondition.UNIPOTENT_MOD_P5) for m in h5.elements()),
        True,
    )

    h2 = closure(MOD2, [g.map_to(MOD2) for g in H.generators])
    rep.add("order of mod-2 image", h2.order, 6)
    rep.add(
        "mod-2 image lies in SL2(F2)",
        all(check_condition(m, CongCondition.MOD2_IN_F2) for m in h2.elements()),
        True,
    )

    h4 = closure(MOD4, [g.component(0) for g in H.generators])
    kern = [m for m in h4.elements() if m.map_to(MOD2).is_identity()]
    kern_keys = {tuple(v.code for v in kernel_matrix(m)[:3]) for m in kern}
    c4_keys = {tuple(v.code for v in x) for x in c4_elements()}
    rep.add("|C4|", len(c4_keys), 32)
    rep.add("|H mod 4 ∩ kernel|", len(kern), 32)
    rep.add("H mod 4 ∩ kernel = C4", kern_keys == c4_keys, True)
    mu3 = reduce_word(Word.gen(next(iter(sl2o_words()[2].symbols())), 3), MOD4)
    rep.add("mu^3 mod 4 lies in the kernel", mu3.map_to(MOD2).is_identity(), True)
    rep.add("mu^3 mod 4 is not in C4", check_condition(mu3, CongCondition.MOD4_C4), False)

    # K: the filter-defined subgroup, one pass over G.  Unipotent elements of
    # SL2(F5) do not form a group; the unipotent subgroup is pinned by its line.
    line = p5_fixed_line(h5)
    rep.add("mod-p5 image fixes a unique line", line is not None, True)
    unip = _p5_unipotent_mask(G.codes, line)
    c4ok = _mod4_condition_mask(G.codes)
    K = subgroup_from_codes(G, unip & c4ok)
    rep.add("|K|", K.order, H.order)
    rep.add("K = H element-for-element", bool(np.array_equal(K.codes, H.codes)), True)
    loose = int(np.count_nonzero(_p5_unipotent_mask(G.codes) & c4ok))
    rep.data.update(
        G=G.order, H=H.order, h5=h5.order, h2=h2.order, h4=h4.order, K=K.order,
        p5_line=line, unipotent_elementwise_filter=loose,
    )
    return rep


def _f5(m: FinMat) -> tuple[int, int, int, int]:
    return tuple(e.coords[0] for e in m.elts)


def fixes_line(m: FinMat, line: tuple[int, int]) -> bool:
    """m fixes the vector ``line`` (a column vector over F5)."""
    a, b, c, d = _f5(m)
    x, y = line
    return (a * x + b * y - x) % 5 == 0 and (c * x + d * y - y) % 5 == 0


def p5_fixed_line(group: FinGroup) -> tuple[int, int] | None:
    """The unique projective line in F5^2 fixed pointwise by every element, if any."""
    lines = [(1, y) for y in range(5)] + [(0, 1)]
    fixed = [ln for ln in lines if all(fixes_line(m, ln) for m in group.elements())]
    return fixed[0] if len(fixed) == 1 else None


def _p5_unipotent_mask(codes: np.ndarray, line: tuple[int, int] | None = None) -> np.ndarray:
    table = np.zeros(P5_MAT_CODES, dtype=bool)
    for c in range(P5_MAT_CODES):
        m = matrix_from_code(MODP5, c)
        if m.det() != MODP5.one:
            continue
        ok = check_condition(m, CongCondition.UNIPOTENT_MOD_P5)
        table[c] = ok and (line is None or fixes_line(m, line))
    return table[codes % P5_MAT_CODES]


def _mod4_condition_mask(codes: np.ndarray) -> np.ndarray:
    c4 = codes // P5_MAT_CODES
    uniq, inv = np.unique(c4, return_inverse=True)
    vals = np.array(
        [check_condition(matrix_from_code(MOD4, int(c)), CongCondition.MOD4_C4) for c in uniq],
        dtype=bool,
    )
    return vals[inv]


# --- torsion --------------------------------------------------------------


def _poly_mod_p5(coeffs: Sequence[QuadElt]) -> tuple[int, ...]:
    return tuple(reduce(c, MODP5).coords[0] for c in coeffs)


def char_polys() -> dict[int, list[list[QuadElt]]]:
    """Characteristic polynomials t^2 + c1 t + c0 of finite-order elements, as [1, c1, c0].

    Orders 5 and 10 also carry the Galois-conjugate polynomial.
    """
    from .qfield import X, QuadElt as Q

    one = Q(1)
    return {
        2: [[one, Q(2), one]],
        3: [[one, one, one]],
        5: [[one, X, one], [one, (one - X), one]],
        6: [[one, Q(-1), one]],
        10: [[one, -X, one], [one, -(one - X), one]],
    }


def torsion_obstruction(cache_dir=None) -> SuiteReport:
    rep = SuiteReport("torsion obstruction")
    unipotent = (1, 3, 1)  # (t - 1)^2 = t^2 - 2t + 1 over F5
    table = {}
    for n, polys in char_polys().items():
        reds = [_poly_mod_p5(p) for p in polys]
        table[n] = [list(r) for r in reds]
        hit = any(r == unipotent for r in reds)
        rep.add(f"p_{n} mod p5 is (t-1)^2", hit, n == 5)
    # p_5 = t^2 + X t + 1 over F4
    f4 = MOD2.elements()
    xbar = MOD2.elt((0, 1))
    roots = [r for r in f4 if (r * r + xbar * r + MOD2.one).is_zero()]
    rep.add("p_5 has no root in F4 (irreducible)", len(roots), 0)
    h2 = closure(MOD2, monodromy_image_matrices(MOD2))
    orders = sorted(m.order() for m in h2.elements())
    rep.add("mod-2 image has no element of order 5", 5 in orders, False)
    H = monodromy_image(MOD4P5, cache_dir=cache_dir)
    z0_img = reduce_word(z0, MOD4P5)
    rep.add("z0 mod 4p5 is not in the image of Gamma", z0_img in H, False)
    rep.data.update(reductions=table, mod2_orders=orders)
    return rep

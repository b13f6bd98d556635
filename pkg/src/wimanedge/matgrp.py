"""2x2 matrices over O, the generators z0, sigma, mu, tau, eta, and words in them."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .qfield import ONE, ZERO, QuadElt, X


class VerificationError(AssertionError):
    """A checked identity does not hold."""


@dataclass(frozen=True)
class Mat2:
    a: QuadElt
    b: QuadElt
    c: QuadElt
    d: QuadElt

    @classmethod
    def of(cls, a, b, c, d) -> Mat2:
        q = QuadElt.coerce
        return cls(q(a), q(b), q(c), q(d))

    @property
    def entries(self) -> tuple[QuadElt, QuadElt, QuadElt, QuadElt]:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, o: Mat2) -> Mat2:
        return Mat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __neg__(self) -> Mat2:
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def det(self) -> QuadElt:
        return self.a * self.d - self.b * self.c

    def trace(self) -> QuadElt:
        return self.a + self.d

    def adjugate(self) -> Mat2:
        return Mat2(self.d, -self.b, -self.c, self.a)

    def inverse(self) -> Mat2:
        """Exact inverse of a determinant-one matrix (the adjugate)."""
        if self.det() != ONE:
            raise VerificationError(f"inverse() expects det 1, got {self.det()}")
        return self.adjugate()

    def __pow__(self, n: int) -> Mat2:
        base = self if n >= 0 else self.inverse()
        out = IDENTITY
        for _ in range(abs(n)):
            out = out @ base
        return out

    def is_identity(self) -> bool:
        return self == IDENTITY

    def is_pm_identity(self) -> bool:
        return self == IDENTITY or self == -IDENTITY

    def is_integral(self) -> bool:
        return all(e.is_integral() for e in self.entries)

    def rows(self) -> list[list[str]]:
        return [[str(self.a), str(self.b)], [str(self.c), str(self.d)]]

    def __str__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


IDENTITY = Mat2(ONE, ZERO, ZERO, ONE)


class Gen(enum.Enum):
    Z0 = "z0"
    SIGMA = "s"
    MU = "m"
    TAU = "t"
    ETA = "e"


GENERATOR_MATRICES: dict[Gen, Mat2] = {
    Gen.Z0: Mat2.of(-1, 0, 0, -1),
    Gen.SIGMA: Mat2.of(0, 1, -1, 0),
    Gen.MU: Mat2.of(X, 0, 0, X - 1),
    Gen.TAU: Mat2.of(1, 1, 0, 1),
    Gen.ETA: Mat2.of(1, X, 0, 1),
}


class Word:
    """A word in the generators, kept in exponent-run normal form."""

    __slots__ = ("runs",)

    def __init__(self, runs: Iterable[tuple[Gen, int]] = ()) -> None:
        out: list[tuple[Gen, int]] = []
        for g, e in runs:
            if e == 0:
                continue
            if out and out[-1][0] is g:
                e += out[-1][1]
                out.pop()
                if e == 0:
                    continue
            out.append((g, e))
        self.runs: tuple[tuple[Gen, int], ...] = tuple(out)

    @classmethod
    def gen(cls, g: Gen, e: int = 1) -> Word:
        return cls([(g, e)])

    def __mul__(self, other: Word) -> Word:
        return Word(self.runs + other.runs)

    def inverse(self) -> Word:
        return Word((g, -e) for g, e in reversed(self.runs))

    def __pow__(self, n: int) -> Word:
        base = self if n >= 0 else self.inverse()
        return Word(base.runs * abs(n))

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.runs == other.runs

    def __hash__(self) -> int:
        return hash(self.runs)

    def __len__(self) -> int:
        return len(self.runs)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"

    def __str__(self) -> str:
        return format_word(self)

    def symbols(self) -> set[Gen]:
        return {g for g, _ in self.runs}


def format_word(w: Word) -> str:
    if not w.runs:
        return "1"
    return " ".join(g.value if e == 1 else f"{g.value}^{e}" for g, e in w.runs)


_TOKEN = re.compile(r"(z0|s|m|t|e)(?:\^(-?\d+))?$")


def parse_word(text: str) -> Word:
    """Parse e.g. ``"t^-1 e^2"``; ``"1"`` or ``""`` is the empty word."""
    text = text.strip()
    if text in ("", "1"):
        return Word()
    runs = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad word token {tok!r}")
        runs.append((Gen(m.group(1)), int(m.group(2)) if m.group(2) else 1))
    return Word(runs)


def eval_word(w: Word) -> Mat2:
    out = IDENTITY
    for g, e in w.runs:
        out = out @ (GENERATOR_MATRICES[g] ** e)
    return out


def entries_in_Oo(m: Mat2) -> bool:
    if not m.is_integral():
        raise VerificationError("entries_in_Oo expects integral entries")
    return all(e.in_Oo() for e in m.entries)


# --- relation words -------------------------------------------------------

z0, s, m, t, e = (Word.gen(g) for g in (Gen.Z0, Gen.SIGMA, Gen.MU, Gen.TAU, Gen.ETA))


def commutator(x: Word, y: Word) -> Word:
    return x * y * x.inverse() * y.inverse()


class PresentationId(enum.Enum):
    PSL = "psl"
    SL = "sl"
    DELTA = "delta"


def _yoshida() -> list[tuple[str, Word]]:
    return [
        ("R1", s**2),
        ("R2", (s * t) ** 3),
        ("R3", (s * m) ** 2),
        ("R4", commutator(t, e)),
        ("R5", m * t * m.inverse() * (t * e).inverse()),
        ("R6", m * e * m.inverse() * (t * e**2).inverse()),
        ("R7", s * e * s * (t * e.inverse() * s * e.inverse() * m).inverse()),
    ]


def relations(pid: PresentationId) -> list[tuple[str, Word]]:
    if pid is PresentationId.PSL:
        return _yoshida()
    if pid is PresentationId.SL:
        return [
            ("C0", z0**2),
            ("C1", commutator(z0, s)),
            ("C2", commutator(z0, m)),
            ("C3", commutator(z0, t)),
            ("C4", commutator(z0, e)),
            ("R1", s**2 * z0),
            ("R2", (s * t) ** 3),
            ("R3", (s * m) ** 2 * z0),
            ("R4", commutator(t, e)),
            ("R5", m * t * m.inverse() * (t * e).inverse()),
            ("R6", m * e * m.inverse() * (t * e**2).inverse()),
            ("R7", s * e * s * (t * e.inverse() * s * e.inverse() * m).inverse() * z0),
        ]
    return [
        ("S0", commutator(t, e)),
        ("S1", m * t * m.inverse() * (t * e).inverse()),
        ("S2", m * e * m.inverse() * (t * e**2).inverse()),
    ]


@dataclass(frozen=True)
class RelationCheck:
    name: str
    word: Word
    value: Mat2
    ok: bool


def check_presentation(pid: PresentationId, strict: bool = True) -> list[RelationCheck]:
    """Evaluate every relation of a presentation.

    SL relations must give the identity; PSL and Delta relations give +-identity.
    With ``strict`` a failing relation raises :class:`VerificationError`.
    """
    out = []
    for name, w in relations(pid):
        v = eval_word(w)
        ok = v.is_identity() if pid is PresentationId.SL else v.is_pm_identity()
        if strict and not ok:
            raise VerificationError(f"relation {name} = {w} evaluates to {v}")
        out.append(RelationCheck(name, w, v, ok))
    return out


# --- monodromy generators -------------------------------------------------

X3 = X**3
Xm3 = X**-3

MONODROMY: list[tuple[str, Word, Mat2]] = [
    ("gamma_alpha", t.inverse() * e**2, Mat2.of(1, -1 + 2 * X, 0, 1)),
    ("gamma_alpha'", s * t.inverse() * e**2 * s.inverse(), Mat2.of(1, 0, 1 - 2 * X, 1)),
    (
        "gamma_beta",
        t**2 * e**-2 * s * m**3 * e**-2 * t**4,
        Mat2(ONE + X3, X3, -X3, ONE - X3),
    ),
    (
        "gamma_beta'",
        e**-2 * t**-2 * s * m**-3 * e**-2,
        Mat2(ONE + Xm3, Xm3, -Xm3, ONE - Xm3),
    ),
]


def monodromy_generators(strict: bool = True) -> list[tuple[str, Word, Mat2]]:
    """The four generators of the monodromy group, word and matrix form.

    Each word is evaluated and compared entry-by-entry with the stated matrix.
    """
    for name, w, mat in MONODROMY:
        v = eval_word(w)
        if strict and v != mat:
            raise VerificationError(f"{name}: word {w} evaluates to {v}, expected {mat}")
    return list(MONODROMY)


def monodromy_words() -> list[Word]:
    return [w for _, w, _ in MONODROMY]


def peripheral_product() -> Word:
    """gamma_alpha gamma_beta gamma_alpha' gamma_beta'."""
    ga, gap_, gb, gbp = monodromy_words()
    return ga * gb * gap_ * gbp


def sl2o_words() -> list[Word]:
    return [z0, s, m, t, e]


def sl2oo_words() -> list[Word]:
    """Elements of SL2(O_o) whose reductions generate its image mod 4.

    Not claimed to generate SL2(O_o) itself; the mod-4 image they generate is
    compared against the pullback of SL2(F2) by finquot.
    """
    return [z0, s, t, e**2, m**3, s * e**2 * s.inverse()]


def word_matrices(words: Sequence[Word]) -> list[Mat2]:
    return [eval_word(w) for w in words]

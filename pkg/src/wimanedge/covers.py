"""The degree-6 cover of the pencil base determined by reduction mod 2."""

from __future__ import annotations

from dataclasses import dataclass, field

from .finquot import (
    CongCondition,
    FinMat,
    SuiteReport,
    check_condition,
    closure,
    reduce_word,
)
from .matgrp import VerificationError, Word, monodromy_words, peripheral_product
from .qfield import MOD2, DomainError

TARGET_ORDER = 6  # |SL2(F2)|


def image_mod2(w: Word) -> FinMat:
    return reduce_word(w, MOD2)


def lift_count(w: Word, degree: int = TARGET_ORDER) -> int:
    """Number of lifts of the puncture with peripheral class w: degree / order of its image."""
    img = image_mod2(w)
    if not check_condition(img, CongCondition.MOD2_IN_F2):
        raise DomainError(f"image of {w} mod 2 is not in SL2(F2)")
    n = img.order()
    if degree % n:
        raise DomainError(f"order {n} does not divide {degree}")
    return degree // n


@dataclass
class CoverSpec:
    base_genus: int = 0
    peripheral_words: list[Word] = field(default_factory=list)
    degree: int = TARGET_ORDER
    generators: list[Word] | None = None  # defaults to the first four peripherals

    @classmethod
    def wiman_edge(cls) -> CoverSpec:
        ga, gap, gb, gbp = monodromy_words()
        return cls(0, [ga, gap, gb, gbp, peripheral_product()])


@dataclass(frozen=True)
class CoverTopology:
    genus: int
    punctures: int
    euler: int
    lifts: tuple[int, ...]


def cover_topology(spec: CoverSpec, lifts: list[int] | None = None) -> CoverTopology:
    """Genus, punctures and Euler characteristic of the connected cover.

    ``lifts`` overrides the per-puncture lift counts (used for bookkeeping checks
    that do not come from actual words).
    """
    k = len(spec.peripheral_words) if lifts is None else len(lifts)
    if lifts is None:
        gens = spec.generators if spec.generators is not None else spec.peripheral_words[:4]
        if spec.degree == TARGET_ORDER:
            img = closure(MOD2, [image_mod2(w) for w in gens])
            if img.order != TARGET_ORDER:
                raise VerificationError(f"cover is disconnected: image has order {img.order}")
        lifts = [lift_count(w, spec.degree) for w in spec.peripheral_words]
    base_euler = 2 - 2 * spec.base_genus - k
    euler = spec.degree * base_euler
    punctures = sum(lifts)
    two_g = 2 - euler - punctures
    if two_g % 2 or two_g < 0:
        raise VerificationError(f"inconsistent cover data: 2g = {two_g}")
    return CoverTopology(two_g // 2, punctures, euler, tuple(lifts))


def verify_cover() -> SuiteReport:
    rep = SuiteReport("degree-6 cover")
    spec = CoverSpec.wiman_edge()
    names = ["gamma_alpha", "gamma_alpha'", "gamma_beta", "gamma_beta'", "product"]
    orders = [image_mod2(w).order() for w in spec.peripheral_words]
    rep.add("product of the four generators is 1 mod 2", image_mod2(peripheral_product()).is_identity(), True)
    top = cover_topology(spec)
    rep.add("lift counts", list(top.lifts), [3, 3, 3, 3, 6])
    rep.add("punctures", top.punctures, 18)
    rep.add("euler characteristic", top.euler, -18)
    rep.add("genus", top.genus, 1)
    rep.data.update(
        orders=dict(zip(names, orders)),
        lifts=dict(zip(names, top.lifts)),
        punctures=top.punctures,
        euler=top.euler,
        genus=top.genus,
    )
    return rep

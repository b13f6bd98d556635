from __future__ import annotations

import pytest

from wimanedge.matgrp import (
    MONODROMY,
    Mat2,
    PresentationId,
    VerificationError,
    check_presentation,
    entries_in_Oo,
    eval_word,
    format_word,
    parse_word,
    peripheral_product,
)
from wimanedge.qfield import QuadElt, X


@pytest.mark.parametrize("text", ["1", "t^-1 e^2", "s t m^2", "z0 s m t e", "e^-2 t^-2 s m^-3 e^-2"])
def test_word_round_trip(text):
    assert format_word(parse_word(text)) == text


@pytest.mark.parametrize("bad", ["q", "t^", "s^x", "tt"])
def test_word_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_word(bad)


def test_word_inverse_evaluates_to_inverse():
    w = parse_word("t^2 e^-2 s m^3 e^-2 t^4")
    assert (eval_word(w) @ eval_word(w.inverse())).is_identity()


@pytest.mark.parametrize(
    "pid,count,exact", [(PresentationId.SL, 12, True), (PresentationId.PSL, 7, False), (PresentationId.DELTA, 3, False)]
)
def test_presentations(pid, count, exact):
    checks = check_presentation(pid)
    assert len(checks) == count
    for rc in checks:
        assert rc.ok
        if exact:
            assert rc.value.is_identity()


def test_strict_presentation_raises_on_bad_relation(monkeypatch):
    import wimanedge.matgrp as mg

    monkeypatch.setattr(mg, "relations", lambda pid: [("bad", parse_word("t"))])
    with pytest.raises(VerificationError):
        mg.check_presentation(PresentationId.SL)


def test_generator_words_reproduce_matrices():
    for name, w, mat in MONODROMY:
        v = eval_word(w)
        assert v == mat, name
        assert v.det() == QuadElt(1)
        assert entries_in_Oo(v)


def test_peripheral_product_mod_sign():
    # the product of the four peripheral generators is not trivial in SL2(O)
    p = eval_word(peripheral_product())
    assert p.det() == QuadElt(1)


def test_entries_in_Oo_examples():
    assert entries_in_Oo(Mat2.of(1, 2, 0, 1))
    assert not entries_in_Oo(Mat2.of(1, X, 0, 1))
    with pytest.raises(VerificationError):
        entries_in_Oo(Mat2.of(1, QuadElt(1, 0) / 2, 0, 1))

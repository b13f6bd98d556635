from __future__ import annotations

import pytest

from wimanedge.covers import CoverSpec, cover_topology, image_mod2, lift_count, verify_cover
from wimanedge.matgrp import VerificationError, peripheral_product


def test_wiman_edge_cover():
    top = cover_topology(CoverSpec.wiman_edge())
    assert top.lifts == (3, 3, 3, 3, 6)
    assert (top.punctures, top.euler, top.genus) == (18, -18, 1)
    # Riemann-Hurwitz by hand: 6 * (2 - 0 - 5) = 2 - 2g - 18
    assert 6 * (2 - 5) == 2 - 2 * top.genus - top.punctures


def test_orders_mod2():
    spec = CoverSpec.wiman_edge()
    assert [image_mod2(w).order() for w in spec.peripheral_words] == [2, 2, 2, 2, 1]
    assert lift_count(peripheral_product()) == 6


def test_negative_control_raises():
    # five punctures with one lift each cannot close up: 2g would be 15
    spec = CoverSpec(0, [peripheral_product()] * 5)
    with pytest.raises(VerificationError):
        cover_topology(spec, lifts=[1] * 5)


def test_suite():
    rep = verify_cover()
    assert rep.ok, rep.failures()
